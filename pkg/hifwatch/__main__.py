from hifwatch.cli.main import run

run()
