from setuptools import setup, find_packages

setup(
    name='hifwatch',
    version='0.1.0',
    description='Arcing high-impedance fault simulation and detection on substation currents',
    packages=find_packages(include=['hifwatch', 'hifwatch.*']),
    package_data={'hifwatch': ['py.typed', 'config/presets/*.yaml']},
    install_requires=[
        'numpy>=2.2',
        'scipy>=1.14.0',
        'pandas>=2.2.0',
        'networkx>=3.3',
        'scikit-learn>=1.5.0',
        'PyYAML>=6.0.1',
        'tabulate>=0.9.0',
        'python-dotenv>=1.0.1',
    ],
    entry_points={'console_scripts': ['hifwatch=hifwatch.cli.main:run']},
    python_requires='>=3.10',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.12',
        'Programming Language :: Python :: 3.13',
    ],
    license='MIT',
)
