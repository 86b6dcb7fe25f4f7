"""Optional logging handlers, imported lazily by ``setup_logging``."""
