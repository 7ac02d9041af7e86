from .config import Settings, Tolerances, settings, tolerances_for

__all__ = ["Settings", "Tolerances", "settings", "tolerances_for"]
