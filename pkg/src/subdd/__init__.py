"""subdd - extremal rays of the cone of submodular functions by double description."""

__version__ = "0.1.0"
__description__ = "Exact ray enumeration for the cone of p-standardized submodular functions"
