# Borel cocycle and rigidity experiments
__version__ = "0.1.0"
