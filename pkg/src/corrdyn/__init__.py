"""corrdyn: dynamics, heights and finite-field searches for variable-separated
polynomial correspondences g(y) = f(x)."""

__version__ = "0.1.0"
