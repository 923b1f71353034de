"""Sum-space frame solver for fractional Laplacian equations on R^1 and R^2."""

__version__ = "0.1.0"
