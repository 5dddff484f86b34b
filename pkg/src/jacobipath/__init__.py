"""Phase-space path integrals built from Jacobi principal functions."""

__version__ = "0.1.0"
