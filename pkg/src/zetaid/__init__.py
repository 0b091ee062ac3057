"""Numerical checks of weighted mean-value identities for the Riemann zeta-function."""

__version__ = "0.1.0"
