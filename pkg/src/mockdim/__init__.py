"""Weierstrass mock modular forms on genus-one X_0(N) and orbifold dimension formulas."""

__version__ = "0.1.0"
