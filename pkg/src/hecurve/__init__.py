"""Exact constructions for hereditary orders, skew group rings, squid algebras and wallpaper curves."""

__version__ = "0.1.0"
