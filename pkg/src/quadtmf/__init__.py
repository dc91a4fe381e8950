"""Exact invariants of integral bilinear forms, linking forms, Kirby moves,
theta series and symbolic TMF-module values of 3- and 4-manifolds."""

__version__ = "0.1.0"
