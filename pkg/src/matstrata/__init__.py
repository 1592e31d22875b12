"""Strata of matrices under scalar similarity and of bilinear forms under congruence."""

__version__ = "0.1.0"
