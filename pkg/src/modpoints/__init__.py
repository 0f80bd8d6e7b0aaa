"""Exact desk-scale checks for modular points, Selmer hypotheses and the
integral representation theory of PGL2(Z/p^(n+1)Z)."""

__version__ = "0.1.0"
