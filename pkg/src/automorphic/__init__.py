"""Automorphic kernels, Eisenstein series and transform identities on PSL(2,Z)."""

__version__ = "0.1.0"
