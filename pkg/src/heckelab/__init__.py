"""heckelab: exact-arithmetic toolkit for spherical Hecke algebra
identities, hermitian lattice counting, and Chern class checks."""

__version__ = "0.1.0"
