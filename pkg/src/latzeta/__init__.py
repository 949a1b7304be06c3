"""Lattice shells, spherical designs and local minima of Epstein zeta functions."""
