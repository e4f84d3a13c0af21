"""Finite-dimensional crossing maps, modular involutions and Q-systems."""
