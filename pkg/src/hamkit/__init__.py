"""Constructions, certificates and exact oracles for cycle-creating Hamiltonian paths."""

__version__ = "0.1.0"
