"""Diophantine approximation on the Heisenberg group."""
