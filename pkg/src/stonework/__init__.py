"""Finite-model lab for non-commutative Stone duality."""
