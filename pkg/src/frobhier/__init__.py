"""Exact Frobenius potentials of the A, B and D singularities and their dispersionless hierarchies."""

from .algebra import Polynomial, TruncatedBiseries
from .potentials import FlatPotential, potential

__all__ = ["FlatPotential", "Polynomial", "TruncatedBiseries", "potential"]
