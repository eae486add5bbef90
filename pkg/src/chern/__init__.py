"""Exact Hilbert coefficients of good filtrations over graded quotient rings."""

from __future__ import annotations

from .errors import CertificationError, ChernError, InconsistencyError, InputError, ParseError
from .groebner import Ideal
from .local import CyclicModule, GradedRing, make_ring
from .poly import FieldSpec, PolyRing, Polynomial

__version__ = "0.1.0"

__all__ = [
    "CertificationError", "ChernError", "CyclicModule", "FieldSpec", "GradedRing", "Ideal",
    "InconsistencyError", "InputError", "ParseError", "PolyRing", "Polynomial", "make_ring",
]
