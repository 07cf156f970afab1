"""Exact SONC nonnegativity certificates over constrained hypercubes."""

from .circuit import Circuit, Cmp, circuit_number_compare, is_nonnegative, validate
from .certify import Certificate, CertTerm, certify_hypercube, decompose_vanishing
from .hypercube import ConstraintSet, Hypercube, feasible_vertices, kronecker_delta, normal_form, pm1, zero_one
from .poly import Poly, parse, render
from .shorten import caratheodory_prune, shorten_certificate
from .verify import VerifyReport, verify_certificate

__all__ = [
    "Certificate",
    "CertTerm",
    "Circuit",
    "Cmp",
    "ConstraintSet",
    "Hypercube",
    "Poly",
    "VerifyReport",
    "caratheodory_prune",
    "certify_hypercube",
    "circuit_number_compare",
    "decompose_vanishing",
    "feasible_vertices",
    "is_nonnegative",
    "kronecker_delta",
    "normal_form",
    "parse",
    "pm1",
    "render",
    "shorten_certificate",
    "validate",
    "verify_certificate",
    "zero_one",
]
