"""Hyperbolic curves in the bidisk: Blaschke pair intersections, petals, Pick
interpolation and operator-theoretic checks."""
from .errors import (
    ConsistencyError,
    DegenerateInputError,
    DomainError,
    HypCurveError,
    NumericError,
    PreconditionError,
    TheoryViolationError,
    UnsupportedError,
)
from .poly import BiPoly, UniPoly, roots
from .blaschke import BlaschkeProduct, MoebiusMap, hyperbolic_distance, moebius
from .intersection import BlaschkePair, IntersectionReport, solve_pair

__version__ = "0.1.0"
