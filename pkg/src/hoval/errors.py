"""Exception taxonomy shared by all hoval modules."""

from __future__ import annotations


class HovalError(Exception):
    """Base class for every error raised by this package."""


# --- field construction / arithmetic ---------------------------------------

class UnsupportedDegree(HovalError):
    """Extension degree outside the supported range 1..24."""


class IrreducibleCheckFailed(HovalError):
    """Proposed modulus is reducible over GF(2) or has the wrong degree."""


class FieldMismatch(HovalError):
    """Operands belong to different fields."""


class DivisionByZero(HovalError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


# --- projective geometry -----------------------------------------------------

class ZeroVector(HovalError):
    """The zero vector has no projective point."""


class DegenerateSpan(HovalError):
    """Spanning set does not reach the requested dimension."""


class DimensionMismatch(HovalError):
    """Vectors or subspaces from incompatible ambient spaces."""


class SingularMatrix(HovalError):
    """Matrix is not invertible over the field."""


class EnumerationTooLarge(HovalError):
    """Requested enumeration exceeds the configured operation budget."""

    def __init__(self, estimate: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs ~{estimate} operations, budget is {budget}")
        self.estimate = estimate
        self.budget = budget
        self.what = what


# --- maps between the three geometries --------------------------------------

class NotAffine(HovalError):
    """Point lies at infinity where an affine point is required."""


class NotAtInfinity(HovalError):
    """Point is affine where a point at infinity is required."""


# --- hyperovals and direction sets ------------------------------------------

class GcdHypothesisViolated(HovalError):
    """Frobenius exponent i violates gcd(i, hk) = 1 and strict mode is on."""


class TooFewPoints(HovalError):
    """Point set too small for the requested check."""


class NotF2Linear(HovalError):
    """Affine point set is not closed under the GF(2) affine structure."""


# --- pseudoregulus / spread --------------------------------------------------

class NotPseudoregulusCandidate(HovalError):
    """Direction set lacks the long-secant structure of a pseudoregulus."""


class TransversalExtractionFailed(HovalError):
    """Zero points do not split into two transversal subspaces."""


class SemilinearFitFailed(HovalError):
    """No candidate exponent reproduces the direction set."""


class SpreadConstructionFailed(HovalError):
    """Canonical spread could not be built in detected coordinates."""


class InvalidSpread(HovalError):
    """Element set is not a spread (wrong sizes or not a partition)."""


# --- C-plane family ----------------------------------------------------------

class CPlaneConstructionFailed(HovalError):
    """Some span of an affine point and a long secant misses the q-point law."""


# --- serialization -----------------------------------------------------------

class ParseError(HovalError):
    """Malformed input file or hex literal."""
