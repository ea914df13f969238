"""
Shared ENUM types for directions, certificates and verdicts.

Defined separately so models, services, schemas and the CLI can import
them without circular dependencies.
"""

import enum


class DirectionKind(str, enum.Enum):
    """Exact representation of a planar unit direction."""

    AXIS = "axis"
    SLOPE = "slope"


class NormMode(str, enum.Enum):
    SUP = "sup"
    DERIV = "deriv"


class CertificateKind(str, enum.Enum):
    """How a σ estimate was obtained."""

    EXACT_ZERO = "exact_zero"
    NUMERIC_POSITIVE = "numeric_positive"
    ELLIPTIC_ONE = "elliptic_one"


class HypoellipticityStatus(str, enum.Enum):
    ELLIPTIC = "elliptic"
    CERTIFIED_NON_HYPOELLIPTIC = "certified_non_hypoelliptic"
    LIKELY_HYPOELLIPTIC = "likely_hypoelliptic"


class ConvexityMode(str, enum.Enum):
    SUPPORTS = "supports"
    SINGULAR_SUPPORTS = "singular_supports"


class VerdictStatus(str, enum.Enum):
    PASS = "pass"
    PASS_WITH_CAVEAT = "pass_with_caveat"
    FAIL = "fail"


class SectorKind(str, enum.Enum):
    ZERO = "zero"
    RAY = "ray"
    SECTOR = "sector"
    HALF_PLANE = "half_plane"
    FULL = "full"


class Conclusion(str, enum.Enum):
    SURJECTIVE = "surjective"
    NOT_SURJECTIVE = "not_surjective"
    INCONCLUSIVE = "inconclusive"
