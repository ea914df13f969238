"""
Error hierarchy.

Every failure the library reports on purpose is a ``PConvexError``.  The
shape mirrors FastAPI's ``HTTPException`` (``status_code`` + ``detail``)
so the API layer can translate errors with a single handler, and the CLI
can map them onto exit codes.
"""

from __future__ import annotations

from fastapi import status


class PConvexError(Exception):
    status_code: int = status.HTTP_400_BAD_REQUEST

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


# ── Polynomial input ─────────────────────────────────────────────────
class ZeroPolynomial(PConvexError):
    pass


class DimensionMismatch(PConvexError):
    pass


class UnsupportedDimension(PConvexError):
    pass


class BadT(PConvexError):
    pass


class InvalidInput(PConvexError):
    """Malformed file or request payload."""


# ── Cones ────────────────────────────────────────────────────────────
class ImproperCone(PConvexError):
    pass


class DegenerateCone(PConvexError):
    pass


class PointNotInSet(PConvexError):
    pass


class UnsupportedZeroSet(PConvexError):
    pass


# ── Domains ──────────────────────────────────────────────────────────
class InvalidDomain(PConvexError):
    pass


class NotOnBoundary(PConvexError):
    pass


class OutsideDomain(PConvexError):
    pass


class SegmentNotInDomain(PConvexError):
    pass


# ── Infrastructure ───────────────────────────────────────────────────
class IoError(PConvexError):
    pass


class InternalInconsistency(PConvexError):
    """A proven equivalence or implication failed: always a library bug."""

    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
