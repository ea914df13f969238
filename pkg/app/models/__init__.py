"""
Models package — immutable value types shared by services, schemas and the CLI.
"""

from app.models.cones import LorentzCone, PolyhedralCone, Polyhedron, Sector2, ShiftedCone
from app.models.direction import AlgebraicDirection, CharacteristicSet
from app.models.domain import (
    Chord,
    DiagnosticResult,
    LineSpec,
    LorentzComplement,
    MinPrincipleResult,
    PlanarDomain,
    SweepWitness,
    Verdict,
)
from app.models.enums import (
    CertificateKind,
    Conclusion,
    ConvexityMode,
    DirectionKind,
    HypoellipticityStatus,
    NormMode,
    SectorKind,
    VerdictStatus,
)
from app.models.localization import (
    HypoellipticityVerdict,
    LinealitySpace,
    LocalizationProfile,
    PathSpec,
    SigmaEstimate,
    SublinearTerm,
)
from app.models.polynomial import ComplexRational, Polynomial
from app.models.report import AnalysisReport, ConeAvoidance, SigmaRecord

__all__ = [
    "AlgebraicDirection",
    "AnalysisReport",
    "CertificateKind",
    "CharacteristicSet",
    "Chord",
    "ComplexRational",
    "Conclusion",
    "ConeAvoidance",
    "ConvexityMode",
    "DiagnosticResult",
    "DirectionKind",
    "HypoellipticityStatus",
    "HypoellipticityVerdict",
    "LinealitySpace",
    "LineSpec",
    "LocalizationProfile",
    "LorentzCone",
    "LorentzComplement",
    "MinPrincipleResult",
    "NormMode",
    "PathSpec",
    "PlanarDomain",
    "Polyhedron",
    "PolyhedralCone",
    "Polynomial",
    "Sector2",
    "SectorKind",
    "ShiftedCone",
    "SigmaEstimate",
    "SigmaRecord",
    "SublinearTerm",
    "SweepWitness",
    "Verdict",
    "VerdictStatus",
]
