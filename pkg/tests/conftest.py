"""Shared fixtures: the named symbols, the named domains and a fast analysis config."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from app.core.config import AnalysisConfig
from app.models.domain import PlanarDomain
from app.models.polynomial import Polynomial
from app.services.localization_service import collect_profiles

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(autouse=True)
def _fresh_profile_cache():
    collect_profiles.cache_clear()
    yield


# ── Symbols ──────────────────────────────────────────────────────────
@pytest.fixture
def wave() -> Polynomial:
    return Polynomial(2, {(2, 0): 1, (0, 2): -1})


@pytest.fixture
def x1x2() -> Polynomial:
    return Polynomial(2, {(1, 1): 1})


@pytest.fixture
def elliptic() -> Polynomial:
    return Polynomial(2, {(2, 0): 1, (0, 2): 1})


@pytest.fixture
def heat() -> Polynomial:
    return Polynomial(2, {(1, 0): 1, (0, 2): -1})


@pytest.fixture
def wave3() -> Polynomial:
    return Polynomial(3, {(2, 0, 0): 1, (0, 2, 0): -1, (0, 0, 2): -1})


# ── Domains ──────────────────────────────────────────────────────────
@pytest.fixture
def l_shape() -> PlanarDomain:
    return PlanarDomain.polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def u_shape() -> PlanarDomain:
    """(0, 3)² minus the closed notch [1, 2] × [0.6, 3]."""
    depth = Fraction(3, 5)
    return PlanarDomain.polygon(
        [(0, 0), (3, 0), (3, 3), (2, 3), (2, depth), (1, depth), (1, 3), (0, 3)]
    )


@pytest.fixture
def holed_square() -> PlanarDomain:
    return PlanarDomain.polygon(
        [(0, 0), (4, 0), (4, 4), (0, 4)],
        holes=[[(1, 1), (3, 1), (3, 3), (1, 3)]],
    )


@pytest.fixture
def notched_polygon():
    """Factory for random rectangles with optional rectangular or V-shaped notches."""

    def make(rng: np.random.Generator) -> PlanarDomain:
        width = int(rng.integers(4, 9))
        height = int(rng.integers(3, 7))
        kind = int(rng.integers(0, 4))
        a = int(rng.integers(1, width - 1))
        b = int(rng.integers(a + 1, width))
        depth = int(rng.integers(1, height))

        top: list[tuple] = []
        if kind in (1, 3):
            top = [(b, height), (b, height - depth), (a, height - depth), (a, height)]
        elif kind == 2:
            top = [(b, height), (Fraction(a + b, 2), height - depth), (a, height)]

        bottom: list[tuple] = []
        if kind == 3 and height - depth >= 2:
            lift = int(rng.integers(1, height - depth))
            bottom = [(a, 0), (a, lift), (b, lift), (b, 0)]

        outer = [(0, 0), *bottom, (width, 0), (width, height), *top, (0, height)]
        return PlanarDomain.polygon(outer)

    return make


# ── Config ───────────────────────────────────────────────────────────
@pytest.fixture
def fast_config() -> AnalysisConfig:
    return AnalysisConfig(
        drift_count=2,
        sublinear_count=1,
        t_max=64.0,
        boundary_samples=256,
        interior_grid=9,
    )


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
