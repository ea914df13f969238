from __future__ import annotations

import json
from fractions import Fraction

import pytest

from app.models.domain import LorentzComplement
from app.models.enums import VerdictStatus
from app.models.polynomial import ComplexRational, Polynomial
from app.schemas import AnalysisReportOut
from app.services.analysis_service import analyze
from app.services.localization_service import collect_profiles
from app.services.report_serializer import dump_report, polynomial_to_dict, report_to_dict, serialise_value, to_json


# ── Values ───────────────────────────────────────────────────────────
def test_scalar_values():
    assert serialise_value(Fraction(-3, 4)) == "-3/4"
    assert serialise_value(ComplexRational(Fraction(1, 2), Fraction(-1))) == ["1/2", "-1"]
    assert serialise_value(VerdictStatus.PASS_WITH_CAVEAT) == "pass_with_caveat"
    assert serialise_value((1, (Fraction(1, 3), None))) == [1, ["1/3", None]]
    assert serialise_value({(1, 2): True}) == {"(1, 2)": True}


def test_unknown_values_are_rejected():
    with pytest.raises(TypeError):
        serialise_value(object())


def test_polynomial_uses_the_file_format(wave):
    data = polynomial_to_dict(wave)
    assert data["dimension"] == 2
    assert data["terms"] == [[[0, 2], [-1, 1, 0, 1]], [[2, 0], [1, 1, 0, 1]]]


def test_json_is_sorted_and_newline_terminated():
    text = to_json({"b": Fraction(1, 2), "a": [1]})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b"]


# ── Reports ──────────────────────────────────────────────────────────
def test_planar_report_matches_the_schema(wave, l_shape, fast_config):
    data = report_to_dict(analyze(wave, l_shape, fast_config))
    report = AnalysisReportOut.model_validate(data)
    assert report.conclusions.c_infinity == "not_surjective"
    assert report.supports_verdict.status == "fail"
    assert report.exit_code == 1
    assert len(report.sigma_zero_directions) == 2
    [witness] = report.supports_verdict.witnesses
    assert witness["exact_offset"] in ("5/2", "-5/2")


def test_lorentz_report_matches_the_schema(wave3, fast_config):
    data = report_to_dict(analyze(wave3, LorentzComplement(3), fast_config))
    report = AnalysisReportOut.model_validate(data)
    assert report.geometry == {"kind": "lorentz_complement", "dimension": 3}
    assert report.avoidance["avoids"] is True
    assert report.min_principle["holds"] is False
    assert report.characteristic_set is None


def test_elliptic_report_has_no_hypoellipticity_witness(elliptic, l_shape, fast_config):
    data = report_to_dict(analyze(elliptic, l_shape, fast_config))
    assert data["classification"] == {
        "elliptic": True,
        "hypoellipticity": {"status": "elliptic", "certified": True, "witness": None, "evidence": []},
    }
    assert data["characteristic_set"] == []


@pytest.mark.parametrize("name", ["wave", "x1x2", "heat"])
def test_reports_are_byte_identical_across_runs(name, l_shape, fast_config, request):
    P: Polynomial = request.getfixturevalue(name)
    first = dump_report(analyze(P, l_shape, fast_config))
    collect_profiles.cache_clear()
    second = dump_report(analyze(P, l_shape, fast_config))
    assert first == second
