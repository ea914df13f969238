from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from app.cli import main
from app.schemas import AnalysisReportOut

ROOT = Path(__file__).resolve().parents[1]


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ── analyze ──────────────────────────────────────────────────────────
def test_analyze_wave_on_the_l_shape(capsys, data_dir):
    code, out, _ = _run(
        capsys,
        "analyze",
        "--poly", str(data_dir / "wave.json"),
        "--domain", str(data_dir / "l_shape.json"),
        "--config", str(data_dir / "fast_config.json"),
    )
    assert code == 1
    report = AnalysisReportOut.model_validate(json.loads(out))
    assert report.conclusions.d_prime == "not_surjective"
    assert report.exit_code == 1


def test_analyze_writes_report_and_svg(capsys, data_dir, tmp_path):
    report_path, svg_path = tmp_path / "report.json", tmp_path / "out.svg"
    code, out, _ = _run(
        capsys,
        "analyze",
        "--poly", str(data_dir / "x1x2.json"),
        "--domain", str(data_dir / "l_shape.json"),
        "--config", str(data_dir / "fast_config.json"),
        "--report", str(report_path),
        "--svg", str(svg_path),
    )
    assert code == 0
    assert out == ""
    assert json.loads(report_path.read_text(encoding="utf-8"))["exit_code"] == 0
    assert svg_path.read_text(encoding="utf-8").startswith("<?xml")


def test_analyze_on_the_cone_complement(capsys, data_dir):
    code, out, _ = _run(
        capsys,
        "analyze",
        "--poly", str(data_dir / "wave3.json"),
        "--domain", str(data_dir / "lorentz3.json"),
        "--config", str(data_dir / "fast_config.json"),
    )
    assert code == 1
    data = json.loads(out)
    assert data["conclusions"] == {"c_infinity": "surjective", "d_prime": "not_surjective"}


def test_empty_domain_file_is_an_input_error(capsys, data_dir, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("", encoding="utf-8")
    code, out, err = _run(capsys, "analyze", "--poly", str(data_dir / "wave.json"), "--domain", str(empty))
    assert code == 3
    assert out == ""
    assert str(empty) in err


def test_dimension_mismatch_is_an_input_error(capsys, data_dir):
    code, _, err = _run(
        capsys,
        "analyze",
        "--poly", str(data_dir / "wave.json"),
        "--domain", str(data_dir / "lorentz3.json"),
    )
    assert code == 3
    assert err.startswith("error: ")


# ── Single-purpose commands ──────────────────────────────────────────
def test_characteristics(capsys, data_dir):
    code, out, _ = _run(capsys, "characteristics", "--poly", str(data_dir / "wave.json"))
    assert code == 0
    data = json.loads(out)
    assert data["elliptic"] is False
    assert len(data["directions"]) == 4


def test_localize_with_a_sublinear_term(capsys, data_dir):
    code, out, _ = _run(
        capsys, "localize", "--poly", str(data_dir / "heat.json"), "--dir", "1,0", "--sub", "1/2", "0,1"
    )
    assert code == 0
    data = json.loads(out)
    assert data["leading_exponent"] == "1/2"
    assert data["constant"] is False


def test_localize_rejects_a_fractional_direction(capsys, data_dir):
    code, out, err = _run(capsys, "localize", "--poly", str(data_dir / "heat.json"), "--dir", "1/2,1")
    assert code == 3
    assert out == ""
    assert "integer vector" in err


def test_sigma_in_three_dimensions(capsys, data_dir):
    code, out, _ = _run(capsys, "sigma", "--poly", str(data_dir / "wave3.json"), "--y", "0,0,1")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 0.0
    assert data["config"]["effective_norm_mode"] == "deriv"


@pytest.mark.parametrize(("mode", "expected"), [("supports", 1), ("singular", 1)])
def test_convexity_sweep(capsys, data_dir, mode, expected):
    code, out, _ = _run(
        capsys,
        "convexity",
        "--poly", str(data_dir / "wave.json"),
        "--domain", str(data_dir / "l_shape.json"),
        "--mode", mode,
        "--config", str(data_dir / "fast_config.json"),
    )
    assert code == expected
    assert json.loads(out)["status"] == "fail"


def test_minprinciple_under_the_notch(capsys, data_dir):
    code, out, _ = _run(
        capsys,
        "minprinciple",
        "--domain", str(data_dir / "u_shape.json"),
        "--segment", "1/2,1/2", "5/2,1/2",
        "--line", "0,1", "1/2",
    )
    assert code == 1
    assert json.loads(out)["holds"] is False


def test_cones_dual(capsys, data_dir):
    code, out, _ = _run(capsys, "cones", "dual", "--cone", str(data_dir / "quadrant.json"))
    assert code == 0
    assert json.loads(out)["dual"] == {"kind": "sector", "start": [1, 0], "end": [0, 1], "start_open": False, "end_open": False}


@pytest.mark.parametrize("verb", ["hyperplanes", "prop3"])
def test_cones_hyperplane_predicates(capsys, data_dir, verb):
    code, out, _ = _run(
        capsys, "cones", verb, "--cone", str(data_dir / "quadrant.json"), "--normal", "1,1", "--c", "2", "--x", "1,1"
    )
    assert code == 0
    data = json.loads(out)
    assert [data[key] for key in ("i", "ii", "iii", "iv", "x_on_hyperplane")] == [True] * 5


def test_cones_recession(capsys, tmp_path):
    spec = tmp_path / "strip.json"
    spec.write_text(json.dumps({"normals": [[-1, 0], [1, 0], [0, -1]], "offsets": [0, 1, 0], "x": [0, 0]}), encoding="utf-8")
    code, out, _ = _run(capsys, "cones", "recession", "--spec", str(spec))
    assert code == 0
    assert json.loads(out) == {"recession_direction": ["0", "1"]}


def test_schema(capsys):
    code, out, _ = _run(capsys, "schema")
    assert code == 0
    assert "supports_verdict" in json.loads(out)["properties"]


# ── As a process ─────────────────────────────────────────────────────
def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "app.cli", "characteristics", "--poly", "data/x1x2.json"],
        cwd=ROOT,
        capture_output=True,
        text=True,
        check=False,
    )
    assert result.returncode == 0
    assert len(json.loads(result.stdout)["directions"]) == 4
