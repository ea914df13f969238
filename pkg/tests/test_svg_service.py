from __future__ import annotations

import pytest

from app.core.errors import InvalidInput
from app.models.domain import LorentzComplement
from app.services.analysis_service import analyze
from app.services.svg_service import render_svg, svg_document


def test_wave_on_the_l_shape_draws_one_witness(wave, l_shape, fast_config):
    document = svg_document(l_shape, analyze(wave, l_shape, fast_config))
    assert document.startswith('<?xml version="1.0"')
    assert document.count('class="witness-line"') == 1
    assert 'data-offset="1.767766952966"' in document
    assert document.count('class="witness-chord"') == 2
    assert document.count('class="characteristic"') == 4
    assert 'id="exterior-cones"' in document


def test_convex_verdict_draws_no_witness(x1x2, l_shape, fast_config):
    document = svg_document(l_shape, analyze(x1x2, l_shape, fast_config))
    assert "witness-line" not in document


def test_elliptic_symbol_has_no_rose(elliptic, l_shape, fast_config):
    document = svg_document(l_shape, analyze(elliptic, l_shape, fast_config))
    assert 'id="direction-rose"' not in document
    assert 'fill-rule="evenodd"' in document


def test_rendering_is_deterministic(wave, u_shape, fast_config):
    report = analyze(wave, u_shape, fast_config)
    assert svg_document(u_shape, report) == svg_document(u_shape, report)


def test_render_writes_the_file(wave, l_shape, fast_config, tmp_path):
    target = tmp_path / "l.svg"
    document = render_svg(l_shape, analyze(wave, l_shape, fast_config), target)
    assert target.read_text(encoding="utf-8") == document


def test_only_planar_reports_are_drawn(wave3, l_shape, fast_config):
    report = analyze(wave3, LorentzComplement(3), fast_config)
    with pytest.raises(InvalidInput):
        svg_document(l_shape, report)
