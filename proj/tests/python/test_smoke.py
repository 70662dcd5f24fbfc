"""Smoke tests for the python bindings."""

import math

import pytest

import qlab


def test_version():
    assert qlab.__version__


def test_monotone_map_roundtrip():
    phi = qlab.MonotoneMap.power(1, 2)
    assert phi(3.0) == 9.0
    assert phi.inverse(4.0) == pytest.approx(2.0, rel=1e-12)
    composed = phi.power_compose(3)
    assert composed(2.0) == pytest.approx(64.0)
    again = qlab.MonotoneMap.from_spec(phi.spec_json())
    assert again(5.0) == phi(5.0)


def test_spec_errors_become_value_errors():
    with pytest.raises(ValueError):
        qlab.MonotoneMap.from_spec("nope:1,2")
    with pytest.raises(ValueError):
        qlab.MonotoneMap.power(-1, 2)


def test_log_transform():
    H = qlab.log_transform(qlab.MonotoneMap.exp_power(1, 1, 1), 1.0)
    assert H(3.0) == pytest.approx(3.0, rel=1e-12)
    assert H.inverse(2.0) == pytest.approx(2.0, rel=1e-9)


def test_classifier():
    exp_map = qlab.MonotoneMap.exp_power(1, 1, 1)
    report = qlab.classify(exp_map, "T42", n=2)
    assert report.verdict == qlab.Verdict.Divergent
    assert qlab.classify(qlab.MonotoneMap.power(1, 2), "T42", n=2).verdict \
        == qlab.Verdict.Convergent
    assert qlab.analytic_oracle(exp_map, "C29", p=1) == qlab.Verdict.Divergent


def test_mean_inequality():
    record = qlab.verify_lemma31(
        qlab.RadialField.radial_power(1, 1, 2), qlab.MonotoneMap.identity(), 1.0
    )
    assert record.passed
    assert record.lhs == pytest.approx(1.0, abs=1e-8)
    assert record.rhs == pytest.approx(1.0 / (4 * math.e), abs=1e-8)
    assert record.mean == pytest.approx(2.0, abs=1e-8)


def test_extremal_map():
    m = qlab.ExtremalMap.build(qlab.MonotoneMap.power(1, 2), 2, grid_size=512)
    assert m.gamma == 1.0
    assert m.outer_radius == pytest.approx(math.exp(1.5), rel=1e-7)
    assert m.distortions(0.125).outer == pytest.approx(4.0, rel=1e-8)
    y = m([0.125, 0.0])
    assert y[0] == pytest.approx(math.exp(0.375), rel=1e-8)
    energy, bound = m.energy()
    assert energy == pytest.approx(3 * math.pi, rel=1e-3)
    assert energy <= bound * (1 + 1e-6)
    with pytest.raises(ValueError):
        qlab.ExtremalMap.build(qlab.MonotoneMap.exp_power(1, 1, 1), 2)


def test_modulus_tools():
    omega, volume = qlab.dimension_constants(3)
    assert omega == pytest.approx(4 * math.pi, rel=1e-14)
    assert volume == pytest.approx(4 * math.pi / 3, rel=1e-14)
    assert qlab.ring_modulus(1.0, math.e, 2) == pytest.approx(2 * math.pi, rel=1e-12)
    assert qlab.spherical_norm(qlab.RadialField.constant(1, 2), 0.5) \
        == pytest.approx(math.pi, rel=1e-12)
    verdicts = qlab.norm_divergence(qlab.RadialField.constant(1, 2), 0.5)
    assert verdicts["verdict"] == qlab.Verdict.Divergent


def test_normalize():
    result = qlab.normalize_phi(qlab.MonotoneMap.power(1, 2))
    assert result.accepted()
    assert result.map(0.5) == 0.5
    rejected = qlab.normalize_phi(qlab.MonotoneMap.affine(0, 5))
    assert not rejected.accepted()
    assert rejected.reason
