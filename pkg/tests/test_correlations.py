import math

import pytest

from kasteleyn.analytic import ModelParams, critical_point_from_phi
from kasteleyn.correlations import (DimerPairSpec, angle_profile, antidiag_branch_point,
                                    classify_regime, corr_angle_asym, corr_antidiag_asym,
                                    corr_asym, corr_diag_asym, corr_exact, regime_thresholds)
from kasteleyn.errors import DomainError, GateError

P = ModelParams(0.5)
CRIT = critical_point_from_phi(0.02, P)


def test_pair_spec_validation():
    with pytest.raises(DomainError):
        DimerPairSpec(1, 2)
    with pytest.raises(DomainError):
        DimerPairSpec(0, 0)
    s = DimerPairSpec(3, -3)
    assert s.direction == "anti" and s.r == 3.0 and s.distance == pytest.approx(6 * math.sqrt(2))
    assert DimerPairSpec(4, 4).direction == "diag"
    assert DimerPairSpec(6, 2).direction == "angle"


def test_pair_spec_along():
    assert DimerPairSpec.along("diag", 7.4) == DimerPairSpec(7, 7)
    assert DimerPairSpec.along("anti", 5) == DimerPairSpec(5, -5)
    s = DimerPairSpec.along("angle", 10, 0.3)
    assert (s.r1 + s.r2) % 2 == 0
    assert s.theta == pytest.approx(0.3, abs=0.1)
    with pytest.raises(DomainError):
        DimerPairSpec.along("angle", 10)
    with pytest.raises(DomainError):
        DimerPairSpec.along("up", 10)


def test_signs():
    for r in (4, 12, 30):
        assert corr_exact(DimerPairSpec(r, r), CRIT, P).value < 0
    for r in (4, 30, 150):
        assert corr_exact(DimerPairSpec(r, -r), CRIT, P).value > 0


def test_corr_exact_reports_scaled_kernels():
    res = corr_exact(DimerPairSpec(10, 10), CRIT, P)
    assert res.method.startswith("exact-kernel")
    assert math.isfinite(res.log_scale)


@pytest.mark.parametrize("r", [6, 10, 20, 30])
def test_diagonal_closed_form(r):
    exact = corr_exact(DimerPairSpec(r, r), CRIT, P).value
    assert corr_diag_asym(r, CRIT, P, strict=False).value == pytest.approx(exact, rel=0.05)


def test_diagonal_gates():
    with pytest.raises(GateError):
        corr_diag_asym(500, CRIT, P)
    with pytest.raises(DomainError):
        corr_diag_asym(0, CRIT, P)


@pytest.mark.parametrize("r", [100, 300, 1000])
def test_antidiagonal_layer(r):
    assert r >= antidiag_branch_point(CRIT.phi_c)
    exact = corr_exact(DimerPairSpec(r, -r), CRIT, P).value
    v = corr_antidiag_asym(r, CRIT, P)
    assert v.regime_tag == "anti-layer"
    assert v.value == pytest.approx(exact, rel=0.02)


def test_antidiagonal_branches():
    assert corr_antidiag_asym(5, CRIT, P).regime_tag == "anti-small-r"
    assert antidiag_branch_point(0.0) == math.inf


@pytest.mark.parametrize("r", [5, 10, 20])
def test_angle_closed_form(r):
    spec = DimerPairSpec.along("angle", r, 0.3)
    exact = corr_exact(spec, CRIT, P).value
    assert corr_asym(spec, CRIT, P).value == pytest.approx(exact, rel=0.02)


def test_angle_profile():
    p = angle_profile(0.3, P)
    assert p.sigma1 == pytest.approx(math.sqrt(2) * math.cos(0.3))
    assert p.h_plus < p.h_minus < 0
    assert p.f_alpha > 0
    for theta in (0.0, 0.76, -0.9):
        with pytest.raises(DomainError):
            angle_profile(theta, P)
    with pytest.raises(GateError):
        corr_angle_asym(400, p, CRIT, P)


def test_thresholds():
    crit = critical_point_from_phi(0.01, P)
    t1, t2 = regime_thresholds("diag", crit, P)
    assert t1 == pytest.approx(4.785, abs=1e-3)
    assert t2 == pytest.approx(22.36, abs=1e-2)
    assert regime_thresholds("anti", CRIT, P) == pytest.approx((2.032, 83.85, 838.5), rel=1e-3)
    for theta in (0.1, 0.3, -0.5):
        th = regime_thresholds("angle", CRIT, P, theta=theta)
        assert list(th) == sorted(th)
    zero = critical_point_from_phi(0.0, P)
    assert regime_thresholds("diag", zero, P) == (math.inf, math.inf)


def test_threshold_errors():
    with pytest.raises(DomainError):
        regime_thresholds("angle", CRIT, P)
    with pytest.raises(DomainError):
        regime_thresholds("sideways", CRIT, P)


def test_regime_sequence():
    crit = critical_point_from_phi(0.01, P)
    seq = [classify_regime(r, "anti", crit, P).regime for r in (1, 10, 1000, 10000)]
    assert seq == ["I", "II", "III", "IV"]
    rep = classify_regime(10, "diag", crit, P)
    assert (rep.regime, rep.envelope) == ("II", "constant")
    assert classify_regime(100, "diag", crit, P).envelope == "inv-r2-oscillating"
