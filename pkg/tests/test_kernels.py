import math

import numpy as np
import pytest

from kasteleyn import quadrature
from kasteleyn.analytic import ModelParams, critical_point_from_phi, g_func
from kasteleyn.errors import ContourError, ConvergenceError, DomainError, ParameterError
from kasteleyn.kernels import (c_omegac, c_tilde, c_tilde_many_scaled, d_arc_many_scaled,
                               d_omegac, ekl, ekl_many_scaled, k11_inv, kinv_rough,
                               saddle_radius)
from kasteleyn.lattice import (VertexRef, black, domain_vertex, fundamental_domain,
                               indices_from_vertices, kasteleyn_entry, translation,
                               white)
from kasteleyn.magnetic import kinv_magnetic, torus_has_zeros
from mp_oracle import ContourOracle

P = ModelParams(0.5)
CRIT = critical_point_from_phi(0.05, P)
NEIGHBOURS = ((1, 1), (-1, 1), (-1, -1), (1, -1))


@pytest.fixture(scope="module")
def oracle():
    return ContourOracle(0.5, CRIT.theta_c, L=8)


def test_indices_from_vertices_example():
    ix = indices_from_vertices(white(1, 0), black(2, 1))
    assert (ix.h, ix.k1, ix.l1, ix.k2, ix.l2) == (1, 0, 0, -1, 1)
    ix = indices_from_vertices(white(1, 0), black(6, 5))
    assert (ix.h, ix.k1, ix.l1, ix.k2, ix.l2) == (1, -2, 2, -3, 3)


def test_indices_need_white_then_black():
    with pytest.raises(DomainError):
        indices_from_vertices(black(2, 1), white(1, 0))


def test_vertex_classes():
    with pytest.raises(DomainError):
        VertexRef(2, 2)
    assert white(1, 0).eps == 0 and white(1, 2).eps == 1
    assert black(2, 1).eps == 1 and black(0, 1).eps == 0


@pytest.mark.parametrize("p,q", [(0, 0), (2, -1), (-3, 4)])
@pytest.mark.parametrize("color,eps", [("white", 0), ("white", 1), ("black", 0), ("black", 1)])
def test_fundamental_domain_roundtrip(p, q, color, eps):
    v = domain_vertex(p, q, color, eps)
    assert (v.color, v.eps) == (color, eps)
    assert fundamental_domain(v) == (p, q)


@pytest.mark.parametrize("k,l", [(1, 1), (3, 5), (2, 6), (1, 7), (8, 2)])
def test_ekl_matches_extended_precision(oracle, k, l):
    assert ekl(k, l, P) == pytest.approx(oracle.ekl(k, l), rel=1e-13)


def test_ekl_regression_values():
    assert ekl(1, 1, P) == pytest.approx(-0.1351246000606614, rel=1e-13)
    assert ekl(3, 5, P) == pytest.approx(-0.003295840081685483, rel=1e-13)


def test_ekl_symmetry_and_parity():
    ks, ls = [1, 3, -5, 7], [5, -9, 11, 3]
    a = ekl_many_scaled(ks, ls, P)
    assert np.allclose(a, ekl_many_scaled(ls, ks, P), rtol=1e-12, atol=0)
    assert ekl(-3, 5, P) == pytest.approx(ekl(3, 5, P), rel=1e-14)
    assert ekl(1, 2, P) == 0.0


def test_ekl_rejects_zero_index():
    with pytest.raises(DomainError):
        ekl(0, 2, P)


def test_ekl_scaled_carries_the_shift():
    v = ekl(21, 41, P)
    assert ekl_many_scaled([21], [41], P, shifts=-5.0)[0] == pytest.approx(v * math.exp(5.0), rel=1e-13)


def test_saddle_radius_range():
    s = 1 / math.sqrt(2 * P.c)
    for k, l in ((1, 1), (3, 5), (1, 41), (0, 9)):
        assert 1.0 <= saddle_radius(k, l, P.c) < s
    assert saddle_radius(5, 5, P.c) == 1.0


@pytest.mark.parametrize("k,l", [(-1, 3), (2, 4), (-5, 3), (3, -7)])
def test_c_tilde_matches_extended_precision(oracle, k, l):
    assert c_tilde(k, l, CRIT, P) == pytest.approx(oracle.c_tilde(k, l), rel=1e-12)


def test_c_tilde_vanishes_at_phi_zero():
    crit0 = critical_point_from_phi(0.0, P)
    assert c_tilde(-1, 3, crit0, P) == 0.0
    assert d_omegac(3, 5, crit0, P) == pytest.approx(ekl(3, 5, P), rel=1e-12)


@pytest.mark.parametrize("k,l", [(4, 4), (1, 3), (-3, 5), (6, -8)])
def test_d_matches_extended_precision(oracle, k, l):
    assert d_omegac(k, l, CRIT, P) == pytest.approx(oracle.d(k, l), rel=1e-12)


def test_d_is_e_minus_c_tilde():
    for k, l in ((3, 5), (-3, 7), (10, -4)):
        rhs = ekl(k, l, P) - c_tilde(k, l, CRIT, P)
        assert d_omegac(k, l, CRIT, P) == pytest.approx(rhs, rel=1e-10)


def test_d_symmetric_for_positive_indices():
    assert d_omegac(3, 7, CRIT, P) == pytest.approx(d_omegac(7, 3, CRIT, P), rel=1e-12)


def test_d_domain():
    with pytest.raises(DomainError):
        d_omegac(-2, -4, CRIT, P)
    with pytest.raises(DomainError):
        d_arc_many_scaled([-2], [0], CRIT, P)
    assert d_omegac(1, 2, CRIT, P) == 0.0


def test_ill_conditioned_arc_uses_long_double(oracle):
    # a near-zero C~ whose arc sum cancels by about five digits
    crit = critical_point_from_phi(0.05, P)
    big = ContourOracle(0.5, crit.theta_c, L=40)
    v = c_tilde_many_scaled([-21], [37], crit, P)[0]
    ref = big.c_tilde(-21, 37)
    assert abs(v - ref) <= 1e-10 * abs(ref)
    assert quadrature.ILL_CONDITIONED > 1


@pytest.mark.parametrize("b,bp", [((2, 1), (2, 1)), ((2, 1), (4, 3)), ((0, 3), (0, 3)),
                                  ((0, 3), (6, -1)), ((-2, 1), (4, 7))])
def test_kernels_invert_the_kasteleyn_operator(b, bp):
    # sum over the neighbours w of b of K(b, w) K^{-1}(w, b') = delta(b, b')
    b, bp = VertexRef(*b), VertexRef(*bp)
    want = 1.0 if b == bp else 0.0
    for kinv in (lambda w: k11_inv(w, bp, P), lambda w: kinv_rough(w, bp, CRIT, P)):
        total = sum(kasteleyn_entry(b, b.shift(*d), P.a) * kinv(b.shift(*d)) for d in NEIGHBOURS)
        assert abs(total - want) < 1e-13


def test_k11_translation_invariance():
    x, y = white(1, 0), black(4, 3)
    v = k11_inv(x, y, P)
    for d in ((2, 2), (-2, 2), (6, -2)):
        assert k11_inv(x.shift(*d), y.shift(*d), P) == pytest.approx(v, rel=1e-13)


def test_c_omegac_is_the_difference():
    x, y = white(1, 0), black(6, 5)
    diff = k11_inv(x, y, P) - c_omegac(x, y, CRIT, P)
    assert kinv_rough(x, y, CRIT, P) == pytest.approx(diff, rel=1e-10)


def test_backends_agree_on_ekl(backend):
    assert ekl(3, 5, P) == pytest.approx(-0.003295840081685483, rel=1e-13)
    assert c_tilde(-1, 3, CRIT, P) == pytest.approx(-0.022677302172883745, rel=1e-13)


def test_magnetic_reduces_to_k11_at_unit_radii():
    x, y = white(1, 0), black(4, 3)
    assert kinv_magnetic(x, y, 1.0, 1.0, P) == pytest.approx(k11_inv(x, y, P), rel=1e-9)


def test_magnetic_double_method_refuses_zeros_on_torus():
    # the rough-phase slope puts zeros of P on the torus
    s2 = abs(g_func(CRIT.omega_c, P.c)) ** -2
    assert torus_has_zeros(P, 1.0, s2)
    assert not torus_has_zeros(P, 1.0, 1.0)
    with pytest.raises(ContourError):
        kinv_magnetic(white(1, 0), black(2, 1), 1.0, s2, P, method="double")


def test_magnetic_inverts_the_operator_off_the_unit_torus():
    # without its gauge factor s1^{1-u} s2^{1-v} the kernel is an inverse of K
    bp = black(2, 1)
    for s1, s2 in ((1.0, 1.3), (1.0, 2.0), (0.8, 1.0)):
        total = 0j
        for d in NEIGHBOURS:
            w = bp.shift(*d)
            u, v = translation(w, bp)
            total += (kasteleyn_entry(bp, w, P.a) * kinv_magnetic(w, bp, s1, s2, P)
                      * s1 ** (u - 1) * s2 ** (v - 1))
        assert abs(total - 1.0) < 1e-9


@pytest.mark.parametrize("x,y", [((1, 0), (2, 1)), ((1, 0), (6, 5)), ((3, 2), (0, -1)),
                                 ((1, 2), (4, 3)), ((-1, 4), (2, -3))])
def test_magnetic_kernel_at_the_critical_slope(x, y):
    x, y = white(*x), black(*y)
    g2 = abs(g_func(CRIT.omega_c, P.c)) ** 2
    v = translation(x, y)[1]
    want = g2 ** (v - 1) * kinv_rough(x, y, CRIT, P)
    assert abs(kinv_magnetic(x, y, 1.0, 1.0 / g2, P) - want) <= 1e-8 * max(abs(want), 1e-300)


def test_quadrature_spec_validation(monkeypatch):
    with pytest.raises(ParameterError):
        quadrature.QuadratureSpec(nodes=32)
    with pytest.raises(ParameterError):
        quadrature.QuadratureSpec(rule="simpson")
    with pytest.raises(ParameterError):
        quadrature.QuadratureSpec(refine_until=0.0)
    monkeypatch.setenv("KASTELEYN_NODES", "1024")
    assert quadrature.QuadratureSpec().nodes == 1024


def test_node_count_does_not_change_values():
    q = quadrature.QuadratureSpec(nodes=2048)
    assert ekl(5, 9, P, q) == pytest.approx(ekl(5, 9, P), rel=1e-12)
    assert c_tilde(-7, 9, CRIT, P, q) == pytest.approx(c_tilde(-7, 9, CRIT, P), rel=1e-12)


def test_refinement_cap_raises():
    q = quadrature.QuadratureSpec(nodes=64, max_nodes=64)
    with pytest.raises(ConvergenceError):
        ekl(41, 41, P, q)
