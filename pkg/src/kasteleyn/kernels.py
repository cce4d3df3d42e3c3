"""Contour-quadrature values of E, C~, D and the composed kernels.

On the unit circle ``sqrt(w^2+2c) sqrt(1/w^2+2c) = |w^2+2c|``, so with
``f(theta) = G(e^{i theta})^l G(e^{-i theta})^k / |e^{2 i theta} + 2c|``

    E_{k,l}  = i^{-k-l} / (2 (1+a^2) 2 pi) * int_0^{2 pi} f   at (|k|, |l|)
    C~(k,l)  = i^{-k-l} / (2 (1+a^2) pi)   * int_{theta_c}^{pi - theta_c} f
    D(k,l)   = i^{-k-l} / (2 (1+a^2) pi)   * int_{-theta_c}^{theta_c} f

the last two with signed indices.  E uses the periodic trapezoid rule,
arcs use composite Gauss-Legendre.  E is integrated over the circle through
its saddle point instead of the unit circle (see saddle_radius).  All three vanish for odd k + l.

The ``*_scaled`` variants return ``value * exp(-shift)`` so that products of
very large and very small kernels can be formed without overflow.
"""
from __future__ import annotations

import math

import numpy as np

from .analytic import CriticalPoint, ModelParams, g_func
from .errors import ConvergenceError, DomainError
from .lattice import VertexRef, indices_from_vertices, ipow
from .quadrature import QuadratureSpec, arc_sums, circle_sums

IMAG_TOL = 1e-12
ENDPOINT_GAP = 4.0
PI_LONG = 4 * np.arctan(np.longdouble(1))


def _default_q(q):
    return QuadratureSpec() if q is None else q


def _real(values, scale, what):
    """Real part, after checking the imaginary part is roundoff.

    ``scale`` is the integral of |integrand|, the size of the roundoff.
    """
    values = np.asarray(values)
    bad = np.abs(values.imag) > IMAG_TOL * np.maximum(np.abs(values.real), scale)
    if np.any(bad):
        raise ConvergenceError(f"{what} has an imaginary residue "
                               f"{float(np.max(np.abs(values.imag[bad]))):.3e}")
    return values.real


def _check_nonzero(k, l, what):
    if k == 0 or l == 0:
        raise DomainError(f"{what} needs non-zero indices, got (k, l) = ({k}, {l})")


def saddle_radius(k: int, l: int, c: float) -> float:
    """Radius of the circle through the saddle i w_alpha, alpha = k / l <= 1.

    E_{k,l} is the same integral over any circle s < |w| < 1/s with
    s = sqrt(2c); on this one the integrand peaks where the value comes
    from, so the sum carries no cancellation.  As alpha -> 0 the saddle
    runs into the branch point i/s; the radius then stops ENDPOINT_GAP
    endpoint-layer widths (each of order 1/l) short of it, which costs at
    most a factor e^ENDPOINT_GAP in cancellation.
    """
    if l == 0:
        return 1.0
    alpha = k / l
    one = 1.0 - alpha * alpha
    w = math.sqrt((one + math.sqrt(one * one + 16.0 * c * c * alpha * alpha)) / (4.0 * c))
    hi = math.exp(-0.5 * math.log(2.0 * c) - ENDPOINT_GAP * math.sqrt(1.0 - 4.0 * c * c) / l)
    return float(max(min(w, hi), 1.0))


def ekl_many_scaled(ks, ls, params: ModelParams, q=None, shifts=0.0):
    """E at each (|k|, |l|), times exp(-shift).  Zero indices are allowed."""
    q = _default_q(q)
    ks = np.abs(np.atleast_1d(np.asarray(ks, dtype=np.int64)))
    ls = np.abs(np.atleast_1d(np.asarray(ls, dtype=np.int64)))
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), ks.shape)
    # E is symmetric: put the larger index on G(w)
    lo, hi = np.minimum(ks, ls), np.maximum(ks, ls)
    out = np.zeros(ks.shape, dtype=float)
    even = (ks + ls) % 2 == 0
    norm = 2.0 * (1.0 + params.a ** 2)
    c = params.c
    groups = {}
    for i in np.flatnonzero(even):
        groups.setdefault(saddle_radius(int(lo[i]), int(hi[i]), c), []).append(i)
    for rho, idx in groups.items():
        idx = np.asarray(idx)
        # size of the integrand at the saddle; summed relative to it
        top = (hi[idx] * math.log(abs(g_func(1j * rho, c)))
               + lo[idx] * math.log(abs(g_func(1.0 / (1j * rho), c))))
        sums, scale = circle_sums(c, q, lo[idx], hi[idx], top, with_scale=True, rho=rho)
        phase = np.array([ipow(-int(ks[i]) - int(ls[i])) for i in idx])
        vals = _real(phase * sums / norm, scale / norm, "E_{k,l}")
        with np.errstate(under="ignore"):
            out[idx] = vals * np.exp(top - shifts[idx])
    return out


def ekl(k: int, l: int, params: ModelParams, q=None) -> float:
    """E_{k,l} for non-zero k, l."""
    _check_nonzero(k, l, "E_{k,l}")
    return float(ekl_many_scaled([k], [l], params, q)[0])


def _arc_many_scaled(ks, ls, lo, hi, params, q, shifts):
    q = _default_q(q)
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), ks.shape)
    out = np.zeros(ks.shape, dtype=float)
    even = (ks + ls) % 2 == 0
    if np.any(even) and hi > lo:
        sums, scale = arc_sums(params.c, lo, hi, q, ks[even], ls[even], shifts[even],
                               with_scale=True, a=params.a)
        phase = np.array([ipow(-int(k) - int(l)) for k, l in zip(ks[even], ls[even])])
        norm = 2.0 * (1.0 + params.a ** 2) * math.pi
        out[even] = _real(phase * sums / norm, scale / norm, "arc integral")
    return out


def c_tilde_many_scaled(ks, ls, crit: CriticalPoint, params, q=None, shifts=0.0):
    th = crit.theta_c
    # pi - theta_c in long double: the ill-conditioned sums feel its rounding
    hi = th if crit.phi_c <= 0 else PI_LONG - np.longdouble(th)
    return _arc_many_scaled(ks, ls, th, hi, params, q, shifts)


def d_arc_many_scaled(ks, ls, crit: CriticalPoint, params, q=None, shifts=0.0):
    """The complementary arcs integrated directly.

    The integrand has modulus |G(e^{i theta})|^{k+l}; for k + l < 0 it
    peaks at theta = 0 far above the value, which then carries an
    absolute error of order eps * |G(1)|^{k+l}.
    """
    ks_a = np.atleast_1d(np.asarray(ks))
    ls_a = np.atleast_1d(np.asarray(ls))
    if np.any((ks_a <= 0) & (ls_a <= 0)):
        raise DomainError("D(k, l) needs k > 0 or l > 0")
    th = crit.theta_c
    return _arc_many_scaled(ks, ls, -th, th, params, q, shifts)


def d_many_scaled(ks, ls, crit: CriticalPoint, params, q=None, shifts=0.0):
    """D = E - C~ for k > 0 or l > 0, by the well-conditioned route.

    k + l >= 0: the complementary arcs directly.  k + l < 0: E - C~,
    where C~ dominates and nothing cancels.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    if np.any((ks <= 0) & (ls <= 0)):
        raise DomainError("D(k, l) needs k > 0 or l > 0")
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), ks.shape)
    out = np.zeros(ks.shape, dtype=float)
    direct = ks + ls >= 0
    if np.any(direct):
        out[direct] = d_arc_many_scaled(ks[direct], ls[direct], crit, params, q,
                                        shifts[direct])
    rest = ~direct
    if np.any(rest):
        out[rest] = (ekl_many_scaled(ks[rest], ls[rest], params, q, shifts[rest])
                     - c_tilde_many_scaled(ks[rest], ls[rest], crit, params, q, shifts[rest]))
    return out


def c_tilde(k: int, l: int, crit: CriticalPoint, params: ModelParams, q=None) -> float:
    """C~(k, l): arc integral between the critical points."""
    _check_nonzero(k, l, "C~(k,l)")
    return float(c_tilde_many_scaled([k], [l], crit, params, q)[0])


def d_omegac(k: int, l: int, crit: CriticalPoint, params: ModelParams, q=None) -> float:
    """D(k, l): the complementary arcs, valid for k > 0 or l > 0."""
    if (k + l) % 2:
        return 0.0
    return float(d_many_scaled([k], [l], crit, params, q)[0])


def _compose(x: VertexRef, y: VertexRef, params, term):
    """-i^{1+h} (a^{eps2} T(k1,l1) + a^{1-eps2} T(k2,l2))."""
    ix = indices_from_vertices(x, y)
    e2 = y.eps
    a = params.a
    t1, t2 = term(ix.k1, ix.l1), term(ix.k2, ix.l2)
    return -ipow(1 + ix.h) * (a ** e2 * t1 + a ** (1 - e2) * t2)


def k11_inv(x: VertexRef, y: VertexRef, params: ModelParams, q=None) -> complex:
    """Smooth-phase whole-plane inverse Kasteleyn kernel.

    Index pairs with a zero component are evaluated from the same integral
    at (|k|, |l|).
    """
    return _compose(x, y, params, lambda k, l: ekl_many_scaled([k], [l], params, q)[0])


def c_omegac(x: VertexRef, y: VertexRef, crit: CriticalPoint, params: ModelParams,
             q=None) -> complex:
    return _compose(x, y, params,
                    lambda k, l: c_tilde_many_scaled([k], [l], crit, params, q)[0])


def rough_term_scaled(k, l, crit, params, q=None, shift=0.0):
    """(E - C~)(k, l) * exp(-shift), by the route that does not cancel."""
    if (k + l) % 2:
        return 0.0
    if k > 0 or l > 0:
        return float(d_many_scaled([k], [l], crit, params, q, shift)[0])
    e = ekl_many_scaled([k], [l], params, q, shift)[0]
    return float(e - c_tilde_many_scaled([k], [l], crit, params, q, shift)[0])


def kinv_rough_scaled(x: VertexRef, y: VertexRef, crit, params, q=None):
    """(K11^{-1} - C)(x, y) as (mantissa, log-scale)."""
    ix = indices_from_vertices(x, y)
    lg = math.log(abs(_g_omega(crit, params)))
    shift = (ix.k2 + ix.l2) * lg
    val = _compose(x, y, params,
                   lambda k, l: rough_term_scaled(k, l, crit, params, q, shift))
    return val, shift


def kinv_rough(x: VertexRef, y: VertexRef, crit, params, q=None) -> complex:
    val, shift = kinv_rough_scaled(x, y, crit, params, q)
    return val * math.exp(shift)


def _g_omega(crit, params):
    return g_func(crit.omega_c, params.c)
