"""Whole-plane inverse Kasteleyn kernel with magnetic radii (s1, s2).

    K^{-1}(x, y) = s1^{1-u} s2^{1-v} (2 pi i)^{-2} oint_{|z|=s1} dz/z oint_{|w|=s2} dw/w
                   Q(z, w)_{eps1, eps2} / P(z, w) z^u w^v

with P = -2 - 2a^2 - a/w - a w - a/z - a z and (u, v) the fundamental
domain translation from x to y (see lattice.fundamental_domain).

Two evaluation routes:

* ``double``: double periodic trapezoid.  Spectral when P has no zeros on
  the torus; refused otherwise.
* ``residue``: the w-integral in closed form from the two roots of
  w P(z, w) (whose product is 1), then a 1-D integral in z.  When a root
  crosses |w| = s2 the z-integrand jumps; the jump angles are located and
  the pieces are integrated with Gauss-Legendre panels.  This route also
  covers tori that pass through zeros of P, where the double integral is
  only absolutely convergent.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .analytic import ModelParams
from .errors import ContourError, ConvergenceError, DomainError
from .lattice import VertexRef, translation
from .quadrature import GL_ORDER, QuadratureSpec, _gl

PROBE = 256
P_MIN = 1e-8


def p_poly(z, w, a):
    return -2.0 - 2.0 * a * a - a / w - a * w - a / z - a * z


def q_entry(z, w, a, eps1, eps2):
    """Entry (eps1, eps2) of Q(z, w), i.e. the (white eps1, black eps2) cofactor."""
    if eps1 == 0 and eps2 == 0:
        return 1j * (a + w)
    if eps1 == 0 and eps2 == 1:
        return -(a + z) * np.ones_like(w)
    if eps1 == 1 and eps2 == 0:
        return -(a + 1.0 / z) * np.ones_like(w)
    return 1j * (a + 1.0 / w)


def kasteleyn_symbol(z, w, a):
    """K(z, w) with rows (b0, b1) and columns (w0, w1)."""
    return np.array([[1j * (a + 1.0 / w), a + z], [a + 1.0 / z, 1j * (a + w)]])


# Laurent coefficients of Q in w: {power: coefficient(z)}
def _q_laurent(z, a, eps1, eps2):
    if eps1 == 0 and eps2 == 0:
        return {0: 1j * a + 0 * z, 1: 1j + 0 * z}
    if eps1 == 0 and eps2 == 1:
        return {0: -(a + z)}
    if eps1 == 1 and eps2 == 0:
        return {0: -(a + 1.0 / z)}
    return {0: 1j * a + 0 * z, -1: 1j + 0 * z}


def _roots(z, a, c):
    """Roots r1, r2 of w^2 + B w + 1 with B = 1/c... (see module docstring)."""
    B = 2.0 * (1.0 + a * a) / a + z + 1.0 / z
    disc = np.sqrt(B * B - 4.0 + 0j)
    r1 = 0.5 * (-B + disc)
    r2 = 0.5 * (-B - disc)
    # keep r1 the small root
    swap = np.abs(r1) > np.abs(r2)
    r1, r2 = np.where(swap, r2, r1), np.where(swap, r1, r2)
    return r1, r2


def _cauchy(n, r, s2):
    """(1/2 pi i) oint_{|w|=s2} w^n / (w - r) dw."""
    inside = np.abs(r) < s2
    rn = r ** n
    if n >= 0:
        return np.where(inside, rn, 0.0)
    return np.where(inside, 0.0, -rn)


def _inner(z, a, c, eps1, eps2, v, s2):
    """(1/2 pi i) oint_{|w|=s2} dw/w Q w^v / P as a function of z (vectorised)."""
    r1, r2 = _roots(z, a, c)
    if np.any(np.abs(r1 - r2) < 1e-12):
        raise ContourError("double root of P on the integration torus")
    total = 0.0
    for m, coef in _q_laurent(z, a, eps1, eps2).items():
        n = v + m
        total = total + coef * (_cauchy(n, r1, s2) - _cauchy(n, r2, s2)) / (r1 - r2)
    return -total / a


def _jump_angles(a, c, s1, s2, scan=4096):
    """Angles alpha where a root of w P(s1 e^{i alpha}, w) has modulus s2."""
    t = min(s2, 1.0 / s2)

    def gap(alpha):
        r1, _ = _roots(s1 * np.exp(1j * alpha), a, c)
        return np.abs(r1) - t

    grid = np.linspace(0.0, 2.0 * np.pi, scan + 1)
    vals = gap(grid)
    out = []
    for i in range(scan):
        if vals[i] == 0.0:
            out.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            out.append(brentq(gap, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15))
    return sorted(set(out))


def _integrate_residue(a, c, eps1, eps2, u, v, s1, s2, q: QuadratureSpec):
    def f(alpha):
        z = s1 * np.exp(1j * alpha)
        return _inner(z, a, c, eps1, eps2, v, s2) * z ** u

    cuts = _jump_angles(a, c, s1, s2)
    if not cuts:
        n = q.nodes
        prev = None
        while n <= q.max_nodes:
            alpha = 2.0 * np.pi * np.arange(n) / n
            cur = np.mean(f(alpha))
            if prev is not None and abs(cur - prev) <= max(q.refine_until * abs(cur), 1e-15):
                return cur
            prev, n = cur, 2 * n
        raise ConvergenceError("magnetic residue quadrature did not converge")
    edges = list(cuts) + [cuts[0] + 2.0 * np.pi]
    x, w = _gl(GL_ORDER)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        panels = max(1, q.nodes // GL_ORDER)
        prev = None
        while True:
            e = np.linspace(lo, hi, panels + 1)
            half = 0.5 * np.diff(e)
            mid = 0.5 * (e[1:] + e[:-1])
            nodes = (mid[:, None] + half[:, None] * x).ravel()
            wts = (half[:, None] * w).ravel()
            cur = np.sum(f(nodes) * wts) / (2.0 * np.pi)
            if prev is not None and abs(cur - prev) <= max(q.refine_until * abs(cur), 1e-15):
                break
            prev = cur
            panels *= 2
            if panels * GL_ORDER > q.max_nodes:
                raise ConvergenceError("magnetic residue quadrature did not converge")
        total += cur
    return total


def _integrate_double(a, eps1, eps2, u, v, s1, s2, q: QuadratureSpec):
    n = q.nodes
    prev = None
    while n <= min(q.max_nodes, 4096):
        t = 2.0 * np.pi * np.arange(n) / n
        z = s1 * np.exp(1j * t)[:, None]
        w = s2 * np.exp(1j * t)[None, :]
        P = p_poly(z, w, a)
        val = np.mean(q_entry(z, w, a, eps1, eps2) * z ** u * w ** v / P)
        if prev is not None and abs(val - prev) <= max(q.refine_until * abs(val), 1e-15):
            return val
        prev, n = val, 2 * n
    raise ConvergenceError("double trapezoid for the magnetic kernel did not converge")


def torus_has_zeros(params: ModelParams, s1: float, s2: float) -> bool:
    t = 2.0 * np.pi * np.arange(PROBE) / PROBE
    P = p_poly(s1 * np.exp(1j * t)[:, None], s2 * np.exp(1j * t)[None, :], params.a)
    if np.min(np.abs(P)) <= P_MIN:
        return True
    return bool(_jump_angles(params.a, params.c, s1, s2))


def kinv_magnetic(x: VertexRef, y: VertexRef, s1: float, s2: float, params: ModelParams,
                  q=None, method: str = "auto") -> complex:
    """Whole-plane kernel K^{-1}_{s1,s2}(x, y) for white x and black y."""
    if x.color != "white" or y.color != "black":
        raise DomainError("kinv_magnetic expects a (white, black) pair")
    if not (s1 > 0 and s2 > 0):
        raise DomainError("radii must be positive")
    q = QuadratureSpec() if q is None else q
    u, v = translation(x, y)
    a, c = params.a, params.c
    zeros = torus_has_zeros(params, s1, s2)
    if method == "auto":
        method = "residue" if zeros else "double"
    if method == "double":
        if zeros:
            raise ContourError(
                f"P(z, w) vanishes on the torus |z|={s1}, |w|={s2}; change a radius "
                "or use method='residue'")
        val = _integrate_double(a, x.eps, y.eps, u, v, s1, s2, q)
    elif method == "residue":
        val = _integrate_residue(a, c, x.eps, y.eps, u, v, s1, s2, q)
    else:
        raise DomainError(f"unknown method {method!r}")
    return complex(s1 ** (1 - u) * s2 ** (1 - v) * val)
