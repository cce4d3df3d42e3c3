"""Node tables and the doubling refinement loop shared by the kernels.

Every kernel integral has the form

    sum_j  weight_j * exp(l * logG_j + k * logG1_j - shift)

over nodes w_j on a circle |w| = rho, where logG_j = log G(w_j),
logG1_j = log G(1/w_j) and the complex weight carries
1 / (sqrt(w^2+2c) sqrt(1/w^2+2c)).  On the unit circle that factor is
1 / |w^2 + 2c|.  Tables are cached per (c, nodes, rho) or (c, arc, panels).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from . import _backend
from .analytic import branch_sqrt, g_func
from .errors import ConvergenceError, ParameterError

GL_ORDER = 16
MAX_NODES = 2 ** 16
# an arc sum this far below the integral of |integrand| is redone in long double
ILL_CONDITIONED = 1e4


def default_nodes() -> int:
    raw = os.environ.get("KASTELEYN_NODES")
    if raw is None:
        return 512
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"KASTELEYN_NODES must be an integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class QuadratureSpec:
    """Starting node count, rule and refinement tolerance.

    ``rule`` names the closed-contour rule; arcs always use composite
    16-point Gauss-Legendre panels with ``nodes // 16`` starting panels.
    """

    nodes: int = field(default_factory=default_nodes)
    rule: str = "periodic-trapezoid"
    refine_until: float = 1e-12
    max_nodes: int = MAX_NODES

    def __post_init__(self):
        if self.nodes < 64:
            raise ParameterError(f"nodes must be >= 64, got {self.nodes}")
        if self.rule not in ("periodic-trapezoid", "arc-gauss"):
            raise ParameterError(f"unknown rule {self.rule!r}")
        if not self.refine_until > 0:
            raise ParameterError("refine_until must be positive")


@dataclass(frozen=True)
class NodeTable:
    logg: np.ndarray    # log G(w)
    logg1: np.ndarray   # log G(1/w)
    weight: np.ndarray  # quadrature weight / (sqrt(w^2+2c) sqrt(1/w^2+2c))
    theta: np.ndarray


def _table(theta, qw, c, rho=1.0):
    u = np.exp(1j * theta)
    if rho == 1.0:
        w, iw = u, np.conj(u)
        weight = (qw / np.abs(u * u + 2.0 * c)).astype(complex)
    else:
        w, iw = rho * u, np.conj(u) / rho
        weight = qw / (branch_sqrt(w, c) * branch_sqrt(iw, c))
    logg = np.log(g_func(w, c))
    logg1 = np.log(g_func(iw, c))
    for arr in (logg, logg1, weight, theta):
        arr.setflags(write=False)
    return NodeTable(logg, logg1, weight, theta)


@lru_cache(maxsize=128)
def circle_table(c: float, n: int, rho: float = 1.0) -> NodeTable:
    """Periodic trapezoid on |w| = rho: weights sum to 1 (mean value)."""
    theta = 2.0 * np.pi * np.arange(n) / n
    return _table(theta, np.full(n, 1.0 / n), c, rho)


@lru_cache(maxsize=8)
def _gl(order):
    x, w = roots_legendre(order)
    return x, w


@lru_cache(maxsize=256)
def arc_table(c: float, lo: float, hi: float, panels: int) -> NodeTable:
    """Composite Gauss-Legendre on [lo, hi]; weights integrate d theta."""
    x, w = _gl(GL_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    theta = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    qw = (half[:, None] * w[None, :]).ravel()
    return _table(theta, qw, c)


def power_sums(table: NodeTable, ks, ls, shifts=None):
    ks = np.asarray(ks, dtype=np.int64)
    ls = np.asarray(ls, dtype=np.int64)
    if shifts is None:
        shifts = np.zeros(ks.shape, dtype=float)
    shifts = np.asarray(shifts, dtype=float)
    return _backend.power_sums(table.logg, table.logg1, table.weight, ks, ls, shifts)


def abs_sums(table: NodeTable, ks, ls, shifts):
    """sum_j weight_j |integrand_j|: the scale that sets the roundoff floor."""
    ks = np.asarray(ks, dtype=float)
    ls = np.asarray(ls, dtype=float)
    expo = (ls[:, None] * table.logg.real[None, :] + ks[:, None] * table.logg1.real[None, :]
            - np.asarray(shifts, dtype=float)[:, None])
    return np.exp(expo) @ np.abs(table.weight)


def refine(make_table, start, q: QuadratureSpec, ks, ls, shifts, what="integral"):
    """Double the node count until every sum has converged.

    ``make_table(n)`` returns a NodeTable with ``n`` nodes.  Returns the
    converged sums, the node count used and the roundoff scale
    sum_j weight_j |integrand_j| of each sum.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    eps = np.finfo(float).eps
    n = start
    table = make_table(n)
    prev = power_sums(table, ks, ls, shifts)
    while True:
        n2 = 2 * n
        if n2 > q.max_nodes:
            raise ConvergenceError(
                f"{what} did not converge within {q.max_nodes} nodes")
        table = make_table(n2)
        cur = power_sums(table, ks, ls, shifts)
        floor = 256 * eps * abs_sums(table, ks, ls, shifts)
        diff = np.abs(cur - prev)
        if np.all(diff <= np.maximum(q.refine_until * np.abs(cur), floor)):
            return cur, n2, floor / (256 * eps)
        prev, n = cur, n2


@lru_cache(maxsize=8)
def _gl_long(order):
    """Gauss-Legendre nodes and weights in long double, Newton from the double ones."""
    x = roots_legendre(order)[0].astype(np.longdouble)
    for _ in range(4):
        p0, p1 = np.ones_like(x), x
        for n in range(2, order + 1):
            p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
        dp = order * (x * p1 - p0) / (x * x - 1)
        x = x - p1 / dp
    return x, 2 / ((1 - x * x) * dp * dp)


@lru_cache(maxsize=64)
def _arc_table_long(a: float, lo, hi, panels: int):
    x, w = _gl_long(GL_ORDER)
    a = np.longdouble(a)
    c = a / (1 + a * a)
    lo, hi = np.longdouble(lo), np.longdouble(hi)
    step = (hi - lo) / panels
    mid = lo + (np.arange(panels, dtype=np.longdouble) + np.longdouble(0.5)) * step
    theta = (mid[:, None] + 0.5 * step * x[None, :]).ravel()
    qw = np.broadcast_to(0.5 * step * w[None, :], (panels, GL_ORDER)).ravel()
    u = np.cos(theta) + 1j * np.sin(theta).astype(np.clongdouble)
    s = np.sqrt(2 * c)
    # on the unit circle 1 + 2c / w^2 has positive real part: principal root
    logg = np.log((u - u * np.sqrt(1 + 2 * c / (u * u))) / s)
    iu = np.conj(u)
    logg1 = np.log((iu - iu * np.sqrt(1 + 2 * c / (iu * iu))) / s)
    return logg, logg1, qw / np.abs(u * u + 2 * c)


def arc_sums_long(a, lo, hi, q: QuadratureSpec, ks, ls, shifts, start_panels):
    """Arc sums in long double, refined by doubling like ``refine``.

    For sums that cancel far below the size of the integrand; c is rebuilt
    from a in long double so the integrand is not perturbed at 1e-16.
    """
    ks = np.asarray(ks, dtype=np.longdouble)
    ls = np.asarray(ls, dtype=np.longdouble)
    shifts = np.asarray(shifts, dtype=np.longdouble)

    def sums(panels):
        logg, logg1, weight = _arc_table_long(a, lo, hi, panels)
        expo = ls[:, None] * logg[None, :] + ks[:, None] * logg1[None, :] - shifts[:, None]
        return np.exp(expo) @ weight, np.exp(expo.real) @ weight

    panels = start_panels
    prev, _ = sums(panels)
    eps = np.finfo(np.longdouble).eps
    while True:
        if 2 * panels * GL_ORDER > q.max_nodes:
            raise ConvergenceError(f"long double arc quadrature did not converge within "
                                   f"{q.max_nodes} nodes")
        panels *= 2
        cur, scale = sums(panels)
        if np.all(np.abs(cur - prev) <= np.maximum(q.refine_until * np.abs(cur),
                                                   256 * eps * scale)):
            return cur.astype(complex), scale.astype(float)
        prev = cur


def circle_sums(c, q: QuadratureSpec, ks, ls, shifts=0.0, with_scale=False, rho=1.0):
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), np.shape(np.atleast_1d(ks)))
    sums, _, scale = refine(lambda n: circle_table(c, n, rho), q.nodes, q, ks, ls, shifts,
                            what="unit-circle quadrature")
    return (sums, scale) if with_scale else sums


def arc_sums(c, lo, hi, q: QuadratureSpec, ks, ls, shifts=0.0, with_scale=False, a=None):
    """Composite Gauss-Legendre sums on [lo, hi].

    With ``a`` given, sums that cancel to below 1/ILL_CONDITIONED of the
    integral of |integrand| are redone by ``arc_sums_long``, which uses
    ``lo`` and ``hi`` at whatever precision they are passed in.
    """
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), np.shape(np.atleast_1d(ks)))
    if hi <= lo:
        zero = np.zeros(np.shape(np.atleast_1d(ks)), dtype=complex)
        return (zero, zero.real) if with_scale else zero
    panels = max(1, q.nodes // GL_ORDER)
    lo_d, hi_d = float(lo), float(hi)
    sums, n, scale = refine(lambda p: arc_table(c, lo_d, hi_d, p // GL_ORDER), panels * GL_ORDER,
                            q, ks, ls, shifts, what="arc quadrature")
    if a is not None:
        bad = np.flatnonzero(scale > ILL_CONDITIONED * np.abs(sums))
        if bad.size:
            ks_a = np.atleast_1d(ks)
            ls_a = np.atleast_1d(ls)
            sums, scale = sums.copy(), scale.copy()
            sums[bad], scale[bad] = arc_sums_long(a, lo, hi, q, ks_a[bad], ls_a[bad],
                                                  shifts[bad], n // GL_ORDER)
    return (sums, scale) if with_scale else sums
