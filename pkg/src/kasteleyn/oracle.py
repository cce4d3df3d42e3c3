"""Finite Aztec diamond against the infinite-plane kernel K11^{-1} - C_{omega_c}.

Entries are compared near the point (N, N), N = n(1 + xi), where the finite
inverse is approximated by the infinite one up to the error term R and an
exponentially small term that needs both vertices within l1-distance
O(sqrt(n)) of the diagonal.  The constant is not known; the window used
here is |x1 - x2| <= sqrt(n)/2 for each vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import ModelParams, g_func, solve_omega_c
from .aztec import build_aztec, inverse_entry
from .errors import DomainError
from .kernels import kinv_rough
from .lattice import VertexRef


def center_entries(radius: int = 2):
    """Offsets (dx1, dx2, dy1, dy2) from (N, N) of every white x and black y
    with coordinates within ``radius`` + 1 of the anchor and at most
    ``radius`` from the diagonal."""
    odd = [v for v in range(-radius, radius + 2) if v % 2]
    even = [v for v in range(-radius, radius + 1) if v % 2 == 0]
    out = []
    for dx1 in odd:
        for dx2 in even:
            for dy1 in even:
                for dy2 in odd:
                    if abs(dx1 - dx2) <= radius and abs(dy1 - dy2) <= radius:
                        out.append((dx1, dx2, dy1, dy2))
    return tuple(out)


DEFAULT_ENTRIES = center_entries()


@dataclass(frozen=True)
class OracleRow:
    n: int
    x: VertexRef
    y: VertexRef
    finite: complex
    infinite: complex
    gap: float
    envelope: float


def window(n: int) -> float:
    return 0.5 * math.sqrt(n)


def in_window(v: VertexRef, n: int) -> bool:
    return abs(v.x1 - v.x2) <= window(n)


def anchor(n: int, xi: float) -> int:
    N = n * (1.0 + xi)
    Ni = int(round(N))
    if abs(N - Ni) > 1e-9 or Ni % 2:
        raise DomainError(f"n(1+xi) = {N} must be an even integer")
    return Ni


def envelope(x: VertexRef, y: VertexRef, N: int, n: int, xi: float, crit,
             params: ModelParams) -> float:
    """|G(omega_c)|^{b1-b2+a2-a1} min(n^{-1/3}, (n sqrt(xi_c - xi))^{-1/2}), B = 1."""
    a1, a2 = (x.x1 - N + 1) / 2, (x.x2 - N) / 2
    b1, b2 = (y.x1 - N) / 2, (y.x2 - N + 1) / 2
    gap = params.xi_c - xi
    m = n ** (-1.0 / 3.0)
    if gap > 0:
        m = min(m, 1.0 / math.sqrt(n * math.sqrt(gap)))
    return abs(g_func(crit.omega_c, params.c)) ** (b1 - b2 + a2 - a1) * m


def compare(n: int, a: float, xi: float, entries=DEFAULT_ENTRIES, q=None, graph=None):
    """One OracleRow per entry; entries outside the window are refused."""
    params = ModelParams(a)
    crit = solve_omega_c(xi, params)
    N = anchor(n, xi)
    pairs = []
    for dx1, dx2, dy1, dy2 in entries:
        x, y = VertexRef(N + dx1, N + dx2), VertexRef(N + dy1, N + dy2)
        for v in (x, y):
            if not in_window(v, n):
                raise DomainError(
                    f"{v} is {abs(v.x1 - v.x2)} from the diagonal, outside the "
                    f"window sqrt(n)/2 = {window(n):.3g}")
        pairs.append((x, y))
    g = build_aztec(n, a) if graph is None else graph
    rows = []
    for x, y in pairs:
        fin = inverse_entry(g, x, y)
        inf = kinv_rough(x, y, crit, params, q)
        rows.append(OracleRow(n, x, y, fin, inf, abs(fin - inf),
                              envelope(x, y, N, n, xi, crit, params)))
    return rows
