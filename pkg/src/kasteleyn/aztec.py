"""Finite two-periodic Aztec diamond: Kasteleyn matrix, inverse, enumeration.

Vertices are ordered lexicographically by (x2, x1); the Kasteleyn matrix has
black rows and white columns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import _backend
from .errors import DomainError, ParameterError
from .lattice import E1, E2, VertexRef, is_a_face, kasteleyn_entry

MAX_DENSE_N = 96
MAX_ENUM_N = 6
DIRECTIONS = {E1: "+e1", E2: "+e2", (-1, -1): "-e1", (1, -1): "-e2"}


@dataclass(frozen=True)
class DimerEdge:
    white: VertexRef
    black: VertexRef
    weight: float
    is_a_face: bool

    def __post_init__(self):
        if self.white.color != "white" or self.black.color != "black":
            raise DomainError("a dimer joins a white and a black vertex")
        d = (self.black.x1 - self.white.x1, self.black.x2 - self.white.x2)
        if d not in DIRECTIONS:
            raise DomainError(f"{self.white} and {self.black} are not adjacent")


def dimer_edge(w: VertexRef, b: VertexRef, a: float) -> DimerEdge:
    fa = is_a_face(w, b)
    return DimerEdge(w, b, a if fa else 1.0, fa)


@dataclass(frozen=True)
class Edge:
    white: int
    black: int
    weight: float
    direction: str
    face_type: str


class AztecGraph:
    def __init__(self, n: int, a: float):
        self.n = n
        self.a = float(a)
        self.whites = sorted((VertexRef(i, j) for j in range(0, 2 * n + 1, 2)
                              for i in range(1, 2 * n, 2)), key=lambda v: (v.x2, v.x1))
        self.blacks = sorted((VertexRef(i, j) for j in range(1, 2 * n, 2)
                              for i in range(0, 2 * n + 1, 2)), key=lambda v: (v.x2, v.x1))
        self.white_index = {v: i for i, v in enumerate(self.whites)}
        self.black_index = {v: i for i, v in enumerate(self.blacks)}
        edges = []
        for bi, b in enumerate(self.blacks):
            for d in (E1, E2, (-1, -1), (1, -1)):
                w = VertexRef(b.x1 + d[0], b.x2 + d[1])
                wi = self.white_index.get(w)
                if wi is None:
                    continue
                fa = is_a_face(w, b)
                edges.append(Edge(wi, bi, self.a if fa else 1.0,
                                  DIRECTIONS[(b.x1 - w.x1, b.x2 - w.x2)], "a" if fa else "b"))
        self.edges = sorted(edges, key=lambda e: (e.white, e.black))
        self._K = None
        self._lu = None
        self._cols = {}

    def edge(self, w: VertexRef, b: VertexRef) -> DimerEdge:
        if w not in self.white_index or b not in self.black_index:
            raise DomainError(f"edge ({w}, {b}) is not in the graph")
        return dimer_edge(w, b, self.a)


def build_aztec(n: int, a: float) -> AztecGraph:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not (a > 0):
        raise ParameterError(f"weight a must be positive, got {a}")
    if n % 4 and not (a == 1.0 and n % 2 == 0):
        raise ParameterError("n must be a multiple of 4 (even n allowed when a = 1)")
    if n > MAX_DENSE_N:
        raise ParameterError(f"n={n} exceeds the dense limit {MAX_DENSE_N}")
    return AztecGraph(int(n), a)


def kasteleyn_matrix(g: AztecGraph) -> np.ndarray:
    if g._K is None:
        K = np.zeros((len(g.blacks), len(g.whites)), dtype=complex)
        for e in g.edges:
            K[e.black, e.white] = kasteleyn_entry(g.blacks[e.black], g.whites[e.white], g.a)
        K.setflags(write=False)
        g._K = K
    return g._K


def log_partition_function(g: AztecGraph) -> float:
    sign, logdet = np.linalg.slogdet(kasteleyn_matrix(g))
    if sign == 0:
        raise ArithmeticError("singular Kasteleyn matrix")
    return float(logdet)


def partition_function(g: AztecGraph) -> float:
    """|det K| via LU with partial pivoting."""
    return math.exp(log_partition_function(g))


def _column(g: AztecGraph, bi: int) -> np.ndarray:
    col = g._cols.get(bi)
    if col is None:
        if g._lu is None:
            g._lu = sla.lu_factor(kasteleyn_matrix(g))
        rhs = np.zeros(len(g.blacks), dtype=complex)
        rhs[bi] = 1.0
        col = sla.lu_solve(g._lu, rhs)
        g._cols[bi] = col
    return col


def inverse_entry(g: AztecGraph, w: VertexRef, b: VertexRef) -> complex:
    """K^{-1}(w, b): one solve per black column, cached on the graph."""
    wi = g.white_index.get(w)
    bi = g.black_index.get(b)
    if wi is None or bi is None:
        raise DomainError(f"({w}, {b}) not in the n={g.n} graph")
    return complex(_column(g, bi)[wi])


def _entry(g, b, w):
    return kasteleyn_matrix(g)[g.black_index[b], g.white_index[w]]


def rho_det(g: AztecGraph, dimers) -> float:
    """Probability that all the given dimers are present: det L(e_i, e_j)."""
    m = len(dimers)
    L = np.empty((m, m), dtype=complex)
    for i, ei in enumerate(dimers):
        kb = _entry(g, ei.black, ei.white)
        for j, ej in enumerate(dimers):
            L[i, j] = kb * inverse_entry(g, ej.white, ei.black)
    return float(np.linalg.det(L).real)


def correlation_finite(g: AztecGraph, e1: DimerEdge, e2: DimerEdge) -> float:
    """Covariance of the two dimer indicators."""
    if (e1.white, e1.black) == (e2.white, e2.black):
        raise DomainError("correlation of an edge with itself is not covered")
    val = (-_entry(g, e1.black, e1.white) * _entry(g, e2.black, e2.white)
           * inverse_entry(g, e2.white, e1.black) * inverse_entry(g, e1.white, e2.black))
    return float(val.real)


# ---------------------------------------------------------------- enumeration

@dataclass
class EnumerationResult:
    Z: float
    marginals: np.ndarray  # aligned with g.edges


def _transfer(g: AztecGraph, forced=()) -> float:
    """Weighted matching count with the given (white_idx, black_idx) edges forced.

    Whites are processed in matrix order; the state is the set of used
    blacks among those still adjacent to unprocessed whites.
    """
    nw = len(g.whites)
    opts = [[] for _ in range(nw)]
    for e in g.edges:
        opts[e.white].append((e.black, e.weight))
    forced_black = {}
    for wi, bi in forced:
        if bi in forced_black.values() or wi in forced_black:
            return 0.0
        forced_black[wi] = bi
    taken = set(forced_black.values())
    for wi in range(nw):
        if wi in forced_black:
            opts[wi] = [(b, w) for b, w in opts[wi] if b == forced_black[wi]]
        else:
            opts[wi] = [(b, w) for b, w in opts[wi] if b not in taken]
    first, last = {}, {}
    for wi in range(nw):
        for b, _ in opts[wi]:
            first.setdefault(b, wi)
            last[b] = wi
    if len(first) < len(g.blacks):
        return 0.0
    frontier = []
    vec = np.ones(1, dtype=float)
    for t in range(nw):
        grown = frontier + sorted(b for b in first if first[b] == t)
        pos = {b: i for i, b in enumerate(grown)}
        keep = [i for i, b in enumerate(grown) if last[b] > t]
        retire = 0
        for i, b in enumerate(grown):
            if last[b] == t:
                retire |= 1 << i
        bits = np.array([pos[b] for b, _ in opts[t]], dtype=np.int64)
        wts = np.array([w for _, w in opts[t]], dtype=float)
        vec = _backend.transfer_step(vec, len(keep), bits, wts,
                                     np.array(keep, dtype=np.int64), retire)
        frontier = [grown[i] for i in keep]
    return float(vec[0])


def enumerate_matchings(g: AztecGraph, marginals: bool = True) -> EnumerationResult:
    if g.n > MAX_ENUM_N:
        raise ParameterError(f"enumeration limited to n <= {MAX_ENUM_N}")
    Z = _transfer(g)
    marg = np.full(len(g.edges), np.nan)
    if marginals:
        for i, e in enumerate(g.edges):
            marg[i] = _transfer(g, [(e.white, e.black)]) / Z
    return EnumerationResult(Z, marg)


def enumerate_joint(g: AztecGraph, dimers) -> float:
    """Probability that all the given dimers are present, by enumeration."""
    if g.n > MAX_ENUM_N:
        raise ParameterError(f"enumeration limited to n <= {MAX_ENUM_N}")
    forced = [(g.white_index[d.white], g.black_index[d.black]) for d in dimers]
    return _transfer(g, forced) / _transfer(g)


def dimer_vertices(N, r1, r2, eps1, eps2, is_a_face):
    """White and black vertex of the dimer at offset 2(r1, r2) from anchor (N, N)."""
    if (r1 + r2) % 2:
        raise DomainError("r1 + r2 must be even")
    if eps1 not in (0, 1) or eps2 not in (0, 1):
        raise DomainError("eps classes must be 0 or 1")
    f = 1 if is_a_face else -1
    x = VertexRef(N + 2 * r1 + 1, N + 2 * r2 + 2 * eps1 * f)
    y = VertexRef(N + 2 * r1 + 1 - (1 - 2 * eps2) * f, N + 2 * r2 + f)
    return x, y


def dimer_coords(n, xi, r1, r2, eps1, eps2, is_a_face, params=None):
    """White and black vertex of a dimer anchored at N = n(1 + xi)."""
    N = n * (1.0 + xi)
    Ni = int(round(N))
    if abs(N - Ni) > 1e-9 or Ni % 2:
        raise DomainError(f"n(1+xi) = {N} must be an even integer")
    if params is not None:
        lo = n * (1.0 - 0.5 * math.sqrt(1.0 + 2.0 * params.c))
        hi = n * (1.0 - 0.5 * math.sqrt(1.0 - 2.0 * params.c))
        if not (lo - 1e-9 <= N <= hi + 1e-9):
            raise DomainError(f"n(1+xi) = {N} outside the window [{lo}, {hi}]")
    return dimer_vertices(Ni, r1, r2, eps1, eps2, is_a_face)
