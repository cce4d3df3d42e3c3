"""Lattice vertices, parity classes and the kernel index maps."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

E1 = (1, 1)
E2 = (-1, 1)


@dataclass(frozen=True, order=True)
class VertexRef:
    """Lattice point with colour and class eps derived from its coordinates.

    White vertices have x1 odd, x2 even; black vertices x1 even, x2 odd.
    The class is eps with (x1 + x2) mod 4 = 2 eps + 1.
    """

    x1: int
    x2: int

    def __post_init__(self):
        x1, x2 = int(self.x1), int(self.x2)
        if (x1 + x2) % 2 == 0:
            raise DomainError(f"({x1}, {x2}) is not a vertex: x1 + x2 must be odd")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def color(self) -> str:
        return "white" if self.x1 % 2 == 1 else "black"

    @property
    def eps(self) -> int:
        return ((self.x1 + self.x2) % 4 - 1) // 2

    def shift(self, d1: int, d2: int) -> "VertexRef":
        return VertexRef(self.x1 + d1, self.x2 + d2)

    def __sub__(self, other):
        return (self.x1 - other.x1, self.x2 - other.x2)


def white(x1, x2) -> VertexRef:
    v = VertexRef(x1, x2)
    if v.color != "white":
        raise DomainError(f"({x1}, {x2}) is not a white vertex")
    return v


def black(x1, x2) -> VertexRef:
    v = VertexRef(x1, x2)
    if v.color != "black":
        raise DomainError(f"({x1}, {x2}) is not a black vertex")
    return v


def h_index(eps1: int, eps2: int) -> int:
    return eps1 * (1 - eps2) + eps2 * (1 - eps1)


@dataclass(frozen=True)
class KernelIndices:
    k1: int
    l1: int
    k2: int
    l2: int
    h: int


def indices_from_vertices(x: VertexRef, y: VertexRef) -> KernelIndices:
    """Index quadruple for a white x and black y."""
    if x.color != "white" or y.color != "black":
        raise DomainError(f"expected (white, black) pair, got ({x.color}, {y.color})")
    h = h_index(x.eps, y.eps)
    k1 = (x.x2 - y.x2 - 1) // 2 + h
    l1 = (y.x1 - x.x1 - 1) // 2
    return KernelIndices(k1=k1, l1=l1, k2=k1 + 1 - 2 * h, l2=l1 + 1, h=h)


def ipow(n: int) -> complex:
    """i**n computed from n mod 4."""
    return (1 + 0j, 1j, -1 + 0j, -1j)[n % 4]


# Fundamental domain of the period lattice 2e1, 2e2: it holds w0 in W0,
# b0 = w0 + e2, b1 = w0 + e1 and w1 = w0 + e1 + e2.  With this grouping
# the Fourier-transformed Kasteleyn matrix is exactly
#   [[i(a + 1/w), a + z], [a + 1/z, i(a + w)]]   (rows b0, b1; columns w0, w1)
# where z^-p w^-q tags a white vertex p steps along 2e1 and q steps along
# 2e2 from the black one.  The inverse kernel then carries z^u w^v with
# (u, v) = domain(black) - domain(white).
_OFFSET = {
    ("white", 0): (0, 0),
    ("black", 0): E2,
    ("black", 1): E1,
    ("white", 1): (0, 2),
}


def fundamental_domain(v: VertexRef) -> tuple[int, int]:
    o = _OFFSET[(v.color, v.eps)]
    X = v.x1 - o[0] - 1
    Y = v.x2 - o[1]
    # anchor - (1, 0) = p (2, 2) + q (-2, 2)
    return (X + Y) // 4, (Y - X) // 4


def domain_vertex(p: int, q: int, color: str, eps: int) -> VertexRef:
    """Inverse of fundamental_domain."""
    o = _OFFSET[(color, eps)]
    return VertexRef(1 + 2 * p - 2 * q + o[0], 2 * p + 2 * q + o[1])


def translation(x: VertexRef, y: VertexRef) -> tuple[int, int]:
    px, qx = fundamental_domain(x)
    py, qy = fundamental_domain(y)
    return py - px, qy - qx


def kasteleyn_entry(b: VertexRef, w: VertexRef, a: float, bw: float = 1.0) -> complex:
    """Whole-plane Kasteleyn entry K(b, w) for the weights (a, bw); 0 if not adjacent."""
    if b.color != "black" or w.color != "white":
        raise DomainError("kasteleyn_entry expects (black, white)")
    j = b.eps
    d = (w.x1 - b.x1, w.x2 - b.x2)
    if d == E1:
        return complex(a * (1 - j) + bw * j)
    if d == E2:
        return 1j * (a * j + bw * (1 - j))
    if d == (-E1[0], -E1[1]):
        return complex(a * j + bw * (1 - j))
    if d == (-E2[0], -E2[1]):
        return 1j * (a * (1 - j) + bw * j)
    return 0j


def is_a_face(w: VertexRef, b: VertexRef) -> bool:
    """True if the edge lies on a face whose centre (w.x1, b.x2) has sum 2 mod 4."""
    return (w.x1 + b.x2) % 4 == 2
