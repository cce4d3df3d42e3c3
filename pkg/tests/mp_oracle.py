"""Extended-precision reference values of E, C~ and D.

Independent of the package quadrature: E by the trapezoid rule on the unit
circle, the arcs by composite Gauss-Legendre with narrow panels, all in
160-bit arithmetic (gmpy2).  The direct arc for D with k + l < 0 loses
about (k + l) log|G(1)| - log|value| digits to cancellation, roughly 17 at
|k|, |l| = 40, which double precision cannot afford and this can.
Every index pair in [-L, L]^2 is produced at once by one object-array
matrix product.
"""
import math

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

PREC = 160


def _ctx():
    return gmpy2.context(gmpy2.get_context(), precision=PREC)


def _legendre(order):
    """Gauss-Legendre nodes and weights on [-1, 1] by Newton from the double ones."""
    x0, _ = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for guess in x0:
        x = mpfr(float(guess))
        for _ in range(8):
            p0, p1 = mpfr(1), x
            for n in range(2, order + 1):
                p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
            dp = order * (x * p1 - p0) / (x * x - 1)
            x = x - p1 / dp
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


class ContourOracle:
    """All of E, C~ and D for |k|, |l| <= L at one a and theta_c."""

    def __init__(self, a, theta_c, L=40, circle_nodes=512, panel_width=0.1, order=20):
        self.a, self.L = a, L
        with _ctx():
            self.c = mpfr(a) / (1 + mpfr(a) ** 2)
            s = gmpy2.sqrt(2 * self.c)
            pi = gmpy2.const_pi()
            theta = [2 * pi * j / circle_nodes for j in range(circle_nodes)]
            # E depends on |k|, |l| only
            self._e = self._table(theta, [2 * pi / circle_nodes] * circle_nodes, s, signed=False)
            tc = mpfr(theta_c)
            self._c = self._arc(tc, pi - tc, s, panel_width, order)
            self._d = self._arc(-tc, tc, s, panel_width, order)

    def _arc(self, lo, hi, s, width, order):
        xs, ws = _legendre(order)
        panels = max(1, int(math.ceil(float(hi - lo) / width)))
        h = (hi - lo) / panels
        theta, weight = [], []
        for p in range(panels):
            mid = lo + (p + mpfr(0.5)) * h
            for x, w in zip(xs, ws):
                theta.append(mid + x * h / 2)
                weight.append(w * h / 2)
        return self._table(theta, weight, s)

    def _table(self, theta, weight, s, signed=True):
        """Matrix of sums over nodes of f(theta) for l (rows) and k (columns)."""
        L = self.L
        two_c = 2 * self.c
        rows = np.empty((2 * L + 1, len(theta)), dtype=object)
        cols = np.empty((len(theta), 2 * L + 1), dtype=object)
        rows[:L] = mpc(0)
        cols[:, :L] = mpc(0)
        for j, (t, wt) in enumerate(zip(theta, weight)):
            w = mpc(gmpy2.cos(t), gmpy2.sin(t))
            wi = mpc(gmpy2.cos(t), -gmpy2.sin(t))
            g = (w - w * gmpy2.sqrt(1 + two_c / (w * w))) / s
            g1 = (wi - wi * gmpy2.sqrt(1 + two_c / (wi * wi))) / s
            base = wt / abs(w * w + two_c)
            rows[L, j] = mpc(base)
            cols[j, L] = mpc(1)
            gp, gm, hp, hm = mpc(base), mpc(base), mpc(1), mpc(1)
            for n in range(1, L + 1):
                gp, gm = gp * g, gm / g
                hp, hm = hp * g1, hm / g1
                rows[L + n, j], cols[j, L + n] = gp, hp
                if signed:
                    rows[L - n, j], cols[j, L - n] = gm, hm
        if not signed:
            out = np.zeros((2 * L + 1, 2 * L + 1), dtype=object)
            out[L:, L:] = rows[L:].dot(cols[:, L:])
            return out
        return rows.dot(cols)

    def _value(self, table, k, l, arc):
        if (k + l) % 2:
            return 0.0
        with _ctx():
            raw = table[l + self.L, k + self.L]
            phase = -1 if ((k + l) // 2) % 2 else 1
            norm = 2 * (1 + mpfr(self.a) ** 2) * gmpy2.const_pi() * (1 if arc else 2)
            v = phase * raw / norm
            if abs(v.imag) > mpfr(2) ** -100 * max(abs(v.real), mpfr(2) ** -1000):
                raise ArithmeticError(f"reference value not real at ({k}, {l})")
            return float(v.real)

    def ekl(self, k, l):
        return self._value(self._e, abs(k), abs(l), arc=False)

    def c_tilde(self, k, l):
        return self._value(self._c, k, l, arc=True)

    def d(self, k, l):
        return self._value(self._d, k, l, arc=True)
