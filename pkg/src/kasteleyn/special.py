"""Dawson function D+ and Mills ratio D- for real z >= 0.

    D+(z) = e^{-z^2} int_0^z e^{t^2} dt,    D-(z) = e^{z^2} int_z^inf e^{-t^2} dt

Both are evaluated from series with positive terms where those are stable,
an asymptotic series for D+ at large z and a continued fraction for D-.
"""
from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

DPLUS_SWITCH = 6.0
DMINUS_SWITCH = 1.5
_TINY = 1e-300
_MAX_TERMS = 10_000


def _check(z):
    z = float(z)
    if not (z >= 0.0) or not math.isfinite(z):
        raise DomainError(f"argument must be a finite z >= 0, got {z!r}")
    return z


def _dplus_series(z):
    # e^{-z^2} sum z^{2n+1} / (n! (2n+1)), each term formed in log space
    if z == 0.0:
        return 0.0
    lz, z2 = math.log(z), z * z
    total = 0.0
    for n in range(_MAX_TERMS):
        t = math.exp((2 * n + 1) * lz - math.lgamma(n + 1) - math.log(2 * n + 1) - z2)
        total += t
        if n > z2 and t < 1e-17 * total:
            return total
    raise ConvergenceError("Dawson series did not converge")


def _dplus_asymptotic(z):
    # 1/(2z) sum (2n-1)!! / (2z^2)^n, truncated at the smallest term
    x = 1.0 / (2.0 * z * z)
    total, t = 1.0, 1.0
    for n in range(1, _MAX_TERMS):
        nxt = t * (2 * n - 1) * x
        if nxt >= t:
            break
        t = nxt
        total += t
        if t < 1e-17 * total:
            break
    return total / (2.0 * z)


def dawson_plus(z) -> float:
    z = _check(z)
    if z <= DPLUS_SWITCH:
        return _dplus_series(z)
    return _dplus_asymptotic(z)


def _dminus_series(z):
    # sqrt(pi)/2 e^{z^2} - sum 2^n z^{2n+1} / (2n+1)!!
    z2 = z * z
    t, s = z, z
    for n in range(1, _MAX_TERMS):
        t *= 2.0 * z2 / (2 * n + 1)
        s += t
        if t < 1e-17 * s:
            break
    return 0.5 * math.sqrt(math.pi) * math.exp(z2) - s


def _dminus_cf(z):
    # D-(z) = 1/2 * 1/(z + (1/2)/(z + (2/2)/(z + (3/2)/(z + ...)))), modified Lentz
    f = z
    C, D = z, 0.0
    for m in range(1, _MAX_TERMS):
        an = 0.5 * m
        D = z + an * D
        D = 1.0 / (D if abs(D) > _TINY else _TINY)
        C = z + an / C
        if abs(C) < _TINY:
            C = _TINY
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 0.5 / f
    raise ConvergenceError("Mills ratio continued fraction did not converge")


def mills_minus(z) -> float:
    z = _check(z)
    if z <= DMINUS_SWITCH:
        return _dminus_series(z)
    return _dminus_cf(z)
