"""Main terms of the large-index asymptotics of E, C~ and E - C~.

Every function returns the leading term only; remainders are never
evaluated.  The boundary-layer formulas are guarded by two hypotheses:

* window: phi_c^{2-gamma} (|l| + |k|) <= 1 for the inner (sin) formula
  and >= 1 for the boundary-layer formula;
* lambda: the oscillation argument must stay eps away from every non-zero
  multiple of pi.

A failed gate raises GateError unless ``strict=False``, in which case the
value is still returned and the failure is recorded in ``validity``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .analytic import CriticalPoint, F_theta, ModelParams, g_func, w_alpha
from .errors import ConvergenceError, DomainError, GateError

DEFAULT_GAMMA = 0.75
DEFAULT_EPS = 0.05
TAIL_ARG = 9.0
LAYER_RTOL = 1e-12

REGIME_TAGS = ("bulk-angle", "fixed-k", "inner-sin",
               "boundary-layer-neg", "boundary-layer-sin", "boundary-layer-pos")


@dataclass(frozen=True)
class AsymptoticValue:
    value: float
    regime_tag: str
    validity: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.validity.values())

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class CPrime:
    c_prime: float

    @classmethod
    def from_params(cls, params: ModelParams) -> "CPrime":
        return cls(params.c_prime)


def lambda_eps(x: float, eps: float) -> bool:
    """True iff |x - n pi| >= eps for every non-zero integer n."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    n = round(x / math.pi)
    nearest = [m for m in (n - 1, n, n + 1) if m != 0]
    return min(abs(x - m * math.pi) for m in nearest) >= eps


def _sinc_ratio(m: float, x: float, b: float) -> float:
    """sin(m x) / (m / b) with the value b x at m = 0."""
    if m == 0:
        return b * x
    return math.sin(m * x) * b / m


def _gates(validity: dict, strict: bool):
    if strict:
        for gate, ok in validity.items():
            if not ok:
                raise GateError(gate, f"asymptotic hypothesis '{gate}' fails")


def _check_pair(k, l, need_nonzero=True):
    if (k + l) % 2:
        raise DomainError(f"k + l must be even, got ({k}, {l})")
    if need_nonzero and (k == 0 or l == 0):
        raise DomainError(f"indices must be non-zero, got ({k}, {l})")


def saddle_factor(alpha: float, params: ModelParams) -> float:
    """f(alpha) = 1 / (sqrt(2 pi |g''|) w sqrt(w^2 - 2c) sqrt(1/w^2 - 2c))."""
    s = w_alpha(alpha, params)
    w, c = s.w_alpha, params.c
    return 1.0 / (math.sqrt(2.0 * math.pi * abs(s.g2)) * w
                  * math.sqrt(w * w - 2.0 * c) * math.sqrt(1.0 / (w * w) - 2.0 * c))


def log_saddle_moduli(alpha: float, params: ModelParams):
    """(log |G(i w_alpha)|, log |G(1/(i w_alpha))|)."""
    w = w_alpha(alpha, params).w_alpha
    c = params.c
    return (math.log(abs(g_func(1j * w, c))), math.log(abs(g_func(1.0 / (1j * w), c))))


def ekl_asym(k: int, l: int, params: ModelParams) -> float:
    """Leading term of E_{k,l} for k/l in a compact subset of (0, 1].

    Indices are swapped first when |k| > |l| (E is symmetric).
    """
    _check_pair(k, l)
    if abs(k) > abs(l):
        k, l = l, k
    alpha = abs(k) / abs(l)
    lg, lg1 = log_saddle_moduli(alpha, params)
    mag = math.exp(abs(l) * lg + abs(k) * lg1)
    sign = -1.0 if k % 2 else 1.0
    return sign * mag * saddle_factor(alpha, params) / ((1.0 + params.a ** 2) * math.sqrt(abs(l)))


def ekl_asym_fixedk(k: int, l: int, params: ModelParams) -> float:
    """Leading term of E_{k,l} for fixed k as |l| grows.

    The value comes from the end point i/sqrt(2c) of the cut of G(1/w),
    where |G(1/w)| = 1, which gives

        (-1)^k |G(i/sqrt(2c))|^{|l|} / sqrt(2 pi |l| (1 - a^4)).

    The relative remainder is O(1/|l|).
    """
    if l == 0:
        raise DomainError("l must be non-zero")
    if (k + l) % 2:
        raise DomainError(f"k + l must be even, got ({k}, {l})")
    a, c = params.a, params.c
    lg = math.log(abs(g_func(1j / math.sqrt(2.0 * c), c)))
    sign = -1.0 if k % 2 else 1.0
    with np.errstate(under="ignore"):
        mag = math.exp(abs(l) * lg)
    return sign * mag / math.sqrt(2.0 * math.pi * abs(l) * (1.0 - a ** 4))


def c_tilde_asym(k: int, l: int, crit: CriticalPoint, params: ModelParams,
                 eps_guard: float = DEFAULT_EPS, gamma: float = DEFAULT_GAMMA,
                 strict: bool = True) -> AsymptoticValue:
    """Leading term of C~(k, l) inside the inner window."""
    _check_pair(k, l)
    phi = crit.phi_c
    b = math.sqrt(1.0 - 2.0 * params.c)
    validity = {
        "window": phi ** (2.0 - gamma) * (abs(l) + abs(k)) <= 1.0,
        "lambda_eps": lambda_eps(phi * (l - k) / b, eps_guard),
    }
    _gates(validity, strict)
    sign = -1.0 if k % 2 else 1.0
    pre = sign * params.abs_g_i ** (l + k) / ((1.0 - params.a) ** 2 * math.pi)
    return AsymptoticValue(pre * _sinc_ratio(l - k, phi / b, b), "inner-sin", validity)


def _layer_scaled(m: int, s: int, phi: float, params: ModelParams) -> float:
    """e^{s c' phi^2} times the Gaussian-cosine layer integral.

    s > 2: tail over (phi, inf); s < -2: window over (0, phi).
    """
    cp = params.c_prime
    if s > 0:
        sc = s * cp
        # exponent sc (t^2 + 2 phi t) reaches TAIL_ARG^2 at t = T
        T = -phi + math.sqrt(phi * phi + TAIL_ARG ** 2 / sc)

        def f(t):
            return math.exp(-sc * t * (t + 2.0 * phi)) * math.cos(m * F_theta(phi + t, params))
        lo, hi = 0.0, T
    else:
        sc = -s * cp

        def f(t):
            return math.exp(sc * (t * t - phi * phi)) * math.cos(m * F_theta(t, params))
        lo, hi = 0.0, phi
    if hi <= lo:
        return 0.0
    val, err, info = _quad(f, lo, hi)
    return val


def _quad(f, lo, hi):
    with np.errstate(all="ignore"):
        out = quad(f, lo, hi, epsabs=0.0, epsrel=LAYER_RTOL, limit=400, full_output=1)
    val, err, info = out[0], out[1], out[2]
    if len(out) > 3 and err > 1e3 * LAYER_RTOL * max(abs(val), 1e-300):
        raise ConvergenceError(f"layer integral did not converge ({out[3][:60]})", err)
    return val, err, info


def gauss_cos_layer(m: int, s: int, phi_c: float, params: ModelParams) -> float:
    """int cos(m F(theta)) e^{-s c' theta^2} d theta.

    Over (phi_c, inf) when s > 0 and over (0, phi_c) when s < 0.
    """
    if s == 0:
        raise DomainError("the layer integral needs s != 0")
    if phi_c < 0:
        raise DomainError("phi_c must be non-negative")
    return math.exp(-s * params.c_prime * phi_c ** 2) * _layer_scaled(m, s, phi_c, params)


def d_asym(k: int, l: int, crit: CriticalPoint, params: ModelParams,
           eps_guard: float = DEFAULT_EPS, gamma: float = DEFAULT_GAMMA,
           strict: bool = True) -> AsymptoticValue:
    """Leading term of E_{k,l} - C~(k, l) = D(k, l) in the boundary layer."""
    _check_pair(k, l)
    phi = crit.phi_c
    F = F_theta(phi, params)
    validity = {
        "window": (abs(l) + abs(k)) * phi ** (2.0 - gamma) >= 1.0,
        "lambda_eps": lambda_eps(F * (l - k), eps_guard),
    }
    _gates(validity, strict)
    s, m = l + k, l - k
    sign = -1.0 if k % 2 else 1.0
    lgw = math.log(abs(g_func(crit.omega_c, params.c)))
    pre = sign * math.exp(s * lgw) / (math.pi * (1.0 - params.a) ** 2)
    b = math.sqrt(1.0 - 2.0 * params.c)
    if s < -2:
        return AsymptoticValue(-pre * _layer_scaled(m, s, phi, params),
                               "boundary-layer-neg", validity)
    if s > 2:
        return AsymptoticValue(pre * _layer_scaled(m, s, phi, params),
                               "boundary-layer-pos", validity)
    return AsymptoticValue(-pre * _sinc_ratio(m, F, b), "boundary-layer-sin", validity)
