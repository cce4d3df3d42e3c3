"""Dimer-dimer correlations of the infinite model and their regime asymptotics.

Both dimers are translates of one another by 2(r1, r2).  The engine works
with the infinite-plane kernel K11^{-1} - C_{omega_c}, which is translation
invariant, so the first dimer is anchored at the origin convention (N = 0).

Offsets are measured by the scale r with (r1, r2) = r (sigma1, sigma2),
sigma1 = sqrt(2) cos(theta), sigma2 = sqrt(2) sin(theta).  Along the
diagonal r = r1 and along the anti-diagonal r = r1 = -r2.  The Euclidean
separation 2 sqrt(r1^2 + r2^2) is available as ``distance``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analytic import CriticalPoint, ModelParams, g_func, w_alpha
from .asymptotics import (DEFAULT_EPS, DEFAULT_GAMMA, AsymptoticValue, _gates,
                          lambda_eps, saddle_factor)
from .aztec import dimer_vertices
from .errors import DomainError, ParameterError
from .kernels import kinv_rough_scaled
from .lattice import VertexRef, kasteleyn_entry
from .special import dawson_plus, mills_minus

DEFAULT_M = 0.3
DEFAULT_BIG_M = 3.0
DEFAULT_RMIN = 6
DIRECTIONS = ("diag", "anti", "angle")
ENVELOPES = {
    "diag": ("exponential", "constant", "inv-r2-oscillating"),
    "anti": ("exponential", "inv-sqrt", "inv-r", "inv-r2-flat"),
    "angle": ("exponential", "exponential", "constant", "inv-r2-oscillating"),
}
ROMAN = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class DimerPairSpec:
    """Two dimers of the same type, the second shifted by 2(r1, r2).

    ``eps1``, ``eps2`` are the classes of the white and black vertex and
    ``a_face`` selects an a face (weight a) or a b face (weight 1).
    """

    r1: int
    r2: int
    eps1: int = 0
    eps2: int = 0
    a_face: bool = True

    def __post_init__(self):
        r1, r2 = int(self.r1), int(self.r2)
        if (r1 + r2) % 2:
            raise DomainError(f"r1 + r2 must be even, got ({r1}, {r2})")
        if r1 == 0 and r2 == 0:
            raise DomainError("the two dimers coincide")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)

    @classmethod
    def along(cls, direction: str, r: float, theta: float | None = None, **kw):
        """Nearest lattice offset at scale r in the given direction."""
        if direction == "diag":
            return cls(int(round(r)), int(round(r)), **kw)
        if direction == "anti":
            return cls(int(round(r)), -int(round(r)), **kw)
        if direction != "angle":
            raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
        if theta is None:
            raise DomainError("the angle direction needs theta")
        x = math.sqrt(2.0) * r * math.cos(theta)
        y = math.sqrt(2.0) * r * math.sin(theta)
        r1, r2 = int(round(x)), int(round(y))
        if (r1 + r2) % 2:
            # move the coordinate with the larger rounding error
            if abs(x - r1) >= abs(y - r2):
                r1 += 1 if x > r1 else -1
            else:
                r2 += 1 if y > r2 else -1
        return cls(r1, r2, **kw)

    @property
    def r(self) -> float:
        return math.sqrt(0.5 * (self.r1 ** 2 + self.r2 ** 2))

    @property
    def distance(self) -> float:
        return 2.0 * math.sqrt(self.r1 ** 2 + self.r2 ** 2)

    @property
    def theta(self) -> float:
        return math.atan2(self.r2, self.r1)

    @property
    def direction(self) -> str:
        if self.r1 == self.r2 and self.r1 > 0:
            return "diag"
        if self.r1 == -self.r2 and self.r1 > 0:
            return "anti"
        return "angle"

    def dimers(self):
        """((x1, y1), (x2, y2)), white then black vertex of each dimer."""
        e1 = dimer_vertices(0, 0, 0, self.eps1, self.eps2, self.a_face)
        e2 = dimer_vertices(0, self.r1, self.r2, self.eps1, self.eps2, self.a_face)
        return e1, e2


@dataclass(frozen=True)
class CorrResult:
    """Correlation and the two kernel mantissas; K^{-1}(x1, y2) = kinv_12 e^{log_scale}."""

    value: float
    kinv_12: complex
    kinv_21: complex
    log_scale: float
    method: str = "exact-kernel, remainder-free"


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    thresholds: tuple
    envelope: str
    direction: str = "diag"


@dataclass(frozen=True)
class AngleProfile:
    theta: float
    sigma1: float
    sigma2: float
    h_plus: float
    h_minus: float
    g_plus: float
    g_minus: float
    f_alpha: float
    extra: dict = field(default_factory=dict)


def _shape(params: ModelParams):
    """(|G(i)|, a - |G(i)|^{-2}, sqrt(1 - 2c))."""
    gi = params.abs_g_i
    return gi, params.a - gi ** -2, math.sqrt(1.0 - 2.0 * params.c)


def corr_exact(spec: DimerPairSpec, crit: CriticalPoint, params: ModelParams,
               q=None) -> CorrResult:
    """-K(b1, w1) K(b2, w2) K^{-1}(w1, b2) K^{-1}(w2, b1) with K^{-1} = K11^{-1} - C."""
    (x1, y1), (x2, y2) = spec.dimers()
    m12, s12 = kinv_rough_scaled(x1, y2, crit, params, q)
    m21, s21 = kinv_rough_scaled(x2, y1, crit, params, q)
    k1 = kasteleyn_entry(y1, x1, params.a)
    k2 = kasteleyn_entry(y2, x2, params.a)
    prod = -k1 * k2 * m12 * m21 * math.exp(s12 + s21)
    if abs(prod.imag) > 1e-9 * max(abs(prod.real), 1e-300):
        raise DomainError(f"correlation is not real: {prod}")
    # the two kernels are m12 e^{s12} and m21 e^{s21}, with s21 = -s12
    return CorrResult(value=float(prod.real), kinv_12=complex(m12), kinv_21=complex(m21),
                      log_scale=s12)


def corr_diag_asym(r: int, crit: CriticalPoint, params: ModelParams,
                   eps_guard: float = DEFAULT_EPS, gamma: float = DEFAULT_GAMMA,
                   strict: bool = True) -> AsymptoticValue:
    """Closed-form main term of the correlation along the diagonal."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    a, c, phi = params.a, params.c, crit.phi_c
    gi, d, b = _shape(params)
    validity = {
        "window": 2.0 * r * phi ** (2.0 - gamma) <= 1.0,
        "lambda_eps": lambda_eps(2.0 * r * phi / b, eps_guard),
    }
    _gates(validity, strict)
    # E_{r-1,r+1} / E_{r,r} -> G(i)/G(-i) = -1, so the smooth part carries a - 1
    smooth = ((a - 1.0) / d * math.sqrt(math.pi) * b ** 1.5 / math.sqrt(8.0 * c)
              * gi ** (2 * r) / math.sqrt(r))
    rough = math.sin(2.0 * r * phi / b) * b / (2.0 * r)
    val = -(a * d) ** 2 / (math.pi ** 2 * (1.0 - a) ** 4) * (smooth - rough) ** 2
    return AsymptoticValue(val, "diag", validity)


def antidiag_branch_point(phi: float, gamma: float = DEFAULT_GAMMA) -> float:
    """phi^{gamma-2} / 2, where the anti-diagonal formula changes branch."""
    return math.inf if phi == 0 else 0.5 * phi ** (gamma - 2.0)


def corr_antidiag_asym(r: int, crit: CriticalPoint, params: ModelParams,
                       gamma: float = DEFAULT_GAMMA) -> AsymptoticValue:
    """Main term along the anti-diagonal.

    Below phi^{gamma-2}/2 it is the exponential plus phi/sqrt(r) form;
    above, the boundary-layer form with the double Gaussian integral
    written as D+(z) D-(z), z = sqrt(2 r c') phi.
    """
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    a, phi = params.a, crit.phi_c
    gi, d, _ = _shape(params)
    s1a = math.sqrt(1.0 + a * a)
    if r < antidiag_branch_point(phi, gamma):
        first = a * d * (gi ** 2 - a) / (8.0 * math.pi * (1.0 - a) * s1a) * gi ** (4 * r) / r
        second = (a ** 1.5 * d ** 2 / math.sqrt(8.0 * math.pi ** 3 * (1.0 - a) ** 5 * s1a)
                  * phi / math.sqrt(r))
        return AsymptoticValue(first + second, "anti-small-r", {})
    dw = a - abs(g_func(crit.omega_c, params.c)) ** -2
    z = math.sqrt(2.0 * r * params.c_prime) * phi
    pre = a * a * dw * dw / (2.0 * math.pi ** 2 * r * a * (1.0 - a) * s1a)
    return AsymptoticValue(pre * dawson_plus(z) * mills_minus(z), "anti-layer", {})


def _check_theta(theta, eps):
    q = 0.25 * math.pi
    ok = (-q - 1e-15 <= theta <= -eps) or (eps <= theta <= q - eps)
    if not ok:
        raise DomainError(
            f"theta={theta} outside [-pi/4, -{eps}] U [{eps}, pi/4 - {eps}]")


def angle_profile(theta: float, params: ModelParams, eps: float = DEFAULT_EPS) -> AngleProfile:
    """Decay rates h+-, constants g+- and f(|sigma|) for direction theta."""
    _check_theta(theta, eps)
    c = params.c
    sigma1 = math.sqrt(2.0) * math.cos(theta)
    sigma2 = math.sqrt(2.0) * math.sin(theta)
    sigma = max(math.tan(theta), -1.0)
    al = abs(sigma)
    w = w_alpha(al, params).w_alpha
    mg = abs(g_func(1j * w, c))
    mg1 = abs(g_func(1.0 / (1j * w), c))
    gi, d, _ = _shape(params)
    base = math.log(mg) + al * math.log(mg1)
    h_plus = base + (1.0 - sigma) * math.log(gi)
    h_minus = base - (1.0 - sigma) * math.log(gi)
    st = 1.0 if sigma2 >= 0 else -1.0
    f = saddle_factor(al, params)
    g_plus = f * (params.a - mg * mg1 ** -st) / d
    g_minus = f * (params.a - mg ** -1 * mg1 ** st) / d
    return AngleProfile(theta=theta, sigma1=sigma1, sigma2=sigma2, h_plus=h_plus,
                        h_minus=h_minus, g_plus=g_plus, g_minus=g_minus, f_alpha=f)


def corr_angle_asym(r: float, profile: AngleProfile, crit: CriticalPoint, params: ModelParams,
                    eps_guard: float = DEFAULT_EPS, gamma: float = DEFAULT_GAMMA,
                    strict: bool = True) -> AsymptoticValue:
    """Main term at scale r in the direction of ``profile``."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    a, phi = params.a, crit.phi_c
    gi, d, b = _shape(params)
    s1, s2 = profile.sigma1, profile.sigma2
    arg = r * (s1 + s2) * phi / b
    validity = {
        "window": 2.0 * r * phi ** (2.0 - gamma) <= 1.0,
        "lambda_eps": lambda_eps(arg, eps_guard),
    }
    _gates(validity, strict)
    if s1 + s2 == 0:
        osc = phi / (math.pi * b * b)
    else:
        osc = math.sin(arg) / (r * math.pi * (s1 + s2) * b)
    prod = 1.0
    for g, h in ((profile.g_plus, profile.h_plus), (profile.g_minus, profile.h_minus)):
        prod *= g / math.sqrt(r * s1) * math.exp(r * s1 * h) - osc
    val = -(a * d) ** 2 / (1.0 + a * a) ** 2 * prod
    return AsymptoticValue(val, "angle", validity)


def regime_thresholds(direction: str, crit: CriticalPoint, params: ModelParams,
                      theta: float | None = None, m: float = DEFAULT_M,
                      big_m: float = DEFAULT_BIG_M) -> tuple:
    """Regime boundaries in r, made non-decreasing by a running maximum.

    Equal neighbours mean the regime between them is empty.  With
    phi_c = 0 every boundary is +inf.
    """
    phi = crit.phi_c
    if phi < 0:
        raise ParameterError("phi_c must be non-negative")
    gi, _, b = _shape(params)
    if direction == "diag":
        if phi == 0:
            return (math.inf, math.inf)
        raw = [math.log(1.0 / phi) / (-2.0 * math.log(gi)), b / (2.0 * phi)]
    elif direction == "anti":
        if phi == 0:
            return (math.inf,) * 3
        t = 1.0 / (2.0 * params.c_prime * phi * phi)
        raw = [math.log(1.0 / phi) / (-4.0 * math.log(gi)), m * t, big_m * t]
    elif direction == "angle":
        if theta is None:
            raise DomainError("the angle direction needs theta")
        if phi == 0:
            return (math.inf,) * 3
        p = angle_profile(theta, params)
        lg = math.log(1.0 / phi)
        t3 = m / ((p.sigma1 + p.sigma2) * phi) if p.sigma1 + p.sigma2 > 0 else math.inf
        t2 = min(lg / (p.sigma1 * abs(p.h_minus)) if p.h_minus != 0 else math.inf, t3)
        raw = [lg / (p.sigma1 * abs(p.h_plus)), t2, t3]
    else:
        raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    out, top = [], -math.inf
    for t in raw:
        top = max(top, t)
        out.append(top)
    return tuple(out)


def classify_regime(r: float, direction: str, crit: CriticalPoint, params: ModelParams,
                    theta: float | None = None, m: float = DEFAULT_M,
                    big_m: float = DEFAULT_BIG_M) -> RegimeReport:
    """Regime of r: the number of thresholds at or below r, as a Roman numeral."""
    th = regime_thresholds(direction, crit, params, theta, m, big_m)
    idx = sum(1 for t in th if r >= t)
    env = ENVELOPES[direction][idx]
    if direction == "angle" and idx == 1 and abs(theta + 0.25 * math.pi) < 1e-12:
        env = "inv-sqrt"
    return RegimeReport(regime=ROMAN[idx], thresholds=th, envelope=env, direction=direction)


def corr_asym(spec: DimerPairSpec, crit: CriticalPoint, params: ModelParams,
              eps_guard: float = DEFAULT_EPS, gamma: float = DEFAULT_GAMMA) -> AsymptoticValue:
    """The closed form matching the direction of ``spec``, gates recorded not raised."""
    d = spec.direction
    if d == "diag":
        return corr_diag_asym(spec.r1, crit, params, eps_guard, gamma, strict=False)
    if d == "anti":
        return corr_antidiag_asym(spec.r1, crit, params, gamma)
    prof = angle_profile(spec.theta, params, eps_guard)
    return corr_angle_asym(spec.r, prof, crit, params, eps_guard, gamma, strict=False)


def is_w0b0(v: VertexRef) -> bool:
    return v.eps == 0
