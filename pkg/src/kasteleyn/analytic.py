"""Branch-aware special functions, saddle functions and critical points.

Everything here follows one branch convention for the square root
``sqrt(w**2 + 2c)``: the one defined by two logarithms whose arguments lie
in ``(-pi/2, 3pi/2)``, which leaves a single cut on the segment
``i[-sqrt(2c), sqrt(2c)]``.  It is evaluated as ``w sqrt(1 + 2c/w^2)``
(same values, see branch_sqrt).  Functions accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError

CUT_GUARD = 1e-12
DEFAULT_TOL = 1e-13


@dataclass(frozen=True)
class ModelParams:
    """Two-periodic weights ``a`` and ``b = 1``."""

    a: float
    b: float = field(default=1.0, init=False)

    def __post_init__(self):
        a = float(self.a)
        if not (0.0 < a < 1.0) or not math.isfinite(a):
            raise ParameterError(f"weight a must lie in (0, 1), got {self.a!r}")
        object.__setattr__(self, "a", a)

    @property
    def c(self) -> float:
        return self.a / (1.0 + self.a * self.a)

    @property
    def xi_c(self) -> float:
        return -0.5 * math.sqrt(1.0 - 2.0 * self.c)

    @property
    def xi_min(self) -> float:
        """Open lower end of the admissible xi range."""
        return -0.5 * math.sqrt(1.0 + 2.0 * self.c)

    @property
    def c_prime(self) -> float:
        return self.c / (1.0 - 2.0 * self.c) ** 1.5

    @property
    def abs_g_i(self) -> float:
        """|G(i)| = (1 - sqrt(1-2c)) / sqrt(2c)."""
        c = self.c
        return (1.0 - math.sqrt(1.0 - 2.0 * c)) / math.sqrt(2.0 * c)


@dataclass(frozen=True)
class CriticalPoint:
    """Saddle ``omega_c = exp(i theta_c)`` of ``g_xi`` on the unit circle."""

    xi: float
    theta_c: float
    residual: float

    @property
    def phi_c(self) -> float:
        return 0.5 * math.pi - self.theta_c

    @property
    def omega_c(self) -> complex:
        return complex(math.cos(self.theta_c), math.sin(self.theta_c))


@dataclass(frozen=True)
class AlphaSaddle:
    alpha: float
    w_alpha: float
    g2: complex


def _as_complex(w):
    if np.ndim(w) == 0:
        return complex(w)
    return np.asarray(w, dtype=complex)


def _check_cut(w, c):
    """Reject points within CUT_GUARD of the segment i[-sqrt(2c), sqrt(2c)]."""
    s = math.sqrt(2.0 * c)
    w = np.asarray(w, dtype=complex)
    bad = (np.abs(w.real) < CUT_GUARD) & (np.abs(w.imag) <= s + CUT_GUARD)
    if np.any(bad):
        point = complex(w[bad].flat[0]) if w.ndim else complex(w)
        raise DomainError(
            f"point {point} lies on the branch cut i[-{s:.6g}, {s:.6g}]")


def _log_upper(z):
    """Logarithm with argument in (-pi/2, 3pi/2]."""
    ang = np.angle(z)
    ang = np.where(ang <= -0.5 * np.pi, ang + 2.0 * np.pi, ang)
    return np.log(np.abs(z)) + 1j * ang


def branch_sqrt(w, c):
    """``sqrt(w^2 + 2c)`` with the cut on ``i[-sqrt(2c), sqrt(2c)]``.

    Evaluated as ``w * sqrt(1 + 2c/w^2)`` with the principal root, which has
    the same cut and the same values as the two-logarithm definition but
    no rounding ambiguity on the ray i(-inf, -sqrt(2c)], where both
    logarithms sit on their own cuts.
    """
    _check_cut(w, c)
    wa = np.asarray(w, dtype=complex)
    out = wa * np.sqrt(1.0 + 2.0 * c / (wa * wa))
    return complex(out) if out.ndim == 0 else out


def branch_sqrt_twolog(w, c):
    """Literal two-logarithm definition; reference for tests."""
    _check_cut(w, c)
    wa = np.asarray(w, dtype=complex)
    s = 1j * math.sqrt(2.0 * c)
    out = np.exp(0.5 * _log_upper(wa + s) + 0.5 * _log_upper(wa - s))
    return complex(out) if out.ndim == 0 else out


def g_func(w, c):
    """G(w) = (w - sqrt(w^2+2c)) / sqrt(2c).  G is odd in w.

    Evaluated as -sqrt(2c) / (w + sqrt(w^2+2c)), which has no cancellation:
    with this branch w + sqrt(w^2+2c) = w (1 + sqrt(1 + 2c/w^2)) and the
    principal root has non-negative real part, so |w + sqrt| >= |w|.
    """
    wa = np.asarray(_as_complex(w))
    out = -math.sqrt(2.0 * c) / (wa + branch_sqrt(wa, c))
    return complex(out) if np.ndim(out) == 0 else out


def g_inv(u, c):
    """Inverse of G on the unit disc: sqrt(c/2) (u - 1/u)."""
    u = _as_complex(u)
    return math.sqrt(0.5 * c) * (u - 1.0 / u)


def _recip(w):
    w = _as_complex(w)
    if np.ndim(w) == 0:
        if w == 0:
            raise DomainError("w = 0 has no reciprocal")
        return 1.0 / w
    if np.any(w == 0):
        raise DomainError("w = 0 has no reciprocal")
    return 1.0 / w


def g_xi(w, xi, params: ModelParams):
    """g_xi(w) = log w - xi log G(w) + xi log G(1/w), principal logarithms."""
    c = params.c
    w = _as_complex(w)
    out = np.log(w) - xi * np.log(g_func(w, c)) + xi * np.log(g_func(_recip(w), c))
    return complex(out) if np.ndim(out) == 0 else out


def g_xi_prime(w, xi, params: ModelParams):
    c = params.c
    w = _as_complex(w)
    iw = _recip(w)
    wg = 1.0 + xi * (w / branch_sqrt(w, c) + 1.0 / (w * branch_sqrt(iw, c)))
    out = wg / w
    return complex(out) if np.ndim(out) == 0 else out


def _circle_point(phi):
    # i * exp(-i phi), built from sin/cos so that phi near 0 stays exact
    return complex(math.sin(phi), math.cos(phi))


def _saddle_rhs(phi, c):
    """2 Re[w / sqrt(w^2+2c)] at w = i exp(-i phi)."""
    w = _circle_point(phi)
    return 2.0 * (w / branch_sqrt(w, c)).real


def _saddle_rhs_dphi(phi, c):
    w = _circle_point(phi)
    s = branch_sqrt(w, c)
    return 2.0 * (2.0 * c / s ** 3 * (-1j * w)).real


def solve_omega_c(xi: float, params: ModelParams, tol: float = DEFAULT_TOL) -> CriticalPoint:
    """Critical point of g_xi on the unit circle in the first quadrant.

    Solves ``-1/xi = 2 Re[e^{i theta} / sqrt(e^{2 i theta} + 2c)]`` by
    bisection in ``phi = pi/2 - theta``, then one guarded Newton step.
    """
    xi = float(xi)
    c = params.c
    if not (params.xi_min < xi <= params.xi_c + 1e-15):
        raise ParameterError(
            f"xi={xi} outside admissible range ({params.xi_min}, {params.xi_c}]")
    target = -1.0 / xi

    def f(phi):
        return _saddle_rhs(phi, c) - target

    f0 = f(0.0)
    if f0 <= 8 * np.finfo(float).eps * abs(target):
        phi = 0.0
    else:
        lo, hi = 0.0, 0.5 * math.pi
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        phi = 0.5 * (lo + hi)
        d = _saddle_rhs_dphi(phi, c)
        if d != 0.0:
            trial = phi - f(phi) / d
            if lo <= trial <= hi and abs(f(trial)) <= abs(f(phi)):
                phi = trial
    theta = 0.5 * math.pi - phi
    residual = abs(g_xi_prime(complex(math.cos(theta), math.sin(theta)), xi, params))
    # the saddle equation is quadratic in phi at the boundary, so the
    # residual scale is set by tol * |slope|, not tol itself
    slope = abs(_saddle_rhs_dphi(phi, c)) + 1.0
    if residual > max(1e-10, 10 * tol * slope * abs(xi)):
        raise ConvergenceError(
            f"critical point solve for xi={xi} left residual {residual:.3e}", residual)
    return CriticalPoint(xi=xi, theta_c=theta, residual=residual)


def critical_point_from_phi(phi_c: float, params: ModelParams) -> CriticalPoint:
    """Exact inverse of the saddle equation: the xi whose critical angle is phi_c."""
    phi_c = float(phi_c)
    if not (0.0 <= phi_c < 0.5 * math.pi):
        raise ParameterError(f"phi_c must lie in [0, pi/2), got {phi_c}")
    xi = -1.0 / _saddle_rhs(phi_c, params.c)
    theta = 0.5 * math.pi - phi_c
    residual = abs(g_xi_prime(complex(math.cos(theta), math.sin(theta)), xi, params))
    return CriticalPoint(xi=xi, theta_c=theta, residual=residual)


def _leading_coeff(params: ModelParams) -> float:
    c = params.c
    return 4.0 * c * (1.0 + c) * params.xi_c ** 2 / (1.0 - 2.0 * c) ** 2.5


def phi_c_leading(xi: float, params: ModelParams) -> float:
    """First-order phi_c ~ sqrt((xi_c - xi) / coeff)."""
    gap = params.xi_c - float(xi)
    if gap < 0:
        if gap > -1e-15:
            gap = 0.0
        else:
            raise ParameterError(f"xi={xi} lies above xi_c={params.xi_c}")
    return math.sqrt(gap / _leading_coeff(params))


def xi_from_phi_leading(phi_c: float, params: ModelParams) -> float:
    return params.xi_c - _leading_coeff(params) * float(phi_c) ** 2


def g_tilde(alpha, w, params: ModelParams):
    """g~_alpha(w) = log G(w) + alpha log G(1/w), principal logarithms."""
    c = params.c
    w = _as_complex(w)
    out = np.log(g_func(w, c)) + alpha * np.log(g_func(_recip(w), c))
    return complex(out) if np.ndim(out) == 0 else out


def g_tilde_prime(alpha, w, params: ModelParams):
    c = params.c
    w = _as_complex(w)
    out = -1.0 / branch_sqrt(w, c) + alpha / (w * w * branch_sqrt(_recip(w), c))
    return complex(out) if np.ndim(out) == 0 else out


def g_tilde_second(alpha, w, params: ModelParams):
    c = params.c
    w = _as_complex(w)
    s = branch_sqrt(w, c)
    t = branch_sqrt(_recip(w), c)
    out = w / s ** 3 + alpha * (-2.0 / (w ** 3 * t) + 1.0 / (w ** 5 * t ** 3))
    return complex(out) if np.ndim(out) == 0 else out


def w_alpha(alpha: float, params: ModelParams) -> AlphaSaddle:
    """Saddle i*w_alpha of g~_alpha on the imaginary axis, alpha in (0, 1]."""
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    c = params.c
    one = 1.0 - alpha * alpha
    w = math.sqrt((one + math.sqrt(one * one + 16.0 * c * c * alpha * alpha)) / (4.0 * c))
    if alpha == 1.0:
        w = 1.0
    g2 = -2.0 * c / (w * w - 2.0 * c) ** 1.5 * (1.0 / w + w ** 3 / alpha ** 2)
    return AlphaSaddle(alpha=alpha, w_alpha=w, g2=complex(g2))


def psi_theta(alpha, theta, params: ModelParams):
    """psi(theta) = g~_alpha(e^{i theta})."""
    return g_tilde(alpha, np.exp(1j * np.asarray(theta, dtype=float)), params)


def F_theta(theta, params: ModelParams):
    """F(theta) = arg G(i e^{-i theta}) - pi/2."""
    w = 1j * np.exp(-1j * np.asarray(theta, dtype=float))
    out = np.angle(g_func(w, params.c)) - 0.5 * np.pi
    return float(out) if np.ndim(out) == 0 else out
