"""Student's t density, upper tail and Mill's ratio.

Two independent routes to the tail are provided: the regularized incomplete
beta closed form (``tail`` / ``log_tail``) and numerical integration of the
density (``tail_quadrature``). Everything that raises (1 + x^2/nu) to a power
works in the log domain, so heavy tails at tiny nu and light tails at large
nu neither overflow nor underflow before the final exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import (
    DomainError,
    QuadResult,
    _log_inc_beta,
    integrate,
    integrate_to_inf,
    ln_beta,
)

__all__ = [
    "EvalReport",
    "TDist",
    "c_nu",
    "change_of_variable",
    "ln_c_nu",
    "log_pdf",
    "log_tail",
    "mills_ratio",
    "mills_ratio_quadrature",
    "pdf",
    "tail",
    "tail_error",
    "tail_quadrature",
]

# Nominal relative accuracy of the beta-based tail, checked against mpmath in
# the test suite. The second term covers rounding of very negative logs.
BETA_REL_ERR = 1e-12
_EPS = np.finfo(float).eps
_LN_HALF = math.log(0.5)


def _check_nu(nu: float) -> None:
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"degrees of freedom must be finite and > 0, got {nu!r}")


def ln_c_nu(nu: float) -> float:
    """ln of the t normalizing constant Gamma((nu+1)/2) / (sqrt(nu pi) Gamma(nu/2)).

    Uses Gamma((nu+1)/2)/Gamma(nu/2) = sqrt(pi)/B(nu/2, 1/2), which keeps
    full accuracy for large nu.
    """
    _check_nu(nu)
    return -ln_beta(0.5 * nu, 0.5) - 0.5 * math.log(nu)


def c_nu(nu: float) -> float:
    return math.exp(ln_c_nu(nu))


@dataclass(frozen=True)
class TDist:
    nu: float
    ln_c_nu: float = field(init=False, repr=False)

    def __post_init__(self):
        _check_nu(self.nu)
        object.__setattr__(self, "ln_c_nu", ln_c_nu(self.nu))

    @property
    def c_nu(self) -> float:
        return math.exp(self.ln_c_nu)


@dataclass(frozen=True)
class EvalReport:
    """Everything known about one (nu, a) point."""

    nu: float
    a: float
    pdf: float
    tail_beta: float
    tail_quad: float
    tail_quad_err: float
    mills: float
    bound_theorem1: float
    bound_corollary: float | None
    slack: float


def _log1p_sq(x: float, nu: float) -> float:
    # log(1 + x^2/nu) without squaring huge x
    ax = abs(x)
    if ax < 1e100:
        return math.log1p(ax * ax / nu)
    return 2.0 * math.log(ax) - math.log(nu) + math.log1p(nu / ax / ax)


def _as_dist(d: TDist | float) -> TDist:
    return d if isinstance(d, TDist) else TDist(float(d))


def _check_x(name: str, x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def log_pdf(d: TDist | float, x: float) -> float:
    d = _as_dist(d)
    _check_x("x", x)
    return d.ln_c_nu - 0.5 * (d.nu + 1.0) * _log1p_sq(x, d.nu)


def pdf(d: TDist | float, x: float) -> float:
    """Density C_nu (1 + x^2/nu)^(-(nu+1)/2).

    >>> round(pdf(1.0, 0.0) * math.pi, 12)
    1.0
    """
    return math.exp(log_pdf(d, x))


def _log_upper(nu: float, a: float) -> float:
    # ln P[X >= a] for a >= 0: P = 1/2 I_x(nu/2, 1/2) with x = nu/(nu + a^2)
    if a == 0.0:
        return _LN_HALF
    l1p = _log1p_sq(a, nu)
    if a < 1e100:
        a2 = a * a
        x = nu / (nu + a2)
        y = a2 / (nu + a2)
    else:
        x = math.exp(-l1p)
        y = 1.0
    log_y = 2.0 * math.log(a) - math.log(nu) - l1p
    return _LN_HALF + _log_inc_beta(0.5 * nu, 0.5, x, y, -l1p, log_y)


def log_tail(d: TDist | float, a: float) -> float:
    """ln P[X >= a]."""
    d = _as_dist(d)
    _check_x("a", a)
    if a >= 0:
        return _log_upper(d.nu, a)
    return math.log1p(-math.exp(_log_upper(d.nu, -a)))


def tail(d: TDist | float, a: float) -> float:
    """P[X >= a] from the incomplete beta function.

    Negative ``a`` goes through the complement so the beta argument stays in
    its well-conditioned half.
    """
    d = _as_dist(d)
    _check_x("a", a)
    if a >= 0:
        return math.exp(_log_upper(d.nu, a))
    return -math.expm1(_log_upper(d.nu, -a))


def tail_error(d: TDist | float, a: float, value: float | None = None) -> float:
    """Error estimate attached to ``tail(d, a)``."""
    if value is None:
        value = tail(d, a)
    lt = abs(math.log(value)) if value > 0 else 0.0
    return value * (BETA_REL_ERR + 8.0 * _EPS * lt)


def change_of_variable(nu: float, x: float) -> float:
    """z = sqrt(nu log(1 + x^2/nu)), the map taking t tails to Gaussian-like tails."""
    _check_nu(nu)
    return math.sqrt(nu * _log1p_sq(x, nu))


def _z_integrand(nu: float, shift: float):
    """exp(-(z^2 - shift^2)/2) * y / sqrt(1 - exp(-y^2)) with y = z / sqrt(nu).

    After the change of variable the t density over x >= 0 becomes C_nu times
    this (with shift = 0); the second factor tends to 1 as z -> 0.
    """
    rnu = math.sqrt(nu)

    def g(z):
        y = z / rnu
        y2 = y * y
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(y2 > 0, y / np.sqrt(-np.expm1(-y2)), 1.0)
        return np.exp(-0.5 * (z - shift) * (z + shift)) * ratio

    return g


def _z_upper(nu: float, a: float, rel_tol: float) -> tuple[QuadResult, float]:
    # Integral over [z(a), inf) scaled by exp(z(a)^2/2); returns it with z(a).
    z0 = change_of_variable(nu, a)
    res = integrate_to_inf(lambda s: _z_integrand(nu, z0)(z0 + s), 0.0, rel_tol)
    return res, z0


def tail_quadrature(d: TDist | float, a: float, rel_tol: float = 1e-10,
                    method: str = "z") -> QuadResult:
    """P[X >= a] by adaptive quadrature.

    ``method="z"`` integrates in z = sqrt(nu log(1 + x^2/nu)), where the
    integrand decays like exp(-z^2/2) for every nu. ``method="x"`` integrates
    the density directly over [a, inf); that route only converges well for
    nu of order one and above, where the mapped tail is not singular.
    """
    d = _as_dist(d)
    _check_x("a", a)
    nu = d.nu
    if method == "x":
        lc = d.ln_c_nu
        return integrate_to_inf(
            lambda x: np.exp(lc - 0.5 * (nu + 1.0) * np.log1p(x * x / nu)), a, rel_tol)
    if method != "z":
        raise ValueError(f"unknown quadrature method {method!r}")
    c = d.c_nu
    if a >= 0:
        res, z0 = _z_upper(nu, a, rel_tol)
        return res.scaled(c * math.exp(-0.5 * z0 * z0))
    z1 = change_of_variable(nu, a)
    g = _z_integrand(nu, 0.0)
    upper = integrate_to_inf(g, 0.0, rel_tol)
    middle = integrate(g, 0.0, z1, rel_tol)
    return QuadResult(
        c * (upper.value + middle.value),
        c * (upper.abs_error + middle.abs_error),
        upper.evaluations + middle.evaluations,
    )


def mills_ratio(d: TDist | float, a: float) -> float:
    """P[X >= a] / f(a), computed as exp(ln tail - ln pdf)."""
    d = _as_dist(d)
    return math.exp(log_tail(d, a) - log_pdf(d, a))


def mills_ratio_quadrature(d: TDist | float, a: float, rel_tol: float = 1e-10) -> QuadResult:
    """Mill's ratio from the quadrature oracle.

    For a >= 0 the ratio equals sqrt(1 + a^2/nu) times the scaled z-integral,
    so no tiny tail or density is ever formed.
    """
    d = _as_dist(d)
    _check_x("a", a)
    if a >= 0:
        res, _ = _z_upper(d.nu, a, rel_tol)
        return res.scaled(math.exp(0.5 * _log1p_sq(a, d.nu)))
    t = tail_quadrature(d, a, rel_tol)
    inv_pdf = math.exp(-log_pdf(d, a))
    return QuadResult(t.value * inv_pdf, t.abs_error * inv_pdf, t.evaluations)
