"""Closed-form bounds on the t Mill's ratio and tail, plus the constants behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .specfun import DomainError
from .student_t import c_nu

__all__ = [
    "CLAIMED_K",
    "CLAIMED_OFFSET",
    "BracketError",
    "KConstant",
    "ThresholdPair",
    "a2_threshold_exact",
    "a2_threshold_sufficient",
    "corollary_bound",
    "corollary_validity_limit",
    "exp_ineq_gap",
    "golden_section_max",
    "k_constant",
    "k_objective",
    "lemma1_lhs",
    "log_ineq_gap",
    "theorem1_bound",
    "thresholds",
]

CLAIMED_K = 0.543
# a <= sqrt(2 (nu + 1.22)) is the validity range; 1.22 rounds -2 ln(0.543) down.
CLAIMED_OFFSET = 1.22
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(ValueError):
    """The maximizer of a search sits on the edge of its bracket."""

    def __init__(self, message: str, estimate: "KConstant | None" = None):
        super().__init__(message)
        self.estimate = estimate


def _finite(name: str, x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def lemma1_lhs(x: float) -> float:
    """x e^{x^2/2} / sqrt(e^{x^2} - 1), evaluated as x / sqrt(1 - e^{-x^2}).

    The rewritten form never overflows; e^{x^2} alone does past x ~ 26.6.
    """
    _finite("x", x)
    if x <= 0:
        raise DomainError(f"lemma1_lhs requires x > 0, got {x!r}")
    return x / math.sqrt(-math.expm1(-x * x))


def exp_ineq_gap(z: float) -> float:
    """(e^z - 1) - z; nonnegative for every real z."""
    _finite("z", z)
    return math.expm1(z) - z


def theorem1_bound(nu: float, a: float) -> float:
    """Upper bound on the Mill's ratio at a.

    sqrt(1 + a^2/nu) * (1/2 + 1/sqrt(nu)) for a >= 0 and
    sqrt(1 + a^2/nu) * (1 + 1/sqrt(nu)) for a < 0.
    """
    _finite("a", a)
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"theorem1_bound requires nu > 0, got {nu!r}")
    head = 0.5 if a >= 0 else 1.0
    return math.sqrt(1.0 + a * a / nu) * (head + 1.0 / math.sqrt(nu))


def corollary_bound(a: float) -> float:
    _finite("a", a)
    return math.exp(-0.25 * a * a)


def corollary_validity_limit(nu: float) -> float:
    """Largest a covered by the e^{-a^2/4} tail bound: sqrt(2 (nu + 1.22))."""
    _finite("nu", nu)
    if nu < 0:
        raise DomainError(f"corollary_validity_limit requires nu >= 0, got {nu!r}")
    return math.sqrt(2.0 * (nu + CLAIMED_OFFSET))


def log_ineq_gap(x: float) -> float:
    """log(1 + x) - 2x / (x + 2); zero at x = 0 and nonnegative after."""
    _finite("x", x)
    if x < 0:
        raise DomainError(f"log_ineq_gap requires x >= 0, got {x!r}")
    return math.log1p(x) - 2.0 * x / (x + 2.0)


def _check_k(k: float) -> None:
    if not (0.0 < k < 1.0):
        raise DomainError(f"k must lie in (0, 1), got {k!r}")


def _check_nu0(nu: float) -> None:
    _finite("nu", nu)
    if nu < 0:
        raise DomainError(f"nu must be >= 0, got {nu!r}")


def a2_threshold_exact(nu: float, k: float) -> float:
    """Larger root in a^2 of a^4 + 2a^2(2 ln k - nu) + 8 nu ln k = 0.

    With m = -ln k > 0 the discriminant nu^2 + 4m^2 + 12 nu m is a sum of
    nonnegative terms, so it is evaluated in that form.
    """
    _check_nu0(nu)
    _check_k(k)
    m = -math.log(k)
    return nu + 2.0 * m + math.sqrt(nu * nu + 4.0 * m * m + 12.0 * nu * m)


def a2_threshold_sufficient(nu: float, k: float) -> float:
    """2 nu - 4 ln k, a simpler a^2 limit implied by the exact root."""
    _check_nu0(nu)
    _check_k(k)
    return 2.0 * nu - 4.0 * math.log(k)


@dataclass(frozen=True)
class ThresholdPair:
    nu: float
    exact_a2: float
    sufficient_a2: float


def thresholds(nu: float, k: float = CLAIMED_K) -> ThresholdPair:
    return ThresholdPair(nu, a2_threshold_exact(nu, k), a2_threshold_sufficient(nu, k))


# ---------------------------------------------------------------------------
# The constant K = sup_nu C_nu (1/2 + 1/sqrt(nu))
# ---------------------------------------------------------------------------

def k_objective(nu: float) -> float:
    """C_nu (1/2 + 1/sqrt(nu)); tends to 1/2 as nu -> 0 and to 0.1995 as nu -> inf."""
    return c_nu(nu) * (0.5 + 1.0 / math.sqrt(nu))


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on [lo, hi]; returns (argmax, max)."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, abs(lo) + abs(hi)):
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


@dataclass(frozen=True)
class KConstant:
    value: float
    argmax_nu: float
    search_lo: float
    search_hi: float
    resolution: int
    at_edge: bool = False

    @property
    def within_claim(self) -> bool:
        return self.value <= CLAIMED_K


def k_constant(search_lo: float = 1e-4, search_hi: float = 1e6,
               resolution: int = 4000, strict: bool = True) -> KConstant:
    """Supremum of C_nu (1/2 + 1/sqrt(nu)) over [search_lo, search_hi].

    Scans a log-spaced grid, then refines by golden-section search in log nu
    over the two cells around the best grid point. If the best grid point is
    a bracket endpoint the maximum is not interior: ``strict`` raises
    BracketError (carrying the edge estimate), otherwise the edge value is
    returned with ``at_edge`` set.
    """
    if not (math.isfinite(search_lo) and math.isfinite(search_hi)):
        raise DomainError("search bracket must be finite")
    if not 0 < search_lo < search_hi:
        raise DomainError(f"need 0 < search_lo < search_hi, got [{search_lo!r}, {search_hi!r}]")
    if resolution < 1000:
        raise DomainError(f"resolution must be >= 1000, got {resolution!r}")
    llo, lhi = math.log(search_lo), math.log(search_hi)
    step = (lhi - llo) / (resolution - 1)
    logs = [llo + i * step for i in range(resolution)]
    logs[-1] = lhi
    vals = [k_objective(math.exp(u)) for u in logs]
    best = max(range(resolution), key=vals.__getitem__)
    if best in (0, resolution - 1):
        est = KConstant(vals[best], math.exp(logs[best]), search_lo, search_hi, resolution, True)
        if strict:
            raise BracketError(
                f"maximum of the K objective sits on the bracket edge nu={est.argmax_nu:g}; "
                "widen the search interval", est)
        return est
    u, v = golden_section_max(lambda u: k_objective(math.exp(u)), logs[best - 1], logs[best + 1])
    if vals[best] > v:
        u, v = logs[best], vals[best]
    return KConstant(v, math.exp(u), search_lo, search_hi, resolution)
