"""Grid sweeps that check each inequality against the numerical oracles.

Every row carries the error estimate of the oracles used at that point. A row
only counts as a violation when ``lhs - rhs`` exceeds ``violation_factor``
times that estimate; rows where lhs > rhs inside the error allowance are
flagged ``within_error`` instead.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import bounds
from .specfun import erfc_scaled_tail
from .student_t import (
    BETA_REL_ERR,
    EvalReport,
    TDist,
    log_pdf,
    log_tail,
    mills_ratio_quadrature,
    tail,
    tail_error,
    tail_quadrature,
)

__all__ = [
    "ASSERTING_SUITES",
    "PROBE_SUITES",
    "SUITES",
    "ConfigError",
    "SweepConfig",
    "SweepReport",
    "SweepRow",
    "WorstViolation",
    "cross_validate_oracles",
    "default_a_grid",
    "default_config",
    "default_nu_grid",
    "evaluate",
    "probe_beyond_validity",
    "run_sweep",
    "sweep_corollary",
    "sweep_lemma1",
    "sweep_proof_facts",
    "sweep_theorem1",
]

SUITES = (
    "lemma1",
    "exp_ineq",
    "theorem1_pos",
    "theorem1_neg",
    "corollary",
    "probe",
    "gaussian_facts",
    "log_ineq",
    "oracle_cross",
)
# Suites whose claims do not hold literally everywhere; reported, never failed.
PROBE_SUITES = frozenset({"theorem1_neg", "probe", "gaussian_facts"})
ASSERTING_SUITES = tuple(s for s in SUITES if s not in PROBE_SUITES)
_X_ONLY = frozenset({"lemma1", "exp_ineq", "log_ineq", "gaussian_facts"})

ORACLE_ABS_SLACK = 1e-11
BISECT_MAX_ITER = 80
BISECT_TOL = 1e-6
_EPS = float(np.finfo(float).eps)


class ConfigError(ValueError):
    pass


def default_nu_grid() -> list[float]:
    return np.logspace(-2, 3, 60).tolist()


def default_a_grid() -> list[float]:
    """100 linear points on [0, 10) followed by 100 log points on [10, 100]."""
    lin = np.linspace(0.0, 10.0, 100, endpoint=False)
    log = np.logspace(1, 2, 100)
    return np.concatenate([lin, log]).tolist()


@dataclass(frozen=True)
class SweepConfig:
    suite: str
    nu_grid: tuple[float, ...] = ()
    a_grid: tuple[float, ...] = ()
    rel_tol: float = 1e-10
    violation_factor: float = 10.0
    # corollary only: when > 0, each nu gets this many points on [0, validity limit]
    a_per_nu: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nu_grid", tuple(float(v) for v in self.nu_grid))
        object.__setattr__(self, "a_grid", tuple(float(v) for v in self.a_grid))
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not (1e-14 < self.rel_tol < 1e-2):
            raise ConfigError(f"rel_tol must lie in (1e-14, 1e-2), got {self.rel_tol!r}")
        if not (self.violation_factor >= 1 and math.isfinite(self.violation_factor)):
            raise ConfigError(f"violation_factor must be >= 1, got {self.violation_factor!r}")
        if self.a_per_nu < 0:
            raise ConfigError("a_per_nu must be >= 0")
        if self.suite not in _X_ONLY:
            if not self.nu_grid:
                raise ConfigError("nu grid is empty")
            if any(not (math.isfinite(v) and v > 0) for v in self.nu_grid):
                raise ConfigError("nu grid entries must be finite and > 0")
        if not self.a_grid and not (self.suite == "corollary" and self.a_per_nu > 0):
            raise ConfigError("a grid is empty")
        if any(not math.isfinite(v) for v in self.a_grid):
            raise ConfigError("a grid entries must be finite")

    @property
    def probe(self) -> bool:
        return self.suite in PROBE_SUITES


def default_config(suite: str) -> SweepConfig:
    """The grids each suite runs with when nothing is overridden."""
    nu, a = default_nu_grid(), default_a_grid()
    if suite in ("theorem1_pos", "oracle_cross"):
        return SweepConfig(suite, nu, a)
    if suite == "theorem1_neg":
        return SweepConfig(suite, nu, [-v for v in reversed(a) if v > 0])
    if suite == "corollary":
        return SweepConfig(suite, np.logspace(-4, 4, 50).tolist(), (), a_per_nu=100)
    if suite == "probe":
        return SweepConfig(suite, np.logspace(-4, 4, 9).tolist(), np.linspace(0, 20, 401).tolist())
    if suite == "lemma1":
        return SweepConfig(suite, (), np.logspace(-9, 4, 500).tolist())
    if suite == "exp_ineq":
        return SweepConfig(suite, (), np.linspace(0, 50, 501).tolist())
    if suite == "log_ineq":
        return SweepConfig(suite, (), [0.0] + np.logspace(-12, 9, 500).tolist())
    if suite == "gaussian_facts":
        grid = np.concatenate([np.linspace(-3, 0, 300, endpoint=False), np.linspace(0, 40, 401)])
        return SweepConfig(suite, (), grid.tolist())
    raise ConfigError(f"unknown suite {suite!r}")


@dataclass(frozen=True)
class SweepRow:
    suite: str
    nu: float | None
    a: float
    lhs: float
    rhs: float
    oracle_err: float
    excess: float
    flag: str

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class WorstViolation:
    nu: float | None
    a: float
    lhs: float
    rhs: float
    excess: float


@dataclass(frozen=True)
class SweepReport:
    suite: str
    probe: bool
    points_checked: int
    violations: int
    worst_violation: WorstViolation | None
    min_slack: float
    max_tightness_ratio: float
    rows: tuple[SweepRow, ...]
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.probe or self.violations == 0

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "probe": self.probe,
            "points_checked": self.points_checked,
            "violations": self.violations,
            "worst_violation": None if self.worst_violation is None else asdict(self.worst_violation),
            "min_slack": self.min_slack,
            "max_tightness_ratio": self.max_tightness_ratio,
            "notes": self.notes,
            "rows": [dict(asdict(r), slack=r.slack) for r in self.rows],
        }
        return out


def _row(suite: str, nu: float | None, a: float, lhs: float, rhs: float, err: float,
         factor: float) -> SweepRow:
    diff = lhs - rhs
    if math.isinf(lhs) and lhs > 0 and math.isfinite(rhs):
        excess = math.inf
    else:
        excess = diff - factor * err
    if excess > 0:
        flag = "violation"
    elif diff > 0:
        flag = "within_error"
    else:
        flag = "ok"
    return SweepRow(suite, nu, a, lhs, rhs, err, excess, flag)


def _summarize(cfg: SweepConfig, rows: Iterable[SweepRow], notes: dict | None = None) -> SweepReport:
    rows = sorted(rows, key=lambda r: (-math.inf if r.nu is None else r.nu, r.a))
    bad = [r for r in rows if r.flag == "violation"]
    worst = None
    if bad:
        w = max(bad, key=lambda r: r.excess)
        worst = WorstViolation(w.nu, w.a, w.lhs, w.rhs, w.excess)
    slacks = [r.slack for r in rows if not math.isnan(r.slack)]
    ratios = [r.lhs / r.rhs for r in rows if r.rhs > 0 and math.isfinite(r.rhs) and not math.isnan(r.lhs)]
    return SweepReport(
        suite=cfg.suite,
        probe=cfg.probe,
        points_checked=len(rows),
        violations=len(bad),
        worst_violation=worst,
        min_slack=min(slacks) if slacks else math.nan,
        max_tightness_ratio=max(ratios) if ratios else math.nan,
        rows=tuple(rows),
        notes=notes or {},
    )


def _require_suite(cfg: SweepConfig, allowed: Sequence[str]) -> None:
    if cfg.suite not in allowed:
        raise ConfigError(f"suite {cfg.suite!r} cannot run here; expected one of {allowed}")


# ---------------------------------------------------------------------------
# Proof ingredients on a single grid
# ---------------------------------------------------------------------------

def _elementwise(cfg: SweepConfig, points: Sequence[float],
                 check: Callable[[float], tuple[float, float, float]]) -> SweepReport:
    return _summarize(cfg, (_row(cfg.suite, None, x, *check(x), cfg.violation_factor) for x in points))


def sweep_lemma1(cfg: SweepConfig) -> SweepReport:
    """x e^{x^2/2} / sqrt(e^{x^2} - 1) <= x + 1 on the positive entries of the grid."""
    _require_suite(cfg, ("lemma1",))
    xs = [x for x in cfg.a_grid if x > 0]
    if not xs:
        raise ConfigError("lemma1 needs at least one grid point x > 0")

    def check(x):
        lhs = bounds.lemma1_lhs(x)
        return lhs, x + 1.0, 4.0 * _EPS * lhs

    return _elementwise(cfg, xs, check)


def sweep_proof_facts(cfg: SweepConfig) -> SweepReport:
    """Scalar inequalities used inside the proofs.

    ``exp_ineq``: z <= e^z - 1. ``log_ineq``: 2x/(x+2) <= log(1+x).
    ``gaussian_facts``: the Gaussian tail integral against 1/2 e^{-a^2/2} for
    a >= 0 and against e^{-a^2/2} for a < 0. These last two fail near and
    below a = 0, so the suite runs in probe mode and the notes record where
    the a >= 0 fact starts to hold.
    """
    _require_suite(cfg, ("exp_ineq", "log_ineq", "gaussian_facts"))
    if cfg.suite == "exp_ineq":
        def check(z):
            return z, math.expm1(z), 4.0 * _EPS * abs(z)
        return _elementwise(cfg, cfg.a_grid, check)

    if cfg.suite == "log_ineq":
        xs = [x for x in cfg.a_grid if x >= 0]
        if not xs:
            raise ConfigError("log_ineq needs grid points x >= 0")

        def check(x):
            rhs = math.log1p(x)
            return 2.0 * x / (x + 2.0), rhs, 8.0 * _EPS * rhs
        return _elementwise(cfg, xs, check)

    def check(a):
        lhs = erfc_scaled_tail(a)
        rhs = math.exp(-0.5 * a * a) * (0.5 if a >= 0 else 1.0)
        return lhs, rhs, BETA_REL_ERR * lhs

    report = _elementwise(cfg, cfg.a_grid, check)
    notes = {
        "positive_fact_holds_from": _bisect_sign(
            lambda a: erfc_scaled_tail(a) - 0.5 * math.exp(-0.5 * a * a), 0.0, 40.0),
        "negative_fact_crossover": _bisect_sign(
            lambda a: erfc_scaled_tail(a) - math.exp(-0.5 * a * a), -40.0, 0.0),
    }
    return replace(report, notes=notes)


def _bisect_sign(g: Callable[[float], float], lo: float, hi: float,
                 tol: float = BISECT_TOL, max_iter: int = BISECT_MAX_ITER) -> float | None:
    """Root of ``g`` on [lo, hi] by bisection, or None when g keeps one sign."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if (glo > 0) == (ghi > 0):
        return None
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Distribution-level sweeps
# ---------------------------------------------------------------------------

def _mills_point(d: TDist, a: float, rel_tol: float) -> tuple[float, float, float]:
    """(beta Mill's ratio, quadrature Mill's ratio, combined error estimate)."""
    lt = log_tail(d, a)
    lp = log_pdf(d, a)
    log_m = lt - lp
    if log_m > 709.0:
        return math.inf, math.inf, 0.0
    m = math.exp(log_m)
    beta_err = m * (BETA_REL_ERR + 8.0 * _EPS * (abs(lt) + abs(lp)))
    q = mills_ratio_quadrature(d, a, rel_tol)
    err = max(beta_err + q.abs_error, abs(m - q.value))
    return m, q.value, err


def sweep_theorem1(cfg: SweepConfig) -> SweepReport:
    """Mill's ratio against the closed-form bound, one branch per suite.

    ``theorem1_pos`` takes a >= 0 only; ``theorem1_neg`` takes a < 0 only
    and runs in probe mode. The beta-based ratio is the reported lhs; the
    quadrature ratio widens the error estimate by any disagreement.
    """
    _require_suite(cfg, ("theorem1_pos", "theorem1_neg"))
    if cfg.suite == "theorem1_pos" and any(a < 0 for a in cfg.a_grid):
        raise ConfigError("theorem1_pos takes a >= 0 only; use theorem1_neg for a < 0")
    if cfg.suite == "theorem1_neg" and any(a >= 0 for a in cfg.a_grid):
        raise ConfigError("theorem1_neg takes a < 0 only; use theorem1_pos for a >= 0")
    rows = []
    for nu in cfg.nu_grid:
        d = TDist(nu)
        for a in cfg.a_grid:
            m, _, err = _mills_point(d, a, cfg.rel_tol)
            rows.append(_row(cfg.suite, nu, a, m, bounds.theorem1_bound(nu, a), err,
                             cfg.violation_factor))
    return _summarize(cfg, rows)


def _tail_point(d: TDist, a: float, rel_tol: float) -> tuple[float, float]:
    t = tail(d, a)
    q = tail_quadrature(d, a, rel_tol)
    return t, max(tail_error(d, a, t) + q.abs_error, abs(t - q.value))


def _corollary_grid(cfg: SweepConfig, nu: float) -> list[float]:
    limit = bounds.corollary_validity_limit(nu)
    if cfg.a_per_nu > 0:
        return np.linspace(0.0, limit, cfg.a_per_nu).tolist()
    return [a for a in cfg.a_grid if 0.0 <= a <= limit]


def sweep_corollary(cfg: SweepConfig) -> SweepReport:
    """P[X >= a] <= e^{-a^2/4} for 0 <= a <= sqrt(2 (nu + 1.22))."""
    _require_suite(cfg, ("corollary",))
    rows = []
    for nu in cfg.nu_grid:
        d = TDist(nu)
        for a in _corollary_grid(cfg, nu):
            t, err = _tail_point(d, a, cfg.rel_tol)
            rows.append(_row(cfg.suite, nu, a, t, bounds.corollary_bound(a), err,
                             cfg.violation_factor))
    if not rows:
        raise ConfigError("no a-grid point falls inside [0, sqrt(2 (nu + 1.22))] for any nu")
    return _summarize(cfg, rows)


def probe_beyond_validity(cfg: SweepConfig) -> SweepReport:
    """Where does P[X >= a] <= e^{-a^2/4} actually start failing?

    For each nu the first grid point with a genuine failure is refined by
    bisection. Rows hold lhs = stated validity limit and rhs = failure
    onset (inf when the bound survives the whole grid), so a row is only
    flagged when the stated range overreaches. Never asserts.
    """
    _require_suite(cfg, ("probe", "corollary"))
    grid = sorted(a for a in cfg.a_grid if a >= 0)
    if not grid:
        raise ConfigError("probe needs grid points a >= 0")
    rows, onsets = [], {}
    for nu in cfg.nu_grid:
        d = TDist(nu)
        limit = bounds.corollary_validity_limit(nu)

        def gap(a):
            return tail(d, a) - bounds.corollary_bound(a)

        onset = None
        prev = None
        for a in grid:
            t, err = _tail_point(d, a, cfg.rel_tol)
            if t - bounds.corollary_bound(a) > cfg.violation_factor * err:
                onset = a if prev is None else _bisect_sign(gap, prev, a)
                break
            prev = a
        onsets[repr(nu)] = onset
        if onset is None:
            rows.append(SweepRow("probe", nu, math.nan, limit, math.inf, 0.0, -math.inf,
                                 "none_in_grid"))
        else:
            r = _row("probe", nu, onset, limit, onset, BISECT_TOL, 1.0)
            rows.append(r if r.flag == "violation" else replace(r, flag="onset"))
    probe_cfg = SweepConfig("probe", cfg.nu_grid, cfg.a_grid, cfg.rel_tol, cfg.violation_factor)
    return _summarize(probe_cfg, rows, {"onsets": onsets, "grid_max": grid[-1]})


def cross_validate_oracles(cfg: SweepConfig) -> SweepReport:
    """|tail_beta - tail_quad| <= quad abs_error + 1e-11 at every grid point."""
    _require_suite(cfg, ("oracle_cross",))
    rows = []
    for nu in cfg.nu_grid:
        d = TDist(nu)
        for a in cfg.a_grid:
            t = tail(d, a)
            q = tail_quadrature(d, a, cfg.rel_tol)
            rows.append(_row(cfg.suite, nu, a, abs(t - q.value), q.abs_error + ORACLE_ABS_SLACK,
                             0.0, cfg.violation_factor))
    return _summarize(cfg, rows)


_DISPATCH = {
    "lemma1": sweep_lemma1,
    "exp_ineq": sweep_proof_facts,
    "log_ineq": sweep_proof_facts,
    "gaussian_facts": sweep_proof_facts,
    "theorem1_pos": sweep_theorem1,
    "theorem1_neg": sweep_theorem1,
    "corollary": sweep_corollary,
    "probe": probe_beyond_validity,
    "oracle_cross": cross_validate_oracles,
}


def run_sweep(cfg: SweepConfig) -> SweepReport:
    return _DISPATCH[cfg.suite](cfg)


def evaluate(nu: float, a: float, rel_tol: float = 1e-10) -> EvalReport:
    """All oracle values and bounds at one point."""
    d = TDist(nu)
    if not math.isfinite(a):
        raise ValueError(f"a must be finite, got {a!r}")
    t = tail(d, a)
    q = tail_quadrature(d, a, rel_tol)
    log_m = log_tail(d, a) - log_pdf(d, a)
    mills = math.exp(log_m) if log_m < 709.0 else math.inf
    b1 = bounds.theorem1_bound(nu, a)
    in_range = 0.0 <= a <= bounds.corollary_validity_limit(nu)
    return EvalReport(
        nu=nu,
        a=a,
        pdf=math.exp(log_pdf(d, a)),
        tail_beta=t,
        tail_quad=q.value,
        tail_quad_err=q.abs_error,
        mills=mills,
        bound_theorem1=b1,
        bound_corollary=bounds.corollary_bound(a) if in_range else None,
        slack=b1 - mills,
    )
