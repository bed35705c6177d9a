"""Student's t Mill's ratio: oracles, closed-form bounds and grid verification."""

from .bounds import (
    CLAIMED_K,
    KConstant,
    a2_threshold_exact,
    a2_threshold_sufficient,
    corollary_bound,
    corollary_validity_limit,
    k_constant,
    lemma1_lhs,
    log_ineq_gap,
    theorem1_bound,
)
from .specfun import ConvergenceError, DomainError, QuadResult
from .student_t import TDist, c_nu, mills_ratio, pdf, tail, tail_quadrature
from .verify import SweepConfig, SweepReport, default_config, evaluate, run_sweep

__version__ = "0.1.0"
