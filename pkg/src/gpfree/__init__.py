"""gpfree: exact arithmetic for progression-free subset maxima.

The package computes, with no floating-point in any result path:

* r_k(ell) — the largest subset of {0..ell-1} with no k-term
  arithmetic progression, with reproducible maximum witnesses;
* g_k^(s)(n) — the largest subset of {1..n} with no k-term geometric
  progression of ratio a power of s, via the multiplicative chain
  partition, against independent brute-force oracles;
* theta(k, s) — the limit of g/n, as exact rational enclosures, digit
  streams, and convergence/monotonicity experiments.
"""

from .apfree import (
    APFreeInstance,
    GapSequence,
    RkTable,
    has_k_term_ap,
    min_inverse,
    rk_bruteforce_oracle,
    rk_exact,
    rk_table,
)
from .backend import available_backends, backend_name, use_backend
from .cache import ensure_table, load, save
from .constant import (
    ConvergenceRow,
    DigitStream,
    GapReport,
    ThetaApproximation,
    convergence_experiment,
    count_nondivisible,
    gap_stats,
    theta_digits,
    theta_partial,
)
from .errors import (
    BudgetExhaustedError,
    CacheError,
    CacheVersionError,
    CorruptCacheError,
    GpfreeError,
    InvariantError,
    OracleCapError,
    TableInsufficientError,
    WouldTruncateError,
)
from .geoprog import (
    ChainPartition,
    ComparisonRow,
    GResult,
    MonotonicityReport,
    chain_partition,
    decompose,
    g_bruteforce,
    g_formula,
    g_multi_ratio_bruteforce,
    g_witness,
    has_k_term_gp,
    ilog,
    monotonicity_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "APFreeInstance", "GapSequence", "RkTable", "has_k_term_ap", "min_inverse",
    "rk_bruteforce_oracle", "rk_exact", "rk_table",
    "available_backends", "backend_name", "use_backend",
    "ensure_table", "load", "save",
    "ConvergenceRow", "DigitStream", "GapReport", "ThetaApproximation",
    "convergence_experiment", "count_nondivisible", "gap_stats",
    "theta_digits", "theta_partial",
    "BudgetExhaustedError", "CacheError", "CacheVersionError",
    "CorruptCacheError", "GpfreeError", "InvariantError", "OracleCapError",
    "TableInsufficientError", "WouldTruncateError",
    "ChainPartition", "ComparisonRow", "GResult", "MonotonicityReport",
    "chain_partition", "decompose", "g_bruteforce", "g_formula",
    "g_multi_ratio_bruteforce", "g_witness", "has_k_term_gp", "ilog",
    "monotonicity_experiment",
    "__version__",
]
