"""Euler-Kronecker constants of divisor-sum non-divisibility.

The package computes, for a prime q and exponent k, the constants gamma and
C governing how many n <= x avoid q | sigma_k(n), decides whether the
Landau or the Ramanujan approximation wins the second-order race, bounds
the constants in closed form, verifies the cusp-form congruences behind the
exceptional primes, and cross-checks everything against brute-force
counting.
"""

from .bounds import Q0Result, SBound, find_q0, gamma_lower_bound, upper_bound_S
from .config import RunConfig
from .cuspforms import (
    VerifyReport,
    check_hecke_and_deligne,
    tau_w_series,
    type_i_rows,
    verify_type_i,
    verify_type_ii,
)
from .ekcore import (
    EkReport,
    TypeiiReport,
    compute_report,
    compute_typeii,
    decide,
    sweep_table,
)
from .errors import (
    CapacityError,
    DomainError,
    EkError,
    IllConditionedError,
    ThresholdNotFound,
)
from .oracle import CountResult, count_S, count_odd_sigma_closed, fit_first_order, sigma_k_mod
from .shanks import ShanksC, ShanksConfig, landau_ramanujan_K, shanks_c

__version__ = "1.0.0"

__all__ = [
    "CapacityError",
    "CountResult",
    "DomainError",
    "EkError",
    "EkReport",
    "IllConditionedError",
    "Q0Result",
    "RunConfig",
    "SBound",
    "ShanksC",
    "ShanksConfig",
    "ThresholdNotFound",
    "TypeiiReport",
    "VerifyReport",
    "check_hecke_and_deligne",
    "compute_report",
    "compute_typeii",
    "count_S",
    "count_odd_sigma_closed",
    "decide",
    "find_q0",
    "fit_first_order",
    "gamma_lower_bound",
    "landau_ramanujan_K",
    "shanks_c",
    "sigma_k_mod",
    "sweep_table",
    "tau_w_series",
    "type_i_rows",
    "upper_bound_S",
    "verify_type_i",
    "verify_type_ii",
    "__version__",
]
