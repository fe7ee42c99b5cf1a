"""The Landau-Ramanujan constant and the Shanks second-order coefficient.

Both constants live on the primes p = 3 (mod 4). Their defining prime sums
converge like 1/P, so we trade them level by level for zeta and L(., chi_-4)
data at s = 2, 4, 8, ...: every doubling step squares the truncation error,
and the leftover prime sum at exponent 2^(J+1) is scanned directly below a
small cutoff. Eight levels already push the certified tail far below double
precision.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lfunctions import (
    EULER_GAMMA,
    chi_minus4_logderiv_at1,
    chi_minus4_pair,
    zeta_pair,
)
from .primesums import accel_inert_sum, scan_primes

LEVELS_MAX = 16

_LOG2 = math.log(2.0)
_LOG3 = math.log(3.0)


@dataclass(frozen=True)
class ShanksConfig:
    """Ladder depths and the cutoff for the directly scanned residual sums.

    levels_b drives the Landau-Ramanujan constant, levels_c the second-order
    coefficient c. residual_P bounds the primes visited by the final
    truncated sum; past four levels its contribution is already below
    double-precision resolution, so the default cutoff is small.
    """

    levels_b: int = 8
    levels_c: int = 8
    residual_P: int = 10**5

    def __post_init__(self):
        for name in ("levels_b", "levels_c"):
            v = getattr(self, name)
            if not 1 <= v <= LEVELS_MAX:
                raise DomainError(f"{name} must be in [1, {LEVELS_MAX}], got {v}")
        if self.residual_P < 1:
            raise DomainError(f"residual_P must be positive, got {self.residual_P}")


def ladder_tail_bound(levels):
    """Certified bound (log 3)/3 * 4^(1 - 2^levels) on the sum left after
    `levels` doubling steps; computed in log space to survive deep ladders."""
    e = (1.0 - 2.0**levels) * math.log(4.0) + math.log(_LOG3 / 3.0)
    return math.exp(e) if e > -745.0 else 0.0


def levels_for_digits(alpha):
    """Smallest ladder depth whose certified tail is below 10^-alpha."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    x = 1.0 + (alpha * math.log(10.0) + math.log(_LOG3) - _LOG3) / (2.0 * _LOG2)
    j = max(1, math.floor(math.log2(x)) + 1)
    while ladder_tail_bound(j) >= 10.0 ** (-alpha):
        j += 1
    return j


def _k_level_term(s):
    """log( zeta(s) (1 - 2^-s) / L(s, chi_-4) ) for one ladder level."""
    zv = zeta_pair(s)[0]
    lv = chi_minus4_pair(s)[0]
    x = -s * _LOG2
    return math.log(zv) + math.log1p(-math.exp(x) if x > -745.0 else 0.0) - math.log(lv)


def k_residual(levels, P, threads=1):
    """sum of log(1 - p^-K) over p = 3 (mod 4), p <= P, with K = 2^(levels+1).

    This is the sum the ladder leaves behind; its absolute value is bounded
    by ladder_tail_bound(levels).
    """
    K = 2.0 ** (levels + 1)

    def block(ps):
        x = -K * np.log(ps[ps % 4 == 3].astype(np.float64))
        t = np.zeros_like(x)
        ok = x > -745.0
        t[ok] = np.log1p(-np.exp(x[ok]))
        return float(np.sum(t))

    if P < 3:
        return 0.0
    return scan_primes(P, block, threads=threads)


def landau_ramanujan_K(config=None, threads=1):
    """The Landau-Ramanujan constant (1/sqrt 2) prod (1 - p^-2)^(-1/2) over
    p = 3 (mod 4), evaluated through the exponent-doubling ladder."""
    cfg = config if config is not None else ShanksConfig()
    terms = [-0.5 * _LOG2]
    for j in range(1, cfg.levels_b + 1):
        terms.append(0.5 ** (j + 1) * _k_level_term(2.0**j))
    w = 0.5 ** (cfg.levels_b + 1)
    terms.append(-w * k_residual(cfg.levels_b, cfg.residual_P, threads=threads))
    return math.exp(math.fsum(terms))


@dataclass(frozen=True)
class ShanksC:
    """The coefficient c with the Euler-Kronecker constant it determines."""

    c: float
    gamma_sb: float
    err: float

    def __float__(self):
        return self.c


def shanks_c(config=None, threads=1, cache_dir=None):
    """Second-order coefficient c of the two-squares counting function.

    c = 1/2 + log(2)/4 - gamma/4 - (1/4) L'/L(1, chi_-4)
        + (1/2) sum_{p = 3 (4)} log p/(p^2 - 1),

    the prime sum accelerated through levels_c doubling steps. The attached
    gamma_sb = 1 - 2c is the Euler-Kronecker constant of the sums of two
    squares.
    """
    cfg = config if config is not None else ShanksConfig()
    inert = accel_inert_sum(
        4, 2, cfg.levels_c, cfg.residual_P, threads=threads, cache_dir=cache_dir
    )
    c = math.fsum(
        [
            0.5,
            0.25 * _LOG2,
            -0.25 * EULER_GAMMA,
            -0.25 * chi_minus4_logderiv_at1(),
            0.5 * inert.value,
        ]
    )
    err = 0.5 * inert.tail + 1e-15
    return ShanksC(c=c, gamma_sb=1.0 - 2.0 * c, err=err)
