"""Explicit evaluable bounds and the threshold search for the race winner.

Everything here is closed-form: the S(m,q) upper bound, the certified
prime-sum tail, the unconditional lower bound for gamma_{k,q} built on the
McCurley zero-free region, and the scan locating the prime q0(r) above
which the Landau approximation provably wins.
"""

import math
from dataclasses import dataclass

import numpy as np

from .arith import MAX_SIEVE_LIMIT, iter_prime_segments, primes_upto
from .errors import DomainError, ThresholdNotFound
from .lfunctions import EULER_GAMMA

ZERO_FREE_R = 9.645908801
TAIL_C = 1.053
Q_VALID_MIN = 10_000

# Trial divisors for the smallest odd prime factor of h. Sufficient for the
# drop rule as long as alpha/2 = 5 log q <= 127, i.e. q < 1.1e11, which is
# beyond the sieve ceiling anyway.
_LOPF_PRIMES = [p for p in map(int, primes_upto(128)) if p > 2]
_LOPF_MAX = 131.0


@dataclass(frozen=True)
class BoundParams:
    """Free parameters of the lower-bound inequality at modulus q.

    y is astronomically large for q above ~1264, so its logarithm is the
    stored quantity; the y property overflows to inf there by design.
    """

    q: int
    R: float
    alpha: float
    D: float
    W: float
    log_y: float

    @property
    def y(self):
        try:
            return math.exp(self.log_y)
        except OverflowError:
            return math.inf

    @classmethod
    def for_modulus(cls, q, alpha=None):
        lq = math.log(q)
        return cls(
            q=int(q),
            R=ZERO_FREE_R,
            alpha=10.0 * lq if alpha is None else float(alpha),
            D=3.125 * min(2.0 * math.pi, lq / 2.0),
            W=1.2 * lq,
            log_y=1.44 * ZERO_FREE_R * lq * lq,
        )


@dataclass(frozen=True)
class SBound:
    """Upper bound for S(m,q) with its term breakdown."""

    value: float
    terms: tuple
    dropped: tuple

    def __float__(self):
        return self.value


def _lopf_vec(h):
    """Smallest odd prime factor of each h, or 131.0 when none is <= 127."""
    out = np.full(h.shape, _LOPF_MAX)
    todo = np.ones(h.shape, dtype=bool)
    for s in _LOPF_PRIMES:
        hit = todo & (h % s == 0)
        out[hit] = float(s)
        todo &= ~hit
    return out


def _upper_bound_terms(m, q, alpha, sharp=True):
    """Vectorized term stack of the S(m,q) upper bound; q is an int64 array.

    With sharp=True the three optional refinements apply: the dyadic
    ceiling on the first coefficient, zeroing the second term when alpha
    is at most twice the smallest odd prime factor of h, and zeroing the
    last term when m = 1. sharp=False evaluates the plain five-term form;
    every refinement only lowers the value, so both modes bound S(m,q).
    """
    qf = q.astype(np.float64)
    lq = np.log(qf)
    h = (q - 1) // m
    alpha1 = np.log(alpha) / math.log(4.0) + np.zeros_like(qf)
    if sharp:
        v2 = np.log2((h & -h).astype(np.float64))
        alpha1 = np.minimum((v2 - 1.0) / 2.0, alpha1)
    root1 = np.power(qf - 1.0, 1.0 / m)
    t1 = alpha1 * lq / (root1 - 1.0)
    t2 = (8.0 / 7.0) * np.log(m * alpha * alpha) / np.power(qf, 1.0 / m)
    if sharp:
        t2_drop = alpha <= 2.0 * _lopf_vec(h)
        t2 = np.where(t2_drop, 0.0, t2)
    else:
        t2_drop = np.zeros(qf.shape, dtype=bool)
    t3 = TAIL_C / (qf - 2.1)
    t4 = qf * qf * math.log(2.0) / (2.0 * (np.exp2(alpha / 2.0) - 1.0))
    if sharp and m == 1:
        t5 = np.zeros_like(qf)
    else:
        t5 = lq / (np.power(qf - 1.0, 2.0 / m) - 1.0)
    return t1, t2, t3, t4, t5, t2_drop


def upper_bound_S(m, q, alpha=None):
    """Closed-form upper bound for the prime-order sum S(m,q).

    Requires q an odd prime with m dividing (q-1)/2 and alpha >= 3. The
    second term is dropped when alpha is at most twice the smallest odd
    prime factor of (q-1)/m, the last term whenever m = 1.
    """
    q = int(q)
    if q < 3 or (q - 1) % (2 * m) != 0:
        raise DomainError(f"need m | (q-1)/2; got m={m}, q={q}")
    a = 10.0 * math.log(q) if alpha is None else float(alpha)
    if a < 3.0:
        raise DomainError(f"alpha={a} below validity floor 3")
    arr = np.array([q], dtype=np.int64)
    t1, t2, t3, t4, t5, t2_drop = _upper_bound_terms(m, arr, a)
    keep = [float(t1[0])]
    dropped = []
    if t2_drop[0]:
        dropped.append("residue")
    else:
        keep.append(float(t2[0]))
    keep.append(float(t3[0]))
    keep.append(float(t4[0]))
    if m == 1:
        dropped.append("order2")
    else:
        keep.append(float(t5[0]))
    return SBound(value=math.fsum(keep), terms=tuple(keep), dropped=tuple(dropped))


def tail_bound_primesum(x):
    """Certified bound 1.053/x for the tail sum of log p/(p^2-1) over p > x."""
    if x < 3:
        raise DomainError(f"tail bound valid for x >= 3, got {x}")
    return TAIL_C / float(x)


def _lower_bound_vec(r, q, alpha=None):
    """Vectorized unconditional lower bound for gamma_{r,q}; q int64 array."""
    qf = q.astype(np.float64)
    lq = np.log(qf)
    a = 10.0 * lq if alpha is None else np.full(qf.shape, float(alpha))
    D = 3.125 * np.minimum(2.0 * math.pi, lq / 2.0)
    W = 1.2 * lq
    R = ZERO_FREE_R
    sq = np.sqrt(qf)
    term_y = 1.44 * R * lq * lq / (qf - 1.0)
    term_zero = (1.015 / (D * sq)) * np.exp(-1.44 * R * D / sq) * lq * lq
    term_region = (8.0 / 9.0) * (2.0 * R * W * W + (4.0 * R + 1.0) * W + 4.0 * R) * np.exp(-W)
    # Plain five-term S bound here: the refinements are parity-sensitive,
    # which would make the threshold jitter with the factorization of q-1
    # instead of crossing once. The plain form is still a valid bound.
    t1, t2, t3, t4, t5, _ = _upper_bound_terms(r, q, a, sharp=False)
    s_up = t1 + t2 + t3 + t4 + t5
    out = EULER_GAMMA - r * (term_y + term_zero + term_region) - s_up
    return np.where(qf >= Q_VALID_MIN, out, -np.inf)


def gamma_lower_bound(r, q, params=None):
    """Unconditional lower bound for gamma_{r,q}, valid for prime q >= 10000.

    S(r,q) is replaced by its plain closed-form upper bound (no
    parity-sensitive refinements), so the result is a true lower bound
    without any prime-sum evaluation and varies smoothly in q.
    """
    q = int(q)
    if q < Q_VALID_MIN:
        raise DomainError(f"lower bound valid for q >= {Q_VALID_MIN}, got {q}")
    if (q - 1) % (2 * r) != 0:
        raise DomainError(f"need q = 1 (mod 2r); got r={r}, q={q}")
    alpha = None if params is None else params.alpha
    return float(_lower_bound_vec(r, np.array([q], dtype=np.int64), alpha)[0])


@dataclass(frozen=True)
class Q0Result:
    """Outcome of the threshold scan for fixed index r."""

    r: int
    q0: int
    last_failure: int
    scanned_to: int

    def __int__(self):
        return self.q0


def find_q0(r, q_max=MAX_SIEVE_LIMIT - 1, start=Q_VALID_MIN):
    """Smallest prime Q with gamma_lower_bound(r, q) > 1/2 for all
    admissible primes q >= Q.

    Admissible means q = 1 (mod 2r). The scan walks prime segments upward,
    tracking the largest failing prime, and keeps going until it has
    covered four times that value (the bound is increasing in q at scale,
    so a failure beyond that horizon would require a fresh regime change).
    Raises ThresholdNotFound when q_max is hit first.
    """
    if r < 1:
        raise DomainError(f"index r must be positive, got {r}")
    if q_max < start:
        raise DomainError(f"q_max={q_max} below scan start {start}")
    q_max = min(int(q_max), MAX_SIEVE_LIMIT - 1)
    last_fail = 0
    first_pass_after = None
    horizon = 4 * start
    scanned = start
    step = 2 * r
    for block in iter_prime_segments(q_max):
        q = block[(block >= start) & ((block - 1) % step == 0)]
        scanned = int(block[-1])
        if q.size:
            vals = _lower_bound_vec(r, q)
            bad = q[vals <= 0.5]
            if bad.size:
                last_fail = int(bad[-1])
                first_pass_after = None
                horizon = max(horizon, 4 * last_fail)
            good = q[vals > 0.5]
            if first_pass_after is None and good.size:
                above = good[good > last_fail]
                if above.size:
                    first_pass_after = int(above[0])
        if scanned >= horizon:
            break
    if scanned < horizon or first_pass_after is None:
        raise ThresholdNotFound(r=r, q_max=q_max, last_failure=last_fail or None)
    return Q0Result(r=r, q0=first_pass_after, last_failure=last_fail, scanned_to=scanned)
