"""Brute-force ground truth for the divisor-sum counting problem.

Everything here goes through the definition directly: factor n, multiply
geometric-series residues, count the n below x whose sigma_k(n) the prime q
fails to divide. The analytic machinery is never consulted except where a
report explicitly compares against its constants, so agreement between the
two sides is evidence, not tautology.

The counting core never materializes residues. A prime power p^a contributes
a factor divisible by q exactly when a = -1 (mod mu_p), so it suffices to
maintain, per n, the number of offending prime-power factors; n survives
when that number is zero.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import arith
from .ekcore import compute_report
from .errors import CapacityError, DomainError
from .primesums import order_class_table

COUNT_X_MAX = 10**8
SIGMA_N_MAX = 1 << 62

_SPF_LIMIT = 1 << 20
_spf_table = None


def _spf():
    global _spf_table
    if _spf_table is None:
        t = np.zeros(_SPF_LIMIT, dtype=np.int32)
        for p in arith.primes_upto(math.isqrt(_SPF_LIMIT - 1)):
            sl = t[p * p :: p]
            sl[sl == 0] = p
        _spf_table = t
    return _spf_table


def _factor_small(n):
    t = _spf()
    out = {}
    while n > 1:
        p = int(t[n])
        if p == 0:
            out[n] = out.get(n, 0) + 1
            break
        n //= p
        out[p] = out.get(p, 0) + 1
    return out


def _geometric_mod(p, a, k, q):
    """(1 + p^k + ... + p^{ak}) mod q for prime q."""
    t = pow(p, k, q)
    if t == 1:
        return (a + 1) % q
    return (pow(t, a + 1, q) - 1) * pow(t - 1, -1, q) % q


def sigma_k_mod(n, k, q):
    """sigma_k(n) mod q by factoring n and multiplying prime-power residues."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if n > SIGMA_N_MAX:
        raise CapacityError(f"n = {n} exceeds the factoring capacity {SIGMA_N_MAX}")
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if q < 2 or not arith.is_prime(q):
        raise DomainError(f"q must be prime, got {q}")
    fac = _factor_small(n) if n < _SPF_LIMIT else arith.factorize(n)
    out = 1 % q
    for p, a in fac.items():
        out = out * _geometric_mod(p, a, k, q) % q
    return out


@dataclass(frozen=True)
class CountResult:
    """An exact count of n <= x surviving the divisibility condition."""

    x: int
    count: int
    k: int
    q: int
    variant: str


def _mark_small_prime(cnt, p, mu, x):
    """Add the offending-factor deltas for all powers of a prime <= sqrt(x).

    bad(a) = [a = mu-1 (mod mu)] telescopes along the chain of divisibility
    by p, p^2, ..., so adding bad(a) - bad(a-1) on the multiples of p^a
    leaves each n with exactly bad(v_p(n)) added.
    """
    pa = p
    a = 1
    while pa <= x:
        rem = a % mu
        if rem == mu - 1:
            cnt[pa::pa] += 1
        elif rem == 0:
            cnt[pa::pa] -= 1
        pa *= p
        a += 1


def count_S(x, k, q, variant="plain"):
    """Exact count of n <= x with q not dividing sigma_k(n).

    variant "plain" counts those n; variant "prime" additionally requires
    q not dividing n itself.
    """
    if variant not in ("plain", "prime"):
        raise DomainError(f"variant must be plain or prime, got {variant!r}")
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    if x > COUNT_X_MAX:
        raise CapacityError(f"x = {x} exceeds the counting capacity {COUNT_X_MAX}")
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if q < 2 or not arith.is_prime(q):
        raise DomainError(f"q must be prime, got {q}")

    g_tab = order_class_table(q, k)
    cnt = np.zeros(x + 1, dtype=np.int8)
    root = math.isqrt(x)
    for p in arith.primes_upto(root):
        g = int(g_tab[p % q])
        if g == 0:
            continue
        _mark_small_prime(cnt, p, q if g == 1 else g, x)

    # Primes above sqrt(x) appear to the first power only, which offends
    # exactly when mu_p = 2, i.e. order class 2, or class 1 with q = 2. Walk
    # the cofactor t instead of the prime: for fixed t the indices t*p are
    # distinct.
    ps = arith.primes_upto(x)
    big = ps[ps > root]
    cls = g_tab[big % q]
    sel = cls == 2
    if q == 2:
        sel |= cls == 1
    big = big[sel]
    if big.size:
        t = 1
        while t * int(big[0]) <= x:
            hi = np.searchsorted(big, x // t, side="right")
            cnt[big[:hi] * t] += 1
            t += 1

    count = int(np.count_nonzero(cnt[1:] == 0))
    if variant == "prime":
        count -= int(np.count_nonzero(cnt[q::q] == 0))
    return CountResult(x=int(x), count=count, k=int(k), q=int(q), variant=variant)


def count_odd_sigma_closed(x):
    """S_{1,2}(x) in closed form: sum over e of floor((sqrt(x/2^e)+1)/2).

    sigma(n) is odd exactly for n = 2^e t^2 with t odd, and the e-th summand
    counts the odd t with 2^e t^2 <= x.
    """
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    total = 0
    e = 0
    while x >> e:
        total += (math.isqrt(x >> e) + 1) // 2
        e += 1
    return total


@dataclass(frozen=True)
class FitPoint:
    """One grid point of the first-order fit diagnostic.

    ratio should drift toward the leading constant; residual is a loose
    estimate of 1 - gamma from the second-order term.
    """

    x: int
    count: int
    ratio: float
    residual: float


@dataclass(frozen=True)
class FitReport:
    k: int
    q: int
    r: int
    h: int
    C: float
    gamma: float
    points: tuple

    @property
    def ratio_errors(self):
        return tuple(abs(p.ratio - self.C) for p in self.points)

    @property
    def improving_steps(self):
        """Number of grid steps on which the ratio moves toward C."""
        e = self.ratio_errors
        return sum(1 for a, b in zip(e, e[1:]) if b < a)


def fit_first_order(x_grid, k, q, config=None):
    """Counting-vs-constant trend report over a grid of cutoffs.

    For each x: ratio = count(x) log^{1/h}(x)/x, to be compared with C;
    residual = (count - L) h log(x)/L with L the first-order term
    C x/log^{1/h}(x), to be compared with 1 - gamma.
    """
    xs = sorted(int(v) for v in x_grid)
    if not xs:
        raise DomainError("x_grid must be nonempty")
    if xs[0] < 3:
        raise DomainError("grid cutoffs below 3 have no meaningful fit")
    rep = compute_report(k, q, config)
    if rep.h % 2:
        raise DomainError(f"fit needs even h, got h = {rep.h} for k={k}, q={q}")
    points = []
    for x in xs:
        count = count_S(x, k, q).count
        lg = math.log(x)
        ratio = count * lg ** (1.0 / rep.h) / x
        landau = rep.C * x / lg ** (1.0 / rep.h)
        residual = (count - landau) * rep.h * lg / landau
        points.append(FitPoint(x=x, count=count, ratio=ratio, residual=residual))
    return FitReport(
        k=int(k), q=int(q), r=rep.r, h=rep.h, C=rep.C, gamma=rep.gamma,
        points=tuple(points),
    )
