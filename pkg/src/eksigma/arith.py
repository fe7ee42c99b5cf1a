"""Primes, multiplicative orders, and residue tables.

Everything downstream (characters, prime sums, the report pipeline) leans on
this module for prime generation and for the small amount of group theory in
(Z/q)^*: multiplicative orders, a primitive root, discrete-log tables.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError

MAX_SIEVE_LIMIT = 1 << 33
MATERIALIZE_LIMIT = 1 << 28
SEGMENT_SIZE = 1 << 20

# Deterministic Miller-Rabin witness set for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_EMPTY = np.empty(0, dtype=np.int64)


def _base_primes(limit):
    """Dense sieve for the small primes that seed the segmented sieve."""
    if limit < 2:
        return _EMPTY
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def iter_prime_segments(limit, segment=SEGMENT_SIZE):
    """Yield increasing int64 arrays that together hold every prime <= limit.

    Memory stays O(segment + sqrt(limit)), so callers can stream limits far
    beyond what primes_upto will materialize.
    """
    limit = int(limit)
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}")
    if limit < 2:
        return
    if limit == 2:
        yield np.array([2], dtype=np.int64)
        return
    odd_base = _base_primes(math.isqrt(limit))
    odd_base = odd_base[odd_base > 2]
    lo = 3
    first = True
    while lo <= limit:
        hi = min(lo + 2 * segment, limit + 1)
        count = (hi - lo + 1) // 2
        mask = np.ones(count, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < hi:
                mask[(start - lo) // 2 :: p] = False
        chunk = lo + 2 * np.flatnonzero(mask).astype(np.int64)
        if first:
            chunk = np.concatenate((np.array([2], dtype=np.int64), chunk))
            first = False
        yield chunk
        lo = hi + (hi % 2 == 0)


_cache_lock = threading.Lock()
_prime_cache = _EMPTY
_prime_cache_limit = 1


def primes_upto(limit):
    """All primes <= limit as an int64 array (shared cache, do not mutate)."""
    limit = int(limit)
    if limit > MATERIALIZE_LIMIT:
        raise CapacityError(
            f"refusing to materialize primes up to {limit}; "
            "use iter_prime_segments"
        )
    if limit < 2:
        return _EMPTY
    global _prime_cache, _prime_cache_limit
    with _cache_lock:
        if limit > _prime_cache_limit:
            chunks = list(iter_prime_segments(limit))
            _prime_cache = np.concatenate(chunks)
            _prime_cache_limit = limit
        cut = int(np.searchsorted(_prime_cache, limit, side="right"))
        return _prime_cache[:cut]


def is_prime(n):
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = ((d & -d).bit_length()) - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n):
    """Prime factorization {p: e} by trial division (n up to ~1e13 is fine)."""
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    out = {}
    m = n
    if m > 1:
        for p in primes_upto(max(math.isqrt(n), 2)):
            p = int(p)
            if p * p > m:
                break
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e:
                out[p] = e
        if m > 1:
            out[m] = out.get(m, 0) + 1
    return out


def mult_order(a, q):
    """Order of a in (Z/q)^* for prime q."""
    a = int(a) % q
    if a == 0:
        raise DomainError(f"{a} is not invertible mod {q}")
    e = q - 1
    for p in factorize(q - 1):
        while e % p == 0 and pow(a, e // p, q) == 1:
            e //= p
    return e


def primitive_root(q):
    """Smallest primitive root of the prime q."""
    if q == 2:
        return 1
    cofactors = [(q - 1) // p for p in factorize(q - 1)]
    for g in range(2, q):
        if all(pow(g, c, q) != 1 for c in cofactors):
            return g
    raise DomainError(f"{q} has no primitive root; is it prime?")


def power_table(q, g):
    """pw[t] = g^t mod q for t = 0..q-2, built by doubling blocks."""
    n = q - 1
    pw = np.empty(n, dtype=np.int64)
    pw[0] = 1
    length = 1
    while length < n:
        step = min(length, n - length)
        mult = pow(g, length, q)
        pw[length : length + step] = pw[:step] * mult % q
        length += step
    return pw


def dlog_table(q, pw):
    """Inverse of power_table: dlog[g^t mod q] = t, with dlog[0] = -1."""
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[pw] = np.arange(q - 1, dtype=np.int64)
    return dlog


def residue_order_table(q, pw):
    """orders[a] = multiplicative order of a mod q (orders[0] = 0)."""
    t = np.arange(q - 1, dtype=np.int64)
    orders_by_t = (q - 1) // np.gcd(t, q - 1)
    out = np.zeros(q, dtype=np.int64)
    out[pw] = orders_by_t
    return out


def order_profile(p, q, m):
    """(f, g, mu) for a prime p not dividing q.

    f is the order of p mod q, g the order of p^m mod q, and mu the period
    of e -> (1 + p + ... + p^e) mod q hitting zero: mu = q when g = 1,
    else mu = g.
    """
    f = mult_order(p, q)
    g = f // math.gcd(f, m)
    mu = q if g == 1 else g
    return f, g, mu


def sqrt_mod_prime(n, p):
    """A square root of n mod the odd prime p (n must be a residue).

    Uses the single-exponentiation shortcut for p = 3 mod 4 and
    Tonelli-Shanks otherwise.
    """
    n %= p
    if n == 0:
        return 0
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    s = p - 1
    e = 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = e
    c = pow(z, s, p)
    t = pow(n, s, p)
    r = pow(n, (s + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


def kronecker_symbol(a, n):
    """Kronecker symbol (a|n), defined for all integers."""
    a = int(a)
    n = int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    z = 0
    while n % 2 == 0:
        n //= 2
        z += 1
    if z:
        if a % 2 == 0:
            return 0
        if z % 2 == 1 and a % 8 in (3, 5):
            t = -t
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def divisor_sigma(n, k):
    """sigma_k(n) = sum of d^k over divisors d of n, exact."""
    if n < 1:
        raise DomainError(f"divisor_sigma needs n >= 1, got {n}")
    total = 1
    for p, e in factorize(n).items():
        if k == 0:
            total *= e + 1
        else:
            total *= (p ** (k * (e + 1)) - 1) // (p**k - 1)
    return total


@dataclass(frozen=True)
class EkContext:
    """Reduced parameters of the pair (k, q).

    r = gcd(k, q-1) and h = (q-1)/r control everything: the density of
    non-divisible integers is 1 - 1/h when h is even, and the analytic
    shape of the counting function changes entirely when h is odd or q = 2.
    """

    k: int
    q: int
    r: int
    h: int
    case: str

    @property
    def delta(self):
        return 1.0 / self.h


def make_context(k, q):
    k = int(k)
    q = int(q)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not is_prime(q):
        raise DomainError(f"q must be prime, got {q}")
    if q == 2:
        return EkContext(k=k, q=2, r=1, h=1, case="q2")
    r = math.gcd(k, q - 1)
    h = (q - 1) // r
    case = "even" if h % 2 == 0 else "odd"
    return EkContext(k=k, q=q, r=r, h=h, case=case)
