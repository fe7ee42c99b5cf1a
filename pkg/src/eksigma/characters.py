"""Dirichlet characters mod an odd prime q, indexed by discrete log.

The group of characters mod q is cyclic of order q-1. Fixing the smallest
primitive root g, character j sends g^t to exp(2*pi*i*j*t/(q-1)). Index 0 is
the principal character; index (q-1)/2 the quadratic one; chi_j(-1) equals
(-1)^j, so even j means even character.
"""

import numpy as np

from .arith import dlog_table, is_prime, power_table, primitive_root
from .errors import CapacityError, DomainError

BUILD_Q_MAX = 10**6


class CharacterTable:
    """Shared precomputation for every character mod q.

    Attributes
    ----------
    q       odd prime modulus
    g       smallest primitive root mod q
    powers  powers[t] = g^t mod q, t = 0..q-2
    dlog    dlog[a] = t with g^t = a mod q (dlog[0] = -1)
    """

    def __init__(self, q):
        q = int(q)
        if q > BUILD_Q_MAX:
            raise CapacityError(f"character table for q={q} exceeds {BUILD_Q_MAX}")
        if q == 2 or not is_prime(q):
            raise DomainError(f"need an odd prime modulus, got {q}")
        self.q = q
        self.g = primitive_root(q)
        self.powers = power_table(q, self.g)
        self.dlog = dlog_table(q, self.powers)
        n = q - 1
        # roots[t] = e(t/(q-1)); char j at a is roots[(j * dlog[a]) % (q-1)]
        ang = 2.0 * np.pi * np.arange(n) / n
        self.roots = np.cos(ang) + 1j * np.sin(ang)
        self._caches = {}

    def cache(self, key, build):
        """Memo slot for per-modulus arrays shared across characters."""
        if key not in self._caches:
            self._caches[key] = build()
        return self._caches[key]

    def char_value(self, j, a):
        """chi_j(a) as a complex number (0.0 when q divides a)."""
        t = int(self.dlog[a % self.q])
        if t < 0:
            return 0.0 + 0.0j
        return complex(self.roots[(j * t) % (self.q - 1)])

    def char_vector(self, j):
        """Array of chi_j(a) for a = 1..q-1."""
        idx = (j * self.dlog[1:]) % (self.q - 1)
        return self.roots[idx]

    def parity(self, j):
        """+1 for even chi_j (chi(-1)=1), -1 for odd."""
        return -1 if j % 2 else 1

    def members(self, m, include_principal=False):
        """Indices of the characters that factor through the m-th power map.

        chi_j(a) depends only on a^m exactly when j is divisible by
        m' = gcd(m, q-1); equivalently chi_j kills every x with x^m = 1.
        The principal j = 0 is skipped unless asked for.
        """
        n = self.q - 1
        step = np.gcd(m, n)
        start = 0 if include_principal else step
        return list(range(start, n, step))


_table_cache = {}


def build_table(q):
    """Build (and memoize) the character table mod q."""
    if q not in _table_cache:
        _table_cache[q] = CharacterTable(q)
    return _table_cache[q]
