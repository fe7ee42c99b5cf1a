"""Fourier coefficients of the six level-one cusp forms and the
congruences singling out their exceptional primes.

The forms are Delta and its products with powers of the normalized
Eisenstein series Q = 1 + 240 sum sigma_3(n) x^n and
R = 1 - 504 sum sigma_5(n) x^n, one form per weight in
{12, 16, 18, 20, 22, 26}. Coefficients are built either as residues
modulo a prime (fast int64 pipeline) or exactly.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import is_prime, primes_upto
from .errors import CapacityError, DomainError

WEIGHTS = (12, 16, 18, 20, 22, 26)

# (number of Q factors, number of R factors) multiplying Delta
_FORM_FACTORS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}

FORM_LABELS = {
    12: "Delta",
    16: "Q*Delta",
    18: "R*Delta",
    20: "Q^2*Delta",
    22: "Q*R*Delta",
    26: "Q^2*R*Delta",
}

EXACT_N_MAX = 10_000
MOD_N_MAX = 100_000

# Exceptional pairs with q < w and their twist exponent v. Pairs absent
# here (e.g. (12, 11)) admit no such congruence.
TYPE_I_SMALL = {
    (12, 2): 0, (12, 3): 0, (12, 5): 1, (12, 7): 1,
    (16, 2): 0, (16, 3): 0, (16, 5): 1, (16, 7): 1, (16, 11): 1,
    (18, 2): 0, (18, 3): 0, (18, 5): 2, (18, 7): 1, (18, 11): 1, (18, 13): 1,
    (20, 2): 0, (20, 3): 0, (20, 5): 1, (20, 7): 2, (20, 11): 1, (20, 13): 1,
    (22, 2): 0, (22, 3): 0, (22, 5): 2, (22, 7): 1, (22, 13): 1, (22, 17): 1,
    (26, 2): 0, (26, 3): 0, (26, 5): 2, (26, 7): 2, (26, 11): 1, (26, 17): 1,
    (26, 19): 1,
}

# Exceptional primes with q > w; all have v = 0.
TYPE_I_LARGE = {
    12: (691,),
    16: (3617,),
    18: (43867,),
    20: (283, 617),
    22: (131, 593),
    26: (657931,),
}

# Weights admitting the Legendre-symbol congruence, with their prime.
TYPEII_PAIRS = {12: 23, 16: 31}


def type_i_rows(q_max=None):
    """All (w, q, v) exceptional triples, small and large q, sorted."""
    rows = [(w, q, v) for (w, q), v in TYPE_I_SMALL.items()]
    for w, qs in TYPE_I_LARGE.items():
        rows.extend((w, q, 0) for q in qs)
    rows.sort()
    if q_max is not None:
        rows = [row for row in rows if row[1] <= q_max]
    return rows


@dataclass(frozen=True)
class SeriesModQ:
    """Truncated q-expansion with coefficients reduced into [0, modulus)."""

    modulus: int
    coeffs: np.ndarray

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return int(self.coeffs[n])


@dataclass(frozen=True)
class SeriesExact:
    """Truncated q-expansion with exact integer coefficients."""

    coeffs: tuple

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]


def _pentagonal_terms(n_max):
    """Sparse (offset, sign) form of prod_{m>=1} (1 - x^m) to degree n_max."""
    terms = [(0, 1)]
    k = 1
    while k * (3 * k - 1) // 2 <= n_max:
        sign = -1 if k % 2 else 1
        terms.append((k * (3 * k - 1) // 2, sign))
        if k * (3 * k + 1) // 2 <= n_max:
            terms.append((k * (3 * k + 1) // 2, sign))
        k += 1
    return terms


def _guard_modulus(m, n_max):
    if (m - 1) ** 2 * (n_max + 1) >= 2 ** 63:
        raise CapacityError(
            f"modulus {m} at length {n_max + 1} overflows int64 convolution"
        )


@lru_cache(maxsize=64)
def _delta_mod(n_max, m):
    """Delta coefficients mod m to index n_max; cached, do not mutate."""
    L = n_max + 1
    terms = _pentagonal_terms(n_max)
    arr = np.zeros(L, dtype=np.int64)
    arr[0] = 1
    for _ in range(24):
        nxt = np.zeros(L, dtype=np.int64)
        for off, sign in terms:
            if sign > 0:
                nxt[off:] += arr[: L - off]
            else:
                nxt[off:] -= arr[: L - off]
        arr = nxt % m
    tau = np.zeros(L, dtype=np.int64)
    tau[1:] = arr[:-1]
    return tau


@lru_cache(maxsize=64)
def _sigma_mod(n_max, k, m):
    """sigma_k(n) mod m to index n_max (index 0 is 0); cached, do not mutate."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        out[d::d] += pow(d, k, m)
    out %= m
    return out


@lru_cache(maxsize=64)
def _eisenstein_mod(which, n_max, m):
    """Q or R coefficients mod m; cached, do not mutate."""
    if which == "Q":
        out = (240 % m) * _sigma_mod(n_max, 3, m) % m
    else:
        out = (-504 % m) * _sigma_mod(n_max, 5, m) % m
    out = out.copy()
    out[0] = 1 % m
    return out


def _mul_mod(a, b, m):
    return np.convolve(a, b)[: len(a)] % m


def _tau_mod_arr(w, n_max, m):
    if n_max > MOD_N_MAX:
        raise CapacityError(f"series length {n_max} exceeds {MOD_N_MAX}")
    _guard_modulus(m, n_max)
    cur = _delta_mod(n_max, m)
    nq, nr = _FORM_FACTORS[w]
    for _ in range(nq):
        cur = _mul_mod(cur, _eisenstein_mod("Q", n_max, m), m)
    for _ in range(nr):
        cur = _mul_mod(cur, _eisenstein_mod("R", n_max, m), m)
    return cur


def _crt_moduli(n_max, bits):
    """Primes safe for int64 convolution at this length, product > 2^bits."""
    cap = math.isqrt((2 ** 63 - 1) // (n_max + 1))
    m = cap if cap % 2 else cap - 1
    mods, have = [], 0.0
    while have < bits:
        if is_prime(m):
            mods.append(m)
            have += math.log2(m)
        m -= 2
    return mods


def _tau_exact(w, n_max):
    """Exact coefficients via residues whose product dwarfs the size bound.

    Coefficient magnitudes are at most d(n) n^{(w-1)/2}; the residue
    product carries 30 spare bits beyond that, so the centered lift is
    exact with a wide margin.
    """
    if n_max > EXACT_N_MAX:
        raise CapacityError(
            f"exact coefficients grow too fast beyond n={EXACT_N_MAX}; "
            f"got n_max={n_max}"
        )
    bits = 8 + 0.5 * (w - 1) * math.log2(max(n_max, 2)) + 30
    mods = _crt_moduli(n_max, bits)
    residues = [_tau_mod_arr(w, n_max, m) for m in mods]
    M = math.prod(mods)
    basis = []
    for m in mods:
        part = M // m
        basis.append(part * pow(part, -1, m) % M)
    half = M // 2
    out = []
    for n in range(n_max + 1):
        x = sum(int(r[n]) * b for r, b in zip(residues, basis)) % M
        out.append(x - M if x > half else x)
    return tuple(out)


def eta24(n_max, modulus=None):
    """Delta-series to index n_max: x prod (1-x^m)^24, exact or mod q."""
    if n_max < 1:
        raise DomainError(f"need n_max >= 1, got {n_max}")
    if modulus is not None:
        if n_max > MOD_N_MAX:
            raise CapacityError(f"series length {n_max} exceeds {MOD_N_MAX}")
        return SeriesModQ(int(modulus), _delta_mod(n_max, int(modulus)))
    return SeriesExact(_tau_exact(12, n_max))


def tau_w_series(w, n_max, modulus=None):
    """Coefficients of the weight-w form to index n_max, exact or mod q."""
    if w not in _FORM_FACTORS:
        raise DomainError(f"weight {w} has no one-dimensional cusp form here")
    if n_max < 1:
        raise DomainError(f"need n_max >= 1, got {n_max}")
    if modulus is not None:
        if n_max > MOD_N_MAX:
            raise CapacityError(f"series length {n_max} exceeds {MOD_N_MAX}")
        return SeriesModQ(int(modulus), _tau_mod_arr(w, n_max, int(modulus)))
    return SeriesExact(_tau_exact(w, n_max))


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a congruence verification; empty violations means pass."""

    kind: str
    w: int
    q: int
    v: int
    r: int
    n_max: int
    checked: int
    violations: tuple

    @property
    def ok(self):
        return not self.violations


_VIOLATION_CAP = 32


def _record(violations, item):
    if len(violations) < _VIOLATION_CAP:
        violations.append(item)


def type_i_v(w, q):
    """Twist exponent v for an exceptional pair, or a domain error."""
    if w not in _FORM_FACTORS:
        raise DomainError(f"weight {w} has no one-dimensional cusp form here")
    if q > w:
        if q in TYPE_I_LARGE[w]:
            return 0
        raise DomainError(f"q={q} is not an exceptional prime for weight {w}")
    v = TYPE_I_SMALL.get((w, q))
    if v is None:
        raise DomainError(f"q={q} is not an exceptional prime for weight {w}")
    return v


def verify_type_i(w, q, v=None, n_max=None):
    """Check the divisor-sum congruences for an exceptional pair (w, q).

    Three layers: the coprime congruence tau_w(n) = n^v sigma_{w-1-2v}(n),
    its extension to every n (extra factor n for v = 0 with q < w), and
    divisibility agreement against the reduced exponent r = (w-1-2v, q-1)
    that drives the counting constants.
    """
    table_v = type_i_v(w, q)
    if v is not None and int(v) != table_v:
        raise DomainError(f"pair (w={w}, q={q}) has v={table_v}, not {v}")
    v = table_v
    if n_max is None:
        n_max = max(q + 10, 1000)
    if n_max < q + 10:
        raise DomainError(f"need n_max >= q + 10 = {q + 10}, got {n_max}")
    k_exp = w - 1 - 2 * v
    r = math.gcd(k_exp, q - 1)
    tau = _tau_mod_arr(w, n_max, q)
    sig_k = _sigma_mod(n_max, k_exp, q)
    sig_r = _sigma_mod(n_max, r, q)
    n = np.arange(n_max + 1, dtype=np.int64)
    nmod = n % q
    coprime = nmod != 0
    coprime[0] = False

    violations = []
    rhs = nmod ** v % q * sig_k % q
    bad = np.nonzero(coprime & (tau != rhs))[0]
    for i in bad:
        _record(violations, ("coprime", int(i), int(tau[i]), int(rhs[i])))

    v_all = max(1, v) if q < w else 0
    rhs_all = nmod ** v_all % q * sig_k % q
    bad = np.nonzero((n >= 1) & (tau != rhs_all))[0]
    for i in bad:
        _record(violations, ("all-n", int(i), int(tau[i]), int(rhs_all[i])))

    div_rhs = nmod ** (1 if q < w else 0) % q * sig_r % q
    bad = np.nonzero((n >= 1) & ((tau == 0) != (div_rhs == 0)))[0]
    for i in bad:
        _record(violations, ("divisibility", int(i), int(tau[i]), int(div_rhs[i])))

    return VerifyReport(
        kind="type-i",
        w=w,
        q=q,
        v=v,
        r=r,
        n_max=int(n_max),
        checked=3 * int(n_max),
        violations=tuple(violations),
    )


def form_values_mask(a, b, c, limit):
    """Boolean mask of integers <= limit represented by a x^2 + b x y + c y^2."""
    disc = b * b - 4 * a * c
    if disc >= 0:
        raise DomainError(f"form ({a},{b},{c}) is not positive definite")
    mask = np.zeros(limit + 1, dtype=bool)
    y_max = math.isqrt(4 * a * limit // (-disc)) + 1
    for y in range(-y_max, y_max + 1):
        root = b * b * y * y - 4 * a * (c * y * y - limit)
        if root < 0:
            continue
        s = math.isqrt(root)
        x_lo = -(-(-b * y - s) // (2 * a))
        x_hi = (-b * y + s) // (2 * a)
        if x_hi < x_lo:
            continue
        x = np.arange(x_lo, x_hi + 1, dtype=np.int64)
        vals = a * x * x + b * x * y + c * y * y
        vals = vals[(vals >= 0) & (vals <= limit)]
        mask[vals] = True
    return mask


def verify_type_ii(w, q, n_max):
    """Check the Legendre/quadratic-form congruence pattern for (w, q).

    Primes split into: inert class (p|q) = -1 giving tau_w(p) = 0; the
    class of 2x^2+xy+((q+1)/8)y^2 giving -1; the principal class
    x^2+xy+((q+1)/4)y^2 giving 2; and p = q giving 1. Prime powers must
    follow the periodic rows these seeds generate under the Hecke
    recurrence.
    """
    if TYPEII_PAIRS.get(w) != q:
        raise DomainError(f"(w={w}, q={q}) admits no Legendre-symbol congruence")
    if n_max < q + 10:
        raise DomainError(f"need n_max >= q + 10 = {q + 10}, got {n_max}")
    tau = _tau_mod_arr(w, n_max, q)
    s2_mask = form_values_mask(2, 1, (q + 1) // 8, n_max)
    s3_mask = form_values_mask(1, 1, (q + 1) // 4, n_max)
    violations = []
    checked = 0
    for p in map(int, primes_upto(n_max)):
        if p == q:
            def row(e):
                return 1
        else:
            leg = pow(p, (q - 1) // 2, q)
            if leg == q - 1:

                def row(e):
                    return 1 if e % 2 == 0 else 0
            elif s2_mask[p] and not s3_mask[p]:

                def row(e):
                    return (1, q - 1, 0)[e % 3]
            elif s3_mask[p] and not s2_mask[p]:

                def row(e):
                    return (e + 1) % q
            else:
                _record(violations, ("class", p, int(s2_mask[p]), int(s3_mask[p])))
                continue
        pe, e = p, 1
        while pe <= n_max:
            checked += 1
            if int(tau[pe]) != row(e):
                _record(violations, ("power", pe, int(tau[pe]), row(e)))
            pe *= p
            e += 1
    return VerifyReport(
        kind="type-ii",
        w=w,
        q=q,
        v=0,
        r=(q - 1) // 2,
        n_max=int(n_max),
        checked=checked,
        violations=tuple(violations),
    )


def check_hecke_and_deligne(w, n_max):
    """Exact-coefficient checks: multiplicativity on coprime pairs,
    the prime-power recurrence, and the coefficient size bound."""
    series = tau_w_series(w, n_max)
    tau = series.coeffs
    violations = []
    checked = 0
    for a in range(2, n_max // 2 + 1):
        for b in range(a + 1, n_max // a + 1):
            if math.gcd(a, b) != 1:
                continue
            checked += 1
            if tau[a * b] != tau[a] * tau[b]:
                _record(violations, ("multiplicative", a * b, a, b))
    for p in map(int, primes_upto(n_max)):
        if tau[p] * tau[p] > 4 * p ** (w - 1):
            _record(violations, ("size", p, tau[p], 4 * p ** (w - 1)))
        checked += 1
        pe = p
        while pe * p <= n_max:
            checked += 1
            if tau[pe * p] != tau[p] * tau[pe] - p ** (w - 1) * tau[pe // p]:
                _record(violations, ("recurrence", pe * p, p, pe))
            pe *= p
    return VerifyReport(
        kind="hecke-deligne",
        w=w,
        q=0,
        v=0,
        r=0,
        n_max=int(n_max),
        checked=checked,
        violations=tuple(violations),
    )


def tau_self_residue(w, q):
    """tau_w(q) mod q for prime q: 0 exactly when q divides tau_w(q)."""
    if not is_prime(q):
        raise DomainError(f"q={q} is not prime")
    return int(_tau_mod_arr(w, q, q)[q])
