"""Cusp form coefficients and congruence verification.

The oracle here is a naive exact reconstruction: eta^24 by multiplying
out (1 - x^m) factors one at a time, Eisenstein series from divisor sums
computed by trial division, and products by schoolbook convolution over
Python integers.
"""

import math

import numpy as np
import pytest

from eksigma import cuspforms as cf
from eksigma.arith import divisor_sigma, kronecker_symbol, primes_upto
from eksigma.errors import CapacityError, DomainError

TAU_FIRST_TWELVE = (
    1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
)


def _brute_eta24(n_max):
    coeffs = [1] + [0] * n_max
    for m in range(1, n_max + 1):
        for _ in range(24):
            for i in range(n_max, m - 1, -1):
                coeffs[i] -= coeffs[i - m]
    return [0] + coeffs[:-1]


def _pmul(a, b, n_max):
    out = [0] * (n_max + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(0, n_max + 1 - i):
            out[i + j] += ai * b[j]
    return out


def _brute_form_series(w, n_max):
    nq, nr = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}[w]
    cur = _brute_eta24(n_max)
    Q = [1] + [240 * divisor_sigma(n, 3) for n in range(1, n_max + 1)]
    R = [1] + [-504 * divisor_sigma(n, 5) for n in range(1, n_max + 1)]
    for _ in range(nq):
        cur = _pmul(cur, Q, n_max)
    for _ in range(nr):
        cur = _pmul(cur, R, n_max)
    return cur


def test_tau_known_values():
    series = cf.tau_w_series(12, 12)
    assert series.coeffs[0] == 0
    assert series.coeffs[1:] == TAU_FIRST_TWELVE
    assert len(series) == 13
    assert series[11] == 534612


@pytest.mark.parametrize("w", cf.WEIGHTS)
def test_exact_series_vs_brute(w):
    brute = _brute_form_series(w, 40)
    got = cf.tau_w_series(w, 40)
    assert list(got.coeffs) == brute
    assert brute[1] == 1


def test_eta24_matches_weight_twelve():
    assert cf.eta24(60).coeffs == cf.tau_w_series(12, 60).coeffs
    mod = cf.eta24(60, modulus=23)
    assert mod.modulus == 23
    assert all(mod[n] == cf.eta24(60).coeffs[n] % 23 for n in range(61))


@pytest.mark.parametrize("w,q", [(16, 31), (12, 691), (22, 131)])
def test_mod_series_matches_exact(w, q):
    exact = cf.tau_w_series(w, 200)
    mod = cf.tau_w_series(w, 200, modulus=q)
    for n in range(201):
        assert mod[n] == exact[n] % q


# reduced exponents r = gcd(w - 1 - 2v, q - 1) for the small-q rows
R_BY_PAIR = {
    (12, 2): 1, (12, 3): 1, (12, 5): 1, (12, 7): 3,
    (16, 2): 1, (16, 3): 1, (16, 5): 1, (16, 7): 1, (16, 11): 1,
    (18, 2): 1, (18, 3): 1, (18, 5): 1, (18, 7): 3, (18, 11): 5, (18, 13): 3,
    (20, 2): 1, (20, 3): 1, (20, 5): 1, (20, 7): 3, (20, 11): 1, (20, 13): 1,
    (22, 2): 1, (22, 3): 1, (22, 5): 1, (22, 7): 1, (22, 13): 1, (22, 17): 1,
    (26, 2): 1, (26, 3): 1, (26, 5): 1, (26, 7): 3, (26, 11): 1, (26, 17): 1,
    (26, 19): 1,
}


def test_type_i_rows_listing():
    rows = cf.type_i_rows()
    assert (12, 691, 0) in rows
    assert (16, 3617, 0) in rows
    assert rows == sorted(rows)
    capped = cf.type_i_rows(q_max=700)
    assert all(q <= 700 for _, q, _ in capped)
    assert (16, 3617, 0) not in capped


def test_type_i_every_row_verifies():
    for w, q, v in cf.type_i_rows(q_max=700):
        rep = cf.verify_type_i(w, q)
        assert rep.ok, (w, q, rep.violations[:3])
        assert rep.v == v
        assert rep.r == math.gcd(w - 1 - 2 * v, q - 1)
        if (w, q) in R_BY_PAIR:
            assert rep.r == R_BY_PAIR[(w, q)]
        assert rep.kind == "type-i"
        assert rep.checked == 3 * rep.n_max


def test_type_i_rejects_non_exceptional_pairs():
    with pytest.raises(DomainError):
        cf.verify_type_i(12, 11)
    with pytest.raises(DomainError):
        cf.verify_type_i(12, 13)
    with pytest.raises(DomainError):
        cf.verify_type_i(14, 7)
    with pytest.raises(DomainError):
        cf.verify_type_i(12, 691, v=1)
    with pytest.raises(DomainError):
        cf.verify_type_i(12, 691, n_max=100)


def test_non_exceptional_pair_really_fails():
    # (12, 11) admits no such congruence: exhibit a concrete counterexample
    series = cf.tau_w_series(12, 100, modulus=11)
    mismatch = [
        n
        for n in range(1, 101)
        if n % 11 and series[n] != divisor_sigma(n, 11) % 11
    ]
    assert mismatch


def _brute_represents(a, b, c, p):
    lim = math.isqrt(4 * p) + 2
    for x in range(-lim, lim + 1):
        for y in range(-lim, lim + 1):
            if a * x * x + b * x * y + c * y * y == p:
                return True
    return False


@pytest.mark.parametrize("w,q", [(12, 23), (16, 31)])
def test_type_ii_verifies_and_matches_brute_classes(w, q):
    rep = cf.verify_type_ii(w, q, 2000)
    assert rep.ok, rep.violations[:3]
    assert rep.kind == "type-ii"
    assert rep.checked > 300
    # independent spot check of the prime pattern
    series = cf.tau_w_series(w, 500, modulus=q)
    for p in map(int, primes_upto(500)):
        if p == q:
            assert series[p] == 1
        elif kronecker_symbol(p, q) == -1:
            assert series[p] == 0
        elif _brute_represents(1, 1, (q + 1) // 4, p):
            assert series[p] == 2
        else:
            assert _brute_represents(2, 1, (q + 1) // 8, p)
            assert series[p] == q - 1


def test_type_ii_rejects_other_pairs():
    with pytest.raises(DomainError):
        cf.verify_type_ii(12, 31, 1000)
    with pytest.raises(DomainError):
        cf.verify_type_ii(18, 23, 1000)
    with pytest.raises(DomainError):
        cf.verify_type_ii(12, 23, 20)


def test_form_values_mask_brute():
    mask = cf.form_values_mask(1, 1, 6, 100)
    want = set()
    for x in range(-25, 26):
        for y in range(-25, 26):
            v = x * x + x * y + 6 * y * y
            if 0 <= v <= 100:
                want.add(v)
    assert set(np.flatnonzero(mask)) | {0} == want | {0}
    assert bool(mask[0])
    with pytest.raises(DomainError):
        cf.form_values_mask(1, 5, 1, 100)


@pytest.mark.parametrize("w", cf.WEIGHTS)
def test_hecke_recurrence_and_size_bound(w):
    rep = cf.check_hecke_and_deligne(w, 300)
    assert rep.ok, rep.violations[:3]
    assert rep.kind == "hecke-deligne"
    assert rep.checked > 300


def test_tau_self_residue():
    assert cf.tau_self_residue(12, 691) == 1
    assert cf.tau_self_residue(12, 5) == 0
    assert cf.tau_self_residue(12, 7) == 0
    assert cf.tau_self_residue(20, 283) == 1
    with pytest.raises(DomainError):
        cf.tau_self_residue(12, 10)


def test_capacity_limits():
    with pytest.raises(CapacityError):
        cf.tau_w_series(12, 20000)
    with pytest.raises(CapacityError):
        cf.tau_w_series(12, cf.MOD_N_MAX + 1, modulus=23)
    with pytest.raises(CapacityError):
        cf.tau_w_series(12, 100000, modulus=10**10)
    with pytest.raises(DomainError):
        cf.eta24(0)
    with pytest.raises(DomainError):
        cf.tau_w_series(14, 10)
