"""Closed-form bounds: dominance over measured sums, threshold scan."""

import math

import numpy as np
import pytest

from eksigma import bounds, primesums
from eksigma.arith import primes_upto
from eksigma.errors import DomainError, ThresholdNotFound


def _admissible(r, lo, hi):
    qs = primes_upto(hi)
    return [int(q) for q in qs if q >= lo and (q - 1) % (2 * r) == 0]


def test_upper_bound_dominates_measured_sum():
    # the closed form must sit above the measured S(m,q) minus its tail
    for m in (1, 2, 3):
        for q in _admissible(m, 3, 100):
            got = bounds.upper_bound_S(m, q)
            meas = primesums.s_family(q, m, 10**5)
            assert got.value >= meas.value - meas.tail, (m, q)


def test_upper_bound_structure():
    b1 = bounds.upper_bound_S(1, 13)
    assert b1.value == math.fsum(b1.terms)
    assert "order2" in b1.dropped
    assert float(b1) == b1.value
    b2 = bounds.upper_bound_S(2, 13)
    assert "order2" not in b2.dropped
    # alpha at most twice the smallest odd prime factor of h drops a term
    tight = bounds.upper_bound_S(1, 7, alpha=5.0)
    assert "residue" in tight.dropped
    loose = bounds.upper_bound_S(1, 7, alpha=30.0)
    assert "residue" not in loose.dropped
    assert len(loose.terms) == len(tight.terms) + 1


def test_upper_bound_monotone_in_alpha_floor():
    # raising alpha beyond the default can only shrink the dyadic first term
    a = bounds.upper_bound_S(1, 101, alpha=40.0)
    b = bounds.upper_bound_S(1, 101, alpha=400.0)
    assert b.value <= a.value * 1.5


def test_upper_bound_domain_errors():
    with pytest.raises(DomainError):
        bounds.upper_bound_S(1, 2)
    with pytest.raises(DomainError):
        bounds.upper_bound_S(2, 7)
    with pytest.raises(DomainError):
        bounds.upper_bound_S(1, 13, alpha=2.9)


def test_tail_bound_certifies_actual_tail():
    assert bounds.tail_bound_primesum(100) == 1.053 / 100
    ps = primes_upto(10**5)
    chunk = ps[ps > 10**4].astype(np.float64)
    measured = float(np.sum(np.log(chunk) / (chunk**2 - 1.0)))
    assert measured <= bounds.tail_bound_primesum(10**4)
    with pytest.raises(DomainError):
        bounds.tail_bound_primesum(2)


def test_bound_params():
    p = bounds.BoundParams.for_modulus(10007)
    assert p.y == math.inf
    small = bounds.BoundParams.for_modulus(1000)
    assert math.isfinite(small.y)
    assert small.alpha == pytest.approx(10 * math.log(1000))


def test_gamma_lower_bound_domain():
    with pytest.raises(DomainError):
        bounds.gamma_lower_bound(1, 9999)
    with pytest.raises(DomainError):
        bounds.gamma_lower_bound(2, 10007)
    val = bounds.gamma_lower_bound(1, 10007)
    assert math.isfinite(val)
    assert val < 0.5  # below the first-index threshold


def test_find_q0_index_one():
    res = bounds.find_q0(1)
    assert res.q0 == 28537
    assert int(res) == 28537
    assert res.last_failure < res.q0
    assert res.scanned_to >= 4 * res.last_failure
    # the crossing is genuine on both sides
    assert bounds.gamma_lower_bound(1, res.last_failure) <= 0.5
    assert bounds.gamma_lower_bound(1, res.q0) > 0.5
    # and every admissible prime in the checked window stays above 1/2
    for q in _admissible(1, res.q0, 4 * res.q0):
        assert bounds.gamma_lower_bound(1, q) > 0.5


def test_find_q0_not_found_when_capped():
    with pytest.raises(ThresholdNotFound) as exc:
        bounds.find_q0(1, q_max=20000)
    assert exc.value.r == 1
    assert exc.value.q_max == 20000


def test_find_q0_rejects_bad_args():
    with pytest.raises(DomainError):
        bounds.find_q0(0)
    with pytest.raises(DomainError):
        bounds.find_q0(1, q_max=5000)
