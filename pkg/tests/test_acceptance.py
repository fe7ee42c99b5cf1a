"""End-to-end reproduction checklist.

Nine numbered checks, each printing one PASS/FAIL line. Reference values
are the published six-decimal table entries; tolerances and prime-sum
cutoffs are stated inline. Run with -s to see the verdict lines.
"""

import math
import time

import pytest

from eksigma import bounds, cuspforms, oracle, primesums, shanks
from eksigma.arith import primes_upto
from eksigma.characters import build_table
from eksigma.ekcore import compute_report, compute_typeii
from eksigma.errors import CapacityError
from eksigma.lfunctions import EULER_GAMMA, chi_minus4_logderiv_at1


def _verdict(num, name, failures):
    ok = not failures
    print(f"\n[acceptance {num}] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, failures[:8]


# --- 1 -----------------------------------------------------------------

GAMMA_TABLE = {
    (1, 2): -1.370971, (1, 3): -0.014384, (1, 5): -0.002812,
    (2, 5): 0.046145, (1, 7): 0.388115, (3, 7): -0.092678,
    (1, 11): 0.282623, (5, 11): -0.195292, (1, 13): 0.400611,
    (2, 13): 0.581080, (3, 13): -0.019200, (6, 13): 0.030107,
}
GAMMA_PRIME_TABLE = {
    (1, 2): -0.677823, (1, 3): 0.534921, (1, 5): 0.399547,
    (1, 7): 0.712434, (3, 7): 0.231640, (1, 11): 0.522413,
    (5, 11): 0.044497, (1, 13): 0.614357, (3, 13): 0.194544,
    (1, 17): 0.518971, (1, 19): 0.720414,
}


def test_1_small_prime_tables(cfg_full):
    t0 = time.perf_counter()
    failures = []
    reports = {}
    for k, q in sorted(set(GAMMA_TABLE) | set(GAMMA_PRIME_TABLE)):
        reports[(k, q)] = compute_report(k, q, cfg_full)
    for pair, want in GAMMA_TABLE.items():
        got = reports[pair].gamma
        if abs(got - want) > 1e-5:
            failures.append(("gamma", pair, got, want))
    for pair, want in GAMMA_PRIME_TABLE.items():
        got = reports[pair].gamma_prime
        if abs(got - want) > 1e-5:
            failures.append(("gamma_prime", pair, got, want))
    elapsed = time.perf_counter() - t0
    if elapsed > 600:
        failures.append(("runtime", elapsed))
    _verdict(1, "small-prime gamma tables, 1e-5 at P=1e7", failures)


# --- 2 -----------------------------------------------------------------

LARGE_Q_TABLE = {
    691: 0.571714, 283: 0.552571, 617: 0.567565, 131: 0.532695, 593: 0.568078,
}


def test_2_large_exceptional_primes(cfg_full):
    failures = []
    t0 = time.perf_counter()
    rep = compute_report(1, 691, cfg_full)
    elapsed = time.perf_counter() - t0
    if abs(rep.gamma - LARGE_Q_TABLE[691]) > 1e-5:
        failures.append((691, rep.gamma))
    if elapsed > 120:
        failures.append(("runtime-691", elapsed))
    for q in (283, 617, 131, 593):
        got = compute_report(1, q, cfg_full).gamma
        if abs(got - LARGE_Q_TABLE[q]) > 1e-5:
            failures.append((q, got))
    _verdict(2, "large exceptional primes, 1e-5 at P=1e7", failures)


# --- 3 -----------------------------------------------------------------

def test_3_type_two_constants(cfg_full):
    failures = []
    t0 = time.perf_counter()
    for w, want in ((12, 0.216691), (16, 0.156105)):
        rep = compute_typeii(w, cfg_full)
        if abs(rep.gamma - want) > 1e-4:
            failures.append((w, rep.gamma, want))
    elapsed = time.perf_counter() - t0
    if elapsed > 300:
        failures.append(("runtime", elapsed))
    _verdict(3, "quadratic-form congruence constants, 1e-4 at P=1e7", failures)


# --- 4 -----------------------------------------------------------------

RAMANUJAN_SET = {3, 5, 7, 11, 13, 17, 23, 29, 37, 41, 43, 47, 53, 59, 73}


def test_4_verdict_set(table_rows_full):
    failures = []
    got_ram = {r.q for r in table_rows_full if r.verdict == "Ramanujan"}
    if got_ram != RAMANUJAN_SET:
        failures.append(("set", sorted(got_ram ^ RAMANUJAN_SET)))
    for r in table_rows_full:
        if r.verdict == "Undecided" or r.verdict_prime == "Undecided":
            failures.append(("undecided", r.q))
        if (r.verdict_prime == "Ramanujan") != (r.q == 5):
            failures.append(("prime-verdict", r.q, r.verdict_prime))
        if r.verdict not in ("Landau", "Ramanujan"):
            failures.append(("verdict", r.q, r.verdict))
    _verdict(4, "winner sets over odd q <= 600 at P=1e7", failures)


# --- 5 -----------------------------------------------------------------

def test_5_thresholds():
    failures = []
    t0 = time.perf_counter()
    got1 = bounds.find_q0(1).q0
    got2 = bounds.find_q0(2).q0
    elapsed = time.perf_counter() - t0
    if got1 != 28537:
        failures.append((1, got1))
    if got2 != 1160893:
        failures.append((2, got2))
    if elapsed > 60:
        failures.append(("runtime", elapsed))
    _verdict(5, "threshold primes q0(1)=28537, q0(2)=1160893", failures)


# --- 6 -----------------------------------------------------------------

def test_6_quadratic_progression_constants():
    failures = []
    K = shanks.landau_ramanujan_K(shanks.ShanksConfig(levels_b=8))
    if abs(K - 0.7642236535892206) > 1e-12:
        failures.append(("K", K))
    ladder = shanks.shanks_c()
    sieve_sum = primesums.accel_inert_sum(4, 2, 0, 10**8)
    sieve_c = math.fsum(
        [
            0.5,
            0.25 * math.log(2.0),
            -0.25 * EULER_GAMMA,
            -0.25 * chi_minus4_logderiv_at1(),
            0.5 * sieve_sum.value,
        ]
    )
    if abs(ladder.c - sieve_c) > 1e-7:
        failures.append(("c", ladder.c, sieve_c))
    _verdict(6, "K to 1e-12 and ladder-vs-sieve c to 1e-7 at P=1e8", failures)


# --- 7 -----------------------------------------------------------------

def test_7_cusp_form_congruences():
    failures = []
    rows = cuspforms.type_i_rows(q_max=691)
    for w, q, _ in rows:
        rep = cuspforms.verify_type_i(w, q, n_max=10**4)
        if not rep.ok:
            failures.append(("type-i", w, q, rep.violations[:2]))
    for w, q, _ in cuspforms.type_i_rows(q_max=50000):
        want = 0 if q < w else 1
        if cuspforms.tau_self_residue(w, q) != want:
            failures.append(("self-residue", w, q))
    with pytest.raises(CapacityError):
        cuspforms.tau_self_residue(26, 657931)
    for w, q in sorted(cuspforms.TYPEII_PAIRS.items()):
        rep = cuspforms.verify_type_ii(w, q, 10**4)
        if not rep.ok:
            failures.append(("type-ii", w, q, rep.violations[:2]))
    for w in cuspforms.WEIGHTS:
        rep = cuspforms.check_hecke_and_deligne(w, 1000)
        if not rep.ok:
            failures.append(("hecke", w, rep.violations[:2]))
    _verdict(7, "congruence verification sweeps", failures)


# --- 8 -----------------------------------------------------------------

def test_8_property_suite(cfg_full, table_rows_full):
    failures = []
    t0 = time.perf_counter()

    # character orthogonality to 1e-12
    import numpy as np

    for q in (5, 13, 31):
        tab = build_table(q)
        vecs = np.stack([tab.char_vector(j) for j in range(q - 1)])
        gram = vecs @ vecs.conj().T
        if np.max(np.abs(gram - (q - 1) * np.eye(q - 1))) > 1e-12:
            failures.append(("orthogonality", q))

    # prime-variant shift to 1e-14, on every computed row
    for r in table_rows_full:
        if abs(r.gamma_prime - r.gamma - math.log(r.q) / (r.q - 1)) > 1e-14:
            failures.append(("shift", r.q))

    # reduction to the gcd is bit-identical
    for (ka, q), (kb, _) in (((11, 691), (1, 691)), ((25, 11), (5, 11))):
        a = compute_report(ka, q, cfg_full)
        b = compute_report(kb, q, cfg_full)
        if (a.gamma, a.gamma_prime, a.C, a.err) != (b.gamma, b.gamma_prime, b.C, b.err):
            failures.append(("gcd", ka, q))

    # accelerated and direct half-index routes agree within joint budget
    for k, q in ((1, 3), (2, 5), (3, 7), (5, 11), (6, 13), (8, 17), (9, 19), (11, 23)):
        rep = compute_report(k, q, cfg_full)
        gap = abs(rep.gamma - rep.details["gamma_direct"])
        if gap > rep.err + rep.details["err_direct"]:
            failures.append(("quadratic-path", k, q, gap))

    # closed-form bound dominates the measured sum for q <= 500
    for q in map(int, primes_upto(500)):
        if q == 2:
            continue
        meas = primesums.s_family(q, 1, 10**6, cache_dir=cfg_full.cache_dir)
        if bounds.upper_bound_S(1, q).value < meas.value - meas.tail:
            failures.append(("dominance", q))

    # certified tails are sound across cutoffs
    for q, m in ((13, 1), (7, 1), (691, 1)):
        vals = {
            P: primesums.s_family(q, m, P, cache_dir=cfg_full.cache_dir)
            for P in (10**5, 10**6, 10**7)
        }
        if abs(vals[10**6].value - vals[10**5].value) > vals[10**5].tail:
            failures.append(("tail", q, m, 10**5))
        if abs(vals[10**7].value - vals[10**6].value) > vals[10**6].tail:
            failures.append(("tail", q, m, 10**6))

    # exact power congruence identities for p, q < 100
    small_primes = [int(p) for p in primes_upto(100)]
    for q in small_primes:
        if q == 2:
            continue
        for p in small_primes:
            if p == q:
                continue
            f = 1
            x = p % q
            while x != 1:
                x = x * p % q
                f += 1
            for m in (1, 2, 3):
                g = f // math.gcd(f, m)
                for b in range(1, 2 * g + 1):
                    lhs = pow(p, b * m, q) == q - 1
                    rhs = g % 2 == 0 and b % g == g // 2
                    if lhs != rhs:
                        failures.append(("power-minus-one", p, q, m, b))
                if g % 2 == 0:
                    for d in range(3, g + 1, 2):
                        if g % d:
                            continue
                        num = p ** (g * m // 2) + 1
                        den = p ** (g * m // (2 * d)) + 1
                        if num % den or (num // den) % q:
                            failures.append(("quotient", p, q, m, d))

    # identical bits for any thread count
    base = primesums.s_family(13, 1, 10**6, threads=1)
    for t in (4, 16):
        if primesums.s_family(13, 1, 10**6, threads=t).value != base.value:
            failures.append(("threads", t))

    elapsed = time.perf_counter() - t0
    if elapsed > 120:
        failures.append(("runtime", elapsed))
    _verdict(8, "property suite under two minutes", failures)


# --- 9 -----------------------------------------------------------------

def test_9_oracle_coherence(cfg_full):
    failures = []
    if oracle.count_S(10, 1, 3).count != 5:
        failures.append(("count-10-1-3",))
    if oracle.count_S(100, 1, 2).count != 17:
        failures.append(("count-100-1-2",))
    for k, q in ((1, 3), (1, 5)):
        rep = oracle.fit_first_order((10**4, 10**5, 10**6, 10**7), k, q, config=cfg_full)
        errs = rep.ratio_errors
        if not all(b < a for a, b in zip(errs, errs[1:])):
            failures.append(("ratio-trend", k, q, errs))
        final = rep.points[-1]
        if abs(final.residual - (1.0 - rep.gamma)) > 0.25 * abs(1.0 - rep.gamma):
            failures.append(("residual-band", k, q, final.residual, 1.0 - rep.gamma))
    _verdict(9, "direct counts and first-order trend bands", failures)


# --- optional long checks ----------------------------------------------

@pytest.mark.slow
def test_slow_gamma_3617(cfg_full):
    cfg = cfg_full.with_(character_q_max=4000)
    rep = compute_report(1, 3617, cfg)
    assert rep.gamma == pytest.approx(0.574566, abs=1e-4)


@pytest.mark.slow
def test_slow_regression_big_moduli(cfg_full):
    # converged values from this implementation; the fifth digit differs
    # from older published five-digit figures (0.57669 / 0.57701)
    cfg = cfg_full.with_(character_q_max=700000)
    rep = compute_report(1, 43867, cfg)
    assert rep.gamma == pytest.approx(0.5769573, abs=2e-5)
    rep = compute_report(5, 657931, cfg)
    assert rep.gamma == pytest.approx(0.5771160, abs=2e-5)


@pytest.mark.slow
def test_slow_find_q0_3():
    t0 = time.perf_counter()
    res = bounds.find_q0(3)
    assert res.q0 == 2089575931
    assert time.perf_counter() - t0 < 1800


@pytest.mark.slow
def test_slow_typeii_hi_cutoff(cache_dir):
    from eksigma.config import RunConfig

    cfg = RunConfig(prime_limit=10**8, cache_dir=cache_dir)
    assert compute_typeii(12, cfg).gamma == pytest.approx(0.216691, abs=1e-5)
    assert compute_typeii(16, cfg).gamma == pytest.approx(0.156105, abs=1e-5)
