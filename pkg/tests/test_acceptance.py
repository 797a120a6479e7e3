"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its measured runtime (run pytest with -s to see them).

Criteria cover the randomized derivative-law corpus, the multiplicity mass
bound, interpolation existence, desk-scale Kakeya minima, the statistical
reduction, the merger guarantee at the flagship parameters, decoder/oracle
equivalence with list-size bounds, the weighted monomial count, and CLI
byte determinism.
"""

import itertools
import json
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from ffmult import selftest as st
from ffmult.ff import field_make, rng_stream
from ffmult.kakeya import (
    exhaustive_min_kakeya,
    full_space_reduction_instance,
    is_kakeya,
    kakeya_lower_bounds,
    parse_prime_power,
    statistical_kakeya_check,
)
from ffmult.merger import verify_merger_theorem
from ffmult import rs_decode as rs

SEED = 20260809
TRIALS = 1000


def report(criterion: int, detail: str) -> None:
    print(f"PASS criterion {criterion}: {detail}")


def run_checks(names, trials=TRIALS, seed=SEED):
    registry = dict(st.CHECKS)
    for offset, name in enumerate(names):
        rng = rng_stream(seed, 1000 + offset)
        registry[name](rng, trials)  # raises on any failure


# ---------------------------------------------------------------------------

def test_criterion_1_derivative_law_suite():
    t0 = time.time()
    run_checks(
        [
            "hasse-additivity",
            "hasse-homogeneity",
            "hasse-homogeneous-part",
            "hasse-iterated",
            "mult-under-derivative",
            "mult-composition",
            "line-restriction",
        ]
    )
    elapsed = time.time() - t0
    assert elapsed < 30, f"law suite took {elapsed:.1f}s"
    report(1, f"7 laws x {TRIALS} randomized instances, zero failures, {elapsed:.1f}s")


def test_criterion_2_schwartz_zippel_mass():
    t0 = time.time()
    run_checks(["schwartz-zippel-mass", "sz-zero-accounting"])
    # the tight instance is re-asserted explicitly
    from ffmult.mvpoly import MultiPoly, multiplicity_mass

    f3 = field_make(3)
    P = MultiPoly(f3, 2, {(1, 1): 1})
    mass = multiplicity_mass(P, range(3))
    assert mass == 6 == P.degree * 3 ** (2 - 1)
    report(2, f"mass bound over the randomized corpus incl. deg > q; "
              f"tight X1X2/F_3 case = 6, {time.time() - t0:.1f}s")


def test_criterion_3_interpolation_existence():
    t0 = time.time()
    run_checks(["interpolation-existence"])
    elapsed = time.time() - t0
    assert elapsed < 60, f"interpolation suite took {elapsed:.1f}s"
    report(3, f"100 randomized problems verified independently, {elapsed:.1f}s")


def test_criterion_4_kakeya_minima():
    t0 = time.time()
    results = {}
    for q, n, floor in [(2, 2, 2), (3, 2, 4)]:
        crude, main = kakeya_lower_bounds(q, n)
        pts, size = exhaustive_min_kakeya(q, n)
        assert size >= floor and size >= crude and size >= main
        spec = parse_prime_power(q)
        assert is_kakeya(spec, n, pts).ok
        for p in pts:
            assert not is_kakeya(spec, n, pts - {p}).ok
        results[(q, n)] = size
    elapsed = time.time() - t0
    assert elapsed < 120, f"kakeya search took {elapsed:.1f}s"
    report(4, f"minimum sizes {results}, bounds and minimality certified, {elapsed:.1f}s")


def test_criterion_5_statistical_reduction():
    t0 = time.time()
    for q in (2, 3, 4, 5, 7):
        spec = parse_prime_power(q)
        for n in (1, 2):
            rep = statistical_kakeya_check(full_space_reduction_instance(spec, n))
            expected = Fraction(q * q, 2 * q - 1) ** n
            assert rep["bound"] == expected, f"bound mismatch at q={q}, n={n}"
            assert rep["bound"] == kakeya_lower_bounds(q, n)[1]
            assert rep["hypothesis_ok"] and rep["ok"]
    report(5, f"lam=eta=1, degree-1 reduction == (q^2/(2q-1))^n exactly, "
              f"{time.time() - t0:.1f}s")


def test_criterion_6_merger_flagship():
    t0 = time.time()
    for n in (1, 2):
        t_n = time.time()
        rep = verify_merger_theorem(Fraction(1, 2), Fraction(1, 2), 2, n)
        elapsed_n = time.time() - t_n
        assert rep["seed_length"] == 6 and rep["q"] == 64
        assert rep["entropy_threshold_bits"] == 3 * n
        assert rep["all_ok"]
        for entry in rep["sources"]:
            assert entry["distance"] <= Fraction(1, 2)
        if n == 2:
            assert elapsed_n < 60, f"n=2 enumeration took {elapsed_n:.1f}s"
    report(6, f"d=6, q=64, n in (1,2): every adversarial source within 1/2, "
              f"{time.time() - t0:.1f}s")


def test_criterion_7_rs_oracle_equivalence():
    t0 = time.time()
    eps = Fraction(1, 16)
    f5 = field_make(5)
    alphas5 = tuple(range(5))
    params5 = rs.choose_params(
        rs.RSInstance(f5, alphas5, (0,) * 5, k=1, t=3), eps
    )
    checked = 0
    for betas in itertools.product(range(5), repeat=5):
        inst = rs.RSInstance(f5, alphas5, betas, k=1, t=3)
        assert rs.list_decode(inst, params=params5) == rs.brute_force_decode(inst)
        checked += 1
    assert checked == 3125
    worked = rs.RSInstance(f5, alphas5, (0, 1, 2, 0, 0), k=1, t=3)
    assert rs.list_decode(worked, params=params5) == [(0, 0), (0, 1)]

    words = 0
    for q, k, t in [(7, 1, 4), (7, 2, 5)]:
        spec = field_make(q)
        alphas = tuple(range(q))
        rng = rng_stream(SEED, 7000 + 10 * k)
        params = rs.choose_params(
            rs.RSInstance(spec, alphas, (0,) * q, k=k, t=t), eps
        )
        for _ in range(1000):
            betas = tuple(int(b) for b in rng.integers(q, size=q))
            inst = rs.RSInstance(spec, alphas, betas, k=k, t=t)
            assert rs.list_decode(inst, params=params) == rs.brute_force_decode(inst)
            words += 1
    elapsed = time.time() - t0
    assert elapsed < 300, f"decoder equivalence took {elapsed:.1f}s"
    report(7, f"3125 exhaustive q=5 words + {words} random q=7 words, "
              f"worked example = {{0, X}}, {elapsed:.1f}s")


def test_criterion_8_list_size_theorem():
    t0 = time.time()
    assert rs.list_size_bound(Fraction(3, 5), Fraction(1, 5)) == Fraction(15, 2)
    configs = [(5, 1, 3, None), (7, 1, 4, 2000), (7, 2, 5, 2000)]
    worst = {}
    for q, k, t, sample in configs:
        spec = field_make(q)
        alphas = tuple(range(q))
        gamma, rate = Fraction(t, q), Fraction(k, q)
        assert gamma * gamma > rate
        bound = rs.list_size_bound(gamma, rate)
        biggest = 0
        if sample is None:
            words = itertools.product(range(q), repeat=q)
        else:
            rng = rng_stream(SEED, 8000 + 10 * k)
            words = (
                tuple(int(b) for b in rng.integers(q, size=q)) for _ in range(sample)
            )
        for betas in words:
            inst = rs.RSInstance(spec, alphas, tuple(betas), k=k, t=t)
            size = len(rs.brute_force_decode(inst))
            assert size <= bound, f"list size {size} > {bound} at {betas}"
            biggest = max(biggest, size)
        worst[(q, k, t)] = (biggest, str(bound))
    report(8, f"ground-truth list sizes vs exact bounds: {worst}, "
              f"{time.time() - t0:.1f}s")


def test_criterion_9_monomial_count_fact():
    t0 = time.time()
    run_checks(["monomial-count-fact"])
    elapsed = time.time() - t0
    assert elapsed < 5, f"count fact sweep took {elapsed:.1f}s"
    report(9, f"N(k,d,theta) > theta(2-theta)d^2/2k for 1<=k<d<=30, "
              f"theta in tenths, {elapsed:.1f}s")


CLI_CASES = [
    ("sz-mass", "--field", "3", "--n", "2", "--poly", "1:1,1"),
    ("kakeya-search", "--field", "3", "--n", "2"),
    ("rs-bound", "--gamma", "3/5", "--rate", "1/5"),
    ("merger-verify", "--delta", "1/2", "--eps", "1/2", "--lambda", "2", "--n", "2"),
    ("selftest", "--seed", "7", "--trials", "120"),
]


def _run(args):
    proc = subprocess.run(
        [sys.executable, "-m", "ffmult.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    return proc.stdout


def test_criterion_10_cli_determinism():
    t0 = time.time()
    for args in CLI_CASES:
        first = _run(args)
        second = _run(args)
        assert first == second, f"outputs differ across runs for {args}"
        jobs = _run([*args, "--jobs", "4"])
        assert first == jobs, f"outputs differ across job counts for {args}"
    selftest_out = json.loads(_run(CLI_CASES[-1]))
    assert selftest_out["all_ok"]
    report(10, f"{len(CLI_CASES)} commands byte-identical across runs and "
               f"job counts, {time.time() - t0:.1f}s")
