"""End-to-end acceptance checks, one test per criterion.

Each test asserts its own wall-clock budget; ``conftest.py`` prints a PASS/FAIL
line per criterion at the end of the run.
"""
import random
import time
from fractions import Fraction

import pytest

from orthosmith.core import ExactMatrix, GaussianInteger, factorize
from orthosmith.expectation import (expected_N2, expected_N3, figure_series, limit_constants,
                                    non_monotone_witness, partial_bound_sums)
from orthosmith import ortho
from orthosmith.ortho import enumerate_O2, enumerate_O3
from orthosmith.probability import (prob_asymmetric, prob_hermitian, prob_orthogonal,
                                    prob_symmetric, prob_symmetric_gaussian)
from orthosmith.smith import smith_normal_form
from orthosmith.verify import (EXHAUSTIVE_BUDGET, SampleConfig, exhaustive_prob,
                               exhaustive_prob_gaussian, mc_prob, sample_N)

pytestmark = pytest.mark.acceptance

F = Fraction
Q5 = [[F(3, 5), F(4, 5)], [F(4, 5), F(-3, 5)]]
G5 = [[3, 4], [4, -3]]


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, budget {self.limit}s"


def test_c01_example_2x2_exact():
    with Clock(1.0):
        exact = prob_orthogonal(Q5).value
        oracle = exhaustive_prob(G5, 25)
    assert exact == F(1, 25)
    assert oracle == exact


def test_c02_example_2x2_gaussian_mc(record_property):
    with Clock(120):
        exact = prob_symmetric_gaussian((1, 25), 25).value
        est = mc_prob(Q5, SampleConfig(seed=20240601, samples=10 ** 7, entry_bound=25_000),
                      ring="Zi")
    assert exact == F(1, 625)
    record_property("mc", f"{est.mean:.6f}+-{est.stderr:.1e}")
    assert est.within(float(exact), k_sigma=5)


def test_c03_O2_counts():
    ortho._enumerate_O2.cache_clear()
    with Clock(10):
        for ell in range(1, 1001):
            primes = factorize(ell).primes
            expected = 2 ** (len(primes) + 3) if all(p % 4 == 1 for p in primes) else 0
            assert len(enumerate_O2(ell)) == expected, ell
    assert len(enumerate_O2(5)) == 16
    assert len(enumerate_O2(65)) == 32
    for ell in (2, 3, 4, 6, 7):
        assert enumerate_O2(ell) == []


def test_c04_O3_counts():
    ortho._enumerate_O3.cache_clear()
    with Clock(60):
        for ell in range(1, 201):
            mats = enumerate_O3(ell)
            if ell % 2 == 0:
                assert mats == [], ell
                continue
            expected = F(48 * ell)
            for p in factorize(ell).primes:
                expected *= 1 + F(1, p)
            assert len(mats) == expected, ell
    assert len(enumerate_O3(3)) == 192
    assert len(enumerate_O3(5)) == 288


def test_c05_expectation_identities():
    checked = 0
    for ell in range(2, 201):
        n2, n3 = len(enumerate_O2(ell)), len(enumerate_O3(ell))
        assert expected_N2(ell) * ell ** 2 == n2, ell
        assert expected_N3(ell) * ell ** 3 == n3, ell
        checked += bool(n2) + bool(n3)
    assert checked > 100


def test_c06_sampling(record_property):
    with Clock(300):
        r2 = sample_N(2, 5, SampleConfig(seed=11, samples=10 ** 5, entry_bound=25_000))
        r3 = sample_N(3, 3, SampleConfig(seed=12, samples=10 ** 4, entry_bound=9_000))
    record_property("n2", f"{r2.mean:.4f}+-{r2.stderr:.4f}")
    record_property("n3", f"{r3.mean:.3f}+-{r3.stderr:.3f}")
    assert abs(r2.mean - 16 / 25) <= 5 * r2.stderr
    assert abs(r3.mean - 64 / 9) <= 5 * r3.stderr
    assert r2.all_divisible and r2.divisor == 8
    assert r3.all_divisible and r3.divisor == 48


def test_c07_bounds():
    with Clock(30):
        bound2, bound3 = limit_constants()
        assert f"{bound2:.5f}" == "0.11368"
        assert f"{bound3:.5f}" == "0.29573"
        for n, bound in ((2, bound2), (3, bound3)):
            prev, last = F(0), None
            for L, s in partial_bound_sums(n, 10 ** 4):
                assert prev <= s < bound
                prev, last = s, L
            assert last == 10 ** 4


def test_c08_structure_theorems():
    cases = [(2, ell, enumerate_O2(ell)) for ell in range(1, 51)]
    cases += [(3, ell, enumerate_O3(ell)) for ell in range(1, 26, 2)]
    seen = 0
    for n, ell, mats in cases:
        for Q in mats:
            s = smith_normal_form(Q.G)
            D = (1,) + s.D_ideal
            for i in range(n):
                assert s.d[i] * s.d[n - 1 - i] == ell * ell
            for i in range(n // 2 + 1):
                assert D[n - i] == ell ** (n - 2 * i) * D[i]
            if n == 3:
                assert s.d == (1, ell, ell * ell)
            seen += 1
    assert seen == sum(len(mats) for _, _, mats in cases)


def _rand_int_matrix(rng, n, bound=9):
    return ExactMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])


def _rand_gauss_matrix(rng, n, bound=4):
    return ExactMatrix([[GaussianInteger(rng.randint(-bound, bound), rng.randint(-bound, bound))
                         for _ in range(n)] for _ in range(n)])


def _instances(rng, count, make, state_exponent, moduli_cap):
    """``count`` random ``(G, m)`` pairs with ``m ** state_exponent(n)`` inside the budget."""
    out = []
    while len(out) < count:
        n = rng.randint(1, 3)
        m_max = min(moduli_cap, int(round(EXHAUSTIVE_BUDGET ** (1 / state_exponent(n)))))
        m = rng.randint(1, max(1, m_max))
        if m ** state_exponent(n) <= EXHAUSTIVE_BUDGET:
            out.append((make(rng, n), m))
    return out


def test_c09_oracle_equivalence(record_property):
    rng = random.Random(909)
    counts = {}
    with Clock(300):
        for G, m in _instances(rng, 60, _rand_int_matrix, lambda n: n * (n + 1) // 2, 15):
            d = smith_normal_form(G).d
            assert exhaustive_prob(G, m, "symmetric") == prob_symmetric(d, m).value, (G, m)
            counts["symmetric"] = counts.get("symmetric", 0) + 1
        for G, m in _instances(rng, 60, _rand_int_matrix, lambda n: n * n, 12):
            G2 = _rand_int_matrix(rng, G.nrows)
            d1, d2 = smith_normal_form(G).d, smith_normal_form(G2).d
            assert exhaustive_prob(G, m, "asymmetric", G2=G2) == prob_asymmetric(d1, d2, m).value
            counts["asymmetric"] = counts.get("asymmetric", 0) + 1
        for G, m in _instances(rng, 60, _rand_gauss_matrix, lambda n: n * (n + 1), 6):
            d = smith_normal_form(G).d
            assert exhaustive_prob_gaussian(G, m, "symmetric") == prob_symmetric_gaussian(d, m).value
            counts["gaussian"] = counts.get("gaussian", 0) + 1
        for G, m in _instances(rng, 60, _rand_gauss_matrix, lambda n: n * n, 6):
            d = smith_normal_form(G).d
            assert exhaustive_prob_gaussian(G, m, "hermitian") == prob_hermitian(d, m).value
            counts["hermitian"] = counts.get("hermitian", 0) + 1
    record_property("instances", counts)
    assert min(counts.values()) >= 50


def test_c10_figure_non_monotone(record_property):
    with Clock(30):
        rows2 = figure_series(2, 10 ** 4)
        rows3 = figure_series(3, 10 ** 3)
    for n, rows in ((2, rows2), (3, rows3)):
        w = non_monotone_witness(rows)
        assert w is not None
        a, b = w
        assert a.level < b.level and a.expectation < b.expectation
        print(f"n={n}: E({a.level}) = {a.expectation} < E({b.level}) = {b.expectation}")
        record_property(f"witness_n{n}", f"E({a.level})={a.expectation}<E({b.level})={b.expectation}")
