from fractions import Fraction

import pytest

from orthosmith.core import ExactMatrix, GaussianInteger, SizeError, ValidationError
from orthosmith.ortho import enumerate_O3
from orthosmith.verify import (SampleConfig, effective_entry_bound, exhaustive_prob,
                               exhaustive_prob_gaussian, mc_prob, sample_N)

G5 = [[3, 4], [4, -3]]
Q5 = [[Fraction(3, 5), Fraction(4, 5)], [Fraction(4, 5), Fraction(-3, 5)]]


def test_exhaustive_examples():
    assert exhaustive_prob(G5, 25) == Fraction(1, 25)
    for m in (1, 2, 5, 7):
        assert exhaustive_prob(ExactMatrix.identity(2) * m, m) == 1
    assert exhaustive_prob([[2, 0], [0, 3]], 6) == Fraction(1, 6)


def test_exhaustive_gaussian_examples():
    assert exhaustive_prob_gaussian(G5, 5) == Fraction(1, 25)
    assert exhaustive_prob_gaussian(ExactMatrix.identity(2), 2, "hermitian") == Fraction(1, 16)
    assert exhaustive_prob_gaussian(ExactMatrix.identity(2), 1, "hermitian") == 1
    for m in (1, 2, 3):
        assert exhaustive_prob_gaussian(ExactMatrix.zeros(2), m, "symmetric") == 1
        assert exhaustive_prob_gaussian(ExactMatrix.zeros(2), m, "hermitian") == 1


def test_exhaustive_hermitian_bruteforce_loop():
    # plain python loop over all Hermitian H mod 2 for G = diag(1, 1+i)
    G = [[GaussianInteger(1), GaussianInteger(0)], [GaussianInteger(0), GaussianInteger(1, 1)]]
    hits = total = 0
    for a in range(2):
        for b in range(2):
            for xr in range(2):
                for xi in range(2):
                    # G^* H G with G diagonal: entries conj(g_i) H_ij g_j
                    h = [[GaussianInteger(a), GaussianInteger(xr, xi)],
                         [GaussianInteger(xr, -xi), GaussianInteger(b)]]
                    ok = all(((G[i][i].conjugate() * h[i][j] * G[j][j]).re % 2 == 0 and
                              (G[i][i].conjugate() * h[i][j] * G[j][j]).im % 2 == 0)
                             for i in range(2) for j in range(2))
                    hits += ok
                    total += 1
    assert exhaustive_prob_gaussian(G, 2, "hermitian") == Fraction(hits, total) == Fraction(1, 4)


def test_size_errors():
    with pytest.raises(SizeError):
        exhaustive_prob(ExactMatrix.identity(3), 20, "asymmetric")
    with pytest.raises(SizeError):
        exhaustive_prob_gaussian(ExactMatrix.identity(3), 4, "symmetric")
    with pytest.raises(ValidationError):
        exhaustive_prob(G5, 5, "hermitian")


def test_sample_config_validation():
    with pytest.raises(ValidationError):
        SampleConfig(seed=-1, samples=10, entry_bound=5)
    with pytest.raises(ValidationError):
        SampleConfig(seed=1, samples=0, entry_bound=5)
    with pytest.raises(ValidationError):
        SampleConfig(seed=1, samples=10, entry_bound=0)


def test_entry_bound_rounding():
    assert effective_entry_bound(25_000, 25) == 25_000
    assert effective_entry_bound(1, 25) == 25
    assert effective_entry_bound(26, 25) == 50


def test_mc_identity_is_certain():
    est = mc_prob(ExactMatrix.identity(3), SampleConfig(7, 1000, 13))
    assert est.mean == 1 and est.stderr == 0


def test_mc_deterministic_and_thread_independent():
    cfg = SampleConfig(seed=2 ** 63 + 5, samples=600_000, entry_bound=25_000)
    a = mc_prob(Q5, cfg, threads=1)
    b = mc_prob(Q5, cfg, threads=1)
    c = mc_prob(Q5, cfg, threads=4)
    assert a == b == c


def test_mc_example_2x2():
    est = mc_prob(Q5, SampleConfig(1, 10 ** 6, 25 * 10 ** 3))
    assert est.within(0.04)


def test_mc_O3_level3():
    Q = enumerate_O3(3)[17]
    est = mc_prob(Q, SampleConfig(3, 10 ** 6, 9 * 10 ** 3))
    assert est.within(1 / 27)


def test_sample_N_even_level_is_zero():
    res = sample_N(3, 2, SampleConfig(1, 100, 100))
    assert res.mean == 0 and res.all_divisible


def test_sample_N_deterministic():
    cfg = SampleConfig(9, 20_000, 25_000)
    assert sample_N(2, 5, cfg, threads=1) == sample_N(2, 5, cfg, threads=3)


def test_sample_N_level_one_counts_all_signed_permutations():
    mean, stderr, divisible = sample_N(2, 1, SampleConfig(1, 50, 10))
    assert mean == 8 and stderr == 0 and divisible
