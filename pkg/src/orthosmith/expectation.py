"""Closed-form expectations of N_n(level) for n = 2, 3 and the limiting bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator

from .core import DomainError, FactoredInteger, factorize

__all__ = [
    "FactoredInteger", "FigureRow", "apery", "catalan", "expected_N", "expected_N2",
    "expected_N3", "figure_series", "limit_constants", "non_monotone_witness",
    "partial_bound_sum", "partial_bound_sums", "pi_decimal", "signed_permutation_count",
]


def signed_permutation_count(n: int) -> int:
    return 2 ** n * math.factorial(n)


def expected_N2(ell: int) -> Fraction:
    """``2^(r+3) / level^2`` when every prime of ``level`` is 1 mod 4, else 0."""
    if ell < 2:
        raise DomainError(f"expectation defined for level >= 2, got {ell}")
    f = factorize(ell)
    if any(p % 4 != 1 for p in f.primes):
        return Fraction(0)
    return Fraction(2 ** (f.num_distinct + 3), ell * ell)


def expected_N3(ell: int) -> Fraction:
    """``48 / level^2 * prod_{p | level} (1 + 1/p)`` for odd ``level``, else 0."""
    if ell < 2:
        raise DomainError(f"expectation defined for level >= 2, got {ell}")
    if ell % 2 == 0:
        return Fraction(0)
    value = Fraction(48, ell * ell)
    for p in factorize(ell).primes:
        value *= Fraction(p + 1, p)
    return value


def expected_N(n: int, ell: int) -> Fraction:
    if n == 2:
        return expected_N2(ell)
    if n == 3:
        return expected_N3(ell)
    raise DomainError(f"closed form only for n in (2, 3), got {n}")


def partial_bound_sums(n: int, L: int) -> Iterator[tuple[int, Fraction]]:
    """Yield ``(l, sum_{k=2}^{l} E[N_n(k)] / (2^n n!))`` for ``l = 2..L``, exactly."""
    if n not in (2, 3):
        raise DomainError(f"n must be 2 or 3, got {n}")
    if L < 2:
        raise DomainError(f"L must be >= 2, got {L}")
    scale = signed_permutation_count(n)
    total = Fraction(0)
    for ell in range(2, L + 1):
        e = expected_N(n, ell)
        if e:
            total += e / scale
        yield ell, total


def partial_bound_sum(n: int, L: int) -> Fraction:
    """Union bound ``sum_{l=2}^{L} E[N_n(l)] / (2^n n!)`` as an exact rational."""
    total = Fraction(0)
    for _, total in partial_bound_sums(n, L):
        pass
    return total


# ---------------------------------------------------------------------------
# Analytic constants, computed in Decimal with explicit error control


def _arctan_inv(x: int, eps: Decimal) -> Decimal:
    # arctan(1/x) by its alternating Taylor series; truncation error < first omitted term
    x2 = x * x
    power = Decimal(1) / x
    total = power
    k, sign = 1, -1
    while True:
        power /= x2
        term = power / (2 * k + 1)
        if term < eps:
            return total
        total += sign * term
        sign = -sign
        k += 1


def pi_decimal(digits: int = 40) -> Decimal:
    """Machin's formula ``pi = 16 atan(1/5) - 4 atan(1/239)``."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        eps = Decimal(10) ** -(digits + 5)
        value = 16 * _arctan_inv(5, eps) - 4 * _arctan_inv(239, eps)
    return +value


def catalan(digits: int = 40) -> Decimal:
    """Catalan's constant via Ramanujan's accelerated series.

    ``G = pi/8 log(2 + sqrt 3) + 3/8 sum_k (k!)^2 / ((2k)! (2k+1)^2)``; the
    summand ratio tends to 1/4 so the tail is at most a third of the last term.
    """
    with localcontext() as ctx:
        ctx.prec = digits + 10
        eps = Decimal(10) ** -(digits + 5)
        pi = pi_decimal(digits + 10)
        three = Decimal(3)
        head = pi / 8 * (2 + three.sqrt()).ln()
        ratio = Decimal(1)  # (k!)^2 / (2k)!
        total = Decimal(0)
        k = 0
        while True:
            term = ratio / (2 * k + 1) ** 2
            total += term
            if term < eps:
                break
            k += 1
            ratio = ratio * k * k / ((2 * k - 1) * (2 * k))
        value = head + three / 8 * total
    return +value


def apery(terms: int = 20_000, digits: int = 30) -> tuple[Decimal, Decimal]:
    """``zeta(3)`` by direct summation of ``terms`` terms plus an integral tail estimate.

    The tail ``sum_{k>N} k^-3`` lies in ``[1/(2(N+1)^2), 1/(2N^2)]``; the
    midpoint is returned with half the interval width as a rigorous error bound.
    """
    with localcontext() as ctx:
        ctx.prec = digits + 10
        N = terms
        head = sum(Decimal(1) / (k * k * k) for k in range(1, N + 1))
        lo = Decimal(1) / (2 * (N + 1) ** 2)
        hi = Decimal(1) / (2 * N * N)
        value = head + (lo + hi) / 2
        err = (hi - lo) / 2
    return +value, +err


def limit_constants() -> tuple[float, float]:
    """``(12 G / pi^2 - 1, 105 zeta(3) / pi^4 - 1)``."""
    with localcontext() as ctx:
        ctx.prec = 40
        pi = pi_decimal(40)
        bound2 = 12 * catalan(40) / pi ** 2 - 1
        bound3 = 105 * apery()[0] / pi ** 4 - 1
    return float(bound2), float(bound3)


# ---------------------------------------------------------------------------
# Figure data


@dataclass(frozen=True)
class FigureRow:
    level: int
    expectation: Fraction

    @property
    def expectation_float(self) -> float:
        return float(self.expectation)


def figure_series(n: int, L_max: int) -> list[FigureRow]:
    """Rows ``(level, E[N_n(level)])`` for every level in ``[2, L_max]`` with nonzero expectation."""
    if n not in (2, 3):
        raise DomainError(f"n must be 2 or 3, got {n}")
    if L_max < 2:
        return []
    rows = []
    for ell in range(2, L_max + 1):
        e = expected_N(n, ell)
        if e:
            rows.append(FigureRow(ell, e))
    return rows


def non_monotone_witness(rows: list[FigureRow]) -> tuple[FigureRow, FigureRow] | None:
    """First consecutive pair of rows whose expectation increases with the level."""
    for a, b in zip(rows, rows[1:]):
        if 0 < a.expectation < b.expectation:
            return a, b
    return None
