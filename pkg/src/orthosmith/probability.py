"""Exact probabilities that conjugation keeps a uniform random matrix integral.

Every engine reduces to a product over pairs of invariant factors of
``norm(d_i d_j R + mR) / norm(mR)``; since Z and Z[i] are principal, the
ideal sum is generated by a gcd.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (ZZ, ZZI, DimensionError, DomainError, GaussianInteger, ValidationError,
                   as_matrix, gaussian_gcd)
from .ortho import RationalOrthogonalMatrix
from .smith import smith_normal_form

ENSEMBLES = ("symmetric", "asymmetric", "hermitian")


@dataclass(frozen=True)
class ProbabilityReport:
    """``value`` is the product of ``num/den`` over ``factors`` (1-based ``i, j``)."""

    value: Fraction
    factors: tuple[tuple[int, int, int, int], ...]

    @classmethod
    def from_factors(cls, factors) -> "ProbabilityReport":
        factors = tuple(factors)
        value = Fraction(1)
        for _, _, num, den in factors:
            value *= Fraction(num, den)
        return cls(value, factors)

    def factor_values(self) -> list[Fraction]:
        return [Fraction(num, den) for _, _, num, den in self.factors]


def _check_modulus(m: int):
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DomainError(f"modulus must be a positive integer, got {m!r}")


def _is_gaussian(values) -> bool:
    return any(isinstance(x, GaussianInteger) for x in values)


def prob_symmetric(d: Sequence[int], m: int) -> ProbabilityReport:
    """Uniform symmetric ``X`` mod ``m`` over Z, ``G`` with invariant factors ``d``."""
    _check_modulus(m)
    if len(d) == 0:
        raise DimensionError("empty invariant factor list")
    d = [ZZ.coerce(x) for x in d]
    n = len(d)
    return ProbabilityReport.from_factors(
        (i + 1, j + 1, ZZ.gcd(d[i] * d[j], m), m) for i in range(n) for j in range(i, n))


def prob_symmetric_gaussian(d: Sequence, m: int) -> ProbabilityReport:
    """Same as :func:`prob_symmetric` over Z[i]; ``norm(m Z[i]) = m^2``."""
    _check_modulus(m)
    if len(d) == 0:
        raise DimensionError("empty invariant factor list")
    d = [ZZI.coerce(x) for x in d]
    n = len(d)
    return ProbabilityReport.from_factors(
        (i + 1, j + 1, gaussian_gcd(d[i] * d[j], m).norm(), m * m)
        for i in range(n) for j in range(i, n))


def prob_asymmetric(d1: Sequence, d2: Sequence, m: int) -> ProbabilityReport:
    """Uniform ``Y`` without symmetry, event ``G1^T Y G2 == 0 mod m``.

    Full double product over all ``(i, j)``.  Gaussian factors switch to Z[i]
    norms.
    """
    _check_modulus(m)
    if len(d1) != len(d2):
        raise DimensionError(f"invariant factor lists differ in length: {len(d1)} vs {len(d2)}")
    if len(d1) == 0:
        raise DimensionError("empty invariant factor list")
    n = len(d1)
    if _is_gaussian(d1) or _is_gaussian(d2):
        a = [ZZI.coerce(x) for x in d1]
        b = [ZZI.coerce(x) for x in d2]
        factors = ((i + 1, j + 1, gaussian_gcd(a[i] * b[j], m).norm(), m * m)
                   for i in range(n) for j in range(n))
    else:
        a = [ZZ.coerce(x) for x in d1]
        b = [ZZ.coerce(x) for x in d2]
        factors = ((i + 1, j + 1, ZZ.gcd(a[i] * b[j], m), m) for i in range(n) for j in range(n))
    return ProbabilityReport.from_factors(factors)


def prob_hermitian(d: Sequence, m: int) -> ProbabilityReport:
    """Uniform Hermitian ``H`` over Z[i] mod ``m``, event ``G^* H G == 0 mod m``.

    Diagonal entries live in Z/mZ and contribute ``gcd(|d_i|^2, m) / m``;
    off-diagonal pairs contribute ``norm(gcd(conj(d_i) d_j, m)) / m^2``.
    """
    _check_modulus(m)
    if len(d) == 0:
        raise DimensionError("empty invariant factor list")
    d = [ZZI.coerce(x) for x in d]
    n = len(d)
    diag = [(i + 1, i + 1, ZZ.gcd(d[i].norm(), m), m) for i in range(n)]
    off = [(i + 1, j + 1, gaussian_gcd(d[i].conjugate() * d[j], m).norm(), m * m)
           for i in range(n) for j in range(i + 1, n)]
    return ProbabilityReport.from_factors(diag + off)


def as_orthogonal(Q) -> RationalOrthogonalMatrix:
    if isinstance(Q, RationalOrthogonalMatrix):
        return Q
    return RationalOrthogonalMatrix.from_rational(Q)


def prob_orthogonal(Q, ring: str = "Z") -> ProbabilityReport:
    """Probability that ``Q^T X Q`` is integral for ``X`` uniform mod ``level^2``.

    Only the pairs ``i <= n//2``, ``i <= j <= n-i`` are kept; orthogonality
    forces every other factor to be one.
    """
    Q = as_orthogonal(Q)
    ell, n = Q.level, Q.n
    smith = smith_normal_form(Q.G, ring=ring)
    R = ZZI if ring == "Zi" else ZZ
    den = R.norm(ell * ell)
    d = smith.d
    return ProbabilityReport.from_factors(
        (i + 1, j + 1, R.norm(d[i] * d[j]), den)
        for i in range(n // 2) for j in range(i, n - i - 1))


def probability_of(G, m: int, ring: str = "Z", ensemble: str = "symmetric") -> ProbabilityReport:
    """Dispatch on ring and ensemble for a fixed integral ``G`` and modulus ``m``."""
    G = as_matrix(G)
    if ensemble not in ENSEMBLES:
        raise ValidationError(f"ensemble: expected one of {ENSEMBLES}, got {ensemble!r}")
    if ring not in ("Z", "Zi"):
        raise ValidationError(f"ring: expected 'Z' or 'Zi', got {ring!r}")
    if ensemble == "hermitian":
        ring = "Zi"
    if ring == "Z" and G.ring == "Zi":
        raise ValidationError("Gaussian matrix requires --ring Zi")
    d = smith_normal_form(G, ring=ring).d
    if ensemble == "symmetric":
        return prob_symmetric_gaussian(d, m) if ring == "Zi" else prob_symmetric(d, m)
    if ensemble == "asymmetric":
        return prob_asymmetric(d, d, m)
    return prob_hermitian(d, m)
