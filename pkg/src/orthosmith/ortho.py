"""Rational orthogonal matrices of a given level in dimensions 2 and 3.

Dimension 2 comes from primitive representations ``a^2 + b^2 = level^2``;
dimension 3 from primitive integer quaternions through the Euler-Rodrigues
map, whose denominator ``a^2+b^2+c^2+d^2`` is the level times 1, 2 or 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product

from .core import (DomainError, ExactMatrix, ValidationError, as_matrix, factorize,
                   is_scaled_orthogonal, lcm_denominators)


@dataclass(frozen=True)
class Quaternion4:
    a: int
    b: int
    c: int
    d: int

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def norm(self) -> int:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    @property
    def is_primitive(self) -> bool:
        return math.gcd(*self.coords) == 1

    def __neg__(self) -> "Quaternion4":
        return Quaternion4(-self.a, -self.b, -self.c, -self.d)

    def normalized(self) -> "Quaternion4":
        """The representative of ``{q, -q}`` whose first nonzero coordinate is positive."""
        for x in self.coords:
            if x:
                return self if x > 0 else -self
        return self

    @property
    def is_normalized(self) -> bool:
        return self.normalized() == self


@dataclass(frozen=True)
class RationalOrthogonalMatrix:
    """An orthogonal ``Q`` stored as its integer form ``G = level * Q``."""

    G: ExactMatrix
    level: int

    @cached_property
    def Q(self) -> ExactMatrix:
        return self.G.map(lambda x: Fraction(x, self.level))

    @property
    def n(self) -> int:
        return self.G.nrows

    @classmethod
    def from_rational(cls, Q) -> "RationalOrthogonalMatrix":
        Q = as_matrix(Q)
        if not Q.is_square:
            raise ValidationError(f"orthogonal matrix must be square, got {Q.shape}")
        ell = level(Q)
        G = Q.map(lambda x: int(Fraction(x) * ell))
        if not is_scaled_orthogonal(G, ell):
            raise ValidationError("matrix is not orthogonal: Q Q^T != I")
        return cls(G, ell)

    def __neg__(self) -> "RationalOrthogonalMatrix":
        return RationalOrthogonalMatrix(self.G.map(int.__neg__), self.level)

    @property
    def key(self) -> tuple:
        return self.G.entries


def level(Q) -> int:
    """Least positive ``l`` with ``l * Q`` integral: the lcm of the entry denominators."""
    Q = as_matrix(Q)
    if Q.nrows == 0 or Q.ncols == 0:
        raise ValidationError("level of an empty matrix")
    return lcm_denominators(Q.entries)


def primitive_reps_two_squares(M: int) -> frozenset[tuple[int, int]]:
    """All ``(a, b)`` with ``a^2 + b^2 = M`` and ``gcd(a, b) = 1``, signs and order included."""
    if M < 1:
        raise DomainError(f"M must be positive, got {M}")
    out = set()
    for a in range(math.isqrt(M) + 1):
        b2 = M - a * a
        b = math.isqrt(b2)
        if b * b == b2 and math.gcd(a, b) == 1:
            for sa, sb in product((1, -1), repeat=2):
                out.add((sa * a, sb * b))
    return frozenset(out)


def _four_square_cores(M: int):
    # nondecreasing nonnegative (a, b, c, d) with a^2+b^2+c^2+d^2 == M
    a = 0
    while 4 * a * a <= M:
        b = a
        while a * a + 3 * b * b <= M:
            c = b
            while a * a + b * b + 2 * c * c <= M:
                r = M - a * a - b * b - c * c
                d = math.isqrt(r)
                if d * d == r and d >= c:
                    yield (a, b, c, d)
                c += 1
            b += 1
        a += 1


def primitive_reps_four_squares(M: int) -> frozenset[Quaternion4]:
    """All primitive ``(a, b, c, d)`` with ``a^2+b^2+c^2+d^2 = M``, all signs and orders."""
    if M < 1:
        raise DomainError(f"M must be positive, got {M}")
    out = set()
    for core in _four_square_cores(M):
        if math.gcd(*core) != 1:
            continue
        for perm in set(permutations(core)):
            nz = [i for i, x in enumerate(perm) if x]
            for signs in product((1, -1), repeat=len(nz)):
                v = list(perm)
                for i, s in zip(nz, signs):
                    v[i] *= s
                out.add(Quaternion4(*v))
    return frozenset(out)


def count_r4p(M: int) -> int:
    """Closed-form count of primitive four-square representations of ``M`` (8 does not divide M)."""
    if M < 2:
        raise DomainError(f"formula stated for M >= 2, got {M}")
    if M % 8 == 0:
        raise DomainError(f"formula not available for M divisible by 8, got {M}")
    if M % 2:
        c4 = 8
    elif M % 4:
        c4 = 12
    else:
        c4 = 4
    value = Fraction(c4 * M)
    for p in factorize(M).primes:
        if p != 2:
            value *= Fraction(p + 1, p)
    assert value.denominator == 1
    return int(value)


def euler_rodrigues_numerators(q: Quaternion4) -> tuple[tuple[int, ...], ...]:
    a, b, c, d = q.coords
    return (
        (a*a + b*b - c*c - d*d, 2*(b*c - a*d), 2*(b*d + a*c)),
        (2*(a*d + b*c), a*a - b*b + c*c - d*d, 2*(c*d - a*b)),
        (2*(b*d - a*c), 2*(a*b + c*d), a*a - b*b - c*c + d*d),
    )


def euler_rodrigues_gcd(q: Quaternion4) -> int:
    """``g = gcd(S, numerator entries)``; the level is ``S // g``."""
    num = euler_rodrigues_numerators(q)
    return math.gcd(q.norm, *(x for row in num for x in row))


def euler_rodrigues(q: Quaternion4) -> RationalOrthogonalMatrix:
    """The rotation ``num(q) / S`` with ``S = |q|^2``, reduced to its level."""
    S = q.norm
    if S == 0:
        raise DomainError("zero quaternion")
    num = euler_rodrigues_numerators(q)
    g = euler_rodrigues_gcd(q)
    return RationalOrthogonalMatrix(ExactMatrix(tuple(tuple(x // g for x in row) for row in num)), S // g)


@lru_cache(maxsize=4096)
def _enumerate_O2(ell: int) -> tuple[RationalOrthogonalMatrix, ...]:
    found = {}
    for a, b in primitive_reps_two_squares(ell * ell):
        for G in (((a, b), (-b, a)), ((a, b), (b, -a))):
            found[(a, b, *G[1])] = RationalOrthogonalMatrix(ExactMatrix(G), ell)
    return tuple(found[k] for k in sorted(found))


def enumerate_O2(ell: int) -> list[RationalOrthogonalMatrix]:
    """Every 2x2 rational orthogonal matrix of level exactly ``ell``, sorted by entries."""
    if ell < 1:
        raise DomainError(f"level must be >= 1, got {ell}")
    return list(_enumerate_O2(ell))


def _normalized_primitive_tuples(M: int):
    # primitive 4-tuples of norm M whose first nonzero coordinate is positive
    for core in _four_square_cores(M):
        if math.gcd(*core) != 1:
            continue
        for perm in set(permutations(core)):
            nz = [i for i, x in enumerate(perm) if x]
            for signs in product((1, -1), repeat=len(nz) - 1):
                v = list(perm)
                for i, s in zip(nz[1:], signs):
                    v[i] *= s
                yield tuple(v)


@lru_cache(maxsize=1024)
def _enumerate_O3(ell: int) -> tuple[RationalOrthogonalMatrix, ...]:
    if ell % 2 == 0:
        return ()
    keys = set()
    for S in (ell, 2 * ell, 4 * ell):
        g = S // ell
        for a, b, c, d in _normalized_primitive_tuples(S):
            num = (a*a + b*b - c*c - d*d, 2*(b*c - a*d), 2*(b*d + a*c),
                   2*(a*d + b*c), a*a - b*b + c*c - d*d, 2*(c*d - a*b),
                   2*(b*d - a*c), 2*(a*b + c*d), a*a - b*b - c*c + d*d)
            if math.gcd(S, *num) != g:
                continue
            key = tuple(x // g for x in num)
            keys.add(key)
            keys.add(tuple(-x for x in key))
    return tuple(RationalOrthogonalMatrix(ExactMatrix._trusted((k[0:3], k[3:6], k[6:9])), ell)
                 for k in sorted(keys))


def enumerate_O3(ell: int) -> list[RationalOrthogonalMatrix]:
    """Every 3x3 rational orthogonal matrix of level exactly ``ell``, sorted by entries.

    Rotations come from sign-normalized primitive quaternions of norm
    ``ell``, ``2 ell`` or ``4 ell``; the reflections are their negatives.
    """
    if ell < 1:
        raise DomainError(f"level must be >= 1, got {ell}")
    return list(_enumerate_O3(ell))


def enumerate_On(n: int, ell: int) -> list[RationalOrthogonalMatrix]:
    if n == 2:
        return enumerate_O2(ell)
    if n == 3:
        return enumerate_O3(ell)
    raise DomainError(f"enumeration only available for n in (2, 3), got {n}")
