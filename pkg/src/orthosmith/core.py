"""Exact scalars and dense matrices over Z, Q and Z[i].

Python ``int`` is the integer type and :class:`fractions.Fraction` the
rational type; Gaussian integers get their own immutable class.  Everything
here is exact, there is no floating point anywhere in this module.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class OrthoSmithError(ValueError):
    """Base class for all library errors."""


class DimensionError(OrthoSmithError):
    """Shapes do not fit (non-square input, length mismatch, ...)."""


class ValidationError(OrthoSmithError):
    """Input is well-shaped but violates a precondition (e.g. not orthogonal)."""


class DomainError(OrthoSmithError):
    """Argument outside the range where a formula is defined."""


class SizeError(OrthoSmithError):
    """Requested computation exceeds its combinatorial budget."""


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInteger:
    re: int
    im: int = 0

    def __post_init__(self):
        if not isinstance(self.re, int) or not isinstance(self.im, int):
            raise TypeError("GaussianInteger parts must be int")

    @classmethod
    def coerce(cls, x) -> "GaussianInteger":
        if isinstance(x, GaussianInteger):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise TypeError(f"{x} is not integral")
            return cls(x.numerator, 0)
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise TypeError(f"{x} is not a Gaussian integer")
            return cls(int(x.real), int(x.imag))
        return NotImplemented

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def __add__(self, other):
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        return GaussianInteger(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        return GaussianInteger(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        return GaussianInteger(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInteger(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result, base = GaussianInteger(1, 0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        """Euclidean division with the quotient rounded to the nearest lattice point."""
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * o.conjugate()
        q = GaussianInteger(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * o

    def __rdivmod__(self, other):
        o = GaussianInteger.coerce(other)
        if o is NotImplemented:
            return o
        return divmod(o, self)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __rfloordiv__(self, other):
        return divmod(GaussianInteger.coerce(other), self)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __rmod__(self, other):
        return divmod(GaussianInteger.coerce(other), self)[1]

    def exact_div(self, other) -> "GaussianInteger":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other) -> bool:
        if not self:
            return not GaussianInteger.coerce(other)
        return not divmod(GaussianInteger.coerce(other), self)[1]

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianInteger):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def normalized(self) -> tuple["GaussianInteger", "GaussianInteger"]:
        """Return ``(u*z, u)`` with ``u`` a unit and ``u*z`` in the first quadrant.

        First quadrant means ``re > 0, im >= 0``; zero maps to itself with ``u = 1``.
        """
        for u in _UNITS:
            w = self * u
            if w.re > 0 and w.im >= 0:
                return w, u
        return self, _UNITS[0]

    def __repr__(self):
        return f"GaussianInteger({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


_UNITS = (GaussianInteger(1, 0), GaussianInteger(0, 1),
          GaussianInteger(-1, 0), GaussianInteger(0, -1))
I = _UNITS[1]


def _round_div(a: int, n: int) -> int:
    # nearest integer to a/n for n > 0, ties toward +inf
    return (2 * a + n) // (2 * n)


def gaussian_gcd(a, b) -> GaussianInteger:
    """First-quadrant normalized gcd in Z[i]."""
    a, b = GaussianInteger.coerce(a), GaussianInteger.coerce(b)
    while b:
        a, b = b, a % b
    return a.normalized()[0]


# ---------------------------------------------------------------------------
# Rings: the small amount of structure the elimination code needs


class _IntegerRing:
    name = "Z"
    zero = 0
    one = 1

    @staticmethod
    def coerce(x):
        if isinstance(x, bool):
            raise TypeError("bool is not a ring element")
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        if isinstance(x, GaussianInteger) and x.im == 0:
            return x.re
        raise TypeError(f"{x!r} is not a rational integer")

    @staticmethod
    def size(x) -> int:
        return abs(x)

    @staticmethod
    def normalize(x):
        """Return ``(canonical, unit)`` with ``canonical = unit * x``."""
        return (-x, -1) if x < 0 else (x, 1)

    @staticmethod
    def unit_inverse(u):
        return u

    @staticmethod
    def gcd(a, b):
        return math.gcd(a, b)

    @staticmethod
    def exact_div(a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q

    @staticmethod
    def divides(a, b) -> bool:
        return b == 0 if a == 0 else b % a == 0

    @staticmethod
    def norm(x) -> int:
        return abs(x)


class _GaussianRing:
    name = "Zi"
    zero = GaussianInteger(0, 0)
    one = GaussianInteger(1, 0)

    @staticmethod
    def coerce(x):
        g = GaussianInteger.coerce(x)
        if g is NotImplemented:
            raise TypeError(f"{x!r} is not a Gaussian integer")
        return g

    @staticmethod
    def size(x) -> int:
        return GaussianInteger.coerce(x).norm()

    @staticmethod
    def normalize(x):
        return GaussianInteger.coerce(x).normalized()

    @staticmethod
    def unit_inverse(u):
        return u.conjugate()

    @staticmethod
    def gcd(a, b):
        return gaussian_gcd(a, b)

    @staticmethod
    def exact_div(a, b):
        return GaussianInteger.coerce(a).exact_div(b)

    @staticmethod
    def divides(a, b) -> bool:
        return GaussianInteger.coerce(a).divides(b)

    @staticmethod
    def norm(x) -> int:
        return GaussianInteger.coerce(x).norm()


ZZ = _IntegerRing()
ZZI = _GaussianRing()


def ring_for(name: str):
    try:
        return {"Z": ZZ, "Zi": ZZI}[name]
    except KeyError:
        raise ValidationError(f"unknown ring {name!r}; expected 'Z' or 'Zi'") from None


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense matrix with exact entries, stored row-major as nested tuples."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def _trusted(cls, rows: tuple) -> "ExactMatrix":
        # rows must already be a rectangular tuple of tuples
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        return obj

    @classmethod
    def identity(cls, n: int, one=1) -> "ExactMatrix":
        zero = one - one
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int | None = None, zero=0) -> "ExactMatrix":
        c = r if c is None else c
        return cls(tuple(tuple(zero for _ in range(c)) for _ in range(r)))

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        zero = values[0] - values[0] if n else 0
        return cls(tuple(tuple(values[i] if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    @property
    def ring(self) -> str:
        """'Zi' if any entry is a non-real Gaussian integer, 'Q' if any is non-integral, else 'Z'."""
        ring = "Z"
        for x in self.entries:
            if isinstance(x, GaussianInteger):
                ring = "Zi"
            elif isinstance(x, Fraction) and x.denominator != 1:
                if ring == "Zi":
                    raise TypeError("mixed Gaussian and rational entries")
                ring = "Q"
        return ring

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.rows)))

    def conj_T(self) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(_conj(x) for x in col) for col in zip(*self.rows)))

    def map(self, fn) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(tuple(map(fn, r)) for r in self.rows))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def __neg__(self) -> "ExactMatrix":
        return self.map(lambda x: -x)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other.rows))
        return ExactMatrix(tuple(tuple(_dot(r, c) for c in cols) for r in self.rows))

    def __mul__(self, scalar) -> "ExactMatrix":
        return self.map(lambda x: x * scalar)

    __rmul__ = __mul__

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"ExactMatrix({[[str(x) for x in r] for r in self.rows]})"


def _conj(x):
    return x.conjugate() if isinstance(x, GaussianInteger) else x


def _dot(r, c):
    it = iter(zip(r, c))
    a, b = next(it)
    total = a * b
    for a, b in it:
        total = total + a * b
    return total


def as_matrix(m) -> ExactMatrix:
    return m if isinstance(m, ExactMatrix) else ExactMatrix(m)


def det(M) -> int | GaussianInteger | Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Works over Z and Z[i]; rational matrices are handled by clearing
    denominators first.
    """
    M = as_matrix(M)
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.shape} matrix")
    n = M.nrows
    if n == 0:
        return 1
    kind = M.ring
    if kind == "Q":
        den = math.lcm(*(Fraction(x).denominator for x in M.entries))
        return Fraction(det(M.map(lambda x: int(x * den))), den ** n)
    ring = ZZI if kind == "Zi" else ZZ
    a = [[ring.coerce(x) for x in r] for r in M.rows]
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not a[k][k]:
            for p in range(k + 1, n):
                if a[p][k]:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = ring.exact_div(a[i][j] * pivot - a[i][k] * a[k][j], prev)
            a[i][k] = ring.zero
        prev = pivot
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def is_scaled_orthogonal(G, level: int) -> bool:
    """True iff ``G @ G.T == level**2 * I`` exactly."""
    G = as_matrix(G)
    if not G.is_square or level == 0:
        return False
    n = G.nrows
    target = level * level
    rows = G.rows
    for i in range(n):
        for j in range(i, n):
            s = sum(x * y for x, y in zip(rows[i], rows[j]))
            if s != (target if i == j else 0):
                return False
    return True


# ---------------------------------------------------------------------------
# Elementary number theory


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def num_distinct(self) -> int:
        return len(self.factors)


def factorize(n: int) -> FactoredInteger:
    """Prime factorization by trial division (fine up to about 1e12)."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    p, step = 5, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n, tuple(factors))


def lcm_denominators(values: Iterable) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


# ---------------------------------------------------------------------------
# Matrix file format: {"n": int, "ring": "Z"|"Q"|"Zi", "entries": [[...]]}


def _parse_entry(x, ring: str, where: str):
    if ring == "Z":
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, str):
                try:
                    return int(x)
                except ValueError:
                    pass
            raise ValidationError(f"{where}: expected integer, got {x!r}")
        return x
    if ring == "Q":
        if isinstance(x, bool):
            raise ValidationError(f"{where}: expected rational, got {x!r}")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                value = Fraction(x.strip())
            except ZeroDivisionError:
                raise ValidationError(f"{where}: zero denominator in {x!r}") from None
            except ValueError:
                raise ValidationError(f"{where}: malformed rational {x!r}") from None
            return value
        raise ValidationError(f"{where}: rational entries must be strings 'p/q', got {x!r}")
    if ring == "Zi":
        if isinstance(x, int) and not isinstance(x, bool):
            return GaussianInteger(x, 0)
        if (isinstance(x, list) and len(x) == 2
                and all(isinstance(v, int) and not isinstance(v, bool) for v in x)):
            return GaussianInteger(x[0], x[1])
        raise ValidationError(f"{where}: Gaussian entries must be [re, im], got {x!r}")
    raise ValidationError(f"ring: expected 'Z', 'Q' or 'Zi', got {ring!r}")


def matrix_from_json(obj) -> tuple[ExactMatrix, str]:
    """Parse the shared matrix JSON object. Returns ``(matrix, ring)``."""
    if not isinstance(obj, dict):
        raise ValidationError("matrix file: top level must be a JSON object")
    for key in ("n", "ring", "entries"):
        if key not in obj:
            raise ValidationError(f"{key}: missing field")
    n, ring, entries = obj["n"], obj["ring"], obj["entries"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n: expected positive integer, got {n!r}")
    if ring not in ("Z", "Q", "Zi"):
        raise ValidationError(f"ring: expected 'Z', 'Q' or 'Zi', got {ring!r}")
    if not isinstance(entries, list) or len(entries) != n:
        raise ValidationError(f"entries: expected {n} rows")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise ValidationError(f"entries[{i}]: expected {n} columns (matrix must be square)")
        rows.append(tuple(_parse_entry(x, ring, f"entries[{i}][{j}]") for j, x in enumerate(row)))
    return ExactMatrix(tuple(rows)), ring


def load_matrix(path) -> tuple[ExactMatrix, str]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"matrix file: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise ValidationError(f"matrix file: {exc.strerror}: {path}") from None
    return matrix_from_json(obj)


def scalar_to_json(x, ring: str):
    if ring == "Zi":
        g = GaussianInteger.coerce(x)
        return [g.re, g.im]
    if ring == "Q":
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return int(x)


def matrix_to_json(M: ExactMatrix, ring: str | None = None) -> dict:
    M = as_matrix(M)
    if not M.is_square:
        raise DimensionError("the matrix file format holds square matrices only")
    ring = ring or M.ring
    return {"n": M.nrows, "ring": ring,
            "entries": [[scalar_to_json(x, ring) for x in r] for r in M.rows]}
