"""Smith normal form and determinantal ideals over Z and Z[i]."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import (ZZ, ZZI, DimensionError, DomainError, ExactMatrix, GaussianInteger,
                   SizeError, ValidationError, as_matrix, det, gaussian_gcd)

BRUTEFORCE_MAX_N = 6


@dataclass(frozen=True)
class SmithData:
    """Invariant factors ``d`` with witnesses, ``U @ G @ V == diag(d)``.

    ``D_ideal[i]`` generates the (i+1)-th determinantal ideal, i.e. it is
    the normalized product ``d[0] * ... * d[i]``.
    """

    d: tuple
    U: ExactMatrix
    V: ExactMatrix
    D_ideal: tuple
    ring: str = "Z"

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def D(self) -> ExactMatrix:
        return ExactMatrix.diag(self.d)


def _ring_of(G: ExactMatrix, ring: str | None):
    if ring is None:
        ring = G.ring
    if ring == "Q":
        raise ValidationError("Smith normal form needs integral entries; scale by the level first")
    if ring == "Zi":
        return ZZI
    if ring == "Z":
        return ZZ
    raise ValidationError(f"unknown ring {ring!r}")


def smith_normal_form(G, ring: str | None = None) -> SmithData:
    """Diagonalize ``G`` by unimodular row and column operations.

    Pivots are chosen of minimal size (absolute value, or norm over Z[i]) and
    the row/column are cleared by Euclidean steps until the pivot divides the
    whole remaining block.  The result is normalized to nonnegative integers
    or first-quadrant Gaussian integers.
    """
    G = as_matrix(G)
    if not G.is_square:
        raise DimensionError(f"Smith normal form of non-square {G.shape} matrix")
    R = _ring_of(G, ring)
    n = G.nrows
    A = [[R.coerce(x) for x in row] for row in G.rows]
    U = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    V = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]

    def row_axpy(dst, src, q):
        # row[dst] -= q * row[src], applied to A and U
        for M in (A, U):
            r, s = M[dst], M[src]
            for k in range(n):
                if s[k]:
                    r[k] = r[k] - q * s[k]

    def col_axpy(dst, src, q):
        for M in (A, V):
            for row in M:
                if row[src]:
                    row[dst] = row[dst] - q * row[src]

    def swap_rows(a, b):
        for M in (A, U):
            M[a], M[b] = M[b], M[a]

    def swap_cols(a, b):
        for M in (A, V):
            for row in M:
                row[a], row[b] = row[b], row[a]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    x = A[i][j]
                    if x and (best is None or R.size(x) < best[0]):
                        best = (R.size(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    row_axpy(i, t, A[i][t] // p)
                    clean = clean and not A[i][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    col_axpy(j, t, A[t][j] // p)
                    clean = clean and not A[t][j]
            if not clean:
                continue
            offender = next((i for i in range(t + 1, n)
                             for j in range(t + 1, n) if not R.divides(p, A[i][j])), None)
            if offender is None:
                break
            # pull the offending row into row t; the next pass shrinks the pivot
            row_axpy(t, offender, -R.one)
        if best is None:
            break

    for t in range(n):
        canon, unit = R.normalize(A[t][t])
        if unit != R.one:
            A[t] = [x * unit for x in A[t]]
            U[t] = [x * unit for x in U[t]]

    d = tuple(A[t][t] for t in range(n))
    ideals = []
    acc = R.one
    for x in d:
        acc = R.normalize(acc * x)[0]
        ideals.append(acc)
    return SmithData(d=d, U=ExactMatrix(U), V=ExactMatrix(V), D_ideal=tuple(ideals), ring=R.name)


def determinantal_ideals_bruteforce(G, i: int, ring: str | None = None):
    """Normalized gcd of all i-by-i minors of ``G``; a cross-check oracle."""
    G = as_matrix(G)
    if not G.is_square:
        raise DimensionError(f"non-square {G.shape} matrix")
    n = G.nrows
    if n > BRUTEFORCE_MAX_N:
        raise SizeError(f"minor enumeration limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    if not 1 <= i <= n:
        raise DomainError(f"minor size {i} outside 1..{n}")
    R = _ring_of(G, ring)
    rows = [[R.coerce(x) for x in r] for r in G.rows]
    g = R.zero
    for I in combinations(range(n), i):
        for J in combinations(range(n), i):
            minor = det(ExactMatrix(tuple(tuple(rows[a][b] for b in J) for a in I)))
            g = R.gcd(g, R.coerce(minor))
    return R.normalize(g)[0]


def smith_mod(d, m: int):
    """Generator of ``dR + mR``: ``gcd(d, m)`` over Z, first-quadrant gcd over Z[i]."""
    if m <= 0:
        raise DomainError(f"modulus must be positive, got {m}")
    if isinstance(d, GaussianInteger):
        return gaussian_gcd(d, m)
    return ZZ.gcd(d, m)
