"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  :class:`RatMatrix` is a small immutable dense matrix; every
routine here is exact and free of floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import (
    DuplicateAbscissaError,
    InconsistentSystemError,
    LinAlgError,
    RankDeficientError,
    SingularMatrixError,
)

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into an exact
    computation.
    """
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s.strip())
    return as_rational(s)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RatMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(as_rational(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> RatMatrix:
        return RatMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.entries[j::other.cols] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
        return RatMatrix(self.rows, other.cols, tuple(out))

    def permuted(self, order: Sequence[int]) -> RatMatrix:
        """Simultaneous row/column permutation ``P A P^T``."""
        return RatMatrix.from_rows([[self[i, j] for j in order] for i in order])

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def leading_principal_minors(self) -> list[Fraction]:
        return [det(RatMatrix.from_rows([self.row(i)[:k] for i in range(k)])) for k in range(1, self.rows + 1)]

    def is_positive_definite(self) -> bool:
        return self.is_symmetric() and all(m > 0 for m in self.leading_principal_minors())

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in self.row(i)] for i in range(self.rows)]

    def __str__(self) -> str:
        cells = [[str(x) for x in self.row(i)] for i in range(self.rows)]
        w = max((len(c) for r in cells for c in r), default=0)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def _integer_scaled(A: RatMatrix) -> tuple[list[list[int]], int]:
    scale = lcm(*(x.denominator for x in A.entries)) if A.entries else 1
    return [[int(x * scale) for x in A.row(i)] for i in range(A.rows)], scale


def det(A: RatMatrix) -> Fraction:
    """Determinant by Bareiss fraction-free elimination."""
    if not A.is_square:
        raise LinAlgError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return Fraction(1)
    M, scale = _integer_scaled(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        p = next((r for r in range(k, n) if M[r][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            Mi, Mk = M[i], M[k]
            for j in range(k + 1, n):
                Mi[j] = (pk * Mi[j] - aik * Mk[j]) // prev
            Mi[k] = 0
        prev = pk
    return Fraction(sign * M[n - 1][n - 1], scale ** n)


def mat_invert(A: RatMatrix) -> RatMatrix:
    """Exact inverse via fraction-free Gauss-Jordan elimination.

    The matrix is scaled to an integer matrix ``B = s*A`` and ``[B | I]`` is
    reduced Bareiss-style, which keeps every intermediate an integer minor.
    The process ends at ``[d*I | d*B^-1]`` with ``d = ±det(B)``.
    """
    if not A.is_square:
        raise LinAlgError("cannot invert a non-square matrix")
    n = A.rows
    if n == 0:
        return A
    B, scale = _integer_scaled(A)
    M = [row + [int(i == j) for j in range(n)] for i, row in enumerate(B)]
    width = 2 * n
    prev = 1
    for k in range(n):
        # partial pivoting on the first nonzero entry
        p = next((r for r in range(k, n) if M[r][k] != 0), None)
        if p is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {k})")
        if p != k:
            M[k], M[p] = M[p], M[k]
        pk = M[k][k]
        Mk = M[k]
        for i in range(n):
            if i == k:
                continue
            Mi = M[i]
            aik = Mi[k]
            M[i] = [(pk * Mi[j] - aik * Mk[j]) // prev for j in range(width)]
        prev = pk
    d = M[0][0]
    return RatMatrix(n, n, tuple(Fraction(M[i][n + j] * scale, d) for i in range(n) for j in range(n)))


def solve(A: RatMatrix, b: Sequence) -> list[Fraction]:
    """Exact solution of ``A x = b`` for a consistent, full-column-rank system.

    ``A`` may be tall; the extra equations must agree with the solution.
    """
    b = [as_rational(x) for x in b]
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    m, k = A.rows, A.cols
    M = [list(A.row(i)) + [b[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(M[i][k] != 0 for i in range(r, m)):
        raise InconsistentSystemError("system has no solution")
    if r < k:
        raise RankDeficientError(f"coefficient matrix has rank {r} < {k} unknowns")
    x = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        x[c] = M[i][k]
    return x


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"length mismatch {len(u)} vs {len(v)}")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def gram(vectors: Sequence[Sequence]) -> RatMatrix:
    """Matrix of pairwise dot products."""
    vecs = [tuple(as_rational(x) for x in v) for v in vectors]
    if len({len(v) for v in vecs}) > 1:
        raise ValueError("vectors must all have the same length")
    k = len(vecs)
    out = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            out[i][j] = out[j][i] = dot(vecs[i], vecs[j])
    return RatMatrix(k, k, tuple(x for r in out for x in r))


def lagrange_interpolate(points: Iterable[tuple[int, object]]) -> list[Fraction]:
    """Coefficients (constant term first) of the interpolating polynomial.

    With ``m`` points the result has length ``m``; the true degree may be
    lower, in which case the top coefficients are zero.
    """
    pts = [(as_rational(t), as_rational(y)) for t, y in points]
    xs = [t for t, _ in pts]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissaError("interpolation nodes must be distinct")
    m = len(pts)
    # Newton divided differences
    coef = [y for _, y in pts]
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    # expand the Newton form into the monomial basis
    poly = [Fraction(0)] * m
    for i in range(m - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    return poly


def poly_eval(coefficients: Sequence[Fraction], t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coefficients):
        acc = acc * t + c
    return acc


def trim_coefficients(coefficients: Sequence[Fraction]) -> list[Fraction]:
    out = list(coefficients)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out
