"""Exact dense linear algebra over the rationals.

All entries are `fractions.Fraction`, so every result is exact: ranks,
kernels, images and solves never see floating point. Matrices are small
and dense by design (the complexes this package handles have at most a
few hundred simplices).

Elimination uses one fixed pivoting rule -- scan columns left to right,
take the first non-zero entry from the top -- so every returned basis is
deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInputError

# The coefficient field. Fraction already guarantees the invariants we
# need: lowest terms, positive denominator, exact arithmetic.
Rational = Fraction

Vector = tuple[Fraction, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise InvalidInputError(
        f"matrix entries must be integers or Fractions, got {type(x).__name__}"
    )


def vector(values: Iterable) -> Vector:
    return tuple(_frac(v) for v in values)


def zero_vector(length: int) -> Vector:
    return (Fraction(0),) * length


@dataclass(frozen=True)
class RationalMatrix:
    """An immutable rows x cols matrix of rationals.

    0 x n and n x 0 matrices are legal and stand for zero maps to/from the
    trivial space.
    """

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows:
            raise InvalidInputError("row count does not match entries")
        if any(len(row) != self.cols for row in self.entries):
            raise InvalidInputError("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(_frac(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise InvalidInputError("cannot infer column count of an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], length: int | None = None) -> "RationalMatrix":
        cols = [vector(c) for c in columns]
        if length is None:
            if not cols:
                raise InvalidInputError("cannot infer row count of an empty matrix")
            length = len(cols[0])
        if any(len(c) != length for c in cols):
            raise InvalidInputError("columns of unequal length")
        data = tuple(tuple(c[i] for c in cols) for i in range(length))
        return cls(length, len(cols), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        ))

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def matvec(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise InvalidInputError(
                f"matvec dimension mismatch: {self.rows}x{self.cols} with vector of length {len(v)}"
            )
        return tuple(
            sum((row[j] * v[j] for j in range(self.cols)), Fraction(0))
            for row in self.entries
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise InvalidInputError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        data = tuple(
            tuple(
                sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)),
                    Fraction(0))
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return RationalMatrix(self.rows, other.cols, data)

    def __pow__(self, exponent: int) -> "RationalMatrix":
        if self.rows != self.cols:
            raise InvalidInputError("matrix power needs a square matrix")
        if exponent < 0:
            raise InvalidInputError("negative matrix powers are not supported")
        result = RationalMatrix.identity(self.rows)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              tuple(self.column(j) for j in range(self.cols)))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise InvalidInputError("trace needs a square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"


def _rref(matrix: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, fixed pivoting rule."""
    rows = [list(r) for r in matrix.entries]
    m, n = matrix.rows, matrix.cols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pivot_row = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(matrix: RationalMatrix) -> int:
    """Rank over the rationals; 0 for empty matrices."""
    _, pivots = _rref(matrix)
    return len(pivots)


def kernel_basis(matrix: RationalMatrix) -> list[Vector]:
    """A deterministic basis of the null space, one vector per free column."""
    rows, pivots = _rref(matrix)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * matrix.cols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][free]
        basis.append(tuple(vec))
    return basis


def image_basis(matrix: RationalMatrix) -> list[Vector]:
    """The pivot columns of the original matrix: a basis of the column space."""
    _, pivots = _rref(matrix)
    return [matrix.column(c) for c in pivots]


def solve_in_span(basis: Sequence[Sequence[Fraction]], target: Sequence[Fraction]):
    """Express ``target`` as a combination of ``basis`` vectors.

    Returns the coefficient tuple, or None when the target is not in the
    span. Coefficients are unique when the basis is independent; otherwise
    the free coefficients are set to zero.
    """
    target = vector(target)
    cols = [vector(b) for b in basis]
    d = len(target)
    if any(len(c) != d for c in cols):
        raise InvalidInputError("basis vectors and target must have equal length")
    n = len(cols)
    augmented = RationalMatrix(d, n + 1, tuple(
        tuple(cols[j][i] for j in range(n)) + (target[i],) for i in range(d)
    ))
    rows, pivots = _rref(augmented)
    if n in pivots:
        return None
    solution = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        solution[pc] = rows[i][n]
    return tuple(solution)
