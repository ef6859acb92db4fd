"""Exact rational matrices and canonical subspaces.

Subspaces of Q^d are stored by the reduced row echelon form of a spanning
set (equivalently, the reduced column echelon form of a d x r basis), so two
subspaces are equal exactly when their stored rows are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from hoinv.errors import MalformedInputError
from hoinv.kernels import matmul_int, rref_int

Vector = tuple[Fraction, ...]


def parse_rational(value) -> Fraction:
    """Parse ``"num/den"``, an int, or an integer string into a Fraction."""
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"not a rational: {value!r}") from exc
    raise MalformedInputError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def integer_row(row: Iterable[Fraction]) -> list[int]:
    """Scale a rational row to integers (same kernel, same row space)."""
    row = list(row)
    if all(type(x) is int for x in row):
        return row
    row = [Fraction(x) for x in row]
    d = 1
    for x in row:
        if x.denominator != 1:
            d = lcm(d, x.denominator)
    return [int(x * d) for x in row]


def _rref_fraction(rows: Sequence[Sequence[Fraction]], ncols: int):
    ints, pivots = rref_int([integer_row(r) for r in rows], ncols)
    out = []
    for r, p in zip(ints, pivots):
        pv = r[p]
        out.append(tuple(Fraction(x, pv) for x in r))
    return out, pivots


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of Fractions stored as a tuple of rows."""

    rows: tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise MalformedInputError(
                    f"ragged matrix: row of length {len(r)} in a {self.ncols}-column matrix"
                )

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "RationalMatrix":
        rows = tuple(tuple(parse_rational(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise MalformedInputError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, m: int, n: int) -> "RationalMatrix":
        return cls(tuple((Fraction(0),) * n for _ in range(m)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise MalformedInputError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise MalformedInputError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise MalformedInputError(f"shape mismatch {self.shape} @ {other.shape}")
        n = other.ncols
        cols = list(zip(*other.rows)) if other.rows else [()] * n
        rows = []
        for r in self.rows:
            nz = [(k, v) for k, v in enumerate(r) if v]
            rows.append(
                tuple(sum((v * cols[j][k] for k, v in nz), Fraction(0)) for j in range(n))
            )
        return RationalMatrix(tuple(rows), n)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.ncols:
            raise MalformedInputError("vector length does not match matrix")
        return tuple(
            sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def scaled_integer_rows(self) -> list[list[int]]:
        """Rows scaled by one common denominator; kernel and row space unchanged."""
        d = 1
        for r in self.rows:
            for x in r:
                if x.denominator != 1:
                    d = lcm(d, x.denominator)
        return [[int(x * d) for x in r] for r in self.rows]

    def rank(self) -> int:
        return len(rref_int(self.scaled_integer_rows(), self.ncols)[1])

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise MalformedInputError("determinant of a non-square matrix")
        # fraction-free Bareiss on the integer-scaled matrix
        n = self.ncols
        d = 1
        for r in self.rows:
            for x in r:
                if x.denominator != 1:
                    d = lcm(d, x.denominator)
        a = [[int(x * d) for x in r] for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        det = a[n - 1][n - 1] if n else 1
        return Fraction(sign * det, d**n)

    def inverse(self) -> "RationalMatrix":
        n = self.ncols
        if self.nrows != n:
            raise MalformedInputError("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _rref_fraction(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return RationalMatrix(tuple(tuple(r[n:]) for r in red[:n]), n)

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^d in canonical form.

    Stored as the reduced row echelon form of a spanning set, each row scaled
    to a primitive integer vector with positive pivot. ``rows`` gives the
    same rows with unit pivots, so the d x r matrix with them as columns is
    in reduced column echelon form.
    """

    dim: int
    int_rows: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != dim:
                raise MalformedInputError(f"vector of length {len(v)} in Q^{dim}")
            rows.append(integer_row(v))
        return cls.from_integer_rows(rows, dim)

    @classmethod
    def from_integer_rows(cls, rows: list[list[int]], dim: int) -> "Subspace":
        rows = [r for r in rows if any(r)]
        if not rows:
            return cls.zero(dim)
        reduced, pivots = rref_int(rows, dim)
        return cls(dim, tuple(map(tuple, reduced)), tuple(pivots))

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(dim, (), ())

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)), tuple(range(dim)))

    @property
    def rank(self) -> int:
        return len(self.int_rows)

    @cached_property
    def rows(self) -> tuple[Vector, ...]:
        return tuple(
            tuple(Fraction(x, r[p]) if x else Fraction(0) for x in r)
            for r, p in zip(self.int_rows, self.pivots)
        )

    def basis_matrix(self) -> RationalMatrix:
        """The d x r basis matrix (reduced column echelon form)."""
        if not self.rows:
            return RationalMatrix(tuple(() for _ in range(self.dim)), 0)
        return RationalMatrix(tuple(zip(*self.rows)), self.rank)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        """Canonical representative of ``v`` modulo this subspace (zero at every pivot)."""
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                for j in range(p, self.dim):
                    if row[j]:
                        v[j] -= c * row[j]
        return tuple(v)

    def contains_vector(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def annihilator_rows(self) -> list[list[int]]:
        """Primitive integer rows whose common kernel is exactly this subspace."""
        if not self.int_rows:
            return [[int(i == j) for j in range(self.dim)] for i in range(self.dim)]
        return [list(r) for r in kernel_from_rref([list(r) for r in self.int_rows], list(self.pivots), self.dim).int_rows]

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim != other.dim:
            raise MalformedInputError("ambient dimension mismatch")
        stacked = self.annihilator_rows() + other.annihilator_rows()
        return kernel_of_integer_rows(stacked, self.dim)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.dim != other.dim:
            raise MalformedInputError("ambient dimension mismatch")
        return Subspace.from_integer_rows([list(r) for r in self.int_rows + other.int_rows], self.dim)

    def to_strings(self) -> list[list[str]]:
        """Canonical d x r basis matrix as ``"num/den"`` strings."""
        return self.basis_matrix().to_strings()


def kernel_from_rref(reduced: list[list[int]], pivots: list[int], ncols: int) -> Subspace:
    """Null space of a matrix given its integer reduced echelon form."""
    pivset = set(pivots)
    vectors = []
    for f in range(ncols):
        if f in pivset:
            continue
        scale = 1
        for row, p in zip(reduced, pivots):
            if row[f]:
                scale = lcm(scale, row[p])
        v = [0] * ncols
        v[f] = scale
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f] * (scale // row[p])
        vectors.append(v)
    return Subspace.from_integer_rows(vectors, ncols)


def kernel_of_integer_rows(rows: list[list[int]], ncols: int) -> Subspace:
    rows = [r for r in rows if any(r)]
    if not rows:
        return Subspace.full(ncols)
    reduced, pivots = rref_int(rows, ncols)
    return kernel_from_rref(reduced, pivots, ncols)


def exact_kernel(m: RationalMatrix) -> Subspace:
    """Null space {v : Mv = 0} in canonical form."""
    if not isinstance(m, RationalMatrix):
        try:
            m = RationalMatrix.from_rows(m)
        except (TypeError, IndexError) as exc:
            raise MalformedInputError("malformed matrix") from exc
    return kernel_of_integer_rows(m.scaled_integer_rows(), m.ncols)


def integer_product(x: list[list[int]], y: list[list[int]], ncols: int) -> list[list[int]]:
    return matmul_int(x, y, ncols)
