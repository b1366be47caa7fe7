"""Exact rational linear algebra over :class:`fractions.Fraction`.

Vectors are plain tuples of ``Fraction``; matrices are :class:`RationalMatrix`
values.  Zero-row and zero-column matrices are allowed so that index sets may
be empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"-?\d+(/[1-9]\d*)?|-?\d+\.\d+")


class RationalParseError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal string exactly."""
    if isinstance(text, bool):
        raise RationalParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text.strip()):
        raise RationalParseError(f"not a rational string: {text!r}")
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    """Canonical ``p/q`` form (bare integer when the denominator is 1)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(v if isinstance(v, Fraction) else _coerce(v) for v in values)


def _coerce(v) -> Fraction:
    if isinstance(v, str):
        return parse_rational(v)
    return Fraction(v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def l1_norm(v: Sequence[Fraction]) -> Fraction:
    return sum((abs(a) for a in v), Fraction(0))


def support(v: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(v) if a != 0)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense immutable matrix of ``Fraction`` entries, stored row-major."""

    nrows: int
    ncols: int
    data: tuple  # tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative dimension")
        if len(self.data) != self.nrows or any(len(r) != self.ncols for r in self.data):
            raise ValueError("ragged matrix data")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: int | None = None) -> "RationalMatrix":
        data = tuple(vector(r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        return cls(len(data), ncols, data)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        cols = [vector(c) for c in cols]
        return cls(nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def columns(self, idx: Iterable[int]) -> "RationalMatrix":
        idx = list(idx)
        for j in idx:
            if not 0 <= j < self.ncols:
                raise IndexError(f"column index {j} out of range for {self.ncols} columns")
        return RationalMatrix(self.nrows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.ncols, self.nrows, tuple(zip(*self.data)) if self.nrows else
                              tuple(() for _ in range(self.ncols)))

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def matvec(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} != {self.ncols} columns")
        return tuple(dot(r, v) for r in self.data)

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.nrows != self.nrows:
            raise ValueError("row count mismatch")
        return RationalMatrix(self.nrows, self.ncols + other.ncols,
                              tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column count mismatch")
        return RationalMatrix(self.nrows + other.nrows, self.ncols, self.data + other.data)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.nrows, self.ncols, tuple(tuple(-a for a in r) for r in self.data))

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.data]

    def __str__(self) -> str:
        cells = [[format_rational(a) for a in r] for r in self.data]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)


def as_matrix(rows) -> RationalMatrix:
    return rows if isinstance(rows, RationalMatrix) else RationalMatrix.from_rows(rows)


def block(grid: Sequence[Sequence[RationalMatrix]]) -> RationalMatrix:
    """Assemble a block matrix; every block row must agree on its row count."""
    out = None
    for brow in grid:
        strip = brow[0]
        for blk in brow[1:]:
            strip = strip.hstack(blk)
        out = strip if out is None else out.vstack(strip)
    return out


def rref(M: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form and the (increasing) pivot columns."""
    rows = [list(r) for r in M.data]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        if r == M.nrows:
            break
        p = next((i for i in range(r, M.nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        pivot_row = rows[r]
        for i in range(M.nrows):
            f = rows[i][c]
            if i != r and f != 0:
                rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return RationalMatrix(M.nrows, M.ncols, tuple(tuple(x) for x in rows)), pivots


def rank(M: RationalMatrix) -> int:
    return len(rref(M)[1])


@dataclass(frozen=True)
class LinearSolution:
    """Solution set ``particular + span(nullspace)`` of a consistent system."""

    particular: Vector
    nullspace: tuple  # tuple[Vector, ...]

    @property
    def unique(self) -> bool:
        return not self.nullspace


def solve_linear(M: RationalMatrix, q: Sequence[Fraction]) -> LinearSolution | None:
    """Solve ``M v = q`` exactly; ``None`` when the system is inconsistent."""
    if len(q) != M.nrows:
        raise ValueError(f"rhs length {len(q)} != {M.nrows} rows")
    aug = M.hstack(RationalMatrix.from_columns([q], M.nrows))
    R, piv = rref(aug)
    if M.ncols in piv:
        return None
    x = [Fraction(0)] * M.ncols
    for i, c in enumerate(piv):
        x[c] = R[i, M.ncols]
    return LinearSolution(tuple(x), tuple(_null_from_rref(R, piv, M.ncols)))


def _null_from_rref(R: RationalMatrix, piv: list[int], ncols: int) -> list[Vector]:
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i, f]
        basis.append(tuple(v))
    return basis


def nullspace_basis(M: RationalMatrix) -> list[Vector]:
    R, piv = rref(M)
    return _null_from_rref(R, piv, M.ncols)


def columns_independent(M: RationalMatrix, S: Iterable[int]) -> bool:
    """True iff the columns indexed by ``S`` are linearly independent (vacuous for empty ``S``)."""
    S = list(S)
    if not S:
        return True
    return rank(M.columns(S)) == len(S)


def in_row_space(M: RationalMatrix, v: Sequence[Fraction]) -> bool:
    """True iff ``v`` lies in the range of ``M^T``."""
    return solve_linear(M.T, v) is not None
