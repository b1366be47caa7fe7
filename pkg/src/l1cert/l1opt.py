"""Basis pursuit, the LP1/LP3 reformulations, and brute-force l0 minimisation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .lp import Bound, LpProblem, Sense, Status, simplex_solve
from .rational import (
    RationalMatrix,
    Vector,
    as_matrix,
    block,
    columns_independent,
    l1_norm,
    rank,
    solve_linear,
    support,
    vector,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class InconsistentSystem(ValueError):
    pass


class NotASolution(ValueError):
    pass


class KmaxExceeded(LookupError):
    """No solution with at most ``k_max`` nonzeros exists."""

    def __init__(self, k_max: int):
        super().__init__(f"no solution with at most {k_max} nonzeros")
        self.k_max = k_max


@dataclass(frozen=True)
class LinearSystem:
    A: RationalMatrix
    b: Vector

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "b", vector(self.b))
        if len(self.b) != self.A.nrows:
            raise ValueError(f"b has length {len(self.b)}, A has {self.A.nrows} rows")
        if self.A.ncols < 1:
            raise ValueError("A needs at least one column")

    @property
    def m(self) -> int:
        return self.A.nrows

    @property
    def n(self) -> int:
        return self.A.ncols

    def is_consistent(self) -> bool:
        return solve_linear(self.A, self.b) is not None

    def is_solution(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.n and self.A.matvec(x) == self.b

    def require_solution(self, x: Sequence[Fraction]) -> Vector:
        x = vector(x)
        if not self.is_solution(x):
            raise NotASolution("x does not satisfy Ax = b")
        return x


def _require_consistent(sys: LinearSystem) -> None:
    if not sys.is_consistent():
        raise InconsistentSystem("Ax = b has no solution")


def solve_min_l1(sys: LinearSystem) -> tuple[Vector, Fraction]:
    """Least l1-norm solution via ``x = x+ - x-``, ``min e.(x+ + x-)``."""
    _require_consistent(sys)
    n = sys.n
    A = sys.A.hstack(-sys.A)
    lp = LpProblem((ONE,) * (2 * n), A, sys.b, (Sense.EQ,) * sys.m, (Bound.NONNEG,) * (2 * n))
    out = simplex_solve(lp)
    assert out.status is Status.OPTIMAL, out.status
    z = out.solution
    x = tuple(z[i] - z[n + i] for i in range(n))
    return x, l1_norm(x)


def basis_pursuit_lp(sys: LinearSystem) -> LpProblem:
    """``min e.t`` over ``(x, t)`` with ``Ax = b`` and ``-t <= x <= t``; ``x`` free, ``t >= 0``.

    Variables ``0..n-1`` are ``x`` itself, so face ranges can be taken per coordinate.
    """
    n, m = sys.n, sys.m
    I = RationalMatrix.identity(n)
    negI = -I
    A = block([
        [sys.A, RationalMatrix.zeros(m, n)],
        [I, negI],
        [negI, negI],
    ])
    c = (ZERO,) * n + (ONE,) * n
    senses = (Sense.EQ,) * m + (Sense.LE,) * (2 * n)
    return LpProblem(c, A, sys.b + (ZERO,) * (2 * n), senses, (Bound.FREE,) * n + (Bound.NONNEG,) * n)


def build_lp1(sys: LinearSystem, x: Sequence[Fraction]) -> LpProblem:
    """Feasibility LP in ``(u, t)``: ``Au = 0``, ``sum t <= |x|_1``, ``|u_i + x_i| <= t_i``.

    ``(0, |x|)`` is always feasible; it is the unique feasible point exactly when
    ``x`` is the unique least l1-norm solution.
    """
    x = sys.require_solution(x)
    n, m = sys.n, sys.m
    I = RationalMatrix.identity(n)
    negI = -I
    A = block([
        [sys.A, RationalMatrix.zeros(m, n)],
        [RationalMatrix.zeros(1, n), RationalMatrix.from_rows([[ONE] * n], n)],
        [I, negI],
        [negI, negI],
    ])
    b = (ZERO,) * m + (l1_norm(x),) + tuple(-v for v in x) + tuple(x)
    senses = (Sense.EQ,) * m + (Sense.LE,) * (1 + 2 * n)
    return LpProblem((ZERO,) * (2 * n), A, b, senses, (Bound.FREE,) * (2 * n))


@dataclass(frozen=True)
class Lp3Construction:
    """All-nonnegative reformulation over ``(u', t, alpha, beta, r)`` with ``u = M e - u'``."""

    M: Fraction
    matrix: RationalMatrix
    rhs: Vector
    canonical_point: Vector

    @property
    def nvars(self) -> int:
        return self.matrix.ncols

    def canonical_is_feasible(self) -> bool:
        return all(v >= 0 for v in self.canonical_point) and self.matrix.matvec(self.canonical_point) == self.rhs

    def as_problem(self) -> LpProblem:
        c = (ZERO,) * self.nvars
        return LpProblem(c, self.matrix, self.rhs, (Sense.EQ,) * self.matrix.nrows, (Bound.NONNEG,) * self.nvars)


def build_lp3(sys: LinearSystem, x: Sequence[Fraction]) -> Lp3Construction:
    x = sys.require_solution(x)
    n, m = sys.n, sys.m
    norm = l1_norm(x)
    M = 2 * norm + 1
    I = RationalMatrix.identity(n)
    negI = -I
    Z = RationalMatrix.zeros
    matrix = block([
        [negI, negI, I, Z(n, n), Z(n, 1)],
        [I, negI, Z(n, n), I, Z(n, 1)],
        [-sys.A, Z(m, n), Z(m, n), Z(m, n), Z(m, 1)],
        [Z(1, n), RationalMatrix.from_rows([[ONE] * n], n), Z(1, n), Z(1, n), RationalMatrix.from_rows([[ONE]])],
    ])
    Ae = sys.A.matvec((ONE,) * n)
    rhs = (tuple(-v - M for v in x) + tuple(v + M for v in x) + tuple(-M * a for a in Ae) + (norm,))
    ax = tuple(abs(v) for v in x)
    point = ((M,) * n + ax + tuple(a - v for a, v in zip(ax, x)) + tuple(a + v for a, v in zip(ax, x)) + (ZERO,))
    return Lp3Construction(M, matrix, rhs, point)


@dataclass(frozen=True)
class SparsestSet:
    k_star: int
    solutions: tuple  # tuple[Vector, ...], sorted lexicographically


def sparsest_solutions(sys: LinearSystem, k_max: int | None = None) -> SparsestSet:
    """All sparsest solutions by exhaustive support enumeration.

    Only supports with independent columns are solved; a solution found on a
    support but containing a zero entry is discarded because it is visited
    again at its own (smaller) cardinality.
    """
    _require_consistent(sys)
    if k_max is None:
        k_max = sys.m
    if not 0 <= k_max <= sys.n:
        raise ValueError(f"k_max must lie in [0, {sys.n}]")
    n = sys.n
    if all(v == 0 for v in sys.b):
        return SparsestSet(0, ((ZERO,) * n,))
    for k in range(1, k_max + 1):
        found = []
        for S in combinations(range(n), k):
            if not columns_independent(sys.A, S):
                continue
            sol = solve_linear(sys.A.columns(S), sys.b)
            if sol is None or any(v == 0 for v in sol.particular):
                continue
            x = [ZERO] * n
            for i, v in zip(S, sol.particular):
                x[i] = v
            found.append(tuple(x))
        if found:
            return SparsestSet(k, tuple(sorted(set(found))))
    raise KmaxExceeded(k_max)
