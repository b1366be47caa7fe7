"""Exact two-phase simplex over the rationals.

The solver works on a dense tableau and always pivots by Bland's
least-index rule, so it terminates without any perturbation.  Every
``Optimal`` outcome carries a dual vector whose feasibility and zero
duality gap can be checked independently with :func:`check_duality`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .rational import RationalMatrix, Vector, dot, vector

try:  # exact and ~10x faster than Fraction; only used inside the tableau
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
_QZERO = _Q(0)
_QONE = _Q(1)


def _q(v: Fraction):
    return _Q(v.numerator, v.denominator)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class Sense(enum.Enum):
    EQ = "=="
    LE = "<="
    GE = ">="


class Bound(enum.Enum):
    NONNEG = "nonneg"
    FREE = "free"


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class PivotLimitExceeded(RuntimeError):
    """Raised if a phase pivots more often than there are bases (cannot happen under Bland's rule)."""


@dataclass(frozen=True)
class LpProblem:
    """``min c.z`` subject to ``A z (senses) b`` and per-variable bounds."""

    c: Vector
    A: RationalMatrix
    b: Vector
    senses: tuple
    bounds: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", vector(self.c))
        object.__setattr__(self, "b", vector(self.b))
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "bounds", tuple(self.bounds))
        if len(self.c) != self.A.ncols or len(self.bounds) != self.A.ncols:
            raise ValueError("objective/bounds length must equal the number of columns")
        if len(self.b) != self.A.nrows or len(self.senses) != self.A.nrows:
            raise ValueError("rhs/senses length must equal the number of rows")

    @property
    def nvars(self) -> int:
        return self.A.ncols

    def is_feasible(self, z: Sequence[Fraction]) -> bool:
        if len(z) != self.nvars:
            return False
        if any(bd is Bound.NONNEG and v < 0 for bd, v in zip(self.bounds, z)):
            return False
        for row, s, rhs in zip(self.A.data, self.senses, self.b):
            lhs = dot(row, z)
            if (s is Sense.EQ and lhs != rhs) or (s is Sense.LE and lhs > rhs) or (s is Sense.GE and lhs < rhs):
                return False
        return True

    def with_row(self, row: Sequence, sense: Sense, rhs) -> "LpProblem":
        A = self.A.vstack(RationalMatrix.from_rows([row], self.A.ncols))
        return LpProblem(self.c, A, self.b + (Fraction(rhs),), self.senses + (sense,), self.bounds)

    def with_objective(self, c: Sequence) -> "LpProblem":
        return LpProblem(vector(c), self.A, self.b, self.senses, self.bounds)


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    solution: Vector | None = None
    value: Fraction | None = None
    duals: Vector | None = None
    pivots: tuple = (0, 0)
    pivot_limits: tuple = (0, 0)
    min_reduced_cost: Fraction | None = None
    phase1_value: Fraction | None = None


@dataclass(frozen=True)
class VariableMap:
    """Original variable ``j`` equals ``z[pos[j]] - z[neg[j]]`` (``neg[j]`` may be ``None``)."""

    pos: tuple
    neg: tuple
    nstd: int

    def recover(self, z: Sequence[Fraction]) -> Vector:
        return tuple(z[p] - (z[n] if n is not None else ZERO) for p, n in zip(self.pos, self.neg))

    def lift(self, x: Sequence[Fraction]) -> list[Fraction]:
        """Standard-form coordinates of original point ``x`` with zero slacks (slacks filled by caller)."""
        z = [ZERO] * self.nstd
        for v, p, n in zip(x, self.pos, self.neg):
            if n is None or v >= 0:
                z[p] = Fraction(v)
            else:
                z[n] = -Fraction(v)
        return z


def to_standard_form(p: LpProblem) -> tuple[LpProblem, VariableMap]:
    """Split free variables and slack inequalities; rows keep their order."""
    cols: list[list[Fraction]] = []
    c: list[Fraction] = []
    pos, neg = [], []
    for j, bd in enumerate(p.bounds):
        col = list(p.A.column(j))
        pos.append(len(cols))
        cols.append(col)
        c.append(p.c[j])
        if bd is Bound.FREE:
            neg.append(len(cols))
            cols.append([-a for a in col])
            c.append(-p.c[j])
        else:
            neg.append(None)
    for i, s in enumerate(p.senses):
        if s is Sense.EQ:
            continue
        slack = [ZERO] * p.A.nrows
        slack[i] = ONE if s is Sense.LE else -ONE
        cols.append(slack)
        c.append(ZERO)
    A = RationalMatrix.from_columns(cols, p.A.nrows)
    std = LpProblem(tuple(c), A, p.b, (Sense.EQ,) * p.A.nrows, (Bound.NONNEG,) * len(cols))
    return std, VariableMap(tuple(pos), tuple(neg), len(cols))


def _pivot(T: list[list], r: int, col: int) -> None:
    inv = _QONE / T[r][col]
    prow = [a * inv if a else a for a in T[r]]
    T[r] = prow
    nz = [k for k, b in enumerate(prow) if b]
    for i, row in enumerate(T):
        f = row[col]
        if i != r and f:
            for k in nz:
                row[k] -= f * prow[k]


def _run_phase(T, basis, allowed: int, limit: int) -> tuple[str, int]:
    """Pivot until optimal or unbounded; ``T[-1]`` is the reduced-cost row."""
    m = len(basis)
    pivots = 0
    while True:
        obj = T[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return "optimal", pivots
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                # Bland: ties go to the smallest basic variable index
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", pivots
        _pivot(T, best[1], enter)
        basis[best[1]] = enter
        pivots += 1
        if pivots > limit:
            raise PivotLimitExceeded(f"{pivots} pivots exceed the basis count bound {limit}")


def _price(T, basis, costs) -> None:
    """Rewrite the last tableau row as reduced costs for ``costs``."""
    row = list(costs) + [_QZERO]
    for i, bj in enumerate(basis):
        cb = costs[bj]
        if cb:
            row = [a - cb * b for a, b in zip(row, T[i])]
    T[-1] = row


def simplex_standard(c: Sequence[Fraction], A: RationalMatrix, b: Sequence[Fraction]) -> LpOutcome:
    """Solve ``min c.z, A z = b, z >= 0`` with a full artificial basis."""
    m, n = A.nrows, A.ncols
    sign = [(-1 if bi < 0 else 1) for bi in b]
    T = []
    for i in range(m):
        art = [_QZERO] * m
        art[i] = _QONE
        T.append([_q(sign[i] * a) for a in A.data[i]] + art + [_q(sign[i] * b[i])])
    T.append([_QZERO] * (n + m + 1))
    basis = list(range(n, n + m))
    limit = comb(n + m, m)

    _price(T, basis, [_QZERO] * n + [_QONE] * m)
    _, piv1 = _run_phase(T, basis, n + m, limit)
    phase1 = _frac(-T[-1][-1])
    if phase1 > 0:
        return LpOutcome(Status.INFEASIBLE, pivots=(piv1, 0), pivot_limits=(limit, limit), phase1_value=phase1)

    # drive zero-level artificials out where a structural column allows it;
    # rows left with an artificial basic are redundant and stay inert
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j]), None)
            if col is not None:
                _pivot(T, i, col)
                basis[i] = col

    costs = [_q(v) for v in c] + [_QZERO] * m
    _price(T, basis, costs)
    status, piv2 = _run_phase(T, basis, n, limit)
    if status == "unbounded":
        return LpOutcome(Status.UNBOUNDED, pivots=(piv1, piv2), pivot_limits=(limit, limit), phase1_value=phase1)

    z = [ZERO] * n
    for i, bj in enumerate(basis):
        if bj < n:
            z[bj] = _frac(T[i][-1])
    # B^{-1} sits under the artificial columns; undo the row sign flips
    duals = tuple(
        _frac(sign[k] * sum((costs[bj] * T[i][n + k] for i, bj in enumerate(basis)), _QZERO)) for k in range(m)
    )
    reduced = T[-1][:n]
    return LpOutcome(
        Status.OPTIMAL,
        solution=tuple(z),
        value=dot(c, z),
        duals=duals,
        pivots=(piv1, piv2),
        pivot_limits=(limit, limit),
        min_reduced_cost=_frac(min(reduced, default=_QZERO)),
        phase1_value=phase1,
    )


def simplex_solve(p: LpProblem) -> LpOutcome:
    """Solve a general LP exactly; the returned solution is in the original variables."""
    std, vmap = to_standard_form(p)
    out = simplex_standard(std.c, std.A, std.b)
    if out.status is not Status.OPTIMAL:
        return out
    x = vmap.recover(out.solution)
    return LpOutcome(
        Status.OPTIMAL,
        solution=x,
        value=dot(p.c, x),
        duals=out.duals,
        pivots=out.pivots,
        pivot_limits=out.pivot_limits,
        min_reduced_cost=out.min_reduced_cost,
        phase1_value=out.phase1_value,
    )


def check_duality(p: LpProblem, out: LpOutcome) -> bool:
    """Verify primal feasibility, dual feasibility and a zero duality gap exactly."""
    if out.status is not Status.OPTIMAL:
        return False
    x, y = out.solution, out.duals
    if not p.is_feasible(x):
        return False
    for yi, s in zip(y, p.senses):
        if (s is Sense.LE and yi > 0) or (s is Sense.GE and yi < 0):
            return False
    AT = p.A.T
    for j, bd in enumerate(p.bounds):
        r = dot(AT.row(j), y)
        if (bd is Bound.FREE and r != p.c[j]) or (bd is Bound.NONNEG and r > p.c[j]):
            return False
    return dot(p.b, y) == dot(p.c, x)


def optimal_face_range(p: LpProblem, coordinate: int, optimal_value) -> tuple:
    """Exact ``(min, max)`` of one variable over the optimal face; ``None`` marks an unbounded side."""
    if not 0 <= coordinate < p.nvars:
        raise IndexError(f"coordinate {coordinate} out of range for {p.nvars} variables")
    pinned = p.with_row(p.c, Sense.EQ, optimal_value)
    e = [ZERO] * p.nvars
    e[coordinate] = ONE
    lo = simplex_solve(pinned.with_objective(e))
    hi = simplex_solve(pinned.with_objective([-a for a in e]))
    if lo.status is Status.INFEASIBLE or hi.status is Status.INFEASIBLE:
        raise ValueError("optimal value is not attained by this problem")
    return (
        lo.value if lo.status is Status.OPTIMAL else None,
        -hi.value if hi.status is Status.OPTIMAL else None,
    )


def unique_optimum(p: LpProblem, out: LpOutcome | None = None) -> bool:
    """True iff the optimal face of ``p`` is a single point (checked coordinate by coordinate)."""
    out = out or simplex_solve(p)
    if out.status is not Status.OPTIMAL:
        return False
    for j in range(p.nvars):
        lo, hi = optimal_face_range(p, j, out.value)
        if lo is None or hi is None or lo != hi:
            return False
    return True
