"""Range space property (RSP) certificates and the uniqueness decision.

For a point ``x`` with sign pattern ``(J+, J-, J0)`` the RSP asks for
``eta = A^T y`` with ``eta = +1`` on ``J+``, ``-1`` on ``J-`` and
``|eta| < 1`` on ``J0``.  :func:`rsp_for_pattern` decides this with the
LP ``min tau`` s.t. the sign equalities and ``|eta_J0| <= tau``; the RSP holds
iff the LP is feasible with optimum ``tau* < 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .l1opt import LinearSystem, SparsestSet, solve_min_l1, sparsest_solutions
from .lp import Bound, LpProblem, Sense, Status, simplex_solve
from .rational import RationalMatrix, Vector, columns_independent, in_row_space, support, vector

ZERO = Fraction(0)
ONE = Fraction(1)


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class SupportPartition:
    plus: tuple
    minus: tuple
    zero: tuple

    @property
    def support(self) -> tuple:
        return tuple(sorted(self.plus + self.minus))


def support_partition(x: Sequence[Fraction]) -> SupportPartition:
    plus = tuple(i for i, v in enumerate(x) if v > 0)
    minus = tuple(i for i, v in enumerate(x) if v < 0)
    zero = tuple(i for i, v in enumerate(x) if v == 0)
    return SupportPartition(plus, minus, zero)


@dataclass(frozen=True)
class RspPointReport:
    feasible: bool
    tau: Fraction | None
    eta: Vector | None
    multiplier: Vector | None  # y with A^T y = eta
    holds: bool


def rsp_for_pattern(A: RationalMatrix, plus: Iterable[int], minus: Iterable[int]) -> RspPointReport:
    """Solve the tau-LP for the sign pattern (+1 on ``plus``, -1 on ``minus``)."""
    plus, minus = tuple(plus), tuple(minus)
    m, n = A.shape
    if not plus and not minus:
        return RspPointReport(True, ZERO, (ZERO,) * n, (ZERO,) * m, True)
    signed = set(plus) | set(minus)
    zero = [i for i in range(n) if i not in signed]
    AT = A.T
    rows, rhs, senses = [], [], []
    for i, s in [(i, ONE) for i in plus] + [(i, -ONE) for i in minus]:
        rows.append(AT.row(i) + (ZERO,))
        rhs.append(s)
        senses.append(Sense.EQ)
    for i in zero:
        a = AT.row(i)
        rows.append(a + (-ONE,))
        rows.append(tuple(-v for v in a) + (-ONE,))
        rhs += [ZERO, ZERO]
        senses += [Sense.LE, Sense.LE]
    lp = LpProblem(
        (ZERO,) * m + (ONE,),
        RationalMatrix.from_rows(rows, m + 1),
        tuple(rhs),
        tuple(senses),
        (Bound.FREE,) * m + (Bound.NONNEG,),
    )
    out = simplex_solve(lp)
    if out.status is Status.INFEASIBLE:
        return RspPointReport(False, None, None, None, False)
    assert out.status is Status.OPTIMAL, out.status  # tau >= 0 bounds the objective
    y = out.solution[:m]
    tau = out.solution[m]
    eta = AT.matvec(y)
    return RspPointReport(True, tau, eta, y, tau < 1)


def rsp_at_point(A: RationalMatrix, x: Sequence[Fraction]) -> RspPointReport:
    x = vector(x)
    if len(x) != A.ncols:
        raise ValueError(f"x has length {len(x)}, A has {A.ncols} columns")
    part = support_partition(x)
    return rsp_for_pattern(A, part.plus, part.minus)


@dataclass(frozen=True)
class DualCertificate:
    y: Vector
    y_prime: Vector
    omega: Fraction


def dual_certificate_from_eta(x: Sequence[Fraction], eta: Sequence[Fraction]) -> DualCertificate:
    """Build ``(y, y', omega)`` from an RSP witness with ``omega = -1`` and ``y - y' = -eta``.

    On the zero set the slack is ``eps_i = (1 - |eta_i|) / 4``.
    """
    x, eta = vector(x), vector(eta)
    if len(x) != len(eta):
        raise PreconditionViolated("x and eta differ in length")
    y, yp = [], []
    for xi, ei in zip(x, eta):
        if xi > 0:
            if ei != 1:
                raise PreconditionViolated("eta must equal 1 where x > 0")
            y.append(-ONE)
            yp.append(ZERO)
        elif xi < 0:
            if ei != -1:
                raise PreconditionViolated("eta must equal -1 where x < 0")
            y.append(ZERO)
            yp.append(-ONE)
        else:
            if abs(ei) >= 1:
                raise PreconditionViolated("|eta| must be < 1 where x = 0")
            eps = (1 - abs(ei)) / 4
            if ei > 0:
                y.append(-eps - ei)
                yp.append(-eps)
            else:
                y.append(-eps)
                yp.append(ei - eps)
    return DualCertificate(tuple(y), tuple(yp), -ONE)


def dual_certificate_violations(A: RationalMatrix, x: Sequence[Fraction], cert: DualCertificate) -> list[str]:
    """Clauses of the dual optimality system that ``cert`` violates (empty when valid)."""
    bad = []
    diff = tuple(a - b for a, b in zip(cert.y, cert.y_prime))
    if not in_row_space(A, diff):
        bad.append("y - y' not in range(A^T)")
    w = cert.omega
    for i, (xi, yi, ypi) in enumerate(zip(x, cert.y, cert.y_prime)):
        if xi == 0:
            if not (w < yi + ypi and yi < 0 and ypi < 0):
                bad.append(f"zero clause fails at {i}")
        elif xi < 0:
            if not (yi == 0 and ypi == w):
                bad.append(f"negative clause fails at {i}")
        elif not (yi == w and ypi == 0):
            bad.append(f"positive clause fails at {i}")
    return bad


@dataclass(frozen=True)
class UniquenessVerdict:
    rsp: RspPointReport
    support_full_rank: bool
    is_unique: bool

    @property
    def reason(self) -> str:
        if self.is_unique:
            return "unique"
        if not self.rsp.holds:
            return "rsp-failed"
        return "support-rank-deficient"


def certify_unique_l1(sys: LinearSystem, x: Sequence[Fraction]) -> UniquenessVerdict:
    """Decide whether feasible ``x`` is the unique least l1-norm solution.

    Exact characterisation: the RSP holds at ``x`` and the columns on the
    support of ``x`` are linearly independent.
    """
    x = sys.require_solution(x)
    rsp = rsp_at_point(sys.A, x)
    full = columns_independent(sys.A, support(x))
    unique = rsp.holds and full
    if unique:
        assert len(support(x)) <= sys.m, "certified unique solution with more than m nonzeros"
    return UniquenessVerdict(rsp, full, unique)


class Group(enum.Enum):
    GROUP1 = "Group1"
    GROUP2 = "Group2"
    GROUP3 = "Group3"


@dataclass(frozen=True)
class SystemClassification:
    group: Group
    l1_solution: Vector
    l1_value: Fraction
    l1_unique: bool
    sparsest: SparsestSet
    equivalent: bool
    strongly_equivalent: bool


def classify_system(sys: LinearSystem, k_max: int | None = None) -> SystemClassification:
    x_hat, value = solve_min_l1(sys)
    unique = certify_unique_l1(sys, x_hat).is_unique
    sparse = sparsest_solutions(sys, k_max)
    count = len(sparse.solutions)
    if not unique:
        group = Group.GROUP3
    elif count == 1:
        group = Group.GROUP1
    else:
        group = Group.GROUP2
    equivalent = unique and x_hat in sparse.solutions
    return SystemClassification(group, x_hat, value, unique, sparse, equivalent, equivalent and count == 1)
