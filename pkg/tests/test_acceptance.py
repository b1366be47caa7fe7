"""Exit criteria.  Each test records one PASS/FAIL line, printed in the terminal summary."""

import io
import json
import random
import time
from fractions import Fraction as F
from itertools import combinations

import pytest

from helpers import X34, X46_STAR, X46_TILDE, example_path, random_matrices, random_systems
from l1cert.analysis import (
    build_H_G,
    mutual_coherence,
    rsp_order,
    spark,
    uniform_recovery_oracle,
    weak_rsp_order,
)
from l1cert.cli import run
from l1cert.l1opt import LinearSystem, basis_pursuit_lp, build_lp3, solve_min_l1, sparsest_solutions
from l1cert.lp import Bound, LpProblem, Sense, Status, check_duality, simplex_solve, unique_optimum
from l1cert.rational import RationalMatrix, columns_independent, parse_rational, rank, support
from l1cert.rsp import certify_unique_l1, dual_certificate_from_eta, dual_certificate_violations, rsp_at_point

TAU_36 = 0.816496580928  # sqrt(2/3)
TAU_36_TOL = 1e-6
RATIO_36_TOL = 1e-9

MATRICES = random_matrices(100)
SYSTEMS = random_systems(100)


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv] + ["--json"], stdout=out, stderr=io.StringIO())
    assert code == 0
    return json.loads(out.getvalue())["verdicts"]


def vec(strings):
    return tuple(parse_rational(s) for s in strings)


def test_criterion_1_ex34(record):
    t0 = time.perf_counter()
    sp = cli("sparsest", example_path("ex34"))
    cert = cli("certify", example_path("ex34"))
    cl = cli("classify", example_path("ex34"))
    elapsed = time.perf_counter() - t0
    sols = {vec(s["x"]): s["rsp_holds"] for s in sp["solutions"]}
    checks = {
        "six sparsest": set(sols) == set(X34) and len(sols) == 6,
        "rsp only at x6": [x for x, f in sols.items() if f] == [X34[5]],
        "tau 4/9": cert["certificate"]["rsp"]["tau"] == "4/9",
        "eta": vec(cert["certificate"]["rsp"]["eta"]) == (F(1), F(4, 9), F(-2, 9), F(1)),
        "Group2": cl["group"] == "Group2",
        "equivalent": cl["equivalent"] is True and cl["strongly_equivalent"] is False,
        "< 1 s": elapsed < 1.0,
    }
    failed = [k for k, ok in checks.items() if not ok]
    record("1 fixture ex34 end-to-end", not failed, f"{elapsed:.3f}s" + (f" failed: {failed}" if failed else ""))
    assert not failed


def test_criterion_2_ex46(record):
    t0 = time.perf_counter()
    so = cli("solve", example_path("ex46"))
    sp = cli("sparsest", example_path("ex46"))
    cl = cli("classify", example_path("ex46"))
    elapsed = time.perf_counter() - t0
    checks = {
        "x_hat": vec(so["x"]) == X46_STAR,
        "value 5/6": so["l1_norm"] == "5/6",
        "unique": so["certificate"]["is_unique"] is True,
        "sparsest": [(vec(s["x"]), s["rsp_holds"]) for s in sp["solutions"]] == [(X46_TILDE, False)],
        "not equivalent": cl["equivalent"] is False,
        "< 1 s": elapsed < 1.0,
    }
    failed = [k for k, ok in checks.items() if not ok]
    record("2 fixture ex46 end-to-end", not failed, f"{elapsed:.3f}s" + (f" failed: {failed}" if failed else ""))
    assert not failed


def test_criterion_3_ex36(record):
    t0 = time.perf_counter()
    cert = cli("certify", example_path("ex36"))
    an = cli("analyze", example_path("ex36"), "--k", 2)
    elapsed = time.perf_counter() - t0
    rsp = cert["certificate"]["rsp"]
    tau = float(parse_rational(rsp["tau"]))
    coh = an["coherence"]
    checks = {
        "x3 = 1.732050807569": vec(cert["x"])[2] == F("1.732050807569"),
        "holds": rsp["holds"] is True,
        f"tau* within {TAU_36_TOL} of {TAU_36}": abs(tau - TAU_36) < TAU_36_TOL,
        "spark 2": an["spark"] == 2,
        "pair (2,6) maximal": coh["pair"] == [1, 5],
        "ratio^2 ~ 1": abs(float(parse_rational(coh["mu_squared"])) - 1) < RATIO_36_TOL,
        "< 1 s": elapsed < 1.0,
    }
    failed = [k for k, ok in checks.items() if not ok]
    record("3 fixture ex36 at 12 digits", not failed,
           f"tau*={tau:.12f}" + (f" failed: {failed}" if failed else ""))
    assert not failed


def test_criterion_4_order_rsp_vs_recovery_oracle(record):
    t0 = time.perf_counter()
    mismatches = []
    for idx, A in enumerate(MATRICES):
        for K in (1, 2):
            if rsp_order(A, K).holds != uniform_recovery_oracle(A, K).all_recovered:
                mismatches.append((idx, K))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60 and len(MATRICES) >= 100
    record("4 RSP of order K == uniform recovery oracle", ok,
           f"{2 * len(MATRICES)} cases, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_5_uniqueness_vs_face_oracle(record):
    t0 = time.perf_counter()
    mismatches, uniques = [], 0
    for idx, sys in enumerate(SYSTEMS):
        x, _ = solve_min_l1(sys)
        cert = certify_unique_l1(sys, x).is_unique
        uniques += cert
        if cert != unique_optimum(basis_pursuit_lp(sys)):
            mismatches.append(idx)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60 and len(SYSTEMS) >= 100
    record("5 uniqueness certificate == optimal-face oracle", ok,
           f"{len(SYSTEMS)} systems ({uniques} unique), {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert ok


# -- criterion 6: property suite ------------------------------------------------

def prop_unique_implies_sparse():
    for sys in SYSTEMS:
        x, _ = solve_min_l1(sys)
        if certify_unique_l1(sys, x).is_unique and len(support(x)) > sys.m:
            return False
    return True


def prop_at_most_one_rsp_sparsest():
    return all(sum(rsp_at_point(s.A, v).holds for v in sparsest_solutions(s).solutions) <= 1 for s in SYSTEMS)


def prop_order_rsp_bounds_spark():
    for A in MATRICES:
        sp = spark(A)
        for K in (1, 2, 3):
            if rsp_order(A, K).holds and not sp > K:
                return False
    return True


def prop_coherence_bound():
    for idx, A in enumerate(MATRICES):
        c = mutual_coherence(A)
        K = min(c.order_bound, rank(A))
        if c.order_bound >= 1 and not (r := rsp_order(A, K)).holds:
            return f"matrix #{idx}: mu^2={c.mu_squared} at columns {c.pair}, K0={K}, fails at {r.failing_pair}"
    return True


def prop_sparsest_below_spark():
    for idx, sys in enumerate(SYSTEMS):
        k, sp = sparsest_solutions(sys).k_star, spark(sys.A)
        if any(sys.b) and not k < sp:
            return f"system #{idx}: k*={k}, spark={sp}"
    return True


def prop_h_g_rank():
    for sys in SYSTEMS:
        points = list(sparsest_solutions(sys).solutions) + [solve_min_l1(sys)[0]]
        for x in points:
            H, G = build_H_G(sys.A, x)
            if (rank(H) == H.ncols) != (rank(G) == G.ncols):
                return False
    return True


def prop_lp3_canonical_point():
    for sys in SYSTEMS:
        for x in list(sparsest_solutions(sys).solutions) + [solve_min_l1(sys)[0]]:
            if not build_lp3(sys, x).canonical_is_feasible():
                return False
    return True


def prop_dual_certificate():
    for sys in SYSTEMS:
        for x in list(sparsest_solutions(sys).solutions) + [solve_min_l1(sys)[0]]:
            r = rsp_at_point(sys.A, x)
            if r.holds and dual_certificate_violations(sys.A, x, dual_certificate_from_eta(x, r.eta)):
                return False
    return True


def prop_weak_rsp_bounds_order():
    for A in MATRICES:
        for K in range(1, A.ncols + 1):
            if weak_rsp_order(A, K).holds and K > A.nrows:
                return False
    return True


PROPERTIES = {
    "certified unique => ||x||_0 <= m": prop_unique_implies_sparse,
    "<= 1 RSP-passing sparsest solution": prop_at_most_one_rsp_sparsest,
    "order-K RSP => spark > K": prop_order_rsp_bounds_spark,
    "coherence bound K0 >= 1 => RSP of order K0": prop_coherence_bound,
    "k* < spark for b != 0": prop_sparsest_below_spark,
    "H full column rank <=> G full column rank": prop_h_g_rank,
    "LP3 canonical point feasible": prop_lp3_canonical_point,
    "dual certificate satisfies every clause": prop_dual_certificate,
    "weak RSP of order K => K <= m": prop_weak_rsp_bounds_order,
}

_SUITE_TIME = []


@pytest.mark.parametrize("name", list(PROPERTIES))
def test_criterion_6_properties(name, record):
    t0 = time.perf_counter()
    result = PROPERTIES[name]()
    elapsed = time.perf_counter() - t0
    _SUITE_TIME.append(elapsed)
    total = sum(_SUITE_TIME)
    ok = result is True and total < 60
    detail = f"{elapsed:.1f}s (suite so far {total:.1f}s)"
    if isinstance(result, str):
        detail += f"; counterexample {result}"
    record(f"6 {name}", ok, detail)
    assert ok, detail


# -- criterion 7: simplex unit suite --------------------------------------------

def _lp(c, rows, b, senses, bounds):
    return LpProblem(tuple(map(F, c)), RationalMatrix.from_rows(rows, len(c)), tuple(map(F, b)), senses, bounds)


def simplex_fixtures():
    N, FR = Bound.NONNEG, Bound.FREE
    yield "trivial", _lp([0], [[0]], [0], [Sense.EQ], [N]), Status.OPTIMAL
    yield "unbounded", LpProblem((F(-1),), RationalMatrix.zeros(0, 1), (), (), (N,)), Status.UNBOUNDED
    yield "unbounded free", _lp([1, 0], [[1, -1]], [0], [Sense.EQ], [FR, FR]), Status.UNBOUNDED
    yield "infeasible", _lp([1, 1], [[1, 1]], [-1], [Sense.EQ], [N, N]), Status.INFEASIBLE
    yield "infeasible pair", _lp([1, 1], [[1, 1], [1, 1]], [3, 1], [Sense.GE, Sense.LE], [N, N]), Status.INFEASIBLE
    yield "beale", _lp([F(-3, 4), 20, F(-1, 2), 6], [[F(1, 4), -8, -1, 9], [F(1, 2), -12, F(-1, 2), 3], [0, 0, 1, 0]],
                       [0, 0, 1], [Sense.LE] * 3, [N] * 4), Status.OPTIMAL
    rng = random.Random(5)
    for i in range(150):
        n, m = rng.randint(1, 5), rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-3, 3) for _ in range(m)]
        senses = [rng.choice(list(Sense)) for _ in range(m)]
        bounds = [rng.choice(list(Bound)) for _ in range(n)]
        yield f"random{i}", _lp([rng.randint(-3, 3) for _ in range(n)], rows, b, senses, bounds), None
    for sys in SYSTEMS[:30]:
        yield "basis pursuit", basis_pursuit_lp(sys), Status.OPTIMAL


def test_criterion_7_simplex_suite(record):
    failures, counts = [], {s: 0 for s in Status}
    for name, p, expected in simplex_fixtures():
        out = simplex_solve(p)
        counts[out.status] += 1
        ok = out.pivots[0] <= out.pivot_limits[0] and out.pivots[1] <= out.pivot_limits[1]
        if expected is not None:
            ok = ok and out.status is expected
        if out.status is Status.OPTIMAL:
            ok = ok and out.min_reduced_cost >= 0 and check_duality(p, out)
        if out.status is Status.INFEASIBLE:
            ok = ok and out.phase1_value > 0
        if not ok:
            failures.append(name)
    detail = ", ".join(f"{s.value}={c}" for s, c in counts.items()) + f", {len(failures)} failures"
    record("7 simplex unit suite", not failures, detail)
    assert not failures
