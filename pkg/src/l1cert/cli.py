"""``l1cert`` command-line interface."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import (
    ZeroColumn,
    mutual_coherence,
    rsp_order,
    spark,
    uniform_recovery_oracle,
    weak_rsp_order,
)
from .io import ProblemFile, ProblemParseError, dump_report, load_problem, load_vector
from .l1opt import InconsistentSystem, KmaxExceeded, LinearSystem, NotASolution, solve_min_l1, sparsest_solutions
from .rational import format_rational, rank
from .rsp import certify_unique_l1, classify_system, dual_certificate_from_eta, rsp_at_point

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_NOT_SOLUTION = 4
EXIT_BAD_K = 5
EXIT_KMAX = 6


class BadK(ValueError):
    pass


def _fmt(v) -> str:
    return "(" + ", ".join(format_rational(a) for a in v) + ")"


def _system(problem: ProblemFile) -> LinearSystem:
    if problem.b is None:
        raise ProblemParseError("this command needs 'b'")
    return LinearSystem(problem.A, problem.b)


def _rsp_dict(r) -> dict:
    return {"feasible": r.feasible, "tau": r.tau, "eta": r.eta, "multiplier": r.multiplier, "holds": r.holds}


def _verdict_dict(v) -> dict:
    return {
        "rsp": _rsp_dict(v.rsp),
        "support_full_rank": v.support_full_rank,
        "is_unique": v.is_unique,
        "reason": v.reason,
    }


def _order_dict(r) -> dict:
    return {
        "K": r.K,
        "holds": r.holds,
        "failing_pair": None if r.failing_pair is None else {"S1": r.failing_pair[0], "S2": r.failing_pair[1]},
        "checked_pairs": r.checked_pairs,
        "rank_condition": r.rank_condition,
    }


def cmd_solve(problem: ProblemFile, args) -> tuple[dict, list[str]]:
    sys_ = _system(problem)
    x, value = solve_min_l1(sys_)
    v = certify_unique_l1(sys_, x)
    verdicts = {"x": x, "l1_norm": value, "certificate": _verdict_dict(v)}
    lines = [f"least l1 solution: {_fmt(x)}", f"l1 norm: {format_rational(value)}",
             f"unique: {v.is_unique} ({v.reason})"]
    return verdicts, lines


def cmd_certify(problem: ProblemFile, args) -> tuple[dict, list[str]]:
    sys_ = _system(problem)
    x = load_vector(args.x) if args.x else problem.x
    if x is None:
        raise ProblemParseError("certify needs 'x' in the problem file or via --x")
    if len(x) != sys_.n:
        raise ProblemParseError(f"'x' has length {len(x)}, A has {sys_.n} columns")
    v = certify_unique_l1(sys_, x)
    verdicts = {"x": x, "certificate": _verdict_dict(v), "dual_certificate": None}
    lines = [f"x: {_fmt(x)}", f"rsp holds: {v.rsp.holds}"
             + (f" (tau* = {format_rational(v.rsp.tau)})" if v.rsp.tau is not None else " (tau-LP infeasible)"),
             f"support full column rank: {v.support_full_rank}", f"unique: {v.is_unique} ({v.reason})"]
    if v.rsp.holds:
        cert = dual_certificate_from_eta(x, v.rsp.eta)
        verdicts["dual_certificate"] = {"y": cert.y, "y_prime": cert.y_prime, "omega": cert.omega}
        lines.append(f"eta: {_fmt(v.rsp.eta)}")
    return verdicts, lines


def cmd_classify(problem: ProblemFile, args) -> tuple[dict, list[str]]:
    c = classify_system(_system(problem))
    verdicts = {
        "group": c.group.value,
        "l1_solution": c.l1_solution,
        "l1_norm": c.l1_value,
        "l1_unique": c.l1_unique,
        "k_star": c.sparsest.k_star,
        "sparsest": c.sparsest.solutions,
        "equivalent": c.equivalent,
        "strongly_equivalent": c.strongly_equivalent,
    }
    lines = [f"group: {c.group.value}", f"least l1 solution: {_fmt(c.l1_solution)} (unique: {c.l1_unique})",
             f"sparsest (k* = {c.sparsest.k_star}): {len(c.sparsest.solutions)} solution(s)"]
    lines += [f"  {_fmt(s)}" for s in c.sparsest.solutions]
    lines += [f"equivalent: {c.equivalent}", f"strongly equivalent: {c.strongly_equivalent}"]
    return verdicts, lines


def cmd_analyze(problem: ProblemFile, args) -> tuple[dict, list[str]]:
    A = problem.A
    K = 1 if args.k is None else args.k
    if not 1 <= K <= A.ncols:
        raise BadK(f"K must lie in [1, {A.ncols}], got {K}")
    try:
        c = mutual_coherence(A)
        coh = {"mu_squared": c.mu_squared, "pair": c.pair, "order_bound": c.order_bound,
               "strict_bound": c.strict_bound}
        coh_line = f"mu^2 = {format_rational(c.mu_squared)} at columns {c.pair}, order bound {c.order_bound}"
    except ZeroColumn as exc:
        coh = {"error": str(exc)}
        coh_line = f"coherence undefined: {exc}"
    sp = spark(A)
    ro = rsp_order(A, K, strict=args.strict)
    wr = weak_rsp_order(A, K)
    verdicts = {
        "K": K,
        "rank": rank(A),
        "coherence": coh,
        "spark": sp,
        "rsp_order": _order_dict(ro),
        "weak_rsp_order": _order_dict(wr),
        "oracle": None,
    }
    lines = [coh_line, f"spark: {sp}", f"RSP of order {K}: {ro.holds}"
             + (f" (fails at S1={ro.failing_pair[0]}, S2={ro.failing_pair[1]})" if ro.failing_pair else ""),
             f"weak RSP of order {K}: {wr.holds}"]
    if args.oracle:
        orc = uniform_recovery_oracle(A, K)
        verdicts["oracle"] = {
            "all_recovered": orc.all_recovered,
            "counterexample": orc.counterexample,
            "probes": orc.probes,
            "agrees": orc.all_recovered == ro.holds,
        }
        lines.append(f"recovery oracle: all recovered = {orc.all_recovered}, agrees = {orc.all_recovered == ro.holds}")
    return verdicts, lines


def cmd_sparsest(problem: ProblemFile, args) -> tuple[dict, list[str]]:
    sys_ = _system(problem)
    s = sparsest_solutions(sys_, args.k)
    flags = [rsp_at_point(sys_.A, v).holds for v in s.solutions]
    passing = sum(flags)
    assert passing <= 1, "more than one sparsest solution satisfies the RSP"
    verdicts = {
        "k_star": s.k_star,
        "solutions": [{"x": v, "rsp_holds": f} for v, f in zip(s.solutions, flags)],
        "rsp_passing_count": passing,
    }
    lines = [f"k* = {s.k_star}, {len(s.solutions)} sparsest solution(s)"]
    lines += [f"  {_fmt(v)}  rsp={f}" for v, f in zip(s.solutions, flags)]
    return verdicts, lines


COMMANDS = {
    "solve": cmd_solve,
    "certify": cmd_certify,
    "classify": cmd_classify,
    "analyze": cmd_analyze,
    "sparsest": cmd_sparsest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="l1cert", description="Exact certificates for l1/l0 recovery.")
    p.add_argument("--version", action="version", version=f"l1cert {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", help="problem JSON: {\"A\": [[...]], \"b\": [...], \"x\": [...]}")
    p.add_argument("--x", help="JSON file holding x (overrides x in the problem file)")
    p.add_argument("--k", type=int, help="order K for analyze, k-max for sparsest")
    p.add_argument("--strict", action="store_true", help="analyze: check every pattern size 1..K")
    p.add_argument("--oracle", action="store_true", help="analyze: cross-check with the recovery oracle")
    p.add_argument("--json", action="store_true", help="print the full JSON report instead of a summary")
    p.add_argument("-o", "--output", help="write the JSON report to this path")
    p.add_argument("--timings", action="store_true", help="record wall-clock timings in the report")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        problem = load_problem(args.file)
        t0 = time.perf_counter()
        verdicts, lines = COMMANDS[args.command](problem, args)
        elapsed = (time.perf_counter() - t0) * 1000
    except ProblemParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except InconsistentSystem as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except NotASolution as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NOT_SOLUTION
    except BadK as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_BAD_K
    except KmaxExceeded as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_KMAX
    except ValueError as exc:
        # k-max outside [0, n] for sparsest
        print(f"error: {exc}", file=stderr)
        return EXIT_BAD_K

    report = {
        "command": args.command,
        "tool_version": __version__,
        "problem": problem.to_json(),
        "verdicts": verdicts,
        "timings_ms": {"total": round(elapsed, 3)} if args.timings else None,
    }
    text = dump_report(report)
    if args.output:
        Path(args.output).write_text(text)
    if args.json:
        stdout.write(text)
    else:
        stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
