"""Problem files and JSON reports; every rational travels as a ``p/q`` string."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .rational import RationalMatrix, RationalParseError, Vector, format_rational, parse_rational


class ProblemParseError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemFile:
    A: RationalMatrix
    b: Vector | None = None
    x: Vector | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"A": [[format_rational(a) for a in r] for r in self.A.data]}
        if self.b is not None:
            out["b"] = rationals(self.b)
        if self.x is not None:
            out["x"] = rationals(self.x)
        return out


def _vec(raw, name: str) -> Vector:
    if not isinstance(raw, list):
        raise ProblemParseError(f"{name!r} must be a list of rational strings")
    try:
        return tuple(parse_rational(v) for v in raw)
    except RationalParseError as exc:
        raise ProblemParseError(f"{name}: {exc}") from exc


def parse_problem(doc: Any) -> ProblemFile:
    if not isinstance(doc, dict) or "A" not in doc:
        raise ProblemParseError("problem must be an object with key 'A'")
    unknown = set(doc) - {"A", "b", "x"}
    if unknown:
        raise ProblemParseError(f"unknown keys: {sorted(unknown)}")
    rows = doc["A"]
    if not isinstance(rows, list) or not rows:
        raise ProblemParseError("'A' must be a non-empty list of rows")
    parsed = [_vec(r, "A row") for r in rows]
    ncols = len(parsed[0])
    if ncols == 0 or any(len(r) != ncols for r in parsed):
        raise ProblemParseError("'A' rows must be non-empty and of equal length")
    A = RationalMatrix(len(parsed), ncols, tuple(parsed))
    b = _vec(doc["b"], "b") if "b" in doc else None
    x = _vec(doc["x"], "x") if "x" in doc else None
    if b is not None and len(b) != A.nrows:
        raise ProblemParseError(f"'b' has length {len(b)}, A has {A.nrows} rows")
    if x is not None and len(x) != A.ncols:
        raise ProblemParseError(f"'x' has length {len(x)}, A has {A.ncols} columns")
    return ProblemFile(A, b, x)


def load_problem(path: str | Path) -> ProblemFile:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemParseError(f"cannot read {path}: {exc}") from exc
    return parse_problem(doc)


def load_vector(path: str | Path) -> Vector:
    """Read ``x`` from a JSON list or an object with key ``x``."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemParseError(f"cannot read {path}: {exc}") from exc
    if isinstance(doc, dict):
        if "x" not in doc:
            raise ProblemParseError(f"{path} has no 'x'")
        doc = doc["x"]
    return _vec(doc, "x")


def rationals(v) -> list[str]:
    return [format_rational(a) for a in v]


def to_jsonable(obj: Any) -> Any:
    """Convert report values: Fractions become ``p/q`` strings, tuples become lists."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dump_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), indent=2) + "\n"
