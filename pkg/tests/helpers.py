from __future__ import annotations

import json
import random
from fractions import Fraction
from importlib import resources
from itertools import combinations

from l1cert.io import parse_problem
from l1cert.l1opt import LinearSystem
from l1cert.rational import RationalMatrix

F = Fraction

X34 = [
    (F(1), F(-1), F(0), F(0)),
    (F(0), F(1), F(-1, 2), F(0)),
    (F(0), F(4, 5), F(0), F(1, 5)),
    (F(0), F(0), F(2), F(1)),
    (F(1, 2), F(0), F(-1, 4), F(0)),
    (F(4, 9), F(0), F(0), F(1, 9)),
]
X46_STAR = (F(1, 3), F(-1, 2), F(0), F(0), F(0))
X46_TILDE = (F(0), F(0), F(0), F(1), F(0))
SMALL = RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1]])


def load_example(name: str):
    text = resources.files("l1cert").joinpath("data", f"{name}.json").read_text()
    return parse_problem(json.loads(text))


def example_system(name: str) -> LinearSystem:
    p = load_example(name)
    return LinearSystem(p.A, p.b)


def example_path(name: str):
    return resources.files("l1cert").joinpath("data", f"{name}.json")


def random_matrices(count: int = 100, m: int = 3, n: int = 6, lo: int = -3, hi: int = 3, seed: int = 20240611):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = RationalMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)])
        if any(all(v == 0 for v in A.column(j)) for j in range(n)):
            continue
        out.append(A)
    return out


def random_systems(count: int = 100, seed: int = 99):
    """Consistent systems ``Ax = b`` with ``b`` generated from a random sparse vector."""
    rng = random.Random(seed)
    mats = random_matrices(count, seed=seed)
    systems = []
    for A in mats:
        k = rng.randint(1, 3)
        x = [F(0)] * A.ncols
        for i in rng.sample(range(A.ncols), k):
            x[i] = F(rng.choice([-2, -1, 1, 2]))
        systems.append(LinearSystem(A, A.matvec(x)))
    return systems


def brute_force_rank(M: RationalMatrix) -> int:
    """Rank as the largest nonsingular square minor, by cofactor determinants."""

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        return sum(((-1) ** j) * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(len(rows)))

    for k in range(min(M.shape), 0, -1):
        for R in combinations(range(M.nrows), k):
            for C in combinations(range(M.ncols), k):
                if det([[M[i, j] for j in C] for i in R]) != 0:
                    return k
    return 0
