# Copyright 2026 The ModelHub Authors
# SPDX-License-Identifier: Apache-2.0

"""Freezes a corpus of small random LPs solved with SciPy's HiGHS backend.

Usage: python3 gen_lp_corpus.py > tests/data/lp_corpus.json
"""

import json
import random
import sys

import numpy as np
from scipy.optimize import linprog

RELATIONS = ["<=", ">=", "=="]


def random_problem(rng):
    n = rng.randint(1, 4)
    m = rng.randint(0, 8)
    coef = lambda: rng.randint(-5, 5)
    rows = []
    for _ in range(m):
        rows.append({
            "a": [coef() for _ in range(n)],
            "rel": rng.choices(RELATIONS, weights=[5, 3, 1])[0],
            "b": coef(),
        })
    bounds = []
    for _ in range(n):
        kind = rng.choice(["nonneg", "nonneg", "free", "box", "upper"])
        if kind == "nonneg":
            bounds.append([0, None])
        elif kind == "free":
            bounds.append([None, None])
        elif kind == "box":
            lo = rng.randint(-5, 3)
            bounds.append([lo, lo + rng.randint(0, 5)])
        else:
            bounds.append([None, rng.randint(-5, 5)])
    # Keep rows + bounds within the brute-force oracle's limit.
    while m + sum(b is not None for pair in bounds for b in pair) > 12:
        rows.pop()
        m -= 1
    return {
        "sense": rng.choice(["min", "max"]),
        "c": [coef() for _ in range(n)],
        "rows": rows,
        "bounds": bounds,
    }


def solve(p):
    n = len(p["c"])
    c = np.array(p["c"], dtype=float)
    if p["sense"] == "max":
        c = -c
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for r in p["rows"]:
        if r["rel"] == "<=":
            a_ub.append(r["a"]); b_ub.append(r["b"])
        elif r["rel"] == ">=":
            a_ub.append([-v for v in r["a"]]); b_ub.append(-r["b"])
        else:
            a_eq.append(r["a"]); b_eq.append(r["b"])
    res = linprog(
        c,
        A_ub=np.array(a_ub, dtype=float).reshape(-1, n) if a_ub else None,
        b_ub=b_ub or None,
        A_eq=np.array(a_eq, dtype=float).reshape(-1, n) if a_eq else None,
        b_eq=b_eq or None,
        bounds=[tuple(b) for b in p["bounds"]],
        method="highs",
    )
    if res.status == 0:
        obj = float(res.fun) * (-1 if p["sense"] == "max" else 1)
        return "optimal", obj
    if res.status == 2:
        return "infeasible", None
    if res.status == 3:
        return "unbounded", None
    return None, None


def main():
    rng = random.Random(20261019)
    cases = []
    while len(cases) < 300:
        p = random_problem(rng)
        status, obj = solve(p)
        if status is None:
            continue
        p["expected"] = {"status": status, "objective": obj}
        cases.append(p)
    json.dump({"generator": "scipy.optimize.linprog(method='highs')",
               "seed": 20261019, "cases": cases}, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
