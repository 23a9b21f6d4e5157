"""Shared oracles and generators.

The oracles here are deliberately independent of the package internals:
formulas are evaluated by recursive boolean interpretation over explicit
assignments, counts by direct sum-of-products enumeration, and minimality
by exhaustive search over cube covers.
"""

from __future__ import annotations

import itertools
import random

from preflogic import Expr, Formula, TruthTable, formula_of, implication_form
from preflogic.atoms import Atom


def eval_expr(node: Expr, assignment: dict[Atom, bool]) -> bool:
    if node.op == "atom":
        return assignment[node.atom]
    if node.op == "true":
        return True
    if node.op == "false":
        return False
    vals = [eval_expr(a, assignment) for a in node.args]
    if node.op == "not":
        return not vals[0]
    if node.op == "and":
        return all(vals)
    if node.op == "or":
        return any(vals)
    if node.op == "implies":
        return (not vals[0]) or vals[1]
    if node.op == "xor":
        return vals[0] != vals[1]
    raise AssertionError(node.op)


def assignment_for(index: int, atoms) -> dict[Atom, bool]:
    n = len(atoms)
    return {a: bool((index >> (n - 1 - j)) & 1) for j, a in enumerate(atoms)}


def bits_by_enumeration(f: Formula) -> int:
    bits = 0
    for i in range(1 << len(f.atoms)):
        if eval_expr(f.tree, assignment_for(i, f.atoms)):
            bits |= 1 << i
    return bits


def wmc_by_enumeration(f: Formula, weights: dict[Atom, float]) -> float:
    total = 0.0
    for i in range(1 << len(f.atoms)):
        assignment = assignment_for(i, f.atoms)
        if not eval_expr(f.tree, assignment):
            continue
        prod = 1.0
        for a, truth in assignment.items():
            prod *= weights[a] if truth else 1.0 - weights[a]
        total += prod
    return total


def all_cubes(n: int):
    return ["".join(p) for p in itertools.product("01-", repeat=n)]


def cube_rows(cube: str) -> set[int]:
    n = len(cube)
    rows = set()
    for i in range(1 << n):
        if all(c == "-" or c == str((i >> (n - 1 - j)) & 1) for j, c in enumerate(cube)):
            rows.add(i)
    return rows


def minimal_cover(bits: int, n: int) -> tuple[int, int]:
    """(implicant count, fewest total literals at that count) by brute force.

    usable up to n = 3; the target row set must be non-empty and proper.
    """
    want = {i for i in range(1 << n) if (bits >> i) & 1}
    cubes = [c for c in all_cubes(n) if cube_rows(c) <= want]
    for size in range(1, len(want) + 1):
        literal_counts = []
        for combo in itertools.combinations(cubes, size):
            covered = set()
            for c in combo:
                covered |= cube_rows(c)
            if covered == want:
                literal_counts.append(sum(n - c.count("-") for c in combo))
        if literal_counts:
            return size, min(literal_counts)
    raise AssertionError("no cover found")


def random_bits(rng: random.Random, n: int, nonzero: bool = False) -> int:
    full = (1 << (1 << n)) - 1
    bits = rng.randint(0, full)
    if nonzero and bits == 0:
        bits = 1 << rng.randrange(1 << n)
    return bits


def structure_from_bits(atoms, check: int, cross: int):
    return implication_form(
        formula_of(TruthTable(atoms, check)), formula_of(TruthTable(atoms, cross))
    )


def random_weights(rng: random.Random, atoms, lo: float = 0.01, hi: float = 0.99) -> dict:
    return {a.token() if isinstance(a, Atom) else str(a): rng.uniform(lo, hi) for a in atoms}
