"""Enumerate structures between entailment bounds and lay out their order.

The partial order is preference entailment: check-set inclusion one way,
cross-set inclusion the other.  Anything between a lower and an upper
bound is obtained by growing the lower bound's check set inside the upper
bound's and growing the upper bound's cross set inside the lower bound's.
"""

from __future__ import annotations

from dataclasses import dataclass

from .atoms import canonical_order
from .errors import AtomLimitError, BoundViolationError, PrefLogicError
from .logic import TruthTable, formula_of, render
from .prefstruct import (
    PreferenceStructure,
    implication_form,
    is_nontrivial,
    pref_entails,
    pref_equivalent,
)

MAX_LATTICE_ATOMS = 4
MAX_INTERVAL = 1 << 20  # refuse blow-ups even inside the atom cap


@dataclass(frozen=True)
class LatticeSpec:
    lower: PreferenceStructure
    upper: PreferenceStructure
    nontrivial_only: bool = True


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def enumerate_between(spec: LatticeSpec) -> list[PreferenceStructure]:
    """All structures s with lower entails s entails upper, deduplicated.

    Structures are identified by their (check set, cross set) pair over the
    bounds' shared atom order and returned sorted by that pair.
    """
    atoms = canonical_order(tuple(spec.lower.atoms) + tuple(spec.upper.atoms))
    if len(atoms) > MAX_LATTICE_ATOMS:
        raise AtomLimitError(
            f"exhaustive enumeration handles at most {MAX_LATTICE_ATOMS} atoms, got {len(atoms)}"
        )
    lower = spec.lower.harmonized(atoms)
    upper = spec.upper.harmonized(atoms)
    if not pref_entails(lower, upper):
        raise BoundViolationError("lower bound does not entail upper bound")

    check_room = upper.check_bits & ~lower.check_bits
    cross_room = lower.cross_bits & ~upper.cross_bits
    count = (1 << bin(check_room).count("1")) * (1 << bin(cross_room).count("1"))
    if count > MAX_INTERVAL:
        raise PrefLogicError(f"interval holds {count} structures; refusing to enumerate")

    pairs = set()
    for extra_check in _submasks(check_room):
        check = lower.check_bits | extra_check
        for extra_cross in _submasks(cross_room):
            pairs.add((check, upper.cross_bits | extra_cross))

    out = []
    for check, cross in sorted(pairs):
        s = implication_form(
            formula_of(TruthTable(atoms, check)), formula_of(TruthTable(atoms, cross))
        )
        if spec.nontrivial_only and not is_nontrivial(s):
            continue
        assert pref_entails(lower, s) and pref_entails(s, upper)
        out.append(s)
    return out


def hasse(structures) -> list[tuple[int, int]]:
    """Covering relation of strict entailment over deduplicated structures.

    Returns (i, j) index pairs meaning structures[i] strictly entails
    structures[j] with nothing in between.
    """
    items = list(structures)
    atoms = canonical_order(a for s in items for a in s.atoms)
    aligned = [s.harmonized(atoms) for s in items]
    m = len(aligned)
    for i in range(m):
        for j in range(i + 1, m):
            if pref_equivalent(aligned[i], aligned[j]):
                raise PrefLogicError(f"structures {i} and {j} are equivalent; deduplicate first")
    le = [[pref_entails(aligned[i], aligned[j]) for j in range(m)] for i in range(m)]
    edges = []
    for i in range(m):
        for j in range(m):
            if i == j or not le[i][j]:
                continue
            if any(k not in (i, j) and le[i][k] and le[k][j] for k in range(m)):
                continue
            edges.append((i, j))
    return edges


def export_dot(structures, edges, labels=None) -> str:
    """Render structures and covering edges as a DOT digraph.

    Nodes sharing a core formula are grouped into clusters.  Labels come
    from the optional index -> name mapping, falling back to the hex of the
    (check, cross) bit pair.
    """
    items = list(structures)
    labels = labels or {}
    atoms = canonical_order(a for s in items for a in s.atoms)
    aligned = [s.harmonized(atoms) for s in items]

    lines = ["digraph preference_lattice {", "  rankdir=LR;", "  node [shape=box];"]
    regions: dict[int, list[int]] = {}
    for i, s in enumerate(aligned):
        regions.setdefault(s.p.bits, []).append(i)
    for cluster, core_bits in enumerate(sorted(regions)):
        members = regions[core_bits]
        core = render(aligned[members[0]].p.tree)
        lines.append(f"  subgraph cluster_{cluster} {{")
        lines.append(f'    label="{core}";')
        for i in members:
            name = labels.get(i)
            if name is None:
                name = f"0x{aligned[i].check_bits:X}/0x{aligned[i].cross_bits:X}"
            lines.append(f'    n{i} [label="{name}"];')
        lines.append("  }")
    for i, j in edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
