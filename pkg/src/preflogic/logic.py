"""Propositional formulas over prediction atoms.

A formula is an expression tree plus the ordered atom list it ranges over.
Its canonical form is the truth-table bitmask over that atom order: bit i
is set iff assignment i satisfies the formula, where bit j of i (counting
from the most significant of n bits) gives the truth value of atom j.  Two
formulas are equal exactly when their atom orders and bitmasks agree.

Formula source text is an s-expression::

    formula   := atomtoken | "true" | "false" | "(" op formula+ ")"
    op        := not | and | or | implies | xor
    atomtoken := model ":" role [":" copy]

with arities: not 1, and/or >= 2, implies/xor exactly 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .atoms import Atom, as_atom, canonical_order
from .errors import AtomLimitError, FormulaSyntaxError, UndeclaredAtomError

MAX_ATOMS = 16          # truth-table bitmasks beyond this are refused
MAX_MINIMIZE_ATOMS = 6  # exact two-level minimization cap

_OPS = {"not": (1, 1), "and": (2, None), "or": (2, None), "implies": (2, 2), "xor": (2, 2)}


@dataclass(frozen=True)
class Expr:
    """One node of a formula tree."""

    op: str  # 'atom', 'true', 'false', 'not', 'and', 'or', 'implies', 'xor'
    args: tuple["Expr", ...] = ()
    atom: Atom | None = None

    def atoms(self) -> set[Atom]:
        if self.op == "atom":
            return {self.atom}
        out: set[Atom] = set()
        for a in self.args:
            out |= a.atoms()
        return out


TRUE = Expr("true")
FALSE = Expr("false")


def var(a) -> Expr:
    return Expr("atom", atom=as_atom(a))


def not_(x: Expr) -> Expr:
    return Expr("not", (x,))


def and_(*xs: Expr) -> Expr:
    if len(xs) < 2:
        raise ValueError("and takes at least two operands")
    return Expr("and", tuple(xs))


def or_(*xs: Expr) -> Expr:
    if len(xs) < 2:
        raise ValueError("or takes at least two operands")
    return Expr("or", tuple(xs))


def implies_(a: Expr, b: Expr) -> Expr:
    return Expr("implies", (a, b))


def xor_(a: Expr, b: Expr) -> Expr:
    return Expr("xor", (a, b))


def render(node: Expr) -> str:
    if node.op == "atom":
        return node.atom.token()
    if node.op in ("true", "false"):
        return node.op
    return "(" + " ".join([node.op] + [render(a) for a in node.args]) + ")"


def _var_mask(j: int, n: int) -> int:
    # bitmask of assignments where atom j is true; atom j owns bit (n-1-j) of i
    block = 1 << (n - 1 - j)
    seg = (1 << block) - 1
    mask = 0
    for start in range(block, 1 << n, 2 * block):
        mask |= seg << start
    return mask


def _tree_bits(node: Expr, index: dict[Atom, int], n: int, full: int) -> int:
    if node.op == "atom":
        return _var_mask(index[node.atom], n)
    if node.op == "true":
        return full
    if node.op == "false":
        return 0
    kids = [_tree_bits(a, index, n, full) for a in node.args]
    if node.op == "not":
        return full & ~kids[0]
    if node.op == "and":
        out = full
        for k in kids:
            out &= k
        return out
    if node.op == "or":
        out = 0
        for k in kids:
            out |= k
        return out
    if node.op == "implies":
        return (full & ~kids[0]) | kids[1]
    if node.op == "xor":
        return kids[0] ^ kids[1]
    raise ValueError(f"unknown node kind {node.op!r}")


@dataclass(frozen=True, eq=False)
class Formula:
    """Expression tree canonicalized over an ordered atom list."""

    tree: Expr
    atoms: tuple[Atom, ...]
    bits: int = field(init=False)

    def __post_init__(self):
        atoms = canonical_order(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        n = len(atoms)
        if n > MAX_ATOMS:
            raise AtomLimitError(f"{n} atoms exceeds the {MAX_ATOMS}-atom truth-table cap")
        missing = self.tree.atoms() - set(atoms)
        if missing:
            toks = ", ".join(sorted(a.token() for a in missing))
            raise UndeclaredAtomError(f"formula mentions undeclared atoms: {toks}")
        index = {a: j for j, a in enumerate(atoms)}
        full = (1 << (1 << n)) - 1
        object.__setattr__(self, "bits", _tree_bits(self.tree, index, n, full))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << (1 << self.n)) - 1

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return self.atoms == other.atoms and self.bits == other.bits

    def __hash__(self):
        return hash((self.atoms, self.bits))

    def __str__(self):
        return render(self.tree)


def row_permutation(given: tuple[Atom, ...], target: tuple[Atom, ...]) -> list[int]:
    """Map each row index under the given atom order to its index under target."""
    n = len(given)
    shift_of = {a: n - 1 - j for j, a in enumerate(target)}
    perm = []
    for i in range(1 << n):
        out = 0
        for k, a in enumerate(given):
            if (i >> (n - 1 - k)) & 1:
                out |= 1 << shift_of[a]
        perm.append(out)
    return perm


@dataclass(frozen=True)
class TruthTable:
    """Satisfying-assignment bit set over an ordered atom list.

    Rows given under a non-canonical atom order are re-indexed into the
    canonical order.
    """

    atoms: tuple[Atom, ...]
    bits: int

    def __post_init__(self):
        given = tuple(as_atom(a) for a in self.atoms)
        if len(set(given)) != len(given):
            raise ValueError("duplicate atoms in truth-table order")
        atoms = canonical_order(given)
        n = len(atoms)
        if n > MAX_ATOMS:
            raise AtomLimitError(f"{n} atoms exceeds the {MAX_ATOMS}-atom truth-table cap")
        if not 0 <= self.bits < (1 << (1 << n)):
            raise ValueError("bit set does not fit the 2^n assignment rows")
        if atoms != given:
            perm = row_permutation(given, atoms)
            bits = 0
            for i in _iter_bits(self.bits):
                bits |= 1 << perm[i]
            object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "atoms", atoms)

    @property
    def n(self) -> int:
        return len(self.atoms)

    def rows(self):
        """Yield (assignment index, satisfied) over all 2^n rows."""
        for i in range(1 << self.n):
            yield i, bool((self.bits >> i) & 1)


def formula(tree: Expr, atoms) -> Formula:
    return Formula(tree, canonical_order(atoms))


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            out.append((c, i))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()":
            j += 1
        out.append((text[i:j], i))
        i = j
    return out


def parse_formula(text: str, atoms) -> Formula:
    """Parse formula source over a declared atom set.

    Every atom token in the text must appear in ``atoms``; the returned
    formula ranges over the full declared set in canonical order, so unused
    declared atoms still widen the truth table.
    """
    declared = canonical_order(atoms)
    allowed = set(declared)
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def node() -> Expr:
        tok, at = take()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", at)
        if tok == ")":
            raise FormulaSyntaxError("unexpected ')'", at)
        if tok == "(":
            op, op_at = take()
            if op not in _OPS:
                raise FormulaSyntaxError(f"unknown operator {op!r}", op_at)
            args = []
            while True:
                nxt, nxt_at = peek()
                if nxt is None:
                    raise FormulaSyntaxError("missing ')'", nxt_at)
                if nxt == ")":
                    take()
                    break
                args.append(node())
            lo, hi = _OPS[op]
            if len(args) < lo or (hi is not None and len(args) > hi):
                want = f"exactly {lo}" if hi == lo else f"at least {lo}"
                raise FormulaSyntaxError(f"{op} takes {want} operands, got {len(args)}", op_at)
            return Expr(op, tuple(args))
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if ":" not in tok:
            raise FormulaSyntaxError(f"expected atom token or constant, got {tok!r}", at)
        atom = as_atom(tok)
        if atom not in allowed:
            raise UndeclaredAtomError(f"atom {tok!r} is not declared")
        return Expr("atom", atom=atom)

    tree = node()
    extra, extra_at = peek()
    if extra is not None:
        raise FormulaSyntaxError(f"trailing input {extra!r}", extra_at)
    return Formula(tree, declared)


# ---------------------------------------------------------------------------
# truth-table conversions


def models_of(f: Formula) -> TruthTable:
    return TruthTable(f.atoms, f.bits)


def formula_of(t: TruthTable) -> Formula:
    """A formula whose model set equals t, printed as a minimal sum of products.

    Above the minimization cap the raw minterm expansion is returned instead.
    """
    n = t.n
    full = (1 << (1 << n)) - 1
    if t.bits == 0:
        return Formula(FALSE, t.atoms)
    if t.bits == full:
        return Formula(TRUE, t.atoms)
    if n <= MAX_MINIMIZE_ATOMS:
        patterns = _min_cover_patterns(t.bits, n)
    else:
        patterns = [_minterm_pattern(i, n) for i in _iter_bits(t.bits)]
    return Formula(_sop_tree(patterns, t.atoms), t.atoms)


def harmonize(f: Formula, atoms) -> Formula:
    """Rebuild f over a widened atom set (union, canonical order)."""
    merged = canonical_order(tuple(f.atoms) + tuple(canonical_order(atoms)))
    if merged == f.atoms:
        return f
    return Formula(f.tree, merged)


def harmonize_pair(f1: Formula, f2: Formula) -> tuple[Formula, Formula]:
    merged = canonical_order(tuple(f1.atoms) + tuple(f2.atoms))
    return harmonize(f1, merged), harmonize(f2, merged)


def equivalent(f1: Formula, f2: Formula) -> bool:
    a, b = harmonize_pair(f1, f2)
    return a.bits == b.bits


def entails_formula(f1: Formula, f2: Formula) -> bool:
    a, b = harmonize_pair(f1, f2)
    return a.bits & ~b.bits == 0


# ---------------------------------------------------------------------------
# exact two-level minimization
#
# Quine-McCluskey with essential primes plus Petrick expansion.  Cubes are
# pattern strings over the canonical atom order, one char per atom:
# '1' positive literal, '0' negated literal, '-' absent.  Ties between
# minimum covers break on fewer implicants, then fewer total literals,
# then the lexicographically smallest sorted pattern tuple.


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _minterm_pattern(i: int, n: int) -> str:
    return "".join("1" if (i >> (n - 1 - j)) & 1 else "0" for j in range(n))


def _try_merge(a: str, b: str) -> str | None:
    diff = -1
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            if x == "-" or y == "-" or diff >= 0:
                return None
            diff = k
    if diff < 0:
        return None
    return a[:diff] + "-" + a[diff + 1:]


def _prime_implicants(minterms: list[int], n: int) -> list[str]:
    current = {_minterm_pattern(i, n) for i in minterms}
    primes: set[str] = set()
    while current:
        merged = set()
        used = set()
        by_ones: dict[int, list[str]] = {}
        for p in current:
            by_ones.setdefault(p.count("1"), []).append(p)
        for ones, group in sorted(by_ones.items()):
            for a in group:
                for b in by_ones.get(ones + 1, ()):
                    m = _try_merge(a, b)
                    if m is not None:
                        merged.add(m)
                        used.add(a)
                        used.add(b)
        primes |= current - used
        current = merged
    return sorted(primes)


def _covers(pattern: str, minterm: int, n: int) -> bool:
    for j, c in enumerate(pattern):
        if c == "-":
            continue
        bit = (minterm >> (n - 1 - j)) & 1
        if c != str(bit):
            return False
    return True


def _absorb(sets) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    for p in sorted(sets, key=len):
        if not any(q <= p for q in out):
            out.append(p)
    return out


def _petrick(requirements: list[frozenset[int]]) -> list[frozenset[int]]:
    # product of sums over prime indices, expanded with absorption; products
    # already meeting a requirement pass through unchanged
    products: list[frozenset[int]] = [frozenset()]
    for req in sorted(set(requirements), key=len):
        grown = set()
        for p in products:
            if p & req:
                grown.add(p)
            else:
                for i in req:
                    grown.add(p | {i})
        products = _absorb(grown)
    return products


def _min_cover_patterns(bits: int, n: int) -> list[str]:
    minterms = list(_iter_bits(bits))
    primes = _prime_implicants(minterms, n)
    covering = {m: frozenset(i for i, p in enumerate(primes) if _covers(p, m, n)) for m in minterms}

    # iterate essential primes and row dominance until the core is cyclic;
    # a row whose covering set contains another row's is implied by it and
    # can be dropped without changing the candidate covers
    chosen: set[int] = set()
    remaining = set(minterms)
    while True:
        forced = {next(iter(covering[m])) for m in remaining if len(covering[m]) == 1}
        forced -= chosen
        if forced:
            chosen |= forced
            remaining = {m for m in remaining if not (covering[m] & chosen)}
            continue
        rows = sorted(remaining, key=lambda m: (len(covering[m]), m))
        dropped = set()
        for a_pos, a in enumerate(rows):
            if a in dropped:
                continue
            for b in rows[a_pos + 1:]:
                if b not in dropped and covering[a] <= covering[b]:
                    dropped.add(b)
        if not dropped:
            break
        remaining -= dropped

    if remaining:
        candidates = _petrick([covering[m] for m in sorted(remaining)])
        covers = [chosen | extra for extra in candidates]
    else:
        covers = [set(chosen)]

    def literals(cover):
        return sum(n - primes[i].count("-") for i in cover)

    best = min(covers, key=lambda c: (len(c), literals(c), tuple(sorted(primes[i] for i in c))))
    return sorted(primes[i] for i in best)


def _pattern_tree(pattern: str, atoms: tuple[Atom, ...]) -> Expr:
    lits = []
    for j, c in enumerate(pattern):
        if c == "1":
            lits.append(Expr("atom", atom=atoms[j]))
        elif c == "0":
            lits.append(not_(Expr("atom", atom=atoms[j])))
    if not lits:
        return TRUE
    if len(lits) == 1:
        return lits[0]
    return and_(*lits)


def _sop_tree(patterns: list[str], atoms: tuple[Atom, ...]) -> Expr:
    terms = [_pattern_tree(p, atoms) for p in sorted(patterns)]
    if not terms:
        return FALSE
    if len(terms) == 1:
        return terms[0]
    return or_(*terms)


def minimize(f: Formula) -> Formula:
    """Equivalent formula in minimal sum-of-products form (deterministic)."""
    if f.n > MAX_MINIMIZE_ATOMS:
        raise AtomLimitError(
            f"exact minimization handles at most {MAX_MINIMIZE_ATOMS} atoms, got {f.n}"
        )
    if f.bits == 0:
        out = Formula(FALSE, f.atoms)
    elif f.bits == f.full_mask:
        out = Formula(TRUE, f.atoms)
    else:
        out = Formula(_sop_tree(_min_cover_patterns(f.bits, f.n), f.atoms), f.atoms)
    assert out.bits == f.bits
    return out
