"""Toolkit for translating between preference-alignment losses and propositional logic.

Losses enter as ratios of disjoint multilinear polynomials over prediction
probabilities, become preference structures (a core formula plus
conditioning and additive constraints), and compile back into losses via
weighted model counting.  The loss landscape is analyzed through
preference entailment, equivalence, lattices and a real-valued (fuzzy)
reading.
"""

from .atoms import Atom, canonical_order, parse_atom
from .decompile import decompile, decompile_fuzzy, reference_structure, sem
from .errors import (
    AtomLimitError,
    BoundViolationError,
    EquationSyntaxError,
    FormulaSyntaxError,
    MissingWeightError,
    NonDisjointError,
    PrefLogicError,
    TrivialStructureError,
    UndeclaredAtomError,
    UnknownLossError,
    ZeroCountError,
)
from .catalog import Catalog, CatalogEntry, load_catalog
from .lattice import LatticeSpec, enumerate_between, export_dot, hasse
from .logic import (
    Expr,
    Formula,
    TruthTable,
    entails_formula,
    equivalent,
    formula_of,
    harmonize,
    minimize,
    models_of,
    parse_formula,
    render,
)
from .poly import (
    LossEquation,
    Literal,
    Polynomial,
    Term,
    WeightMap,
    check_disjoint,
    dpop_gate,
    eval_poly,
    make_multilinear,
    parse_equation,
    reference_transform,
    simpo_margin_weights,
)
from .prefstruct import (
    MarkTable,
    PreferenceStructure,
    count_structures,
    formula_forms,
    from_marks,
    implication_form,
    is_nontrivial,
    marks_from_json,
    marks_to_json,
    pref_entails,
    pref_equivalent,
    structure_from_json,
    structure_to_json,
    to_marks,
)
from .semantics import (
    apply_f,
    compile_equation,
    fuzzy_expression,
    fuzzy_loss,
    fuzzy_value,
    loss_ratio,
    loss_value,
    wmc,
)

__version__ = "0.1.0"
