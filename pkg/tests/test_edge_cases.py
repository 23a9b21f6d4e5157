"""Edge cases across modules: degenerate sizes, re-indexing, clamping,
error sides, and determinism."""

import math

import pytest

from preflogic import (
    MarkTable,
    TruthTable,
    WeightMap,
    check_disjoint,
    compile_equation,
    formula_of,
    fuzzy_value,
    hasse,
    load_catalog,
    loss_ratio,
    marks_from_json,
    minimize,
    parse_formula,
    render,
    wmc,
)
from preflogic.atoms import Atom, canonical_order
from preflogic.cli import main
from preflogic.errors import EquationSyntaxError, ZeroCountError
from preflogic.poly import parse_equation
from preflogic.prefstruct import PreferenceStructure

from conftest import structure_from_bits

W, L = "theta:yw", "theta:yl"
WL = canonical_order([W, L])


def test_formulas_over_zero_atoms():
    t = parse_formula("true", [])
    f = parse_formula("false", [])
    assert t.bits == 1 and f.bits == 0
    assert wmc(t, WeightMap({})) == 1.0
    assert wmc(f, WeightMap({})) == 0.0


def test_weight_clamping_keeps_logs_finite():
    s = structure_from_bits(WL, 0b0100, 0b0010)
    rho = loss_ratio(s, WeightMap({W: 1.0, L: 0.0}))
    assert math.isfinite(rho)
    # both rows collapse to the clamp floor, so the ratio is huge but finite
    assert rho > 50


def test_zero_count_error_names_the_vanished_side():
    always = parse_formula("true", WL)
    never = parse_formula("false", WL)
    weights = WeightMap({W: 0.5, L: 0.5})
    with pytest.raises(ZeroCountError, match="loser"):
        loss_ratio(PreferenceStructure(always, always, never), weights)
    with pytest.raises(ZeroCountError, match="winner"):
        loss_ratio(PreferenceStructure(never, always, never), weights)


def test_marks_json_accepts_noncanonical_atom_order():
    # the same one-true column written loser-first re-indexes onto the
    # canonical winner-first rows
    doc = {"atoms": ["theta:yl", "theta:yw"], "marks": ["blank", "check", "cross", "both"]}
    remapped = marks_from_json(doc)
    canonical = load_catalog().get("CPO").marks
    assert remapped == canonical


def test_minimize_is_deterministic_across_equivalent_inputs():
    a = parse_formula("(implies theta:yl theta:yw)", WL)
    b = parse_formula("(or (not theta:yl) theta:yw)", WL)
    c = parse_formula("(or (and theta:yw theta:yl) (not theta:yl) (and theta:yw (not theta:yl)))", WL)
    outs = {render(minimize(x).tree) for x in (a, b, c)}
    assert outs == {"(or (not theta:yl) theta:yw)"}


def test_compiled_equations_are_always_disjoint_and_multilinear():
    for check in range(1, 16):
        for cross in range(1, 16):
            eq = compile_equation(structure_from_bits(WL, check, cross))
            assert check_disjoint(eq.top) is None
            assert check_disjoint(eq.bottom) is None
            for term in eq.top.terms + eq.bottom.terms:
                atoms = [l.atom for l in term.literals]
                assert len(atoms) == len(set(atoms))


def test_equation_lexer_rejects_stray_characters():
    with pytest.raises(EquationSyntaxError):
        parse_equation("p(theta,yw) $ p(theta,yl)")


def test_fuzzy_division_by_zero_antecedent_is_satisfied():
    f = parse_formula("(implies (and theta:yl theta:yw) theta:yw)", WL)
    v = fuzzy_value(f, WeightMap({W: 1.0, L: 0.0}))
    assert v == 1.0


def test_hasse_of_singleton_has_no_edges():
    assert hasse([structure_from_bits(WL, 0b0100, 0b0010)]) == []


def test_truth_table_rows_match_bit_layout():
    t = TruthTable(WL, 0b0100)
    assert [sat for _, sat in t.rows()] == [False, False, True, False]


def test_formula_of_large_atom_sets_falls_back_to_minterms():
    atoms = canonical_order([f"m{i}:yw" for i in range(7)])
    t = TruthTable(atoms, 0b1)
    f = formula_of(t)
    assert f.bits == 0b1
    assert f.tree.op == "and" and len(f.tree.args) == 7


def test_mark_table_equality_includes_atoms():
    a = MarkTable(WL, ("blank", "cross", "check", "both"))
    b = MarkTable(canonical_order([W, "ref:yl"]), ("blank", "cross", "check", "both"))
    assert a != b


def test_cli_eval_unconstrained_ratio(capsys):
    code = main(["eval", "--structure", "unCPO",
                 "--weights", '{"theta:yw": 0.5, "theta:yl": 0.5}'])
    out = capsys.readouterr().out
    assert code == 0
    assert "rho_sem = 1.09861229" in out  # log 3


def test_cli_decompile_reference_ratio_names_it(capsys):
    code = main(["decompile", "--loss", "DPO"])
    out = capsys.readouterr().out
    assert code == 0
    assert '"name": "DPO"' in out
    assert "ref:yw" in out and "ref:yl" in out


def test_catalog_unlikelihood_denominator_text():
    entry = load_catalog().get("CEUnl")
    assert entry.equation_text == (
        "p(theta,yw)*(1 - p(theta,yl)) / ((1 - p(theta,yw)) + p(theta,yw)*p(theta,yl))"
    )


def test_weight_map_copy_override_beats_fallback():
    w = WeightMap({"theta:yw": 0.4, "theta:yw:2": 0.9})
    assert w.resolve(Atom("theta", "yw", 2)) == pytest.approx(0.9)
    assert w.resolve(Atom("theta", "yw", 3)) == pytest.approx(0.4)
