"""Tests for stable extensions of default theories."""

import random

import pytest

from helpers import all_3cnf, brute_force_sat, default_theory, formula, random_3cnf, random_default_theory, rule
from nmreason.errors import CapExceededError, FormulaError, PreconditionError
from nmreason.models import (
    Assignment,
    BooleanRelation,
    CloneName,
    ConstraintApplication,
    ConstraintTheory,
    DefaultRule,
    DefaultTheory,
    functions_used,
)
from nmreason.services.default_logic import (
    count_stable_extensions,
    credulous,
    default_model_check,
    is_stable_extension,
    monotone_unique_extension,
    sat_to_default,
    skeptical,
    stable_extensions,
)
from nmreason.services.formula_core import AND, CONST0, CONST1, IMP, NOT, OR, ModelSpace, format_formula
from nmreason.services.post_lattice import clone_leq, clone_of
from nmreason.services.schaefer import constraint_to_theory


def _extension_mask(witness, universe):
    space = ModelSpace(universe)
    return space.conjunction(witness.closure_base.formulas)


# ============================================================
# 1. Worked examples
# ============================================================


class TestBirdsFly:
    """W = {x}, D = {x : y / z}: the default applies until ¬y is known."""

    def test_default_applies(self):
        theory = default_theory(["x"], ["x : y / z"])
        assert count_stable_extensions(theory) == 1
        assert credulous(theory, formula("z"))
        assert skeptical(theory, formula("z"))

    def test_blocked_justification(self):
        theory = default_theory(["x", "!y"], ["x : y / z"])
        assert count_stable_extensions(theory) == 1
        assert not credulous(theory, formula("z"))


class TestTwoConflictingDefaults:
    """(∅, {1 : x / ¬y, 1 : y / ¬x}) has exactly two extensions."""

    @pytest.fixture
    def theory(self):
        return default_theory([], ["1 : x / !y", "1 : y / !x"])

    def test_two_extensions(self, theory):
        found = stable_extensions(theory)
        assert [w.generating for w in found] == [(0,), (1,)]
        assert [[format_formula(f) for f in w.closure_base] for w in found] == [["!y"], ["!x"]]

    def test_generating_sets(self, theory):
        assert is_stable_extension(theory, [0])
        assert is_stable_extension(theory, [1])
        assert not is_stable_extension(theory, [0, 1])
        assert not is_stable_extension(theory, [])

    def test_reasoning(self, theory):
        assert credulous(theory, formula("!y"))
        assert not skeptical(theory, formula("!y"))
        assert skeptical(theory, formula("!x | !y"))

    def test_model_check(self, theory):
        universe = ["x", "y"]
        assert default_model_check(theory, Assignment.from_true_set({"x"}, universe))
        assert not default_model_check(theory, Assignment.from_true_set({"x", "y"}, universe))

    def test_index_out_of_range(self, theory):
        with pytest.raises(FormulaError):
            is_stable_extension(theory, [2])


class TestEdgeCases:
    def test_no_extension(self):
        theory = default_theory([], ["1 : x / !x"])
        assert count_stable_extensions(theory) == 0
        assert skeptical(theory, formula("0"))
        assert not credulous(theory, formula("1"))

    def test_inconsistent_facts_give_one_inconsistent_extension(self):
        found = stable_extensions(default_theory(["x", "!x"], ["1 : y / y"]))
        assert len(found) == 1
        assert found[0].inconsistent
        assert found[0].generating == ()

    def test_rule_cap(self):
        rules = [f"1 : x{i} / x{i}" for i in range(5)]
        with pytest.raises(CapExceededError):
            count_stable_extensions(default_theory([], rules), rule_cap=4)

    def test_workers_do_not_change_output(self):
        theory = default_theory([], ["1 : x / !y", "1 : y / !x", "x : z / z"])
        serial = stable_extensions(theory, workers=1)
        assert serial == stable_extensions(theory, workers=4)


# ============================================================
# 2. Fragments
# ============================================================


class TestFragments:
    def test_one_reproducing_theories_have_exactly_one_extension(self):
        rng = random.Random(11)
        for _ in range(200):
            theory = random_default_theory(rng, ["a", "b", "c"], [AND, OR, IMP, CONST1])
            assert clone_leq(clone_of(functions_used(theory.formulas())), CloneName("R1"))
            found = stable_extensions(theory)
            assert len(found) == 1
            space = ModelSpace(theory.universe)
            top = 1 << (space.size - 1)
            assert space.conjunction(found[0].closure_base.formulas) & top

    def test_monotone_theories_have_at_most_one_extension(self):
        rng = random.Random(12)
        for _ in range(200):
            theory = random_default_theory(rng, ["a", "b", "c"], [AND, OR, CONST0, CONST1])
            found = stable_extensions(theory)
            assert len(found) <= 1
            direct = monotone_unique_extension(theory)
            assert (direct is None) == (not found)
            if direct is not None:
                universe = theory.universe
                assert _extension_mask(direct, universe) == _extension_mask(found[0], universe)

    def test_monotone_construction_requires_monotone_theory(self):
        with pytest.raises(PreconditionError):
            monotone_unique_extension(default_theory([], ["1 : x / !y"]))

    def test_monotone_unsatisfiable_conclusion(self):
        assert monotone_unique_extension(default_theory(["x"], ["x : 1 / 0"])) is None


# ============================================================
# 3. Reduction from 3CNF
# ============================================================


class TestSatReduction:
    def test_single_clause(self):
        clauses = [(("x", True), ("x", True), ("x", True))]
        assert count_stable_extensions(sat_to_default(clauses)) == 1

    def test_contradiction(self):
        clauses = [(("x", True),) * 3, (("x", False),) * 3]
        assert count_stable_extensions(sat_to_default(clauses)) == 0

    def test_rejects_short_clauses(self):
        with pytest.raises(FormulaError):
            sat_to_default([(("x", True), ("y", True))])

    def test_all_two_clause_formulas_over_two_variables(self):
        for clauses in all_3cnf(["x", "y"], 2):
            exists = count_stable_extensions(sat_to_default(clauses)) > 0
            assert exists == brute_force_sat(clauses), clauses

    def test_random_formulas(self):
        rng = random.Random(13)
        for _ in range(25):
            clauses = random_3cnf(rng, ["a", "b", "c"], 3)
            exists = count_stable_extensions(sat_to_default(clauses)) > 0
            assert exists == brute_force_sat(clauses), clauses

    def test_random_formulas_over_four_variables(self):
        rng = random.Random(15)
        for _ in range(200):
            clauses = random_3cnf(rng, ["a", "b", "c", "d"], rng.randint(1, 4))
            exists = count_stable_extensions(sat_to_default(clauses)) > 0
            assert exists == brute_force_sat(clauses), clauses

    def test_rules_layout(self):
        theory = sat_to_default([(("x", True), ("y", False), ("x", True))])
        assert isinstance(theory, DefaultTheory)
        assert len(theory.D) == 5
        assert theory.D[-1] == DefaultRule(formula("!x"), formula("y"), formula("x"))
        assert not theory.W.formulas


# ============================================================
# 4. Representation independence
# ============================================================


class TestRepresentation:
    def test_rule_order_does_not_change_extensions(self):
        rng = random.Random(14)
        for _ in range(20):
            theory = random_default_theory(rng, ["a", "b", "c"], [AND, OR, NOT, IMP])
            reordered = DefaultTheory.of(theory.W.formulas, reversed(theory.D), theory.universe)
            universe = theory.universe
            forward = sorted(_extension_mask(w, universe) for w in stable_extensions(theory))
            backward = sorted(_extension_mask(w, universe) for w in stable_extensions(reordered))
            assert forward == backward

    def test_constraint_facts_match_bridged_formulas(self):
        neq = ConstraintApplication(BooleanRelation.of("neq", 2, ["01", "10"]), ("x", "y"))
        rules = [rule("1 : x / x"), rule("1 : y / y")]
        native = DefaultTheory.of([neq], rules)
        bridged = DefaultTheory.of(constraint_to_theory(ConstraintTheory.of([neq])).formulas, rules)
        assert [w.generating for w in stable_extensions(native)] == [(0,), (1,)]
        assert [w.generating for w in stable_extensions(bridged)] == [(0,), (1,)]
