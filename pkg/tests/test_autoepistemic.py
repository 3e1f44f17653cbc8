"""Tests for stable expansions of autoepistemic theories."""

import random

import pytest

from helpers import ae_theory, formula, random_ae_theory, random_qbf
from nmreason.errors import CapExceededError, FormulaError
from nmreason.models import QBF, Belief, Proposition
from nmreason.services.autoepistemic import (
    count_consistent_expansions,
    count_expansions,
    credulous,
    eliminate_constants,
    expansion_exists,
    expansion_member,
    full_set_from_positives,
    is_consistent_expansion,
    is_full_set,
    l_subformulas,
    qbf_is_valid,
    qbf_to_ael,
    qbf_to_monotone_ael,
    skeptical,
    stable_expansions,
)
from nmreason.services.formula_core import AND, CONST0, CONST1, IMP, NOT, OR, format_formula, mentions_constant


def _signs(full):
    return [(format_formula(belief), positive) for belief, positive in full.signs]


# ============================================================
# 1. Worked examples
# ============================================================


class TestDisjunctiveBeliefs:
    """Σ = {Lx ∨ y, x ∨ Ly, L(x ∨ y) → z}: two expansions, both containing z."""

    @pytest.fixture
    def theory(self):
        return ae_theory("L(x) | y", "x | L(y)", "L(x | y) -> z")

    def test_l_subformulas_in_canonical_order(self, theory):
        assert [format_formula(b) for b in l_subformulas(theory)] == ["L(x)", "L(y)", "L(x | y)"]

    def test_two_expansions(self, theory):
        found = stable_expansions(theory)
        assert [_signs(f) for f in found] == [
            [("L(x)", True), ("L(y)", False), ("L(x | y)", True)],
            [("L(x)", False), ("L(y)", True), ("L(x | y)", True)],
        ]

    def test_z_in_every_expansion(self, theory):
        assert skeptical(theory, formula("z"))
        assert not skeptical(theory, formula("x"))
        assert credulous(theory, formula("x"))

    def test_membership(self, theory):
        first = stable_expansions(theory)[0]
        assert expansion_member(theory, first, formula("x & z"))
        assert not expansion_member(theory, first, formula("y"))

    def test_belief_queries(self, theory):
        assert skeptical(theory, formula("L(x | y)", beliefs=True))
        with pytest.raises(FormulaError):
            credulous(theory, formula("L(z)", beliefs=True))


class TestSelfSupportingBelief:
    """Σ = {Lp → p}: one expansion believes p, the other does not."""

    def test_two_expansions(self):
        theory = ae_theory("L(p) -> p")
        assert count_expansions(theory) == 2
        assert credulous(theory, formula("p"))
        assert not skeptical(theory, formula("p"))

    def test_full_set_check(self):
        theory = ae_theory("L(p) -> p")
        assert is_full_set(theory, full_set_from_positives(theory, [Belief(Proposition("p"))]))
        assert is_full_set(theory, full_set_from_positives(theory, []))


class TestEdgeCases:
    def test_belief_contradicting_fact_has_no_expansion(self):
        theory = ae_theory("L(p)", "!p")
        assert count_expansions(theory) == 0
        assert not expansion_exists(theory)
        assert skeptical(theory, formula("0"))

    def test_objective_theory_has_one_expansion(self):
        theory = ae_theory("x | y")
        found = stable_expansions(theory)
        assert len(found) == 1 and found[0].signs == ()
        assert skeptical(theory, formula("x | y"))

    def test_inconsistent_expansion(self):
        theory = ae_theory("0", "L(x) | x")
        found = stable_expansions(theory)
        assert len(found) == 1
        assert not is_consistent_expansion(theory, found[0])
        assert count_consistent_expansions(theory) == 0

    def test_full_set_must_cover_l_subformulas(self):
        theory = ae_theory("L(p) -> p")
        with pytest.raises(FormulaError):
            is_full_set(theory, full_set_from_positives(ae_theory("L(q)"), []))

    def test_sign_cap(self):
        theory = ae_theory("L(a) | L(b) | L(c)")
        with pytest.raises(CapExceededError):
            count_expansions(theory, sign_cap=2)


# ============================================================
# 2. Constant elimination
# ============================================================


class TestConstantElimination:
    def test_constants_removed(self):
        theory = eliminate_constants(ae_theory("L(1 | x) -> 0", "x | 0"))
        assert not any(mentions_constant(member, 0) or mentions_constant(member, 1) for member in theory)
        assert {"t", "f"} <= set(theory.universe)

    def test_consistent_expansions_preserved(self):
        rng = random.Random(21)
        functions = [AND, OR, NOT, IMP, CONST0, CONST1]
        for _ in range(200):
            theory = random_ae_theory(rng, ["a", "b"], functions, size=2)
            assert count_consistent_expansions(eliminate_constants(theory)) == count_consistent_expansions(theory)


# ============================================================
# 3. QBF reductions
# ============================================================


class TestQbfReductions:
    def test_valid_and_invalid(self):
        valid = QBF(("x",), ("y",), formula("x | y"))
        invalid = QBF(("x",), ("y",), formula("x & y"))
        assert qbf_is_valid(valid) and not qbf_is_valid(invalid)
        assert expansion_exists(qbf_to_ael(valid))
        assert not expansion_exists(qbf_to_ael(invalid))

    def test_reduction_shape(self):
        theory = qbf_to_ael(QBF(("x",), ("y",), formula("x | y")))
        assert [format_formula(f) for f in theory] == ["L(x) <-> x", "L(x | y)"]

    def test_monotone_reduction_is_negation_free(self):
        theory = qbf_to_monotone_ael(QBF(("x",), ("y",), formula("x | !y")))
        rendered = [format_formula(f) for f in theory]
        assert rendered == ["L(x | y_n)", "L(x) | x_n", "x | L(x_n)", "y | y_n"]

    def test_monotone_reduction_requires_nnf(self):
        with pytest.raises(FormulaError):
            qbf_to_monotone_ael(QBF(("x",), ("y",), formula("!(x & y)")))

    def test_random_instances(self):
        rng = random.Random(22)
        for _ in range(40):
            exists = ["a", "b"][: rng.randint(1, 2)]
            forall = ["c", "d"][: rng.randint(1, 2)]
            qbf = random_qbf(rng, exists, forall)
            valid = qbf_is_valid(qbf)
            assert expansion_exists(qbf_to_ael(qbf)) == valid, format_formula(qbf.matrix)
            assert expansion_exists(qbf_to_monotone_ael(qbf)) == valid, format_formula(qbf.matrix)
