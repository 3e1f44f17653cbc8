"""Tests for propositional abduction."""

import random

import pytest

from helpers import formula, random_formula
from nmreason.errors import CapExceededError, FormulaError, PreconditionError
from nmreason.models import (
    MODE_POSITIVE,
    QUERY_CLAUSE,
    QUERY_FORMULA,
    QUERY_LITERAL,
    QUERY_PROPOSITION,
    QUERY_TERM,
    AbductionInstance,
    Explanation,
    Theory,
)
from nmreason.services.abduction import (
    ExplanationSolver,
    count_explanations,
    count_subset_minimal,
    explanation_exists,
    explanations,
    is_explanation,
    make_instance,
    necessary,
    query_kind_of,
    relevant,
    subset_minimal_explanations,
)
from nmreason.services.formula_core import AND, IMP, NOT, OR


def _instance(lines, hypotheses, query, mode="literal"):
    return make_instance(Theory.of([formula(line) for line in lines]), hypotheses, formula(query), mode)


def _rendered(found):
    return [e.literals for e in found]


@pytest.fixture
def two_causes():
    """Γ = {x → q, y → q}, A = {x, y}, query q."""
    return _instance(["x -> q", "y -> q"], ["x", "y"], "q")


# ============================================================
# 1. Worked examples
# ============================================================


class TestSingleCause:
    def test_positive_hypothesis_explains(self):
        instance = _instance(["a -> q"], ["a"], "q")
        assert is_explanation(instance, Explanation.of([("a", True)]))
        assert not is_explanation(instance, Explanation.of([("a", False)]))
        assert necessary(instance, ("a", True))

    def test_complementary_literals_are_not_an_explanation(self):
        with pytest.raises(FormulaError):
            Explanation.of([("a", True), ("a", False)])

    def test_positive_mode(self):
        instance = _instance(["a -> q"], ["a"], "q", mode=MODE_POSITIVE)
        assert count_explanations(instance) == 1
        assert count_subset_minimal(instance) == 1
        with pytest.raises(FormulaError):
            is_explanation(instance, Explanation.of([("a", False)]))


class TestTwoCauses:
    def test_all_explanations_in_canonical_order(self, two_causes):
        assert _rendered(explanations(two_causes)) == [
            (("x", True),),
            (("y", True),),
            (("x", True), ("y", True)),
            (("x", True), ("y", False)),
            (("x", False), ("y", True)),
        ]

    def test_subset_minimal(self, two_causes):
        assert _rendered(subset_minimal_explanations(two_causes)) == [(("x", True),), (("y", True),)]
        assert count_explanations(two_causes) == 5
        assert count_subset_minimal(two_causes) == 2

    def test_relevance_and_necessity(self, two_causes):
        assert relevant(two_causes, ("x", True))
        assert relevant(two_causes, ("x", False))
        assert not relevant(two_causes, ("x", False), minimal=True)
        assert not necessary(two_causes, ("x", True))

    def test_workers_do_not_change_output(self, two_causes):
        assert explanations(two_causes, workers=1) == explanations(two_causes, workers=4)


class TestEdgeCases:
    def test_query_contradicting_knowledge(self):
        instance = _instance(["!q", "a"], ["a"], "q")
        assert not explanation_exists(instance)
        assert necessary(instance, ("a", True))

    def test_empty_explanation(self):
        instance = _instance(["q"], [], "q")
        assert _rendered(explanations(instance)) == [()]

    def test_hypothesis_outside_knowledge(self):
        with pytest.raises(PreconditionError):
            _instance(["a -> q"], ["a", "b"], "q")

    def test_proposition_query_must_lie_outside_hypotheses(self):
        instance = AbductionInstance(Theory.of([formula("a -> q")]), ("a", "q"), formula("q"), QUERY_PROPOSITION)
        with pytest.raises(FormulaError):
            explanations(instance)

    def test_stray_hypothesis_in_explanation(self, two_causes):
        with pytest.raises(FormulaError):
            is_explanation(two_causes, Explanation.of([("q", True)]))

    def test_hypothesis_cap(self, two_causes):
        with pytest.raises(CapExceededError):
            ExplanationSolver(two_causes, hypothesis_cap=1)

    def test_unknown_mode(self):
        with pytest.raises(FormulaError):
            _instance(["a -> q"], ["a"], "q", mode="sometimes")


# ============================================================
# 2. Query forms
# ============================================================


class TestQueryForms:
    @pytest.mark.parametrize("text, kind", [
        ("q", QUERY_PROPOSITION),
        ("!q", QUERY_LITERAL),
        ("q1 & !q2 & q3", QUERY_TERM),
        ("q1 | q2", QUERY_CLAUSE),
        ("q1 -> q2", QUERY_FORMULA),
        ("0", QUERY_FORMULA),
    ])
    def test_kind_detection(self, text, kind):
        assert query_kind_of(formula(text)) == kind

    def test_term_query(self):
        instance = _instance(["a -> q1", "a -> q2"], ["a"], "q1 & q2")
        assert instance.query_kind == QUERY_TERM
        assert _rendered(explanations(instance)) == [(("a", True),)]

    def test_clause_query_over_new_proposition(self):
        instance = _instance(["a -> q1"], ["a"], "q1 | q2")
        assert _rendered(subset_minimal_explanations(instance)) == [(("a", True),)]

    def test_false_query(self):
        assert count_explanations(_instance(["a | b"], ["a"], "0")) == 0

    def test_declared_kind_must_match(self):
        instance = AbductionInstance(Theory.of([formula("a -> q")]), ("a",), formula("q | a"), QUERY_TERM)
        with pytest.raises(FormulaError):
            explanations(instance)


# ============================================================
# 3. Structural invariants on random instances
# ============================================================


class TestInvariants:
    def test_random_instances(self):
        rng = random.Random(41)
        for _ in range(30):
            knowledge = Theory.of(
                [random_formula(rng, ["a", "b", "c", "q"], [AND, OR, NOT, IMP]) for _ in range(2)],
                ["a", "b", "c", "q"],
            )
            instance = make_instance(knowledge, ["a", "b", "c"], formula("q"))
            found = explanations(instance)
            minimal = subset_minimal_explanations(instance)
            assert set(minimal) <= set(found)
            assert all(any(m.issubset(e) for m in minimal) for e in found)
            positive = explanations(make_instance(knowledge, ["a", "b", "c"], formula("q"), MODE_POSITIVE))
            assert set(positive) <= set(found)
            assert explanation_exists(instance) == bool(found)

    def test_supersets_of_explanations_explain(self, two_causes):
        found = set(explanations(two_causes))
        for candidate in ExplanationSolver(two_causes).candidates():
            if any(e.issubset(candidate) for e in found):
                assert candidate in found
