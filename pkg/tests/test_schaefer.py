"""Tests for relation classification and the constraint bridge."""

import itertools

import pytest

from nmreason.models import Assignment, BooleanRelation, ConstraintApplication, ConstraintTheory
from nmreason.services.formula_core import AND, MAJ, OR, count_models
from nmreason.services.post_lattice import XOR3
from nmreason.services.schaefer import (
    SHAPES,
    characteristic_function,
    classification_report,
    classify_relation,
    classify_set,
    constraint_to_theory,
    definable_by,
    is_polymorphism,
    satisfies,
)


def _all_relations(arity):
    rows = list(itertools.product((0, 1), repeat=arity))
    for chosen in itertools.product((False, True), repeat=len(rows)):
        yield BooleanRelation(f"r{arity}", arity, frozenset(row for row, keep in zip(rows, chosen) if keep))


@pytest.fixture
def implication():
    return BooleanRelation.of("imp", 2, ["00", "01", "11"])


@pytest.fixture
def exclusive():
    return BooleanRelation.of("neq", 2, ["01", "10"])


# ============================================================
# 1. Named relations
# ============================================================


class TestImplicationRelation:
    def test_schaefer_flags(self, implication):
        flags = classify_relation(implication)
        assert flags.horn and flags.dual_horn and flags.bijunctive
        assert flags.valid0 and flags.valid1
        assert not flags.affine

    def test_clausal_shapes(self, implication):
        flags = classify_relation(implication)
        assert flags.definite_horn and flags.ihsb_plus and flags.ihsb_minus
        assert not flags.negative_horn


class TestExclusiveRelation:
    def test_flags(self, exclusive):
        flags = classify_relation(exclusive)
        assert flags.affine and flags.bijunctive
        assert not (flags.horn or flags.dual_horn or flags.valid0 or flags.valid1)

    def test_set_is_schaefer(self, exclusive, implication):
        report = classify_set([exclusive, implication])
        assert report.schaefer and report.bijunctive
        assert not report.affine


class TestSets:
    def test_empty_set_has_every_flag(self):
        report = classify_set([])
        assert all(report.model_dump().values())

    def test_one_in_three_is_not_schaefer(self):
        one_in_three = BooleanRelation.of("r13", 3, ["100", "010", "001"])
        assert not classify_set([one_in_three]).schaefer

    def test_report_lists_sorted_rows(self, implication):
        report = classification_report([implication])
        assert report.relations[0].tuples == ["00", "01", "11"]
        assert report.summary.schaefer


# ============================================================
# 2. Closure against clausal definability, all small relations
# ============================================================


class TestExhaustive:
    @pytest.mark.parametrize("arity", [1, 2, 3])
    def test_closure_matches_definability(self, arity):
        for relation in _all_relations(arity):
            assert is_polymorphism(relation, AND) == definable_by(relation, SHAPES["horn"])
            assert is_polymorphism(relation, OR) == definable_by(relation, SHAPES["dual_horn"])
            assert is_polymorphism(relation, MAJ) == definable_by(relation, SHAPES["bijunctive"])

    @pytest.mark.parametrize("arity", [1, 2, 3])
    def test_affine_means_coset(self, arity):
        for relation in _all_relations(arity):
            codes = relation.codes
            coset = not codes or all(a ^ b ^ c in codes for a in codes for b in codes for c in codes)
            assert classify_relation(relation).affine == coset

    @pytest.mark.parametrize("arity", [1, 2, 3])
    def test_shape_classes_refine_horn(self, arity):
        for relation in _all_relations(arity):
            flags = classify_relation(relation)
            if flags.definite_horn or flags.negative_horn or flags.ihsb_minus:
                assert flags.horn
            if flags.ihsb_plus:
                assert flags.dual_horn

    def test_xor3_closure_of_parity(self):
        parity = BooleanRelation.of("par", 3, ["000", "011", "101", "110"])
        assert is_polymorphism(parity, XOR3)
        assert not is_polymorphism(parity, AND)


# ============================================================
# 3. Bridge to formula theories
# ============================================================


class TestBridge:
    def test_characteristic_function(self, implication):
        assert characteristic_function(implication).bits == "1101"

    def test_constraint_theory_models(self, exclusive):
        theory = ConstraintTheory.of([
            ConstraintApplication(exclusive, ("x", "y")),
            ConstraintApplication(exclusive, ("y", "z")),
        ])
        assert count_models(constraint_to_theory(theory)) == 2
        assert satisfies(Assignment.from_true_set({"y"}, ["x", "y", "z"]), theory)
        assert not satisfies(Assignment.from_true_set({"x", "y"}, ["x", "y", "z"]), theory)
