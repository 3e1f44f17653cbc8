"""Tests for property checks and clone identification over Post's lattice."""

import itertools

import pytest

from nmreason.errors import FormulaError
from nmreason.models import BooleanFunction, CloneName
from nmreason.schemas import INF
from nmreason.services.formula_core import AND, CONST0, CONST1, EQ, IMP, MAJ, NIMP, NOT, OR, XOR
from nmreason.services.post_lattice import (
    all_clone_names,
    base_of,
    clone_contains,
    clone_leq,
    clone_of,
    describe_functions,
    dual,
    dual_clone,
    parse_clone_name,
    property_profile,
    separating_degree,
    threshold,
)

BINARY_TABLES = [BooleanFunction(f"b{i}", 2, bits) for i, bits in enumerate(itertools.product((0, 1), repeat=4))]


@pytest.fixture(scope="module")
def every_clone():
    return all_clone_names((2, 3, 4))


# ============================================================
# 1. Derived functions and properties
# ============================================================


class TestDerivedFunctions:
    def test_dual_of_and_is_or(self):
        assert dual(AND).table == OR.table

    def test_dual_of_majority_threshold(self):
        assert dual(threshold(2)).table == MAJ.table

    def test_threshold_needs_positive_degree(self):
        with pytest.raises(FormulaError):
            threshold(0)

    def test_threshold_table(self):
        assert threshold(1).table == OR.table


class TestProperties:
    def test_implication_is_fully_zero_separating(self):
        assert separating_degree(IMP, 0) == INF

    def test_xor_is_not_zero_separating(self):
        assert separating_degree(XOR, 0) is None

    def test_majority_separates_pairs_only(self):
        assert separating_degree(MAJ, 0) == 2
        assert separating_degree(MAJ, 1) == 2

    def test_profile_flags(self):
        profile = property_profile(XOR)
        assert profile.affine and profile.reproducing0
        assert not profile.monotone and not profile.reproducing1

    def test_constants_are_padded(self):
        profile = property_profile(CONST1)
        assert profile.monotone and profile.reproducing1 and not profile.reproducing0


# ============================================================
# 2. Clone identification
# ============================================================


class TestCloneOf:
    @pytest.mark.parametrize("functions, expected", [
        ([OR], "V2"),
        ([AND, NOT], "BF"),
        ([XOR], "L0"),
        ([MAJ], "D2"),
        ([AND], "E2"),
        ([NOT], "N2"),
        ([IMP], "S0"),
        ([NIMP], "S1"),
        ([EQ], "L1"),
        ([AND, OR, CONST0, CONST1], "M"),
        ([], "I2"),
    ])
    def test_known_bases(self, functions, expected):
        assert str(clone_of(functions)) == expected

    def test_every_clone_is_generated_by_its_base(self, every_clone):
        for clone in every_clone:
            assert clone_of(base_of(clone)) == clone, str(clone)

    def test_monotone_exactly_below_m(self):
        m = CloneName("M")
        for function in BINARY_TABLES:
            assert clone_leq(clone_of([function]), m) == property_profile(function).monotone

    def test_order_examples(self):
        assert clone_leq(CloneName("V2"), CloneName("M"))
        assert clone_leq(CloneName("E2"), CloneName("S10", 3))
        assert not clone_leq(CloneName("L0"), CloneName("M"))

    def test_membership(self):
        assert clone_contains(CloneName("R1"), IMP)
        assert not clone_contains(CloneName("R1"), NIMP)

    def test_self_dual_base_is_self_dual(self):
        for function in base_of(CloneName("D")):
            assert dual(function).table == function.table, function.name
        assert property_profile(base_of(CloneName("D"))[0]).self_dual

    def test_self_dual_clone_is_not_below_r1(self):
        assert not clone_leq(CloneName("D"), CloneName("R1"))
        assert not clone_leq(CloneName("D"), CloneName("M"))


class TestCloneNames:
    def test_parse_parameterized(self):
        assert parse_clone_name("S02^3") == CloneName("S02", 3)
        assert str(parse_clone_name("S02^3")) == "S02^3"

    @pytest.mark.parametrize("text", ["Q7", "S02^1", "BF^2", "S1^x"])
    def test_parse_rejects(self, text):
        with pytest.raises(FormulaError):
            parse_clone_name(text)

    def test_dual_clones(self):
        assert str(dual_clone(CloneName("V2"))) == "E2"
        assert str(dual_clone(CloneName("S02", 3))) == "S12^3"
        assert str(dual_clone(CloneName("D2"))) == "D2"

    def test_report(self):
        report = describe_functions([OR, CONST0])
        assert report.clone == "V0"
        assert [row.name for row in report.functions] == ["or", "const0"]
