"""Tests for the text input formats."""

import pytest

from nmreason.errors import DeclarationError, ParseError
from nmreason.models import QUERY_PROPOSITION, ConstraintApplication
from nmreason.services.formula_core import format_formula
from nmreason.services.loaders import (
    load_abduction_instance,
    load_ae_theory,
    load_circ_problem,
    load_default_theory,
    load_dimacs,
    load_formulas,
    load_qbf,
    load_relations,
    parse_function_spec,
)


class TestDefaultTheories:
    def test_sections_and_comments(self):
        theory, _ = load_default_theory("# birds\nW: x\nD:\nx : y / z   # flies\n")
        assert [format_formula(f) for f in theory.W.formulas] == ["x"]
        assert len(theory.D) == 1

    def test_content_before_section(self):
        with pytest.raises(ParseError):
            load_default_theory("x\nW:\n")

    def test_malformed_rule_reports_line(self):
        with pytest.raises(ParseError, match="line 2"):
            load_default_theory("D:\nx : y\n")


class TestDeclarations:
    def test_declared_function_in_formula(self):
        formulas, declarations = load_formulas("fun pierce/2 = 1000\npierce(x, y)\n")
        assert len(formulas) == 1
        assert declarations.library.get("pierce").table == (1, 0, 0, 0)

    def test_relation_application(self):
        relations, constraints = load_relations("rel neq/2 = 01,10\nneq(x, y)\nneq(y, z)\n")
        assert [r.name for r in relations] == ["neq"]
        assert all(isinstance(node, ConstraintApplication) for node in constraints.applications)

    def test_relation_lines_only(self):
        with pytest.raises(ParseError):
            load_relations("rel neq/2 = 01,10\nx | y\n")

    def test_conflicting_relation(self):
        with pytest.raises(DeclarationError):
            load_relations("rel r/1 = 1\nrel r/1 = 0\n")

    def test_belief_theory_returns_declarations(self):
        theory, declarations = load_ae_theory("fun g/2 = 0001\nL(g(x, y)) -> x\n")
        assert len(theory.formulas) == 1
        assert format_formula(declarations.formula("L(g(x, y))", beliefs=True)) == "L(g(x, y))"

    def test_inline_function_spec(self):
        assert parse_function_spec("f/1=10").table == (1, 0)
        with pytest.raises(DeclarationError):
            parse_function_spec("f/1=1x")


class TestCircAndAbduction:
    def test_circ_headers(self):
        problem, _ = load_circ_problem("x | y | q\nP: x, y\n")
        assert problem.partition.P == frozenset({"x", "y"})
        assert problem.partition.Q == frozenset({"q"})

    def test_abduction_defaults(self):
        instance, _ = load_abduction_instance("a -> q\nA: a\nQ: q\n")
        assert instance.hypotheses == ("a",)
        assert instance.query_kind == QUERY_PROPOSITION

    def test_abduction_needs_query(self):
        with pytest.raises(ParseError):
            load_abduction_instance("a -> q\nA: a\n")


class TestQbfAndDimacs:
    def test_qbf(self):
        qbf = load_qbf("exists x; forall y z; x | (y & z)")
        assert qbf.exists == ("x",)
        assert qbf.forall == ("y", "z")
        assert format_formula(qbf.matrix) == "x | (y & z)"

    def test_qbf_tab_after_quantifier(self):
        qbf = load_qbf("exists\tx; forall  y; x | y")
        assert qbf.exists == ("x",)
        assert qbf.forall == ("y",)

    def test_qbf_without_matrix(self):
        with pytest.raises(ParseError):
            load_qbf("exists x; forall y")

    def test_dimacs(self):
        names, clauses = load_dimacs("c comment\np cnf 2 2\n1 -2 1 0\n-1 2\n2 0\n")
        assert names == ["x1", "x2"]
        assert clauses == [
            (("x1", True), ("x2", False), ("x1", True)),
            (("x1", False), ("x2", True), ("x2", True)),
        ]

    @pytest.mark.parametrize("text", ["1 2 0", "p cnf 1 1\n2 0", "p dnf 1 1\n1 0", "p cnf 1 1\nx 0"])
    def test_dimacs_errors(self, text):
        with pytest.raises(ParseError):
            load_dimacs(text)
