"""
Abduction Service

Propositional abduction: E ⊆ Lits(A) explains q when Γ ∪ E is consistent and
Γ ∪ E ⊨ q. Explanations are consistent literal sets (positive mode: sets of
positive literals only).

Provides:
- is_explanation / explanation_exists / explanations
- subset_minimal_explanations / count_explanations / count_subset_minimal
- relevant / necessary: literal membership in some / every (minimal) explanation
- query_kind_of: classify a query as proposition, literal, term, clause or formula
"""
import itertools
import logging
from typing import Iterable, List, Optional, Set

from .. import config
from ..errors import FormulaError
from ..models import (
    MODE_POSITIVE,
    QUERY_CLAUSE,
    QUERY_FORMULA,
    QUERY_LITERAL,
    QUERY_PROPOSITION,
    QUERY_TERM,
    AbductionInstance,
    Apply,
    Belief,
    Explanation,
    Formula,
    Literal,
    Proposition,
    variables,
)
from .formula_core import AND, NOT, OR, ModelSpace, enforce_cap, ordered_map

logger = logging.getLogger(__name__)


# ============================================================================
# QUERY FORMS
# ============================================================================

def _is_literal(node: Formula) -> bool:
    if isinstance(node, Proposition):
        return True
    return isinstance(node, Apply) and node.function == NOT and isinstance(node.args[0], Proposition)


def _is_chain(node: Formula, connective) -> bool:
    if isinstance(node, Apply) and node.function == connective:
        return all(_is_chain(arg, connective) for arg in node.args)
    return _is_literal(node)


def query_kind_of(query: Formula) -> str:
    """The most specific query form the formula fits."""
    if isinstance(query, Proposition):
        return QUERY_PROPOSITION
    if _is_literal(query):
        return QUERY_LITERAL
    if _is_chain(query, AND):
        return QUERY_TERM
    if _is_chain(query, OR):
        return QUERY_CLAUSE
    return QUERY_FORMULA


def validate_instance(instance: AbductionInstance) -> None:
    query, kind = instance.query, instance.query_kind
    if any(isinstance(node, Belief) for node in _walk(query)):
        raise FormulaError("abduction queries cannot contain beliefs")
    if kind == QUERY_PROPOSITION:
        if not isinstance(query, Proposition):
            raise FormulaError("query is not a proposition")
        if query.name not in instance.knowledge.universe or query.name in instance.hypotheses:
            raise FormulaError(f"query proposition {query.name} must occur in Γ and lie outside A")
    elif kind == QUERY_LITERAL and not _is_literal(query):
        raise FormulaError("query is not a literal")
    elif kind == QUERY_TERM and not _is_chain(query, AND):
        raise FormulaError("query is not a conjunction of literals")
    elif kind == QUERY_CLAUSE and not _is_chain(query, OR):
        raise FormulaError("query is not a disjunction of literals")


def _walk(node: Formula):
    yield node
    if isinstance(node, Apply):
        for arg in node.args:
            yield from _walk(arg)
    elif isinstance(node, Belief):
        yield from _walk(node.argument)


# ============================================================================
# SOLVER
# ============================================================================

class ExplanationSolver:
    def __init__(self, instance: AbductionInstance, cap: Optional[int] = None,
                 hypothesis_cap: Optional[int] = None):
        validate_instance(instance)
        enforce_cap("hypotheses", len(instance.hypotheses), hypothesis_cap, config.HYPOTHESIS_CAP)
        self.instance = instance
        self.hypotheses = tuple(sorted(set(instance.hypotheses)))
        universe = set(instance.knowledge.universe) | set(self.hypotheses) | variables(instance.query)
        self.space = ModelSpace(universe, cap)
        self.knowledge = self.space.conjunction(instance.knowledge.formulas)
        self.query = self.space.mask(instance.query)

    def candidates(self) -> List[Explanation]:
        if self.instance.mode == MODE_POSITIVE:
            options = [((name, True), None) for name in self.hypotheses]
        else:
            options = [((name, True), (name, False), None) for name in self.hypotheses]
        found = [Explanation.of(lit for lit in combo if lit is not None)
                 for combo in itertools.product(*options)]
        return sorted(found, key=lambda e: e.sort_key)

    def check(self, explanation: Explanation) -> bool:
        base = self.knowledge
        for name, positive in explanation.literals:
            base &= self.space.literal_mask(name, positive)
        return base != 0 and base & ~self.query == 0

    def explanations(self, workers: Optional[int] = None) -> List[Explanation]:
        pool = self.candidates()
        verdicts = ordered_map(self.check, pool, workers)
        found = [e for e, ok in zip(pool, verdicts) if ok]
        logger.debug(f"✓ {len(found)} explanations among {len(pool)} candidates")
        return found

    def minimal(self, workers: Optional[int] = None) -> List[Explanation]:
        """Explanations below an explanation within it form an up-set, so testing
        one-literal removals is enough."""
        found = self.explanations(workers)
        members: Set[Explanation] = set(found)
        return [
            e for e in found
            if not any(
                Explanation(e.literals[:i] + e.literals[i + 1:]) in members for i in range(len(e))
            )
        ]


def _checked(instance: AbductionInstance, explanation: Explanation) -> None:
    stray = {name for name, _ in explanation.literals} - set(instance.hypotheses)
    if stray:
        raise FormulaError(f"explanation mentions non-hypotheses: {', '.join(sorted(stray))}")
    if instance.mode == MODE_POSITIVE and any(not positive for _, positive in explanation.literals):
        raise FormulaError("positive mode admits only positive literals")


# ============================================================================
# OPERATIONS
# ============================================================================

def is_explanation(instance: AbductionInstance, explanation: Explanation, cap: Optional[int] = None) -> bool:
    _checked(instance, explanation)
    return ExplanationSolver(instance, cap).check(explanation)


def explanations(instance: AbductionInstance, cap: Optional[int] = None, hypothesis_cap: Optional[int] = None,
                 workers: Optional[int] = None) -> List[Explanation]:
    return ExplanationSolver(instance, cap, hypothesis_cap).explanations(workers)


def explanation_exists(instance: AbductionInstance, cap: Optional[int] = None,
                       hypothesis_cap: Optional[int] = None) -> bool:
    solver = ExplanationSolver(instance, cap, hypothesis_cap)
    return any(solver.check(candidate) for candidate in solver.candidates())


def subset_minimal_explanations(instance: AbductionInstance, cap: Optional[int] = None,
                                hypothesis_cap: Optional[int] = None,
                                workers: Optional[int] = None) -> List[Explanation]:
    return ExplanationSolver(instance, cap, hypothesis_cap).minimal(workers)


def count_explanations(instance: AbductionInstance, cap: Optional[int] = None,
                       hypothesis_cap: Optional[int] = None, workers: Optional[int] = None) -> int:
    return len(explanations(instance, cap, hypothesis_cap, workers))


def count_subset_minimal(instance: AbductionInstance, cap: Optional[int] = None,
                         hypothesis_cap: Optional[int] = None, workers: Optional[int] = None) -> int:
    return len(subset_minimal_explanations(instance, cap, hypothesis_cap, workers))


def _pool(instance: AbductionInstance, minimal: bool) -> List[Explanation]:
    solver = ExplanationSolver(instance)
    return solver.minimal() if minimal else solver.explanations()


def relevant(instance: AbductionInstance, literal: Literal, minimal: bool = False) -> bool:
    """Some (subset-minimal) explanation contains the literal."""
    return any(literal in e.literals for e in _pool(instance, minimal))


def necessary(instance: AbductionInstance, literal: Literal, minimal: bool = False) -> bool:
    """Every (subset-minimal) explanation contains the literal; vacuously true without explanations."""
    return all(literal in e.literals for e in _pool(instance, minimal))


def make_instance(knowledge, hypotheses: Iterable[str], query: Formula, mode: str = "literal",
                  query_kind: Optional[str] = None) -> AbductionInstance:
    """Instance with the query kind inferred from the query's shape when not given."""
    return AbductionInstance(knowledge, tuple(sorted(set(hypotheses))), query,
                             query_kind or query_kind_of(query), mode)
