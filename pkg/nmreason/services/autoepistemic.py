"""
Autoepistemic Logic Service

Stable expansions of autoepistemic theories, represented by their full sets.

Provides:
- l_subformulas: SF_L(Σ) in canonical (first occurrence, pre-order) order
- objective_entails / is_full_set: entailment with maximal beliefs as atoms
- stable_expansions / count_expansions / expansion_exists
- expansion_member / credulous / skeptical
- is_consistent_expansion / count_consistent_expansions
- eliminate_constants: 1 -> fresh t, then 0 -> L(f) for a fresh f
- qbf_to_ael / qbf_to_monotone_ael / qbf_is_valid

Each belief atom Lψ is a proposition named by its printed form, e.g. "L(x | y)",
so one ModelSpace holds both the objective propositions and the belief atoms.
"""
import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .. import config
from ..errors import FormulaError
from ..models import (
    QBF,
    AETheory,
    Apply,
    Belief,
    Formula,
    FullSet,
    Proposition,
    Theory,
    variables,
)
from .formula_core import (
    AND,
    EQ,
    NOT,
    OR,
    ModelSpace,
    eliminate_constant_one,
    enforce_cap,
    format_formula,
    fresh_name,
    mentions_constant,
    ordered_map,
    substitute_constants,
)

logger = logging.getLogger(__name__)


# ============================================================================
# L-SUBFORMULAS
# ============================================================================

def _collect_beliefs(node: Formula, found: Dict[Belief, None]) -> None:
    if isinstance(node, Belief):
        found.setdefault(node, None)
        _collect_beliefs(node.argument, found)
    elif isinstance(node, Apply):
        for arg in node.args:
            _collect_beliefs(arg, found)


def l_subformulas(theory: Iterable[Formula]) -> List[Belief]:
    found: Dict[Belief, None] = {}
    for member in theory:
        _collect_beliefs(member, found)
    return list(found)


def _atom(belief: Belief) -> str:
    return format_formula(belief)


class ExpansionSolver:
    """Masks of Σ and of every belief argument over objective propositions plus belief atoms."""

    def __init__(self, theory: Theory, extra: Iterable[str] = (), cap: Optional[int] = None,
                 sign_cap: Optional[int] = None):
        self.beliefs = l_subformulas(theory)
        enforce_cap("L-subformulas", len(self.beliefs), sign_cap, config.SIGN_CAP)
        objective = set(theory.universe) | set(extra)
        self.space = ModelSpace(objective | {_atom(b) for b in self.beliefs}, cap)
        self.theory = self.space.conjunction(theory.formulas)
        self.atoms = [self.space.variable_mask(_atom(b)) for b in self.beliefs]
        self.arguments = [self.space.mask(b.argument) for b in self.beliefs]

    def constraint(self, signs: Sequence[bool]) -> int:
        """Σ ∪ Λ as a mask."""
        mask = self.theory
        for atom, positive in zip(self.atoms, signs):
            mask &= atom if positive else self.space.full & ~atom
        return mask

    def is_full(self, signs: Sequence[bool]) -> bool:
        base = self.constraint(signs)
        return all(
            (base & ~argument == 0) == positive
            for argument, positive in zip(self.arguments, signs)
        )

    def full_sets(self, workers: Optional[int] = None) -> List[Tuple[bool, ...]]:
        candidates = list(itertools.product((True, False), repeat=len(self.beliefs)))
        verdicts = ordered_map(self.is_full, candidates, workers)
        found = [signs for signs, ok in zip(candidates, verdicts) if ok]
        logger.debug(f"✓ {len(found)} full sets among {len(candidates)} sign maps")
        return found

    def full_set(self, signs: Sequence[bool]) -> FullSet:
        return FullSet(tuple(zip(self.beliefs, signs)))

    def signs_of(self, full: FullSet) -> Tuple[bool, ...]:
        return tuple(full.sign(belief) for belief in self.beliefs)


def _query_checked(solver: ExpansionSolver, query: Formula) -> int:
    unknown = [b for b in l_subformulas([query]) if b not in solver.beliefs]
    if unknown:
        raise FormulaError(f"query belief {_atom(unknown[0])} is not an L-subformula of the theory")
    return solver.space.mask(query)


# ============================================================================
# FULL SETS AND EXPANSIONS
# ============================================================================

def objective_entails(theory: Theory, full: FullSet, query: Formula, cap: Optional[int] = None) -> bool:
    """Σ ∪ Λ ⊨ ψ with every maximal belief treated as an atom."""
    solver = ExpansionSolver(theory, variables(query), cap=cap)
    target = _query_checked(solver, query)
    return solver.constraint(solver.signs_of(full)) & ~target == 0


def is_full_set(theory: Theory, full: FullSet, cap: Optional[int] = None) -> bool:
    solver = ExpansionSolver(theory, cap=cap)
    if [belief for belief, _ in full.signs] != solver.beliefs:
        raise FormulaError("full set must sign exactly the L-subformulas of the theory, in order")
    return solver.is_full(solver.signs_of(full))


def stable_expansions(theory: Theory, cap: Optional[int] = None, sign_cap: Optional[int] = None,
                      workers: Optional[int] = None) -> List[FullSet]:
    """Every full set; ordered with positive signs first, L-subformula by L-subformula."""
    solver = ExpansionSolver(theory, cap=cap, sign_cap=sign_cap)
    return [solver.full_set(signs) for signs in solver.full_sets(workers)]


def count_expansions(theory: Theory, cap: Optional[int] = None, sign_cap: Optional[int] = None,
                     workers: Optional[int] = None) -> int:
    return len(ExpansionSolver(theory, cap=cap, sign_cap=sign_cap).full_sets(workers))


def expansion_exists(theory: Theory, cap: Optional[int] = None, sign_cap: Optional[int] = None,
                     workers: Optional[int] = None) -> bool:
    return count_expansions(theory, cap, sign_cap, workers) > 0


def expansion_member(theory: Theory, full: FullSet, query: Formula, cap: Optional[int] = None) -> bool:
    return objective_entails(theory, full, query, cap)


def credulous(theory: Theory, query: Formula, cap: Optional[int] = None, sign_cap: Optional[int] = None,
              workers: Optional[int] = None) -> bool:
    solver = ExpansionSolver(theory, variables(query), cap=cap, sign_cap=sign_cap)
    target = _query_checked(solver, query)
    return any(solver.constraint(signs) & ~target == 0 for signs in solver.full_sets(workers))


def skeptical(theory: Theory, query: Formula, cap: Optional[int] = None, sign_cap: Optional[int] = None,
              workers: Optional[int] = None) -> bool:
    """Vacuously true when there is no expansion."""
    solver = ExpansionSolver(theory, variables(query), cap=cap, sign_cap=sign_cap)
    target = _query_checked(solver, query)
    return all(solver.constraint(signs) & ~target == 0 for signs in solver.full_sets(workers))


def is_consistent_expansion(theory: Theory, full: FullSet, cap: Optional[int] = None) -> bool:
    solver = ExpansionSolver(theory, cap=cap)
    return solver.constraint(solver.signs_of(full)) != 0


def count_consistent_expansions(theory: Theory, cap: Optional[int] = None, sign_cap: Optional[int] = None,
                                workers: Optional[int] = None) -> int:
    solver = ExpansionSolver(theory, cap=cap, sign_cap=sign_cap)
    return sum(1 for signs in solver.full_sets(workers) if solver.constraint(signs))


# ============================================================================
# CONSTANT ELIMINATION
# ============================================================================

def eliminate_constants(theory: Theory) -> AETheory:
    """Replace 1 by a fresh proposition t (added as a fact), then 0 by L(f) for a fresh f.

    Consistent expansions correspond one to one; an inconsistent expansion of the
    input has no counterpart.
    """
    step = eliminate_constant_one(theory)
    if not any(mentions_constant(member, 0) for member in step):
        return AETheory(step.formulas, step.universe)
    f = fresh_name("f", step.universe)
    replaced = [substitute_constants(member, {0: Belief(Proposition(f))}) for member in step]
    logger.debug(f"constant 0 replaced by belief L({f})")
    return AETheory.of(replaced, set(step.universe) | {f})


# ============================================================================
# QBF REDUCTIONS
# ============================================================================

def qbf_is_valid(qbf: QBF) -> bool:
    """∃x⃗ ∀y⃗ ψ by brute force over the matrix's model set."""
    space = ModelSpace(qbf.exists + qbf.forall)
    matrix = space.mask(qbf.matrix)
    for choice in itertools.product((0, 1), repeat=len(qbf.exists)):
        fixed = dict(zip(qbf.exists, choice))
        if all(
            matrix >> space.index_of({**fixed, **dict(zip(qbf.forall, rest))}) & 1
            for rest in itertools.product((0, 1), repeat=len(qbf.forall))
        ):
            return True
    return False


def qbf_to_ael(qbf: QBF) -> AETheory:
    """Σ = {L(x) <-> x : x existential} ∪ {L(ψ)}."""
    members: List[Formula] = [
        Apply(EQ, (Belief(Proposition(name)), Proposition(name))) for name in qbf.exists
    ]
    members.append(Belief(qbf.matrix))
    return AETheory.of(members, qbf.exists + qbf.forall)


def _is_nnf(node: Formula) -> bool:
    if isinstance(node, Proposition):
        return True
    if isinstance(node, Apply):
        if node.function == NOT:
            return isinstance(node.args[0], Proposition)
        if node.function in (AND, OR):
            return all(_is_nnf(arg) for arg in node.args)
    return False


def _rename_negations(node: Formula, primed: Dict[str, str]) -> Formula:
    if isinstance(node, Proposition):
        return node
    if node.function == NOT:
        return Proposition(primed[node.args[0].name])
    return Apply(node.function, tuple(_rename_negations(arg, primed) for arg in node.args))


def qbf_to_monotone_ael(qbf: QBF) -> AETheory:
    """Σ = {L(ψ')} ∪ {L(x) ∨ x', x ∨ L(x')} ∪ {y ∨ y'} with ¬v renamed to a fresh v'.

    The matrix must be in negation normal form over and, or, not and contain no constants.
    """
    if not _is_nnf(qbf.matrix):
        raise FormulaError("QBF matrix is not in negation normal form over and, or, not")
    taken = set(qbf.exists) | set(qbf.forall)
    primed: Dict[str, str] = {}
    for name in qbf.exists + qbf.forall:
        primed[name] = fresh_name(f"{name}_n", taken)
        taken.add(primed[name])
    members: List[Formula] = [Belief(_rename_negations(qbf.matrix, primed))]
    for name in qbf.exists:
        x, x_n = Proposition(name), Proposition(primed[name])
        members.append(Apply(OR, (Belief(x), x_n)))
        members.append(Apply(OR, (x, Belief(x_n))))
    for name in qbf.forall:
        members.append(Apply(OR, (Proposition(name), Proposition(primed[name]))))
    return AETheory.of(members, taken)


def full_set_from_positives(theory: Theory, positives: Iterable[Formula]) -> FullSet:
    """Full set over SF_L(Σ) with the given beliefs positive and every other one negative."""
    chosen = set(positives)
    return FullSet(tuple((belief, belief in chosen) for belief in l_subformulas(theory)))


