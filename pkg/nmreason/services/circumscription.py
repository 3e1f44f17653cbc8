"""
Circumscription Service

Minimal models under the (P, Q, Z) preorder: σ ≤ σ' iff σ∩P ⊆ σ'∩P and σ∩Q = σ'∩Q.
Minimality is taken with respect to the strict part of the preorder.

Provides:
- leq_pz / strictly_less
- is_circ_model / monotone_circ_check
- minimal_models / count_minimal_models / circ_entails
- sat_to_minmodels: parsimonious reduction from model counting
- simulate_constants: Γ[0/f, 1/t] ∪ {t, f -> ⋀Vars(Γ)}
"""
import logging
from typing import Dict, List, Optional, Tuple

from ..errors import FormulaError, PreconditionError
from ..models import (
    Apply,
    Assignment,
    CircProblem,
    CloneName,
    Formula,
    Proposition,
    Theory,
    VarPartition,
    functions_used,
    variables,
)
from .formula_core import (
    IMP,
    XOR,
    ModelSpace,
    conjoin,
    fresh_name,
    mask_indices,
    ordered_map,
    substitute_constants,
)
from .post_lattice import clone_leq, clone_of

logger = logging.getLogger(__name__)

MONOTONE = CloneName("M")
ONE_REPRODUCING = CloneName("R1")


def _true_set(assignment: Assignment, names) -> frozenset:
    return frozenset(name for name in names if assignment[name])


def leq_pz(first: Assignment, second: Assignment, partition: VarPartition) -> bool:
    return (
        _true_set(first, partition.P) <= _true_set(second, partition.P)
        and _true_set(first, partition.Q) == _true_set(second, partition.Q)
    )


def strictly_less(first: Assignment, second: Assignment, partition: VarPartition) -> bool:
    return leq_pz(first, second, partition) and not leq_pz(second, first, partition)


class MinimalModelSolver:
    """Model set of a circumscription problem, indexed by P-part within each Q-group."""

    def __init__(self, problem: CircProblem, cap: Optional[int] = None):
        self.problem = problem
        self.space = ModelSpace(problem.universe, cap)
        self.p_mask = self._index_mask(problem.partition.P)
        self.q_mask = self._index_mask(problem.partition.Q)
        self.models = self.space.conjunction(problem.theory.formulas)
        # Q-part -> distinct P-parts among the models
        self.groups: Dict[int, List[int]] = {}
        for index in mask_indices(self.models):
            parts = self.groups.setdefault(index & self.q_mask, [])
            p_part = index & self.p_mask
            if p_part not in parts:
                parts.append(p_part)

    def _index_mask(self, names) -> int:
        mask = 0
        for name in names:
            mask |= 1 << (self.space.width - 1 - self.space.universe.index(name))
        return mask

    def is_minimal_index(self, index: int) -> bool:
        """No model with the same Q-part has a P-part strictly inside this one."""
        p_part = index & self.p_mask
        for other in self.groups.get(index & self.q_mask, ()):
            if other != p_part and other & ~p_part == 0:
                return False
        return True

    def is_model_index(self, index: int) -> bool:
        return bool(self.models >> index & 1)

    def minimal_indices(self, workers: Optional[int] = None) -> List[int]:
        indices = mask_indices(self.models)
        verdicts = ordered_map(self.is_minimal_index, indices, workers)
        return [index for index, ok in zip(indices, verdicts) if ok]

    def minimal_mask(self, workers: Optional[int] = None) -> int:
        mask = 0
        for index in self.minimal_indices(workers):
            mask |= 1 << index
        return mask


# ============================================================================
# MODEL CHECKING AND INFERENCE
# ============================================================================

def is_circ_model(problem: CircProblem, assignment: Assignment, cap: Optional[int] = None) -> bool:
    solver = MinimalModelSolver(problem, cap)
    index = solver.space.index_of(assignment)
    return solver.is_model_index(index) and solver.is_minimal_index(index)


def monotone_circ_check(problem: CircProblem, assignment: Assignment, cap: Optional[int] = None) -> bool:
    """Model check for theories over monotone functions.

    σ is minimal iff no σ^i models Γ, where σ^i sets all of Z to 1 and the i-th
    P-proposition that is true under σ to 0.
    """
    clone = clone_of(functions_used(problem.theory.formulas))
    if not clone_leq(clone, MONOTONE):
        raise PreconditionError(f"theory generates {clone}, which is not below M")
    space = ModelSpace(problem.universe, cap)
    models = space.conjunction(problem.theory.formulas)
    if not models >> space.index_of(assignment) & 1:
        raise PreconditionError("assignment is not a model of the theory")
    base = dict(space.assignment(space.index_of(assignment)).mapping)
    for name in problem.partition.Z:
        base[name] = 1
    for name in sorted(problem.partition.P):
        if not base[name]:
            continue
        probe = dict(base)
        probe[name] = 0
        if models >> space.index_of(probe) & 1:
            return False
    return True


def minimal_models(problem: CircProblem, cap: Optional[int] = None, workers: Optional[int] = None) -> List[Assignment]:
    solver = MinimalModelSolver(problem, cap)
    return [solver.space.assignment(index) for index in solver.minimal_indices(workers)]


def count_minimal_models(problem: CircProblem, cap: Optional[int] = None, workers: Optional[int] = None) -> int:
    return len(MinimalModelSolver(problem, cap).minimal_indices(workers))


def circ_entails(problem: CircProblem, query: Formula, cap: Optional[int] = None,
                 workers: Optional[int] = None) -> bool:
    """Γ ⊨_(P,Z) φ; vacuously true without models."""
    stray = variables(query) - set(problem.universe)
    if stray:
        raise FormulaError(f"query mentions propositions outside the partition: {', '.join(sorted(stray))}")
    solver = MinimalModelSolver(problem, cap)
    return solver.minimal_mask(workers) & ~solver.space.mask(query) == 0


# ============================================================================
# REDUCTIONS
# ============================================================================

def sat_to_minmodels(formula: Formula) -> CircProblem:
    """{φ ∧ ⋀(x ⊕ x')} minimising every variable: minimal models correspond to models of φ."""
    names = sorted(variables(formula))
    taken = set(names)
    parts: List[Formula] = [formula]
    for name in names:
        partner = fresh_name(f"{name}_c", taken)
        taken.add(partner)
        parts.append(Apply(XOR, (Proposition(name), Proposition(partner))))
    combined = conjoin(parts)
    return CircProblem(Theory.of([combined], taken), VarPartition.minimize_all(taken))


def simulate_constants(theory: Theory) -> Tuple[Theory, str, str]:
    """Γ[0/f, 1/t] ∪ {t, f -> ⋀Vars(Γ)} with fresh t and f, for Γ over 1-reproducing functions and constants.

    The models are those of Γ extended by t=1, f=0, plus the all-ones assignment.
    Returns the theory and the names chosen for t and f.
    """
    proper = [g for g in functions_used(theory.formulas) if g.arity > 0]
    clone = clone_of(proper)
    if not clone_leq(clone, ONE_REPRODUCING):
        raise PreconditionError(f"non-constant functions generate {clone}, which is not below R1")
    t = fresh_name("t", theory.universe)
    f = fresh_name("f", set(theory.universe) | {t})
    replaced = [
        substitute_constants(member, {0: Proposition(f), 1: Proposition(t)}) for member in theory
    ]
    everything = conjoin([Proposition(name) for name in theory.universe] + [Proposition(t)])
    guard = Apply(IMP, (Proposition(f), everything))
    return Theory.of(replaced + [Proposition(t), guard], set(theory.universe) | {t, f}), t, f
