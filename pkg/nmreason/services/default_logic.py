"""
Default Logic Service

Stable extensions of propositional default theories (W, D).

Provides:
- is_stable_extension: fixed-point check of one candidate generating set
- stable_extensions / count_stable_extensions: exhaustive enumeration, merged
  up to semantic equivalence
- credulous / skeptical / default_model_check: reasoning over all extensions
- monotone_unique_extension: single-pass construction for monotone theories
- sat_to_default: the 3CNF reduction to extension existence

Extensions are never materialised as deductively closed sets; each one is the
model-set mask of W ∪ {γ_d : d generating} inside a ModelSpace.
"""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from .. import config
from ..errors import FormulaError, PreconditionError
from ..models import (
    Apply,
    Assignment,
    Clause,
    CloneName,
    DefaultRule,
    DefaultTheory,
    ExtensionWitness,
    Formula,
    Theory,
    functions_used,
    variables,
)
from .formula_core import CONST1, ModelSpace, enforce_cap, literal_formula, ordered_map
from .post_lattice import clone_leq, clone_of

logger = logging.getLogger(__name__)

MONOTONE = CloneName("M")


class ExtensionSolver:
    """Rule masks of one default theory, precomputed over one model space."""

    def __init__(self, theory: DefaultTheory, extra: Iterable[str] = (), cap: Optional[int] = None,
                 rule_cap: Optional[int] = None, enumerate_rules: bool = True):
        if enumerate_rules:
            enforce_cap("default rules", len(theory.D), rule_cap, config.RULE_CAP)
        self.theory = theory
        self.space = ModelSpace(set(theory.universe) | set(extra), cap)
        self.facts = self.space.conjunction(theory.W.formulas)
        self.premises = [self.space.mask(rule.premise) for rule in theory.D]
        self.justifications = [self.space.mask(rule.justification) for rule in theory.D]
        self.conclusions = [self.space.mask(rule.conclusion) for rule in theory.D]

    @property
    def size(self) -> int:
        return len(self.theory.D)

    def closure(self, chosen: int) -> int:
        """Models of W plus the conclusions of the rules in the `chosen` bitset."""
        mask = self.facts
        for i in range(self.size):
            if chosen >> i & 1:
                mask &= self.conclusions[i]
        return mask

    def fire(self, extension: int) -> Tuple[int, int]:
        """Staged construction with justifications tested against a fixed candidate.

        Returns the mask of the limit and the bitset of fired rules.
        """
        reached = self.facts
        fired = 0
        changed = True
        while changed:
            changed = False
            for i in range(self.size):
                if fired >> i & 1:
                    continue
                if reached & ~self.premises[i] == 0 and extension & self.justifications[i]:
                    fired |= 1 << i
                    reached &= self.conclusions[i]
                    changed = True
        return reached, fired

    def check(self, chosen: int) -> Optional[Tuple[int, int]]:
        """(extension mask, generating defaults) when `chosen` generates a stable extension."""
        extension = self.closure(chosen)
        reached, fired = self.fire(extension)
        if reached != extension or chosen & ~fired:
            return None
        return extension, fired

    def extensions(self, workers: Optional[int] = None) -> List[Tuple[int, int]]:
        """Distinct (mask, generating) pairs ordered by generating-set index vector."""
        found = {}
        for result in ordered_map(self.check, range(1 << self.size), workers):
            if result is not None:
                found.setdefault(result[0], result[1])
        ordered = sorted(found.items(), key=lambda item: _indices(item[1]))
        logger.debug(f"✓ {len(ordered)} stable extensions among {1 << self.size} candidates")
        return ordered

    def witness(self, generating: int) -> ExtensionWitness:
        indices = _indices(generating)
        base = Theory.of(
            list(self.theory.W.formulas) + [self.theory.D[i].conclusion for i in indices],
            self.theory.universe,
        )
        return ExtensionWitness(indices, base, inconsistent=self.closure(generating) == 0)


def _indices(bitset: int) -> Tuple[int, ...]:
    return tuple(i for i in range(bitset.bit_length()) if bitset >> i & 1)


def _bitset(subset: Iterable[int], size: int) -> int:
    chosen = 0
    for i in subset:
        if not 0 <= i < size:
            raise FormulaError(f"default index {i} out of range")
        chosen |= 1 << i
    return chosen


# ============================================================================
# EXTENSIONS
# ============================================================================

def is_stable_extension(theory: DefaultTheory, subset: Iterable[int], cap: Optional[int] = None) -> bool:
    """Does W ∪ {γ_d : d ∈ subset} generate a stable extension with every d ∈ subset applied?"""
    solver = ExtensionSolver(theory, cap=cap, enumerate_rules=False)
    return solver.check(_bitset(subset, solver.size)) is not None


def stable_extensions(theory: DefaultTheory, cap: Optional[int] = None, rule_cap: Optional[int] = None,
                      workers: Optional[int] = None) -> List[ExtensionWitness]:
    """One witness per semantically distinct extension; the witness lists all generating defaults."""
    solver = ExtensionSolver(theory, cap=cap, rule_cap=rule_cap)
    return [solver.witness(generating) for _, generating in solver.extensions(workers)]


def count_stable_extensions(theory: DefaultTheory, cap: Optional[int] = None, rule_cap: Optional[int] = None,
                            workers: Optional[int] = None) -> int:
    return len(ExtensionSolver(theory, cap=cap, rule_cap=rule_cap).extensions(workers))


def credulous(theory: DefaultTheory, query: Formula, cap: Optional[int] = None,
              rule_cap: Optional[int] = None, workers: Optional[int] = None) -> bool:
    solver = ExtensionSolver(theory, variables(query), cap=cap, rule_cap=rule_cap)
    target = solver.space.mask(query)
    return any(mask & ~target == 0 for mask, _ in solver.extensions(workers))


def skeptical(theory: DefaultTheory, query: Formula, cap: Optional[int] = None,
              rule_cap: Optional[int] = None, workers: Optional[int] = None) -> bool:
    """Vacuously true when there is no extension."""
    solver = ExtensionSolver(theory, variables(query), cap=cap, rule_cap=rule_cap)
    target = solver.space.mask(query)
    return all(mask & ~target == 0 for mask, _ in solver.extensions(workers))


def default_model_check(theory: DefaultTheory, assignment: Assignment, cap: Optional[int] = None,
                        rule_cap: Optional[int] = None, workers: Optional[int] = None) -> bool:
    """Is the assignment a model of some stable extension?"""
    solver = ExtensionSolver(theory, cap=cap, rule_cap=rule_cap)
    point = solver.space.point(assignment)
    return any(mask & point for mask, _ in solver.extensions(workers))


# ============================================================================
# MONOTONE FRAGMENT
# ============================================================================

def monotone_unique_extension(theory: DefaultTheory, cap: Optional[int] = None) -> Optional[ExtensionWitness]:
    """The unique extension of a theory over monotone functions, or None when it has none.

    Rules fire on premise entailment alone; only justifications equivalent to 0
    block, and those are recognised by the all-ones assignment.
    """
    clone = clone_of(functions_used(theory.formulas()))
    if not clone_leq(clone, MONOTONE):
        raise PreconditionError(f"theory generates {clone}, which is not below M")
    solver = ExtensionSolver(theory, cap=cap, enumerate_rules=False)
    if solver.facts == 0:
        return solver.witness(0)
    top = 1 << (solver.space.size - 1)
    reached = solver.facts
    fired = 0
    changed = True
    while changed:
        changed = False
        for i in range(solver.size):
            if fired >> i & 1 or not solver.justifications[i] & top:
                continue
            if reached & ~solver.premises[i] == 0:
                fired |= 1 << i
                reached &= solver.conclusions[i]
                changed = True
    if any(fired >> i & 1 and not solver.conclusions[i] & top for i in range(solver.size)):
        logger.debug("✗ a fired conclusion is unsatisfiable; no extension")
        return None
    return solver.witness(fired)


# ============================================================================
# REDUCTION FROM 3CNF
# ============================================================================

def _complement(literal) -> Tuple[str, bool]:
    return literal[0], not literal[1]


def sat_to_default(clauses: Sequence[Clause]) -> DefaultTheory:
    """(∅, {1:x/x, 1:¬x/¬x per variable} ∪ {ℓ̄1 : ℓ̄2 / ℓ3 per clause})."""
    for clause in clauses:
        if len(clause) != 3:
            raise FormulaError(f"clause {clause} does not have exactly three literals")
    names = sorted({name for clause in clauses for name, _ in clause})
    top = Apply(CONST1)
    rules: List[DefaultRule] = []
    for name in names:
        for polarity in (True, False):
            literal = literal_formula((name, polarity))
            rules.append(DefaultRule(top, literal, literal))
    for first, second, third in clauses:
        rules.append(DefaultRule(
            literal_formula(_complement(first)),
            literal_formula(_complement(second)),
            literal_formula(third),
        ))
    logger.debug(f"3CNF with {len(names)} variables mapped to {len(rules)} defaults")
    return DefaultTheory.of((), rules, names)
