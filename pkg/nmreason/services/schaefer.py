"""
Schaefer Relations Service

Boolean relations, constraint theories and their classification.

Provides:
- satisfies: constraint satisfaction of an assignment
- is_polymorphism: coordinatewise closure under a Boolean function
- classify_relation / classify_set: Horn, dual Horn, bijunctive, affine,
  0-/1-valid and the clausal-shape classes (definite/negative Horn, IHS-B±)
- characteristic_function / constraint_to_theory: bridge to formula theories

Tuples are packed into ints with the first coordinate most significant.
Clausal-shape classes are decided through implied clauses: a relation is
definable by clauses of a shape iff it equals the conjunction of all clauses of
that shape it implies.
"""
import itertools
import logging
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .. import config
from ..errors import FormulaError
from ..models import (
    Apply,
    Assignment,
    BooleanFunction,
    BooleanRelation,
    ConstraintApplication,
    ConstraintTheory,
    Proposition,
    Theory,
)
from ..schemas import ClassificationReport, RelationFlags, RelationReport, SchaeferReport
from .formula_core import AND, MAJ, OR, FunctionLibrary, combine_table, enforce_cap, projection_mask
from .post_lattice import XOR3

logger = logging.getLogger(__name__)

# (positive variable mask, negative variable mask) over relation coordinates
ClauseShape = Callable[[int, int], bool]


# ============================================================================
# SATISFACTION AND POLYMORPHISMS
# ============================================================================

def satisfies(assignment: Assignment, theory: ConstraintTheory) -> bool:
    for app in theory.applications:
        row = tuple(assignment[name] for name in app.variables)
        if row not in app.relation.tuples:
            return False
    return True


def is_polymorphism(relation: BooleanRelation, function: BooleanFunction) -> bool:
    """True iff applying `function` coordinatewise to any choice of tuples of R stays in R."""
    codes = relation.codes
    if function.arity == 0:
        constant = ((1 << relation.arity) - 1) if function.table[0] else 0
        return constant in codes
    if not codes:
        return True
    full = (1 << relation.arity) - 1
    ordered = sorted(codes)
    for choice in itertools.product(ordered, repeat=function.arity):
        if combine_table(function.table, choice, full) not in codes:
            return False
    return True


SCHAEFER_POLYMORPHISMS = {"horn": AND, "dual_horn": OR, "bijunctive": MAJ, "affine": XOR3}

# above this many tuple choices the closure is decided by an equivalent structural test
BRUTE_FORCE_LIMIT = 1 << 15


def _closed_pairwise(codes: frozenset, combine: Callable[[int, int], int]) -> bool:
    return all(combine(a, b) in codes for a in codes for b in codes)


def _affine_closed(codes: frozenset) -> bool:
    """Closed under x⊕y⊕z iff R is a coset r0 ⊕ V of a linear space V."""
    if not codes:
        return True
    anchor = min(codes)
    return all(a ^ b ^ anchor in codes for a in codes for b in codes)


def _closed_under(relation: BooleanRelation, prop: str) -> bool:
    codes = relation.codes
    function = SCHAEFER_POLYMORPHISMS[prop]
    if len(codes) ** function.arity <= BRUTE_FORCE_LIMIT:
        return is_polymorphism(relation, function)
    if prop == "horn":
        return _closed_pairwise(codes, lambda a, b: a & b)
    if prop == "dual_horn":
        return _closed_pairwise(codes, lambda a, b: a | b)
    if prop == "affine":
        return _affine_closed(codes)
    # majority closure coincides with 2-CNF definability
    return definable_by(relation, SHAPES["bijunctive"])


# ============================================================================
# CLAUSAL SHAPES
# ============================================================================

def _size(mask: int) -> int:
    return bin(mask).count("1")


SHAPES: dict = {
    "horn": lambda pos, neg: _size(pos) <= 1,
    "dual_horn": lambda pos, neg: _size(neg) <= 1,
    "bijunctive": lambda pos, neg: _size(pos) + _size(neg) <= 2,
    "negative_horn": lambda pos, neg: pos == 0,
    "definite_horn": lambda pos, neg: _size(pos) == 1,
    "ihsb_minus": lambda pos, neg: (pos == 0) or (_size(pos) == 1 and _size(neg) <= 1),
    "ihsb_plus": lambda pos, neg: (neg == 0) or (_size(neg) == 1 and _size(pos) <= 1),
}


@lru_cache(maxsize=None)
def _clauses(arity: int) -> Tuple[Tuple[int, int, int], ...]:
    """Every non-tautological nonempty clause as (pos, neg, model mask over 2^arity tuples)."""
    size = 1 << arity
    full = (1 << size) - 1
    literal = [projection_mask(arity, arity - 1 - j) for j in range(arity)]
    out = []
    for signs in itertools.product((0, 1, 2), repeat=arity):
        pos = neg = 0
        mask = 0
        for j, sign in enumerate(signs):
            bit = 1 << (arity - 1 - j)
            if sign == 1:
                pos |= bit
                mask |= literal[j]
            elif sign == 2:
                neg |= bit
                mask |= full & ~literal[j]
        if pos or neg:
            out.append((pos, neg, mask))
    return tuple(out)


def _relation_mask(relation: BooleanRelation) -> int:
    mask = 0
    for code in relation.codes:
        mask |= 1 << code
    return mask


def definable_by(relation: BooleanRelation, shape: ClauseShape) -> bool:
    """R equals the models of the conjunction of its implied clauses of the given shape."""
    target = _relation_mask(relation)
    models = (1 << (1 << relation.arity)) - 1
    for pos, neg, mask in _clauses(relation.arity):
        if shape(pos, neg) and target & ~mask == 0:
            models &= mask
            if models == target:
                return True
    return models == target


# ============================================================================
# CLASSIFICATION
# ============================================================================

def classify_relation(relation: BooleanRelation, cap: Optional[int] = None) -> RelationFlags:
    enforce_cap("relation arity", relation.arity, cap, config.ARITY_CAP)
    codes = relation.codes
    top = (1 << relation.arity) - 1
    return RelationFlags(
        horn=_closed_under(relation, "horn"),
        dual_horn=_closed_under(relation, "dual_horn"),
        bijunctive=_closed_under(relation, "bijunctive"),
        affine=_closed_under(relation, "affine"),
        valid0=0 in codes,
        valid1=top in codes,
        definite_horn=definable_by(relation, SHAPES["definite_horn"]),
        negative_horn=definable_by(relation, SHAPES["negative_horn"]),
        ihsb_plus=definable_by(relation, SHAPES["ihsb_plus"]),
        ihsb_minus=definable_by(relation, SHAPES["ihsb_minus"]),
    )


def classify_set(relations: Iterable[BooleanRelation], cap: Optional[int] = None) -> SchaeferReport:
    """Setwise conjunction of the per-relation flags. The empty set has every flag."""
    flags = [classify_relation(relation, cap) for relation in relations]
    merged = {name: all(getattr(f, name) for f in flags) for name in RelationFlags.model_fields}
    schaefer = merged["horn"] or merged["dual_horn"] or merged["bijunctive"] or merged["affine"]
    return SchaeferReport(**merged, schaefer=schaefer)


def classification_report(relations: Sequence[BooleanRelation]) -> ClassificationReport:
    rows = [
        RelationReport(name=r.name, arity=r.arity, tuples=r.sorted_rows(), flags=classify_relation(r))
        for r in relations
    ]
    summary = classify_set(relations)
    logger.info(f"✓ classified {len(rows)} relations, schaefer={summary.schaefer}")
    return ClassificationReport(relations=rows, summary=summary)


# ============================================================================
# BRIDGE TO FORMULA THEORIES
# ============================================================================

def characteristic_function(relation: BooleanRelation) -> BooleanFunction:
    """The truth table of R, named after R."""
    codes = relation.codes
    return BooleanFunction(relation.name, relation.arity, tuple(int(i in codes) for i in range(1 << relation.arity)))


def register_relation(relation: BooleanRelation, library: FunctionLibrary) -> BooleanFunction:
    """Make `R(x, y)` parse as the characteristic function of R."""
    return library.declare(characteristic_function(relation))


def constraint_to_theory(theory: ConstraintTheory) -> Theory:
    formulas = [
        Apply(characteristic_function(app.relation), tuple(Proposition(name) for name in app.variables))
        for app in theory.applications
    ]
    return Theory.of(formulas, theory.universe)


def relation_of_application(node: Union[Apply, ConstraintApplication]) -> BooleanRelation:
    if isinstance(node, ConstraintApplication):
        return node.relation
    if not all(isinstance(arg, Proposition) for arg in node.args):
        raise FormulaError(f"{node.function.name} is not applied to propositions")
    function = node.function
    rows = [tuple((i >> (function.arity - 1 - j)) & 1 for j in range(function.arity))
            for i, value in enumerate(function.table) if value]
    return BooleanRelation(function.name, function.arity, frozenset(rows))
