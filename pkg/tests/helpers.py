"""
Builders and seeded random generators shared by the test modules.
"""
import itertools
import random
from typing import List, Sequence

from nmreason.models import QBF, AETheory, Apply, Belief, BooleanFunction, DefaultRule, DefaultTheory, Proposition
from nmreason.services.formula_core import AND, NOT, OR, parse_formula


def formula(text: str, beliefs: bool = False):
    return parse_formula(text, beliefs=beliefs)


def rule(text: str) -> DefaultRule:
    """`alpha : beta / gamma`"""
    premise, _, rest = text.partition(":")
    justification, _, conclusion = rest.partition("/")
    return DefaultRule(formula(premise.strip()), formula(justification.strip()), formula(conclusion.strip()))


def default_theory(facts: Sequence[str] = (), rules: Sequence[str] = ()) -> DefaultTheory:
    return DefaultTheory.of([formula(f) for f in facts], [rule(r) for r in rules])


def ae_theory(*lines: str) -> AETheory:
    return AETheory.of([formula(line, beliefs=True) for line in lines])


# ============================================================================
# RANDOM GENERATORS
# ============================================================================

def random_formula(rng: random.Random, names: Sequence[str], functions: Sequence[BooleanFunction],
                   depth: int = 2, beliefs: bool = False):
    """Random formula over the given functions; arity-0 functions act as leaves."""
    leaves = [f for f in functions if f.arity == 0]
    inner = [f for f in functions if f.arity > 0]
    if depth == 0 or not inner or rng.random() < 0.25:
        if leaves and rng.random() < 0.2:
            return Apply(rng.choice(leaves))
        return Proposition(rng.choice(names))
    if beliefs and rng.random() < 0.25:
        return Belief(random_formula(rng, names, functions, depth - 1, False))
    function = rng.choice(inner)
    return Apply(function, tuple(random_formula(rng, names, functions, depth - 1, beliefs)
                                 for _ in range(function.arity)))


def random_default_theory(rng: random.Random, names: Sequence[str], functions: Sequence[BooleanFunction],
                          facts: int = 1, rules: int = 3) -> DefaultTheory:
    def pick():
        return random_formula(rng, names, functions, depth=2)

    return DefaultTheory.of(
        [pick() for _ in range(facts)],
        [DefaultRule(pick(), pick(), pick()) for _ in range(rules)],
        names,
    )


def random_ae_theory(rng: random.Random, names: Sequence[str], functions: Sequence[BooleanFunction],
                     size: int = 2) -> AETheory:
    return AETheory.of(
        [random_formula(rng, names, functions, depth=2, beliefs=True) for _ in range(size)],
        names,
    )


def random_3cnf(rng: random.Random, names: Sequence[str], clauses: int):
    return [tuple((rng.choice(names), rng.random() < 0.5) for _ in range(3)) for _ in range(clauses)]


def all_3cnf(names: Sequence[str], clauses: int):
    literals = [(name, polarity) for name in names for polarity in (True, False)]
    shapes = list(itertools.combinations_with_replacement(literals, 3))
    return [list(combo) for combo in itertools.combinations_with_replacement(shapes, clauses)]


def random_nnf(rng: random.Random, names: Sequence[str], depth: int = 2):
    """Matrix over and, or and negated propositions, without constants."""
    if depth == 0 or rng.random() < 0.3:
        leaf = Proposition(rng.choice(names))
        return Apply(NOT, (leaf,)) if rng.random() < 0.5 else leaf
    function = rng.choice([AND, OR])
    return Apply(function, (random_nnf(rng, names, depth - 1), random_nnf(rng, names, depth - 1)))


def random_qbf(rng: random.Random, exists: List[str], forall: List[str], depth: int = 2) -> QBF:
    return QBF(tuple(exists), tuple(forall), random_nnf(rng, exists + forall, depth))


def brute_force_sat(clauses) -> bool:
    names = sorted({name for clause in clauses for name, _ in clause})
    for values in itertools.product((False, True), repeat=len(names)):
        assignment = dict(zip(names, values))
        if all(any(assignment[name] == polarity for name, polarity in clause) for clause in clauses):
            return True
    return False
