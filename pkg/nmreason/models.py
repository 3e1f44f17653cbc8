"""
Immutable domain types shared by every reasoning service.

Includes:
- BooleanFunction: named truth table, index bits most-significant first
- Formula nodes: Proposition, Apply, Belief, ConstraintApplication
- Assignment over a declared (sorted) universe
- Theory: ordered, deduplicated set of formulas plus its universe
- BooleanRelation / ConstraintTheory
- DefaultRule / DefaultTheory / ExtensionWitness
- AETheory / FullSet
- VarPartition / CircProblem
- AbductionInstance / Explanation
- CloneName, QBF, CNF literal conventions
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from .errors import ArityError, DeclarationError, FormulaError, PreconditionError

# (name, polarity) with polarity True for the positive literal
Literal = Tuple[str, bool]
Clause = Tuple[Literal, ...]

QUERY_PROPOSITION = "proposition"
QUERY_LITERAL = "literal"
QUERY_TERM = "term"
QUERY_CLAUSE = "clause"
QUERY_FORMULA = "formula"
QUERY_KINDS = (QUERY_PROPOSITION, QUERY_LITERAL, QUERY_TERM, QUERY_CLAUSE, QUERY_FORMULA)

MODE_LITERAL = "literal"
MODE_POSITIVE = "positive"


def bits_to_index(bits: Iterable[int]) -> int:
    index = 0
    for bit in bits:
        index = (index << 1) | bit
    return index


def index_to_bits(index: int, width: int) -> Tuple[int, ...]:
    return tuple((index >> (width - 1 - j)) & 1 for j in range(width))


# ============================================================================
# BOOLEAN FUNCTIONS AND FORMULAS
# ============================================================================

@dataclass(frozen=True)
class BooleanFunction:
    name: str
    arity: int
    table: Tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise ArityError(f"function {self.name} has negative arity")
        if len(self.table) != 1 << self.arity:
            raise DeclarationError(
                f"function {self.name}/{self.arity} needs {1 << self.arity} table bits, got {len(self.table)}"
            )
        if any(bit not in (0, 1) for bit in self.table):
            raise DeclarationError(f"function {self.name} has a non-bit table entry")

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise ArityError(f"{self.name} expects {self.arity} arguments, got {len(args)}")
        return self.table[bits_to_index(args)]

    @property
    def bits(self) -> str:
        return "".join(str(bit) for bit in self.table)

    def same_table(self, other: "BooleanFunction") -> bool:
        return self.arity == other.arity and self.table == other.table

    @classmethod
    def from_bits(cls, name: str, arity: int, bits: str) -> "BooleanFunction":
        if any(ch not in "01" for ch in bits):
            raise DeclarationError(f"table for {name} must be a bit string, got {bits!r}")
        return cls(name, arity, tuple(int(ch) for ch in bits))


@dataclass(frozen=True)
class Proposition:
    name: str


@dataclass(frozen=True)
class Apply:
    function: BooleanFunction
    args: Tuple["Formula", ...] = ()

    def __post_init__(self):
        if len(self.args) != self.function.arity:
            raise ArityError(
                f"{self.function.name} expects {self.function.arity} arguments, got {len(self.args)}"
            )


@dataclass(frozen=True)
class Belief:
    """L(argument): an autoepistemic belief. Treated as an atom by propositional entailment."""
    argument: "Formula"


@dataclass(frozen=True)
class BooleanRelation:
    name: str
    arity: int
    tuples: FrozenSet[Tuple[int, ...]]

    def __post_init__(self):
        if self.arity < 1:
            raise DeclarationError(f"relation {self.name} needs a positive arity")
        for row in self.tuples:
            if len(row) != self.arity or any(bit not in (0, 1) for bit in row):
                raise DeclarationError(f"relation {self.name}/{self.arity} has malformed tuple {row}")

    @classmethod
    def of(cls, name: str, arity: int, rows: Iterable[Union[str, Tuple[int, ...]]]) -> "BooleanRelation":
        parsed = set()
        for row in rows:
            if isinstance(row, str):
                if any(ch not in "01" for ch in row):
                    raise DeclarationError(f"relation {name}: tuple {row!r} is not a bit string")
                row = tuple(int(ch) for ch in row)
            parsed.add(tuple(row))
        return cls(name, arity, frozenset(parsed))

    @cached_property
    def codes(self) -> FrozenSet[int]:
        """Tuples packed as integers, first coordinate most significant."""
        return frozenset(bits_to_index(row) for row in self.tuples)

    def sorted_rows(self) -> List[str]:
        return ["".join(map(str, index_to_bits(code, self.arity))) for code in sorted(self.codes)]


@dataclass(frozen=True)
class ConstraintApplication:
    """R(x1, ..., xm). Repeated variables are allowed."""
    relation: BooleanRelation
    variables: Tuple[str, ...]

    def __post_init__(self):
        if len(self.variables) != self.relation.arity:
            raise ArityError(
                f"relation {self.relation.name} has arity {self.relation.arity}, "
                f"applied to {len(self.variables)} variables"
            )


Formula = Union[Proposition, Apply, Belief, ConstraintApplication]


def variables(node: Formula) -> FrozenSet[str]:
    """Vars(φ), including propositions that only occur under a belief."""
    found = set()
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, Proposition):
            found.add(item.name)
        elif isinstance(item, Apply):
            stack.extend(item.args)
        elif isinstance(item, Belief):
            stack.append(item.argument)
        elif isinstance(item, ConstraintApplication):
            found.update(item.variables)
        else:
            raise FormulaError(f"not a formula node: {item!r}")
    return frozenset(found)


def functions_used(nodes: Iterable[Formula]) -> List[BooleanFunction]:
    """Distinct functions applied anywhere in the given formulas, first occurrence order."""
    seen: Dict[BooleanFunction, None] = {}
    stack = list(reversed(list(nodes)))
    while stack:
        item = stack.pop()
        if isinstance(item, Apply):
            seen.setdefault(item.function, None)
            stack.extend(reversed(item.args))
        elif isinstance(item, Belief):
            stack.append(item.argument)
    return list(seen)


# ============================================================================
# ASSIGNMENTS AND THEORIES
# ============================================================================

@dataclass(frozen=True, order=True)
class Assignment:
    """A total assignment over `universe` (sorted). Bit j of the encoding, most
    significant first, is the value of universe[j]; `index` is that encoding."""
    universe: Tuple[str, ...]
    index: int

    def __post_init__(self):
        if tuple(sorted(set(self.universe))) != self.universe:
            raise FormulaError("assignment universe must be sorted and duplicate free")
        if not 0 <= self.index < (1 << len(self.universe)):
            raise FormulaError(f"assignment index {self.index} out of range")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int], universe: Optional[Iterable[str]] = None) -> "Assignment":
        names = tuple(sorted(set(universe) if universe is not None else set(mapping)))
        missing = [name for name in names if name not in mapping]
        if missing:
            raise FormulaError(f"assignment is not total: missing {', '.join(missing)}")
        return cls(names, bits_to_index(1 if mapping[name] else 0 for name in names))

    @classmethod
    def from_true_set(cls, true_set: Iterable[str], universe: Iterable[str]) -> "Assignment":
        names = tuple(sorted(set(universe)))
        chosen = set(true_set)
        stray = chosen - set(names)
        if stray:
            raise FormulaError(f"propositions outside universe: {', '.join(sorted(stray))}")
        return cls(names, bits_to_index(1 if name in chosen else 0 for name in names))

    @classmethod
    def from_bits(cls, bits: str, universe: Iterable[str]) -> "Assignment":
        names = tuple(sorted(set(universe)))
        if len(bits) != len(names) or any(ch not in "01" for ch in bits):
            raise FormulaError(f"expected {len(names)} bits over {', '.join(names)}, got {bits!r}")
        return cls(names, int(bits, 2) if bits else 0)

    def __getitem__(self, name: str) -> int:
        try:
            j = self.universe.index(name)
        except ValueError:
            raise FormulaError(f"unbound proposition {name}") from None
        return (self.index >> (len(self.universe) - 1 - j)) & 1

    def __contains__(self, name: str) -> bool:
        return name in self.universe

    @property
    def mapping(self) -> Dict[str, int]:
        return {name: self[name] for name in self.universe}

    @property
    def true_set(self) -> FrozenSet[str]:
        return frozenset(name for name in self.universe if self[name])

    @property
    def bits(self) -> str:
        return "".join(str(b) for b in index_to_bits(self.index, len(self.universe)))

    def restrict(self, names: Iterable[str]) -> "Assignment":
        return Assignment.from_mapping(self.mapping, names)


@dataclass(frozen=True)
class Theory:
    formulas: Tuple[Formula, ...]
    universe: Tuple[str, ...]

    def __post_init__(self):
        covered = set(self.universe)
        for member in self.formulas:
            stray = variables(member) - covered
            if stray:
                raise FormulaError(f"universe misses {', '.join(sorted(stray))}")

    @classmethod
    def of(cls, formulas: Iterable[Formula] = (), universe: Iterable[str] = ()) -> "Theory":
        members = tuple(dict.fromkeys(formulas))
        names = set(universe)
        for member in members:
            names |= variables(member)
        return cls(members, tuple(sorted(names)))

    def extend(self, formulas: Iterable[Formula] = (), universe: Iterable[str] = ()) -> "Theory":
        return Theory.of(self.formulas + tuple(formulas), set(self.universe) | set(universe))

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class ConstraintTheory:
    applications: Tuple[ConstraintApplication, ...]
    universe: Tuple[str, ...]

    @classmethod
    def of(cls, applications: Iterable[ConstraintApplication] = (), universe: Iterable[str] = ()) -> "ConstraintTheory":
        members = tuple(dict.fromkeys(applications))
        names = set(universe)
        for app in members:
            names.update(app.variables)
        return cls(members, tuple(sorted(names)))

    @property
    def relations(self) -> List[BooleanRelation]:
        return list(dict.fromkeys(app.relation for app in self.applications))


# ============================================================================
# DEFAULT LOGIC
# ============================================================================

@dataclass(frozen=True)
class DefaultRule:
    """premise : justification / conclusion"""
    premise: Formula
    justification: Formula
    conclusion: Formula

    def formulas(self) -> Tuple[Formula, Formula, Formula]:
        return (self.premise, self.justification, self.conclusion)


@dataclass(frozen=True)
class DefaultTheory:
    W: Theory
    D: Tuple[DefaultRule, ...]
    universe: Tuple[str, ...]

    @classmethod
    def of(cls, facts: Iterable[Formula] = (), rules: Iterable[DefaultRule] = (),
           universe: Iterable[str] = ()) -> "DefaultTheory":
        D = tuple(dict.fromkeys(rules))
        names = set(universe)
        for rule in D:
            for part in rule.formulas():
                names |= variables(part)
        W = Theory.of(facts, names)
        return cls(W, D, W.universe)

    def formulas(self) -> List[Formula]:
        out = list(self.W.formulas)
        for rule in self.D:
            out.extend(rule.formulas())
        return out


@dataclass(frozen=True)
class ExtensionWitness:
    """A stable extension, represented by its generating defaults (indices into D)."""
    generating: Tuple[int, ...]
    closure_base: Theory
    inconsistent: bool = False


# ============================================================================
# AUTOEPISTEMIC LOGIC
# ============================================================================

class AETheory(Theory):
    """A Theory whose members may contain Belief nodes."""

    @classmethod
    def of(cls, formulas: Iterable[Formula] = (), universe: Iterable[str] = ()) -> "AETheory":
        base = Theory.of(formulas, universe)
        return cls(base.formulas, base.universe)


@dataclass(frozen=True)
class FullSet:
    """Signs over SF_L(Σ), in the canonical order of the L-subformulas."""
    signs: Tuple[Tuple[Belief, bool], ...]

    def sign(self, belief: Belief) -> bool:
        for atom, positive in self.signs:
            if atom == belief:
                return positive
        raise FormulaError("belief is not signed by this full set")

    @property
    def positive(self) -> List[Belief]:
        return [atom for atom, positive in self.signs if positive]

    @property
    def negative(self) -> List[Belief]:
        return [atom for atom, positive in self.signs if not positive]


# ============================================================================
# CIRCUMSCRIPTION
# ============================================================================

@dataclass(frozen=True)
class VarPartition:
    P: FrozenSet[str]
    Q: FrozenSet[str]
    Z: FrozenSet[str]

    def __post_init__(self):
        if self.P & self.Q or self.P & self.Z or self.Q & self.Z:
            raise PreconditionError("P, Q and Z must be pairwise disjoint")

    @classmethod
    def of(cls, P: Iterable[str] = (), Q: Iterable[str] = (), Z: Iterable[str] = ()) -> "VarPartition":
        return cls(frozenset(P), frozenset(Q), frozenset(Z))

    @classmethod
    def minimize_all(cls, universe: Iterable[str]) -> "VarPartition":
        return cls(frozenset(universe), frozenset(), frozenset())

    @property
    def universe(self) -> Tuple[str, ...]:
        return tuple(sorted(self.P | self.Q | self.Z))


@dataclass(frozen=True)
class CircProblem:
    theory: Theory
    partition: VarPartition

    def __post_init__(self):
        covered = set(self.partition.universe)
        stray = set(self.theory.universe) - covered
        if stray:
            raise PreconditionError(f"propositions outside P, Q, Z: {', '.join(sorted(stray))}")

    @classmethod
    def of(cls, formulas: Iterable[Formula], P: Iterable[str] = (), Z: Iterable[str] = (),
           Q: Optional[Iterable[str]] = None) -> "CircProblem":
        """Q defaults to every remaining proposition of the formulas."""
        P, Z = frozenset(P), frozenset(Z)
        theory = Theory.of(formulas, P | Z | frozenset(Q or ()))
        Q = frozenset(Q) if Q is not None else frozenset(theory.universe) - P - Z
        return cls(theory.extend(universe=Q), VarPartition(P, Q, Z))

    @property
    def universe(self) -> Tuple[str, ...]:
        return self.partition.universe


# ============================================================================
# ABDUCTION
# ============================================================================

@dataclass(frozen=True)
class Explanation:
    """A consistent literal set, canonically sorted (positive before negative per variable)."""
    literals: Tuple[Literal, ...]

    def __post_init__(self):
        names = [name for name, _ in self.literals]
        if len(set(names)) != len(names):
            raise FormulaError("explanation holds a complementary or repeated literal")

    @classmethod
    def of(cls, literals: Iterable[Literal]) -> "Explanation":
        return cls(tuple(sorted(set(literals), key=lambda lit: (lit[0], not lit[1]))))

    @property
    def sort_key(self) -> Tuple:
        return (len(self.literals), tuple((name, 0 if positive else 1) for name, positive in self.literals))

    def issubset(self, other: "Explanation") -> bool:
        return set(self.literals) <= set(other.literals)

    def __len__(self) -> int:
        return len(self.literals)


@dataclass(frozen=True)
class AbductionInstance:
    knowledge: Theory
    hypotheses: Tuple[str, ...]
    query: Formula
    query_kind: str = QUERY_PROPOSITION
    mode: str = MODE_LITERAL

    def __post_init__(self):
        if self.query_kind not in QUERY_KINDS:
            raise FormulaError(f"unknown query kind {self.query_kind}")
        if self.mode not in (MODE_LITERAL, MODE_POSITIVE):
            raise FormulaError(f"unknown explanation mode {self.mode}")
        stray = set(self.hypotheses) - set(self.knowledge.universe)
        if stray:
            raise PreconditionError(f"hypotheses outside Vars(Γ): {', '.join(sorted(stray))}")


# ============================================================================
# POST'S LATTICE AND QUANTIFIED FORMULAS
# ============================================================================

@dataclass(frozen=True)
class CloneName:
    tag: str
    degree: Optional[int] = None

    def __str__(self) -> str:
        return self.tag if self.degree is None else f"{self.tag}^{self.degree}"


@dataclass(frozen=True)
class QBF:
    """∃ exists ∀ forall . matrix"""
    exists: Tuple[str, ...]
    forall: Tuple[str, ...]
    matrix: Formula

    def __post_init__(self):
        bound = self.exists + self.forall
        if len(set(bound)) != len(bound):
            raise FormulaError("a variable is quantified twice")
        free = variables(self.matrix) - set(bound)
        if free:
            raise FormulaError(f"free variables in QBF matrix: {', '.join(sorted(free))}")
