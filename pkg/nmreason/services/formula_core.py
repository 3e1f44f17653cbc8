"""
Formula Core Service

Propositional syntax and exact finite-model semantics shared by every reasoner.

Provides:
- FunctionLibrary: built-in and user-declared truth tables
- parse_formula / format_formula: the text grammar and its exact inverse
- evaluate: bottom-up evaluation against an assignment
- ModelSpace: model sets as integer bitmasks over a sorted universe
- models / entails / is_consistent / count_models
- eliminate_constant_one plus constant substitution helpers
- ordered_map: optional threaded map with deterministic output order

A model set over n propositions is an int with 2^n bits; bit i is set iff the
assignment whose encoding (first proposition most significant) equals i is a model.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, TypeVar, Union

from .. import config
from ..errors import (
    ArityError,
    CapExceededError,
    DeclarationError,
    FormulaError,
    ParseError,
    UnknownFunctionError,
)
from ..models import (
    Apply,
    Assignment,
    Belief,
    BooleanFunction,
    Clause,
    ConstraintApplication,
    Formula,
    Literal,
    Proposition,
    Theory,
    bits_to_index,
    variables,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# ============================================================================
# FUNCTION LIBRARY
# ============================================================================

# name -> (arity, table bits most-significant input first)
BUILTIN_TABLES = {
    "and": (2, "0001"),
    "or": (2, "0111"),
    "not": (1, "10"),
    "xor": (2, "0110"),
    "eq": (2, "1001"),
    "imp": (2, "1101"),
    "nimp": (2, "0100"),
    "const0": (0, "0"),
    "const1": (0, "1"),
    "id": (1, "01"),
    "maj": (3, "00010111"),
}

BUILTINS: Dict[str, BooleanFunction] = {
    name: BooleanFunction.from_bits(name, arity, bits) for name, (arity, bits) in BUILTIN_TABLES.items()
}

AND = BUILTINS["and"]
OR = BUILTINS["or"]
NOT = BUILTINS["not"]
XOR = BUILTINS["xor"]
EQ = BUILTINS["eq"]
IMP = BUILTINS["imp"]
NIMP = BUILTINS["nimp"]
CONST0 = BUILTINS["const0"]
CONST1 = BUILTINS["const1"]
ID = BUILTINS["id"]
MAJ = BUILTINS["maj"]

INFIX_SYMBOLS = {"and": "&", "or": "|", "xor": "^", "imp": "->", "eq": "<->"}

# Reserved for the belief operator in the autoepistemic dialect
BELIEF_NAME = "L"


def _build_declaration_pattern():
    return re.compile(r"^\s*fun\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=\s*([01]+)\s*$")


def _build_token_pattern():
    return re.compile(
        r"""
          (?P<space>\s+)
        | (?P<iff><->)
        | (?P<imp>->)
        | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
        | (?P<const>[01])
        | (?P<punct>[&|^!(),])
        """,
        re.VERBOSE,
    )


DECLARATION_PATTERN = _build_declaration_pattern()
TOKEN_PATTERN = _build_token_pattern()
PROPOSITION_PATTERN = re.compile(r"[a-z][a-z0-9_]*")
FUNCTION_NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class FunctionLibrary:
    """Named truth tables available to the parser. Built-ins are always present."""

    def __init__(self, functions: Iterable[BooleanFunction] = ()):
        self._functions: Dict[str, BooleanFunction] = dict(BUILTINS)
        for function in functions:
            self.declare(function)

    def declare(self, function: BooleanFunction) -> BooleanFunction:
        if not FUNCTION_NAME_PATTERN.fullmatch(function.name) or function.name == BELIEF_NAME:
            raise DeclarationError(f"invalid function name {function.name!r}")
        existing = self._functions.get(function.name)
        if existing is not None:
            if existing == function:
                return existing
            raise DeclarationError(f"function {function.name} is already declared")
        self._functions[function.name] = function
        return function

    def declare_line(self, line: str) -> BooleanFunction:
        """`fun NAME/ARITY = BITS`"""
        match = DECLARATION_PATTERN.match(line)
        if not match:
            raise DeclarationError(f"malformed function declaration: {line.strip()!r}")
        name, arity, bits = match.group(1), int(match.group(2)), match.group(3)
        return self.declare(BooleanFunction.from_bits(name, arity, bits))

    def get(self, name: str, position: Optional[int] = None) -> BooleanFunction:
        try:
            return self._functions[name]
        except KeyError:
            raise UnknownFunctionError(f"unknown function {name}", position) from None

    def __contains__(self, name: str) -> bool:
        return name in self._functions

    def names(self) -> List[str]:
        return sorted(self._functions)

    def copy(self) -> "FunctionLibrary":
        clone = FunctionLibrary()
        clone._functions = dict(self._functions)
        return clone


DEFAULT_LIBRARY = FunctionLibrary()


# ============================================================================
# PARSER
# ============================================================================

def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if not match:
            raise ParseError(f"unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        value = match.group()
        if kind != "space":
            if kind in ("punct", "iff", "imp"):
                kind = value
            tokens.append((kind, value, position))
        position = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _FormulaParser:
    """Recursive descent, lowest precedence first: <-> , -> , | , ^ , & , !"""

    def __init__(self, text: str, library: FunctionLibrary, beliefs: bool):
        self.tokens = _tokenize(text)
        self.index = 0
        self.library = library
        self.beliefs = beliefs

    def _peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def _advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, kind: str) -> Tuple[str, str, int]:
        token = self._advance()
        if token[0] != kind:
            found = token[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", token[2])
        return token

    def parse(self) -> Formula:
        node = self._iff()
        token = self._peek()
        if token[0] != "end":
            raise ParseError(f"unexpected {token[1]!r}", token[2])
        return node

    def _iff(self) -> Formula:
        left = self._imp()
        while self._peek()[0] == "<->":
            self._advance()
            left = Apply(EQ, (left, self._imp()))
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self._peek()[0] == "->":
            self._advance()
            return Apply(IMP, (left, self._imp()))
        return left

    def _or(self) -> Formula:
        left = self._xor()
        while self._peek()[0] == "|":
            self._advance()
            left = Apply(OR, (left, self._xor()))
        return left

    def _xor(self) -> Formula:
        left = self._and()
        while self._peek()[0] == "^":
            self._advance()
            left = Apply(XOR, (left, self._and()))
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._peek()[0] == "&":
            self._advance()
            left = Apply(AND, (left, self._unary()))
        return left

    def _unary(self) -> Formula:
        if self._peek()[0] == "!":
            self._advance()
            return Apply(NOT, (self._unary(),))
        return self._atom()

    def _atom(self) -> Formula:
        kind, value, position = self._advance()
        if kind == "(":
            node = self._iff()
            self._expect(")")
            return node
        if kind == "const":
            return Apply(CONST1 if value == "1" else CONST0)
        if kind != "ident":
            raise ParseError(f"unexpected {value or 'end of input'!r}", position)
        if self._peek()[0] == "(":
            self._advance()
            args = self._arguments()
            if value == BELIEF_NAME and self.beliefs:
                if len(args) != 1:
                    raise ArityError("belief operator L takes exactly one argument", position)
                return Belief(args[0])
            function = self.library.get(value, position)
            if len(args) != function.arity:
                raise ArityError(
                    f"{value} expects {function.arity} arguments, got {len(args)}", position
                )
            return Apply(function, tuple(args))
        if not PROPOSITION_PATTERN.fullmatch(value):
            raise ParseError(f"invalid proposition name {value!r}", position)
        return Proposition(value)

    def _arguments(self) -> List[Formula]:
        args: List[Formula] = []
        if self._peek()[0] == ")":
            self._advance()
            return args
        while True:
            args.append(self._iff())
            kind, value, position = self._advance()
            if kind == ")":
                return args
            if kind != ",":
                raise ParseError(f"expected ',' or ')', found {value or 'end of input'!r}", position)


def parse_formula(text: str, library: Optional[FunctionLibrary] = None, beliefs: bool = False) -> Formula:
    """Parse one formula. With beliefs=True, `L(...)` denotes the belief operator."""
    return _FormulaParser(text, library or DEFAULT_LIBRARY, beliefs).parse()


# ============================================================================
# PRINTER
# ============================================================================

def _is_builtin(function: BooleanFunction) -> bool:
    return BUILTINS.get(function.name) == function


def _format(node: Formula, top: bool) -> str:
    if isinstance(node, Proposition):
        return node.name
    if isinstance(node, Belief):
        return f"{BELIEF_NAME}({_format(node.argument, True)})"
    if isinstance(node, ConstraintApplication):
        return f"{node.relation.name}({', '.join(node.variables)})"
    function = node.function
    if _is_builtin(function):
        if function.name == "const0":
            return "0"
        if function.name == "const1":
            return "1"
        if function.name == "not":
            return "!" + _format(node.args[0], False)
        symbol = INFIX_SYMBOLS.get(function.name)
        if symbol:
            text = f"{_format(node.args[0], False)} {symbol} {_format(node.args[1], False)}"
            return text if top else f"({text})"
    return f"{function.name}({', '.join(_format(arg, True) for arg in node.args)})"


def format_formula(node: Formula) -> str:
    """Binary operators below the top level are fully parenthesised so parsing is exact."""
    return _format(node, True)


# ============================================================================
# EVALUATION
# ============================================================================

def evaluate(node: Formula, assignment: Union[Assignment, Mapping[str, int]]) -> int:
    """Value of node under the assignment. Belief atoms are looked up by their printed form."""

    def lookup(name: str) -> int:
        try:
            return 1 if assignment[name] else 0
        except KeyError:
            raise FormulaError(f"unbound proposition {name}") from None

    def walk(item: Formula) -> int:
        if isinstance(item, Proposition):
            return lookup(item.name)
        if isinstance(item, Apply):
            return item.function.table[bits_to_index(walk(arg) for arg in item.args)]
        if isinstance(item, Belief):
            return lookup(format_formula(item))
        if isinstance(item, ConstraintApplication):
            row = tuple(lookup(name) for name in item.variables)
            return 1 if row in item.relation.tuples else 0
        raise FormulaError(f"not a formula node: {item!r}")

    return walk(node)


# ============================================================================
# BITMASK MODEL SETS
# ============================================================================

@lru_cache(maxsize=None)
def projection_mask(width: int, shift: int) -> int:
    """Bitmask over 2^width indices with bit i set iff bit `shift` of i is 1."""
    size = 1 << width
    block = 1 << shift
    pattern = ((1 << block) - 1) << block
    span = block << 1
    while span < size:
        pattern |= pattern << span
        span <<= 1
    return pattern


def combine_table(table: Sequence[int], operands: Sequence[int], full: int) -> int:
    """Apply a truth table pointwise to bit-parallel operands (Shannon expansion).

    operands[0] selects the most significant table index bit. Works for any
    bit-parallel encoding: model-set masks as well as packed relation tuples.
    """
    if not operands:
        return full if table[0] else 0

    def expand(lo: int, hi: int, depth: int) -> int:
        if hi - lo == 1:
            return full if table[lo] else 0
        mid = (lo + hi) // 2
        low = expand(lo, mid, depth + 1)
        high = expand(mid, hi, depth + 1)
        if low == high:
            return low
        selector = operands[depth]
        return (selector & high) | (full & ~selector & low)

    return expand(0, len(table), 0)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_indices(mask: int) -> List[int]:
    """Set bit positions in ascending order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def enforce_cap(what: str, size: int, cap: Optional[int], default: int) -> int:
    limit = config.resolve(cap, default)
    if size > limit:
        logger.warning(f"⚠ {what} size {size} over cap {limit}")
        raise CapExceededError(what, size, limit)
    return limit


class ModelSpace:
    """All assignments over a fixed sorted universe, with memoised formula masks."""

    def __init__(self, universe: Iterable[str], cap: Optional[int] = None):
        self.universe: Tuple[str, ...] = tuple(sorted(set(universe)))
        enforce_cap("model space", len(self.universe), cap, config.ENUMERATION_CAP)
        self.width = len(self.universe)
        self.size = 1 << self.width
        self.full = (1 << self.size) - 1
        self._position = {name: j for j, name in enumerate(self.universe)}
        self._masks: Dict[Formula, int] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._position

    def variable_mask(self, name: str) -> int:
        j = self._position.get(name)
        if j is None:
            raise FormulaError(f"unbound proposition {name}")
        return projection_mask(self.width, self.width - 1 - j)

    def literal_mask(self, name: str, positive: bool = True) -> int:
        mask = self.variable_mask(name)
        return mask if positive else self.full & ~mask

    def mask(self, node: Formula) -> int:
        cached = self._masks.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Proposition):
            result = self.variable_mask(node.name)
        elif isinstance(node, Apply):
            result = combine_table(node.function.table, [self.mask(arg) for arg in node.args], self.full)
        elif isinstance(node, Belief):
            key = format_formula(node)
            if key not in self._position:
                raise FormulaError(f"unknown belief atom {key}")
            result = self.variable_mask(key)
        elif isinstance(node, ConstraintApplication):
            result = self._constraint_mask(node)
        else:
            raise FormulaError(f"not a formula node: {node!r}")
        self._masks[node] = result
        return result

    def _constraint_mask(self, node: ConstraintApplication) -> int:
        result = 0
        for row in node.relation.tuples:
            term = self.full
            for name, bit in zip(node.variables, row):
                term &= self.literal_mask(name, bool(bit))
                if not term:
                    break
            result |= term
        return result

    def conjunction(self, nodes: Iterable[Formula]) -> int:
        acc = self.full
        for node in nodes:
            acc &= self.mask(node)
            if not acc:
                break
        return acc

    def entails(self, premises: Union[int, Iterable[Formula]], query: Formula) -> bool:
        base = premises if isinstance(premises, int) else self.conjunction(premises)
        return base & ~self.mask(query) == 0

    def count(self, mask: int) -> int:
        return popcount(mask)

    def assignment(self, index: int) -> Assignment:
        return Assignment(self.universe, index)

    def assignments(self, mask: int) -> List[Assignment]:
        return [Assignment(self.universe, i) for i in mask_indices(mask)]

    def index_of(self, assignment: Union[Assignment, Mapping[str, int]]) -> int:
        if isinstance(assignment, Assignment) and assignment.universe == self.universe:
            return assignment.index
        try:
            return bits_to_index(1 if assignment[name] else 0 for name in self.universe)
        except KeyError as exc:
            raise FormulaError(f"assignment is not total: missing {exc.args[0]}") from None

    def point(self, assignment: Union[Assignment, Mapping[str, int]]) -> int:
        return 1 << self.index_of(assignment)


# ============================================================================
# THEORY SEMANTICS
# ============================================================================

def models(theory: Theory, cap: Optional[int] = None) -> List[Assignment]:
    space = ModelSpace(theory.universe, cap)
    return space.assignments(space.conjunction(theory.formulas))


def count_models(theory: Theory, cap: Optional[int] = None) -> int:
    space = ModelSpace(theory.universe, cap)
    return space.count(space.conjunction(theory.formulas))


def is_consistent(theory: Theory, cap: Optional[int] = None) -> bool:
    space = ModelSpace(theory.universe, cap)
    return space.conjunction(theory.formulas) != 0


def entails(theory: Theory, query: Formula, universe: Iterable[str] = (), cap: Optional[int] = None) -> bool:
    """Γ ⊨ φ over Vars(Γ) ∪ Vars(φ) ∪ universe. An inconsistent Γ entails everything."""
    space = ModelSpace(set(theory.universe) | variables(query) | set(universe), cap)
    return space.entails(theory.formulas, query)


# ============================================================================
# CONSTANTS AND FRESH NAMES
# ============================================================================

def is_constant(function: BooleanFunction, value: int) -> bool:
    return function.arity == 0 and function.table[0] == value


def mentions_constant(node: Formula, value: int) -> bool:
    if isinstance(node, Apply):
        if is_constant(node.function, value):
            return True
        return any(mentions_constant(arg, value) for arg in node.args)
    if isinstance(node, Belief):
        return mentions_constant(node.argument, value)
    return False


def substitute_constants(node: Formula, replacements: Mapping[int, Formula]) -> Formula:
    """Replace every arity-0 function of value c by replacements[c], also under beliefs."""
    if isinstance(node, Apply):
        if node.function.arity == 0 and node.function.table[0] in replacements:
            return replacements[node.function.table[0]]
        return Apply(node.function, tuple(substitute_constants(arg, replacements) for arg in node.args))
    if isinstance(node, Belief):
        return Belief(substitute_constants(node.argument, replacements))
    return node


def fresh_name(base: str, taken: Iterable[str]) -> str:
    used = set(taken)
    if base not in used:
        return base
    suffix = 1
    while f"{base}_{suffix}" in used:
        suffix += 1
    return f"{base}_{suffix}"


def eliminate_constant_one(theory: Theory) -> Theory:
    """Γ[1/t] ∪ {t} for a fresh t; Γ itself when the constant 1 does not occur."""
    if not any(mentions_constant(member, 1) for member in theory):
        return theory
    t = fresh_name("t", theory.universe)
    replaced = [substitute_constants(member, {1: Proposition(t)}) for member in theory]
    logger.debug(f"constant 1 replaced by fresh proposition {t}")
    return Theory.of(replaced + [Proposition(t)], set(theory.universe) | {t})


def negate(node: Formula) -> Formula:
    return Apply(NOT, (node,))


def conjoin(nodes: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the constant 1 for an empty sequence."""
    if not nodes:
        return Apply(CONST1)
    result = nodes[0]
    for node in nodes[1:]:
        result = Apply(AND, (result, node))
    return result


def disjoin(nodes: Sequence[Formula]) -> Formula:
    if not nodes:
        return Apply(CONST0)
    result = nodes[0]
    for node in nodes[1:]:
        result = Apply(OR, (result, node))
    return result


def literal_formula(literal: Literal) -> Formula:
    name, positive = literal
    return Proposition(name) if positive else negate(Proposition(name))


def cnf_formula(clauses: Sequence[Clause]) -> Formula:
    return conjoin([disjoin([literal_formula(lit) for lit in clause]) for clause in clauses])


# ============================================================================
# ORDERED PARALLEL MAP
# ============================================================================

def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """map() that may fan out to threads; the result order is always the input order."""
    batch = list(items)
    count = config.resolve(workers, config.WORKERS)
    if count <= 1 or len(batch) < 2:
        return [func(item) for item in batch]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, batch))
