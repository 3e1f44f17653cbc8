"""
Input File Loaders

Line-oriented text formats for every reasoning task. Shared conventions:
- `#` starts a comment; blank lines are ignored
- `fun NAME/ARITY = BITS` declares a Boolean function (table in index order)
- `rel NAME/ARITY = t1,t2,...` declares a relation by its tuples; in formula
  files a line `NAME(x, y, ...)` over a declared relation is a constraint
  application, and `NAME(...)` elsewhere is its characteristic function

Formats:
- formula file:    one formula per line
- default theory:  `W:` section of formulas, `D:` section of `alpha : beta / gamma`
- AE theory:       one formula per line, belief operator `L(...)`
- circumscription: formula lines plus `P: ...` and `Z: ...` headers (Q is the rest)
- abduction:       formula lines plus `A: ...`, `Q: QUERY`, `mode: literal|positive`,
                   optional `kind: proposition|literal|term|clause|formula`
- constraints:     `rel` lines plus `NAME(x, y, ...)` application lines
- QBF:             `exists x1 x2; forall y1; MATRIX`
- DIMACS CNF:      `p cnf N M` then 0-terminated clauses over x1..xN
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import DeclarationError, FormulaError, ParseError, PreconditionError, ReasoningError
from ..models import (
    MODE_LITERAL,
    QBF,
    AbductionInstance,
    AETheory,
    BooleanFunction,
    BooleanRelation,
    CircProblem,
    Clause,
    ConstraintApplication,
    ConstraintTheory,
    DefaultRule,
    DefaultTheory,
    Formula,
    Theory,
)
from .abduction import query_kind_of
from .formula_core import (
    DECLARATION_PATTERN,
    DEFAULT_LIBRARY,
    FunctionLibrary,
    conjoin,
    parse_formula,
)
from .schaefer import register_relation

logger = logging.getLogger(__name__)


# ============================================================================
# PATTERNS
# ============================================================================

def _build_relation_pattern():
    return re.compile(r"^\s*rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=\s*(.*)$")


def _build_application_pattern():
    return re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(\s*([^()]*)\)\s*$")


def _build_header_pattern(names: Sequence[str]):
    return re.compile(r"^\s*(" + "|".join(names) + r")\s*:\s*(.*)$")


RELATION_PATTERN = _build_relation_pattern()
APPLICATION_PATTERN = _build_application_pattern()
DEFAULT_HEADER_PATTERN = _build_header_pattern(["W", "D"])
CIRC_HEADER_PATTERN = _build_header_pattern(["P", "Z"])
ABDUCTION_HEADER_PATTERN = _build_header_pattern(["A", "Q", "mode", "kind"])
NAME_SPLIT_PATTERN = re.compile(r"[\s,]+")


# ============================================================================
# SHARED DECLARATIONS
# ============================================================================

@dataclass
class Declarations:
    library: FunctionLibrary = field(default_factory=lambda: DEFAULT_LIBRARY.copy())
    relations: Dict[str, BooleanRelation] = field(default_factory=dict)

    def consume(self, line: str) -> bool:
        """Handle a `fun` or `rel` line; False for anything else."""
        if DECLARATION_PATTERN.match(line):
            self.library.declare_line(line)
            return True
        if line.lstrip().startswith("rel ") or line.lstrip().startswith("rel\t"):
            relation = parse_relation_line(line)
            if relation.name in self.relations and self.relations[relation.name] != relation:
                raise DeclarationError(f"relation {relation.name} is already declared")
            self.relations[relation.name] = relation
            register_relation(relation, self.library)
            return True
        return False

    def formula(self, text: str, beliefs: bool = False) -> Formula:
        """A bare application of a declared relation is kept as a native constraint."""
        match = APPLICATION_PATTERN.match(text)
        if match and match.group(1) in self.relations:
            names = [n for n in NAME_SPLIT_PATTERN.split(match.group(2).strip()) if n]
            return ConstraintApplication(self.relations[match.group(1)], tuple(names))
        return parse_formula(text, self.library, beliefs)


def parse_relation_line(line: str) -> BooleanRelation:
    """`rel NAME/ARITY = 00,01,11`; an empty tuple list declares the empty relation."""
    match = RELATION_PATTERN.match(line)
    if not match:
        raise DeclarationError(f"malformed relation declaration: {line.strip()!r}")
    name, arity, body = match.group(1), int(match.group(2)), match.group(3).strip()
    rows = [row.strip() for row in body.split(",") if row.strip()]
    return BooleanRelation.of(name, arity, rows)


def parse_function_spec(text: str, library: Optional[FunctionLibrary] = None) -> BooleanFunction:
    """A built-in/declared name, or an inline `NAME/ARITY=BITS` declaration."""
    library = library or DEFAULT_LIBRARY
    text = text.strip()
    if "/" in text:
        return BooleanFunction.from_bits(*_split_inline(text))
    return library.get(text)


def _split_inline(text: str) -> Tuple[str, int, str]:
    match = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=\s*([01]+)", text)
    if not match:
        raise DeclarationError(f"malformed inline function {text!r}")
    return match.group(1), int(match.group(2)), match.group(3)


def _lines(text: str) -> List[Tuple[int, str]]:
    found = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            found.append((number, line))
    return found


def _at_line(number: int, error: ReasoningError) -> ReasoningError:
    if isinstance(error, (ParseError, FormulaError, PreconditionError)):
        return type(error)(f"line {number}: {error.detail}")
    return error


def _names(text: str) -> List[str]:
    return [name for name in NAME_SPLIT_PATTERN.split(text.strip()) if name]


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


# ============================================================================
# FORMULA FILES
# ============================================================================

def load_formulas(text: str, beliefs: bool = False) -> Tuple[List[Formula], Declarations]:
    declarations = Declarations()
    formulas: List[Formula] = []
    for number, line in _lines(text):
        try:
            if not declarations.consume(line):
                formulas.append(declarations.formula(line, beliefs))
        except ReasoningError as exc:
            raise _at_line(number, exc) from None
    return formulas, declarations


def load_theory(text: str) -> Theory:
    formulas, _ = load_formulas(text)
    return Theory.of(formulas)


def load_single_formula(text: str) -> Formula:
    """A formula file read as the conjunction of its lines."""
    formulas, _ = load_formulas(text)
    return conjoin(formulas)


def load_ae_theory(text: str) -> Tuple[AETheory, Declarations]:
    formulas, declarations = load_formulas(text, beliefs=True)
    return AETheory.of(formulas), declarations


# ============================================================================
# DEFAULT THEORIES
# ============================================================================

def parse_rule(text: str, declarations: Declarations) -> DefaultRule:
    """`alpha : beta / gamma`"""
    premise, colon, rest = text.partition(":")
    justification, slash, conclusion = rest.partition("/")
    if not colon or not slash:
        raise ParseError(f"default rule must read 'alpha : beta / gamma': {text!r}")
    return DefaultRule(
        declarations.formula(premise.strip()),
        declarations.formula(justification.strip()),
        declarations.formula(conclusion.strip()),
    )


def load_default_theory(text: str) -> Tuple[DefaultTheory, Declarations]:
    declarations = Declarations()
    facts: List[Formula] = []
    rules: List[DefaultRule] = []
    section: Optional[str] = None
    for number, line in _lines(text):
        try:
            if declarations.consume(line):
                continue
            header = DEFAULT_HEADER_PATTERN.match(line)
            if header:
                section, line = header.group(1), header.group(2).strip()
                if not line:
                    continue
            if section == "W":
                facts.append(declarations.formula(line))
            elif section == "D":
                rules.append(parse_rule(line, declarations))
            else:
                raise ParseError("content before a 'W:' or 'D:' section")
        except ReasoningError as exc:
            raise _at_line(number, exc) from None
    theory = DefaultTheory.of(facts, rules)
    logger.debug(f"✓ default theory: {len(theory.W)} facts, {len(theory.D)} rules")
    return theory, declarations


# ============================================================================
# CIRCUMSCRIPTION AND ABDUCTION
# ============================================================================

def load_circ_problem(text: str) -> Tuple[CircProblem, Declarations]:
    declarations = Declarations()
    formulas: List[Formula] = []
    groups: Dict[str, List[str]] = {"P": [], "Z": []}
    for number, line in _lines(text):
        try:
            if declarations.consume(line):
                continue
            header = CIRC_HEADER_PATTERN.match(line)
            if header:
                groups[header.group(1)].extend(_names(header.group(2)))
            else:
                formulas.append(declarations.formula(line))
        except ReasoningError as exc:
            raise _at_line(number, exc) from None
    return CircProblem.of(formulas, groups["P"], groups["Z"]), declarations


def load_abduction_instance(text: str) -> Tuple[AbductionInstance, Declarations]:
    declarations = Declarations()
    formulas: List[Formula] = []
    hypotheses: List[str] = []
    query: Optional[Formula] = None
    mode, kind = MODE_LITERAL, None
    for number, line in _lines(text):
        try:
            if declarations.consume(line):
                continue
            header = ABDUCTION_HEADER_PATTERN.match(line)
            if not header:
                formulas.append(declarations.formula(line))
                continue
            name, value = header.group(1), header.group(2).strip()
            if name == "A":
                hypotheses.extend(_names(value))
            elif name == "Q":
                query = declarations.formula(value)
            elif name == "mode":
                mode = value
            else:
                kind = value
        except ReasoningError as exc:
            raise _at_line(number, exc) from None
    if query is None:
        raise ParseError("abduction instance needs a 'Q:' line")
    knowledge = Theory.of(formulas)
    instance = AbductionInstance(knowledge, tuple(sorted(set(hypotheses))), query,
                                 kind or query_kind_of(query), mode)
    return instance, declarations


# ============================================================================
# CONSTRAINTS, QBF, DIMACS
# ============================================================================

def load_relations(text: str) -> Tuple[List[BooleanRelation], ConstraintTheory]:
    """Declared relations in order, plus any constraint applications over them."""
    declarations = Declarations()
    applications: List[ConstraintApplication] = []
    for number, line in _lines(text):
        try:
            if declarations.consume(line):
                continue
            node = declarations.formula(line)
            if not isinstance(node, ConstraintApplication):
                raise ParseError(f"expected a relation application, found {line!r}")
            applications.append(node)
        except ReasoningError as exc:
            raise _at_line(number, exc) from None
    return list(declarations.relations.values()), ConstraintTheory.of(applications)


def load_qbf(text: str) -> QBF:
    body = " ".join(line for _, line in _lines(text))
    parts = [part.strip() for part in body.split(";")]
    exists: List[str] = []
    forall: List[str] = []
    matrix: Optional[str] = None
    for part in parts:
        fields = part.split(None, 1)
        head = fields[0] if fields else ""
        rest = fields[1] if len(fields) > 1 else ""
        if head == "exists" and matrix is None:
            exists.extend(_names(rest))
        elif head == "forall" and matrix is None:
            forall.extend(_names(rest))
        elif matrix is None and part:
            matrix = part
        elif part:
            raise ParseError(f"unexpected QBF segment {part!r}")
    if matrix is None:
        raise ParseError("QBF has no matrix")
    return QBF(tuple(exists), tuple(forall), parse_formula(matrix))


def load_dimacs(text: str) -> Tuple[List[str], List[Clause]]:
    """Clauses over x1..xN from DIMACS CNF."""
    declared: Optional[int] = None
    numbers: List[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(f"malformed DIMACS header {line!r}")
            declared = int(fields[2])
            continue
        try:
            numbers.extend(int(token) for token in line.split())
        except ValueError:
            raise ParseError(f"non-integer literal in DIMACS line {line!r}") from None
    if declared is None:
        raise ParseError("DIMACS input lacks a 'p cnf' header")
    clauses: List[Clause] = []
    current: List[Tuple[str, bool]] = []
    for value in numbers:
        if value == 0:
            clauses.append(tuple(current))
            current = []
            continue
        if abs(value) > declared:
            raise ParseError(f"literal {value} exceeds declared variable count {declared}")
        current.append((f"x{abs(value)}", value > 0))
    if current:
        clauses.append(tuple(current))
    return [f"x{i}" for i in range(1, declared + 1)], clauses

