"""
Post's Lattice Service

Property checks on Boolean functions and identification of the clone [B]
generated by a finite set of functions.

Provides:
- dual, threshold: derived truth tables
- property_profile / separating_degree: exact checks over the truth table
- clone_contains / clone_leq / clone_of: lattice questions answered from the
  defining properties of each clone (never from a hard-coded Hasse diagram)
- base_of / dual_clone / parse_clone_name

Truth tables use most-significant-first input encoding, so an input tuple and
its table index are the same integer. Arity-0 functions are padded to arity 1
before property checks.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .. import config
from ..errors import FormulaError
from ..models import BooleanFunction, CloneName
from ..schemas import INF, CloneReport, Degree, FunctionReport, PropertyProfile
from .formula_core import (
    AND,
    CONST0,
    CONST1,
    EQ,
    ID,
    IMP,
    MAJ,
    NIMP,
    NOT,
    OR,
    XOR,
    enforce_cap,
    popcount,
)

logger = logging.getLogger(__name__)


def _tabulate(name: str, arity: int, rule: Callable[..., int]) -> BooleanFunction:
    rows = []
    for index in range(1 << arity):
        bits = [(index >> (arity - 1 - j)) & 1 for j in range(arity)]
        rows.append(1 if rule(*bits) else 0)
    return BooleanFunction(name, arity, tuple(rows))


# ============================================================================
# BASE FUNCTIONS OF THE NAMED CLONES
# ============================================================================

AND_EQ = _tabulate("and_eq", 3, lambda x, y, z: x and y == z)
OR_AND_NOT = _tabulate("or_and_not", 3, lambda x, y, z: x or (y and not z))
OR_AND = _tabulate("or_and", 3, lambda x, y, z: x or (y and z))
AND_OR_NOT = _tabulate("and_or_not", 3, lambda x, y, z: x and (y or not z))
AND_OR = _tabulate("and_or", 3, lambda x, y, z: x and (y or z))
SELF_DUAL_BASE = _tabulate("sd", 3, lambda x, y, z: (x and not y) or (x and not z) or (not y and not z))
SELF_DUAL_R2_BASE = _tabulate("sd2", 3, lambda x, y, z: (x and y) or (x and not z) or (y and not z))
XOR3 = _tabulate("xor3", 3, lambda x, y, z: x ^ y ^ z)
XNOR3 = _tabulate("xnor3", 3, lambda x, y, z: x ^ y ^ z ^ 1)

FIXED_TAGS = (
    "BF", "R0", "R1", "R2", "M", "M0", "M1", "M2",
    "S0", "S1", "S02", "S01", "S00", "S12", "S11", "S10",
    "D", "D1", "D2", "L", "L0", "L1", "L2", "L3",
    "E", "E0", "E1", "E2", "V", "V0", "V1", "V2",
    "N", "N2", "I", "I0", "I1", "I2",
)
FAMILY_TAGS = ("S0", "S1", "S02", "S01", "S00", "S12", "S11", "S10")

# Defining properties per row. "sep0"/"sep1" mean fully separating for the
# fixed rows and separating of the row's degree for parameterized rows.
CLONE_DEFINITIONS: Dict[str, Tuple[str, ...]] = {
    "BF": (),
    "R0": ("reproducing0",),
    "R1": ("reproducing1",),
    "R2": ("reproducing0", "reproducing1"),
    "M": ("monotone",),
    "M0": ("monotone", "reproducing0"),
    "M1": ("monotone", "reproducing1"),
    "M2": ("monotone", "reproducing0", "reproducing1"),
    "S0": ("sep0",),
    "S02": ("sep0", "reproducing0", "reproducing1"),
    "S01": ("sep0", "monotone"),
    "S00": ("sep0", "reproducing0", "reproducing1", "monotone"),
    "S1": ("sep1",),
    "S12": ("sep1", "reproducing0", "reproducing1"),
    "S11": ("sep1", "monotone"),
    "S10": ("sep1", "reproducing0", "reproducing1", "monotone"),
    "D": ("self_dual",),
    "D1": ("self_dual", "reproducing0", "reproducing1"),
    "D2": ("self_dual", "monotone"),
    "L": ("affine",),
    "L0": ("affine", "reproducing0"),
    "L1": ("affine", "reproducing1"),
    "L2": ("affine", "reproducing0", "reproducing1"),
    "L3": ("affine", "self_dual"),
    "E": ("conjunction_or_constant",),
    "E0": ("conjunction_or_constant", "reproducing0"),
    "E1": ("conjunction_or_constant", "reproducing1"),
    "E2": ("conjunction_or_constant", "reproducing0", "reproducing1"),
    "V": ("disjunction_or_constant",),
    "V0": ("disjunction_or_constant", "reproducing0"),
    "V1": ("disjunction_or_constant", "reproducing1"),
    "V2": ("disjunction_or_constant", "reproducing0", "reproducing1"),
    "N": ("essentially_unary",),
    "N2": ("essentially_unary", "self_dual"),
    "I": ("constant_or_projection",),
    "I0": ("constant_or_projection", "reproducing0"),
    "I1": ("constant_or_projection", "reproducing1"),
    "I2": ("constant_or_projection", "reproducing0", "reproducing1"),
}

FIXED_BASES: Dict[str, Tuple[BooleanFunction, ...]] = {
    "BF": (AND, NOT),
    "R0": (AND, XOR),
    "R1": (OR, EQ),
    "R2": (OR, AND_EQ),
    "M": (AND, OR, CONST0, CONST1),
    "M0": (AND, OR, CONST0),
    "M1": (AND, OR, CONST1),
    "M2": (AND, OR),
    "S0": (IMP,),
    "S1": (NIMP,),
    "S02": (OR_AND_NOT,),
    "S01": (OR_AND, CONST1),
    "S00": (OR_AND,),
    "S12": (AND_OR_NOT,),
    "S11": (AND_OR, CONST0),
    "S10": (AND_OR,),
    "D": (SELF_DUAL_BASE,),
    "D1": (SELF_DUAL_R2_BASE,),
    "D2": (MAJ,),
    "L": (XOR, CONST1),
    "L0": (XOR,),
    "L1": (EQ,),
    "L2": (XOR3,),
    "L3": (XNOR3,),
    "E": (AND, CONST0, CONST1),
    "E0": (AND, CONST0),
    "E1": (AND, CONST1),
    "E2": (AND,),
    "V": (OR, CONST0, CONST1),
    "V0": (OR, CONST0),
    "V1": (OR, CONST1),
    "V2": (OR,),
    "N": (NOT, CONST0, CONST1),
    "N2": (NOT,),
    "I": (ID, CONST0, CONST1),
    "I0": (ID, CONST0),
    "I1": (ID, CONST1),
    "I2": (ID,),
}


# ============================================================================
# DERIVED FUNCTIONS
# ============================================================================

def dual(function: BooleanFunction) -> BooleanFunction:
    """dual(f)(x) = ¬f(¬x)"""
    top = (1 << function.arity) - 1
    table = tuple(1 - function.table[top ^ index] for index in range(1 << function.arity))
    return BooleanFunction(f"dual_{function.name}", function.arity, table)


def threshold(n: int) -> BooleanFunction:
    """T^{n+1}_n: 1 iff at least n of its n+1 inputs are 1."""
    if n < 1:
        raise FormulaError("threshold degree must be at least 1")
    arity = n + 1
    enforce_cap("threshold arity", arity, None, config.ARITY_CAP)
    return BooleanFunction(f"T{arity}{n}", arity, tuple(int(popcount(i) >= n) for i in range(1 << arity)))


FAMILY_BASES: Dict[str, Callable[[int], Tuple[BooleanFunction, ...]]] = {
    "S0": lambda n: (IMP, dual(threshold(n))),
    "S1": lambda n: (NIMP, threshold(n)),
    "S02": lambda n: (OR_AND_NOT, dual(threshold(n))),
    "S01": lambda n: (dual(threshold(n)), CONST1),
    "S00": lambda n: (OR_AND, dual(threshold(n))),
    "S12": lambda n: (AND_OR_NOT, threshold(n)),
    "S11": lambda n: (threshold(n), CONST0),
    "S10": lambda n: (AND_OR, threshold(n)),
}


# ============================================================================
# PROPERTY CHECKS
# ============================================================================

def _padded(function: BooleanFunction) -> Tuple[int, Tuple[int, ...]]:
    if function.arity == 0:
        return 1, (function.table[0], function.table[0])
    return function.arity, function.table


def _smallest_unseparated(codes: Sequence[int], width: int, c: int) -> Optional[int]:
    """Size of the smallest subset of codes with no coordinate constantly c, or None."""
    top = (1 << width) - 1
    # flip so that "coordinate constantly c" becomes "common 1 bit"
    vectors = list(codes) if c == 1 else [top ^ code for code in codes]
    common = top
    for vector in vectors:
        common &= vector
    if common:
        return None
    layer = set(vectors)
    size = 1
    while 0 not in layer:
        layer |= {value & vector for value in layer for vector in vectors}
        size += 1
    return size


def _separating_degree(arity: int, table: Tuple[int, ...], c: int) -> Degree:
    codes = [index for index, value in enumerate(table) if value == c]
    smallest = _smallest_unseparated(codes, arity, c)
    if smallest is None:
        return INF
    degree = smallest - 1
    return degree if degree >= 2 else None


def separating_degree(function: BooleanFunction, c: int, cap: Optional[int] = None) -> Degree:
    """Largest m such that every subset of f^{-1}(c) of size at most m is c-separating.

    INF when f^{-1}(c) itself is c-separating; None when not even m = 2 holds.
    """
    enforce_cap("function arity", function.arity, cap, config.ARITY_CAP)
    arity, table = _padded(function)
    return _separating_degree(arity, table, c)


def _depends_on(arity: int, table: Tuple[int, ...], bit: int) -> bool:
    return any(table[i] != table[i ^ bit] for i in range(1 << arity))


def _conjunction_or_constant(arity: int, table: Tuple[int, ...]) -> bool:
    if len(set(table)) == 1:
        return True
    top = (1 << arity) - 1
    required = top
    for index, value in enumerate(table):
        if value:
            required &= index
    if not required:
        return False
    return all(value == int(index & required == required) for index, value in enumerate(table))


def _disjunction_or_constant(arity: int, table: Tuple[int, ...]) -> bool:
    if len(set(table)) == 1:
        return True
    top = (1 << arity) - 1
    seen = 0
    for index, value in enumerate(table):
        if not value:
            seen |= index
    chosen = top & ~seen
    if not chosen:
        return False
    return all(value == int(index & chosen != 0) for index, value in enumerate(table))


def _affine(arity: int, table: Tuple[int, ...]) -> bool:
    offset = table[0]
    support = 0
    for k in range(arity):
        if table[1 << k] != offset:
            support |= 1 << k
    return all(value == offset ^ (popcount(index & support) & 1) for index, value in enumerate(table))


def _monotone(arity: int, table: Tuple[int, ...]) -> bool:
    for index, value in enumerate(table):
        if not value:
            continue
        for k in range(arity):
            if not index & (1 << k) and not table[index | (1 << k)]:
                return False
    return True


@lru_cache(maxsize=4096)
def _profile(function: BooleanFunction) -> PropertyProfile:
    arity, table = _padded(function)
    top = (1 << arity) - 1
    size = 1 << arity
    constant = len(set(table)) == 1
    dependencies = [k for k in range(arity) if _depends_on(arity, table, 1 << k)]
    projection = any(
        all(value == (index >> k) & 1 for index, value in enumerate(table)) for k in range(arity)
    )
    return PropertyProfile(
        reproducing0=table[0] == 0,
        reproducing1=table[top] == 1,
        monotone=_monotone(arity, table),
        self_dual=all(table[i] != table[top ^ i] for i in range(size)),
        affine=_affine(arity, table),
        essentially_unary=len(dependencies) <= 1,
        conjunction_or_constant=_conjunction_or_constant(arity, table),
        disjunction_or_constant=_disjunction_or_constant(arity, table),
        constant_or_projection=constant or projection,
        sep0_degree=_separating_degree(arity, table, 0),
        sep1_degree=_separating_degree(arity, table, 1),
    )


def property_profile(function: BooleanFunction, cap: Optional[int] = None) -> PropertyProfile:
    enforce_cap("function arity", function.arity, cap, config.ARITY_CAP)
    return _profile(function)


def _degree_rank(degree: Degree) -> float:
    if degree is None:
        return 1
    if degree == INF:
        return math.inf
    return degree


def aggregate_profile(profiles: Iterable[PropertyProfile]) -> PropertyProfile:
    """Setwise profile: every flag ANDed, separating degrees minimised. Empty input gives all-true."""
    profiles = list(profiles)
    flags = {
        name: all(getattr(profile, name) for profile in profiles)
        for name in PropertyProfile.model_fields
        if name not in ("sep0_degree", "sep1_degree")
    }
    degrees = {}
    for name in ("sep0_degree", "sep1_degree"):
        values = [getattr(profile, name) for profile in profiles]
        degrees[name] = min(values, key=_degree_rank) if values else INF
    return PropertyProfile(**flags, **degrees)


# ============================================================================
# CLONE NAMES AND MEMBERSHIP
# ============================================================================

def parse_clone_name(text: str) -> CloneName:
    """`S02^3` for a parameterized row, `V2` for a fixed one."""
    tag, _, degree = text.strip().partition("^")
    if degree:
        if tag not in FAMILY_TAGS or not degree.isdigit() or int(degree) < 2:
            raise FormulaError(f"unknown parameterized clone {text!r}")
        return CloneName(tag, int(degree))
    if tag not in FIXED_TAGS:
        raise FormulaError(f"unknown clone {text!r}")
    return CloneName(tag)


def _check_clone(clone: CloneName) -> None:
    if clone.degree is None:
        if clone.tag not in FIXED_TAGS:
            raise FormulaError(f"unknown clone {clone.tag}")
    elif clone.tag not in FAMILY_TAGS or clone.degree < 2:
        raise FormulaError(f"unknown parameterized clone {clone}")


def _satisfies(profile: PropertyProfile, clone: CloneName) -> bool:
    for condition in CLONE_DEFINITIONS[clone.tag]:
        if condition in ("sep0", "sep1"):
            degree = getattr(profile, f"{condition}_degree")
            if clone.degree is None:
                if degree != INF:
                    return False
            elif _degree_rank(degree) < clone.degree:
                return False
        elif not getattr(profile, condition):
            return False
    return True


def clone_contains(clone: CloneName, function: BooleanFunction, cap: Optional[int] = None) -> bool:
    _check_clone(clone)
    return _satisfies(property_profile(function, cap), clone)


def clone_contains_all(clone: CloneName, functions: Iterable[BooleanFunction]) -> bool:
    return all(clone_contains(clone, function) for function in functions)


@lru_cache(maxsize=None)
def _base(clone: CloneName) -> Tuple[BooleanFunction, ...]:
    if clone.degree is None:
        return FIXED_BASES[clone.tag]
    return FAMILY_BASES[clone.tag](clone.degree)


def base_of(clone: CloneName) -> List[BooleanFunction]:
    _check_clone(clone)
    if clone.degree is not None:
        enforce_cap("threshold arity", clone.degree + 1, None, config.ARITY_CAP)
    return list(_base(clone))


@lru_cache(maxsize=None)
def clone_leq(lower: CloneName, upper: CloneName) -> bool:
    """lower ⊆ upper, decided by testing lower's base against upper's definition."""
    _check_clone(upper)
    return all(clone_contains(upper, function) for function in base_of(lower))


def all_clone_names(degrees: Iterable[int] = (2, 3, 4)) -> List[CloneName]:
    names = [CloneName(tag) for tag in FIXED_TAGS]
    for degree in degrees:
        names.extend(CloneName(tag, degree) for tag in FAMILY_TAGS)
    return names


def _candidates(profile: PropertyProfile) -> List[CloneName]:
    names = [CloneName(tag) for tag in FIXED_TAGS]
    for c in (0, 1):
        degree = getattr(profile, f"sep{c}_degree")
        if isinstance(degree, int) and degree >= 2:
            names.extend(CloneName(tag, degree) for tag in FAMILY_TAGS if tag.startswith(f"S{c}"))
    return names


def clone_of(functions: Iterable[BooleanFunction], cap: Optional[int] = None) -> CloneName:
    """[B]: the least row containing every function of B. The empty set gives I2."""
    profile = aggregate_profile(property_profile(function, cap) for function in functions)
    containing = [name for name in _candidates(profile) if _satisfies(profile, name)]
    for name in containing:
        if all(clone_leq(name, other) for other in containing):
            return name
    raise FormulaError("no least clone found for function set")


def dual_clone(clone: CloneName) -> CloneName:
    return clone_of(dual(function) for function in base_of(clone))


def describe_functions(functions: Sequence[BooleanFunction]) -> CloneReport:
    clone = clone_of(functions)
    logger.info(f"✓ clone of {len(functions)} functions: {clone}")
    return CloneReport(
        clone=str(clone),
        functions=[
            FunctionReport(name=f.name, arity=f.arity, bits=f.bits, profile=property_profile(f))
            for f in functions
        ],
    )
