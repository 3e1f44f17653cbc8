"""
Complexity Dispatcher Service

Lookup tables for the complexity classifications of the non-monotonic reasoning
problems, keyed by problem id and fragment kind. A fragment is either a clone
(the clone [B] generated by the available Boolean functions) or a Schaefer
report of the available relations.

Cases are listed top-down exactly as stated; the first matching case wins.

Provides:
- PROBLEMS: problem id -> fragment kind -> classification
- predict: verdict for a clone name or a SchaeferReport
- predict_from_functions / predict_from_relations: classify, then predict
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

from ..errors import UnsupportedFragmentError
from ..models import BooleanFunction, BooleanRelation, CloneName
from ..schemas import ComplexityVerdict, SchaeferReport
from .post_lattice import clone_leq, clone_of, parse_clone_name
from .schaefer import classify_set

logger = logging.getLogger(__name__)

CLONE = "clone"
RELATIONS = "relations"

Fragment = Union[CloneName, SchaeferReport]
Condition = Callable[[Fragment], bool]


@dataclass(frozen=True)
class Classification:
    theorem: int
    cases: Tuple[Tuple[str, Condition], ...]
    first_case: int = 1


# ============================================================================
# CLONE CONDITIONS
# ============================================================================

def _clones(tags: Iterable[str]) -> List[CloneName]:
    return [parse_clone_name(tag) for tag in tags]


def above(*tags: str) -> Condition:
    """X ⊆ [B] for some listed X."""
    lows = _clones(tags)
    return lambda clone: any(clone_leq(low, clone) for low in lows)


def between(lows: Sequence[str], highs: Sequence[str]) -> Condition:
    """X ⊆ [B] ⊆ Y for some X in lows and Y in highs."""
    bottoms, tops = _clones(lows), _clones(highs)
    return lambda clone: (
        any(clone_leq(low, clone) for low in bottoms) and any(clone_leq(clone, high) for high in tops)
    )


def among(*tags: str) -> Condition:
    """[B] is one of the listed clones."""
    names = set(_clones(tags))
    return lambda clone: clone in names


def equals(tag: str) -> Condition:
    return among(tag)


def below(*tags: str) -> Condition:
    """[B] ⊆ Y for some listed Y."""
    highs = _clones(tags)
    return lambda clone: any(clone_leq(clone, high) for high in highs)


def otherwise(_fragment: Fragment) -> bool:
    return True


# ============================================================================
# RELATION CONDITIONS
# ============================================================================

def not_schaefer(report: SchaeferReport) -> bool:
    return not report.schaefer


def _any_flag(*flags: str) -> Condition:
    return lambda report: any(getattr(report, flag) for flag in flags)


def _schaefer_neither_valid(report: SchaeferReport) -> bool:
    return report.schaefer and not report.valid0 and not report.valid1


def _valid_not_schaefer(report: SchaeferReport) -> bool:
    return (report.valid0 or report.valid1) and not report.schaefer


def _inference_hard(report: SchaeferReport) -> bool:
    easy = report.negative_horn or (report.bijunctive and report.affine) or (report.horn and report.dual_horn)
    return report.schaefer and not easy


def _abduction_np(report: SchaeferReport) -> bool:
    easy = (report.bijunctive or report.affine or report.definite_horn
            or report.ihsb_plus or report.ihsb_minus)
    return (report.horn or report.dual_horn) and not easy


def _abduction_easy(report: SchaeferReport) -> bool:
    return (report.bijunctive or report.affine or report.definite_horn
            or report.ihsb_plus or report.ihsb_minus)


# ============================================================================
# CLASSIFICATIONS
# ============================================================================

COMPLETE_BASES = ("S02", "S12", "D1")
MONOTONE_HARD = ("S00", "S10", "D2")


def _extension_existence() -> Classification:
    return Classification(3, (
        ("Sigma2P-complete", above("S1", "D")),
        ("Delta2P-complete", between(["S11"], ["M"])),
        ("NP-complete", among("N", "N2", "L", "L0", "L3")),
        ("P-complete", among("V", "V0", "E", "E0")),
        ("NL-complete", among("I", "I0")),
        ("trivial", below("R1")),
    ))


def _default_reasoning(hard: str, affine: str) -> Classification:
    return Classification(5, (
        (hard, above("S1", "D")),
        ("Delta2P-complete", between(["S11"], ["M"])),
        ("coNP-complete", between(list(MONOTONE_HARD), ["R1"])),
        (affine, among("N", "N2", "L", "L0", "L3")),
        ("P-complete", lambda c: between(["V2"], ["V"])(c) or between(["E2"], ["E"])(c) or among("L1", "L2")(c)),
        ("NL-complete", otherwise),
    ))


def _default_relations_existence() -> Classification:
    return Classification(4, (
        ("Sigma2P-complete", not_schaefer),
        ("NP-complete", _schaefer_neither_valid),
        ("in-P", otherwise),
    ))


def _default_relations_reasoning(middle: str) -> Classification:
    return Classification(6, (
        ("Sigma2P-complete", not_schaefer),
        (middle, _schaefer_neither_valid),
        ("coNP-complete", _valid_not_schaefer),
        ("in-P", otherwise),
    ))


def _ael(hard: str, middle: str) -> Classification:
    return Classification(7, (
        (hard, above(*MONOTONE_HARD)),
        (middle, between(["V2"], ["V"])),
        ("ParityL-hard-in-P", between(["L2"], ["L"])),
        ("L", otherwise),
    ))


def _circ_inference_clone_middle(clone: CloneName) -> bool:
    return between(["V2", "S10", "D2", "L2"], ["M", "L"])(clone)


PROBLEMS: Dict[str, Dict[str, Classification]] = {
    "default.extension_existence": {
        CLONE: _extension_existence(),
        RELATIONS: _default_relations_existence(),
    },
    "default.credulous": {
        CLONE: _default_reasoning("Sigma2P-complete", "NP-complete"),
        RELATIONS: _default_relations_reasoning("NP-complete"),
    },
    "default.skeptical": {
        CLONE: _default_reasoning("Pi2P-complete", "coNP-complete"),
        RELATIONS: _default_relations_reasoning("coNP-complete"),
    },
    "default.count": {
        CLONE: Classification(8, (
            ("#coNP-complete", above("S1", "D")),
            ("Delta2P-complete(counting)", between(["S11"], ["M"])),
            ("#P-complete", among("N", "N2", "L", "L0", "L3")),
            ("FP", otherwise),
        )),
    },
    "ael.expansion_existence": {CLONE: _ael("Sigma2P-complete", "NP-complete")},
    "ael.credulous": {CLONE: _ael("Sigma2P-complete", "NP-complete")},
    "ael.skeptical": {CLONE: _ael("Pi2P-complete", "coNP-complete")},
    "ael.count": {
        CLONE: Classification(9, (
            ("#coNP-complete", above(*MONOTONE_HARD)),
            ("#P-complete", between(["V2"], ["V"])),
            ("FP", otherwise),
        )),
    },
    "circ.model_check": {
        RELATIONS: Classification(10, (
            ("coNP-complete", not_schaefer),
            ("in-P", otherwise),
        )),
        CLONE: Classification(11, (
            ("coNP-complete", above(*COMPLETE_BASES)),
            ("in-P", otherwise),
        )),
    },
    "circ.inference": {
        RELATIONS: Classification(12, (
            ("Pi2P-complete", not_schaefer),
            ("coNP-complete", _inference_hard),
            ("in-P", otherwise),
        )),
        CLONE: Classification(13, (
            ("Pi2P-complete", above(*COMPLETE_BASES)),
            ("coNP-complete", _circ_inference_clone_middle),
            ("in-P", otherwise),
        )),
    },
    "circ.count_minimal": {
        CLONE: Classification(14, (
            ("#coNP-complete", above(*COMPLETE_BASES)),
            ("#P-complete", between(list(MONOTONE_HARD), ["M"])),
            ("#P-complete", lambda c: between(["V2"], ["V"])(c) or between(["L2"], ["L"])(c)),
            ("FP", otherwise),
        )),
        RELATIONS: Classification(14, (
            ("FP", lambda r: r.horn or (r.bijunctive and r.affine)),
            ("#P-complete", _any_flag("dual_horn", "bijunctive", "affine")),
            ("open", otherwise),
        ), first_case=5),
    },
    "abduction.exists": {
        CLONE: Classification(15, (
            ("Sigma2P-complete", above(*COMPLETE_BASES)),
            ("NP-complete", between(list(MONOTONE_HARD), ["M"])),
            ("in-P", otherwise),
        )),
        RELATIONS: Classification(16, (
            ("Sigma2P-complete", not_schaefer),
            ("NP-complete", _abduction_np),
            ("in-P", _abduction_easy),
        )),
    },
    "abduction.count": {
        CLONE: Classification(17, (
            ("#coNP-complete", above(*COMPLETE_BASES)),
            ("#P-complete", between(["V2", "S10", "D2"], ["M"])),
            ("FP", otherwise),
        )),
        RELATIONS: Classification(16, (
            ("#P-complete", _any_flag("horn", "dual_horn", "bijunctive")),
            ("FP", _any_flag("affine")),
            ("open", otherwise),
        ), first_case=4),
    },
    "abduction.count_minimal": {
        RELATIONS: Classification(16, (
            ("#P-complete", _any_flag("horn", "dual_horn", "bijunctive", "affine")),
            ("open", otherwise),
        ), first_case=7),
        CLONE: Classification(16, (
            ("#coNP-complete", equals("BF")),
            ("open", otherwise),
        ), first_case=9),
    },
    "abduction.count_positive": {
        CLONE: Classification(17, (
            ("#coNP-complete", above(*COMPLETE_BASES)),
            ("FP", between(["V2"], ["V"])),
            ("open", between(["L2"], ["L"])),
            ("#P-complete", between(["V2", "S10", "D2"], ["M"])),
            ("FP", otherwise),
        ), first_case=4),
    },
}


# ============================================================================
# PREDICTION
# ============================================================================

def fragment_kind(fragment: Fragment) -> str:
    if isinstance(fragment, CloneName):
        return CLONE
    if isinstance(fragment, SchaeferReport):
        return RELATIONS
    raise UnsupportedFragmentError(f"unsupported fragment {fragment!r}")


def describe_fragment(fragment: Fragment) -> str:
    if isinstance(fragment, CloneName):
        return str(fragment)
    flags = [name for name, value in fragment.model_dump().items() if value]
    return "relations{" + ",".join(flags) + "}"


def classification_for(problem: str, kind: str) -> Classification:
    if problem not in PROBLEMS:
        raise UnsupportedFragmentError(f"unknown problem {problem!r}")
    rows = PROBLEMS[problem]
    if kind not in rows:
        raise UnsupportedFragmentError(f"{problem} has no classification over {kind}")
    return rows[kind]


def matching_cases(problem: str, fragment: Fragment) -> List[int]:
    """Every case number whose condition holds, in order."""
    row = classification_for(problem, fragment_kind(fragment))
    return [row.first_case + i for i, (_, condition) in enumerate(row.cases) if condition(fragment)]


def predict(problem: str, fragment: Fragment) -> ComplexityVerdict:
    row = classification_for(problem, fragment_kind(fragment))
    for offset, (class_name, condition) in enumerate(row.cases):
        if condition(fragment):
            verdict = ComplexityVerdict(
                class_name=class_name,
                citation=f"Theorem {row.theorem}.{row.first_case + offset}",
                fragment=describe_fragment(fragment),
                problem=problem,
            )
            logger.debug(f"✓ {problem} over {verdict.fragment}: {verdict}")
            return verdict
    raise UnsupportedFragmentError(f"no case of {problem} covers {describe_fragment(fragment)}")


def predict_from_functions(problem: str, functions: Iterable[BooleanFunction]) -> ComplexityVerdict:
    return predict(problem, clone_of(functions))


def predict_from_relations(problem: str, relations: Iterable[BooleanRelation]) -> ComplexityVerdict:
    return predict(problem, classify_set(relations))
