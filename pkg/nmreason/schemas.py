from pydantic import BaseModel, ConfigDict, Field
from typing import List, Optional, Literal, Union

# Separating degree: None (not even degree 2), a finite degree >= 2, or unbounded
INF = "inf"
Degree = Optional[Union[int, Literal["inf"]]]

ExplanationMode = Literal["literal", "positive"]


# ============================================================================
# POST'S LATTICE
# ============================================================================

class PropertyProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    reproducing0: bool
    reproducing1: bool
    monotone: bool
    self_dual: bool
    affine: bool
    essentially_unary: bool
    conjunction_or_constant: bool
    disjunction_or_constant: bool
    constant_or_projection: bool
    sep0_degree: Degree = None
    sep1_degree: Degree = None


class FunctionReport(BaseModel):
    name: str
    arity: int
    bits: str
    profile: PropertyProfile


class CloneReport(BaseModel):
    clone: str
    functions: List[FunctionReport] = []


# ============================================================================
# SCHAEFER CLASSIFICATION
# ============================================================================

class RelationFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    horn: bool = True
    dual_horn: bool = True
    bijunctive: bool = True
    affine: bool = True
    valid0: bool = True
    valid1: bool = True
    definite_horn: bool = True
    negative_horn: bool = True
    ihsb_plus: bool = True
    ihsb_minus: bool = True


class SchaeferReport(RelationFlags):
    """Setwise flags: a property holds iff every relation in the set has it."""
    schaefer: bool = True


class RelationReport(BaseModel):
    name: str
    arity: int
    tuples: List[str]
    flags: RelationFlags


class ClassificationReport(BaseModel):
    relations: List[RelationReport] = []
    summary: SchaeferReport


# ============================================================================
# COMPLEXITY DISPATCH
# ============================================================================

class ComplexityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    class_name: str = Field(serialization_alias="verdict")
    citation: str
    fragment: str
    problem: str

    def __str__(self) -> str:
        return f"{self.class_name} ({self.citation})"


# ============================================================================
# COMMAND OUTPUT
# ============================================================================

class ExtensionOut(BaseModel):
    generating: List[int]
    conclusions: List[str]
    inconsistent: bool = False


class ExtensionListOut(BaseModel):
    extensions: List[ExtensionOut] = []


class ExpansionOut(BaseModel):
    positive: List[str] = []
    negative: List[str] = []


class ExpansionListOut(BaseModel):
    expansions: List[ExpansionOut] = []


class ModelListOut(BaseModel):
    universe: List[str]
    models: List[List[str]] = []


class ExplanationListOut(BaseModel):
    explanations: List[List[str]] = []


class DecisionOut(BaseModel):
    answer: bool


class CountOut(BaseModel):
    count: int


class ReductionOut(BaseModel):
    reduction: str
    text: str
