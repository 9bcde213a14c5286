"""
Pydantic schemas for the JSON documents read and written by the capacity planner
"""
import json
from typing import Dict, List, Optional, Any

from pydantic import BaseModel, Field, ValidationError, field_validator

from exceptions import InstanceValidationError


class SchoolEntry(BaseModel):
    id: str
    capacity: int


class InstanceDocument(BaseModel):
    students: List[str]
    schools: List[SchoolEntry]
    preferences: Dict[str, List[str]]
    priorities: Dict[str, List[str]]


class MatchingDocument(BaseModel):
    assignment: Dict[str, str] = Field(default_factory=dict)


class IncreaseDocument(BaseModel):
    increase: Dict[str, int] = Field(default_factory=dict)

    @field_validator("increase")
    @classmethod
    def non_negative(cls, value: Dict[str, int]) -> Dict[str, int]:
        for school, amount in value.items():
            if amount < 0:
                raise ValueError(f"negative increase for {school}")
        return value


class CertificateFlags(BaseModel):
    stable: bool
    perfect: bool
    efficient: bool


class ResultDocument(BaseModel):
    problem: str
    method: str
    status: str
    objective: Optional[int]
    budget: Optional[int]
    path: Optional[str] = None
    increase: Dict[str, int]
    matching: Dict[str, str]
    certificates: CertificateFlags
    details: Dict[str, Any] = Field(default_factory=dict)


class CertificateReport(BaseModel):
    feasible: bool
    stable: Optional[bool] = None
    perfect: Optional[bool] = None
    efficient: Optional[bool] = None
    blocking_pairs: List[List[str]] = Field(default_factory=list)
    unmatched: List[str] = Field(default_factory=list)
    improvement: Optional[Dict[str, str]] = None


class StableMatchingsDocument(BaseModel):
    count: int
    matchings: List[Dict[str, str]]


class EfficiencyOracleDocument(BaseModel):
    matching: Dict[str, str]
    efficient: bool
    improvement_graph: bool
    agree: bool


class GraphDocument(BaseModel):
    vertices: List[str]
    edges: List[List[str]]
    coloring: Dict[str, int] = Field(default_factory=dict)


class SetSystemDocument(BaseModel):
    universe: int
    sets: List[List[int]]


class FormulaDocument(BaseModel):
    variables: int
    clauses: List[List[int]]


def load_document(model: type, text: str) -> BaseModel:
    """
    Parse JSON text into a schema model

    Args:
        model: BaseModel subclass to validate against
        text: JSON text

    Returns:
        Validated model instance
    """
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise InstanceValidationError(
            f"malformed {model.__name__}: {first.get('msg')}",
            location or None,
        ) from exc


def dump_document(document: BaseModel) -> str:
    """Canonical JSON rendering: two-space indent, trailing newline"""
    return json.dumps(document.model_dump(), indent=2, ensure_ascii=False) + "\n"
