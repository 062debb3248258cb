"""
Report schemas (pydantic).

Every CLI command emits one ExperimentReport; property suites return
SuiteResult objects that the verify command folds into its report.
"""
import json
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field


class FinitenessLengths(BaseModel):
    """Classical length n-1 and Bredon length m-1."""
    classical: int
    bredon: int


class HomologyDegree(BaseModel):
    """One degree of reduced integral homology; torsion divisors as strings."""
    k: int
    betti: int
    torsion: List[str] = Field(default_factory=list)


class PropertyResult(BaseModel):
    name: str
    passed: bool
    cases: int = 0
    counterexample: Optional[Any] = None


class SuiteResult(BaseModel):
    suite: str
    seed: int
    properties: List[PropertyResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def failures(self) -> List[PropertyResult]:
        return [p for p in self.properties if not p.passed]


class Truncation(BaseModel):
    """How the infinite building was cut down for this experiment."""
    radius: Optional[int] = None
    cap: Optional[int] = None
    deep: Optional[bool] = None
    model: Optional[str] = None


class ExperimentReport(BaseModel):
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    truncation: Optional[Truncation] = None
    timings: Optional[Dict[str, float]] = None

    def to_json(self) -> str:
        """Stable key order; identical inputs give byte-identical output."""
        return json.dumps(self.model_dump(exclude_none=True), sort_keys=True, separators=(",", ":"))
