"""Pydantic models for tree exports and differential check reports."""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field

TREE_SCHEMA_VERSION = 1


class VertexExport(BaseModel):
    id: int
    parent: Optional[int] = None
    location: str
    memory: str
    condition: str
    stack: str
    edge_label: Optional[str] = None
    verdict: Optional[str] = None
    depth: int
    classic_depth: str


class TreeExport(BaseModel):
    schema_version: Literal[1] = TREE_SCHEMA_VERSION
    mode: str
    vertices: List[VertexExport] = Field(default_factory=list)


class SoundnessWitness(BaseModel):
    classic_leaf: int
    compact_leaf: int
    valuation: Dict[str, int]


class CompletenessWitness(BaseModel):
    compact_leaf: int
    valuation: Dict[str, int]
    classic_leaf: int


class UnmatchedClassicLeaf(BaseModel):
    classic_leaf: int
    location: str
    depth: int


class UnmatchedValuation(BaseModel):
    compact_leaf: int
    location: str
    valuation: Dict[str, int]
    classic_depth: int


class DiffReport(BaseModel):
    program: str
    bound: int
    classic_budget: int
    compact_budget: int
    classic_leaves: int = 0
    compact_leaves: int = 0
    soundness: List[SoundnessWitness] = Field(default_factory=list)
    completeness: List[CompletenessWitness] = Field(default_factory=list)
    unmatched_classic: List[UnmatchedClassicLeaf] = Field(default_factory=list)
    unmatched_compact: List[UnmatchedValuation] = Field(default_factory=list)
    uncovered_classic: int = 0
    uncovered_compact: int = 0
    partial: bool = False

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.unmatched_classic and not self.unmatched_compact
