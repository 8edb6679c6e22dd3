"""Pydantic request/response models for the HTTP facade."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class RoleSpec(BaseModel):
    id: str
    name: str


class ProjectCreate(BaseModel):
    id: str
    name: str
    context: dict[str, str] = Field(default_factory=dict)
    roles: list[RoleSpec] = Field(default_factory=list)


class ProjectInfo(BaseModel):
    id: str
    name: str
    context: dict[str, str]
    roles: list[RoleSpec]
    complete: bool
    catena_version: int
    goals: int
    questions: int


class TaskSpec(BaseModel):
    id: str
    name: Optional[str] = None
    parent: Optional[str] = None
    planned_start: str
    planned_end: str
    actual_start: Optional[str] = None
    actual_end: Optional[str] = None
    budget: float = 0.0
    percent_complete: float = 0.0


class PlanUpload(BaseModel):
    tasks: list[TaskSpec]


class ClustersUpload(BaseModel):
    clusters: dict[str, str]


class GoalCreate(BaseModel):
    id: str
    object: str
    purpose: str
    quality_focus: list[str]
    viewpoint: str
    context: dict[str, str] = Field(default_factory=dict)


class QuestionCreate(BaseModel):
    id: str
    goal: str
    text: str = ""
    metrics: list[str]


class IngestResult(BaseModel):
    accepted: int
    rejected: list[dict[str, Any]]


class ComposeResponse(BaseModel):
    catena_version: int
    catena_hash: str
    bindings: int
    functions: int
    views: int
    traceability: dict[str, str]
    role_assignments: dict[str, list[str]]


class ExecuteRequest(BaseModel):
    catena_version: Optional[int] = None


class IndicatorOut(BaseModel):
    node: str
    name: str
    status: str
    explanation: str


class DeviationOut(BaseModel):
    id: str
    node: str
    timestamp: str
    severity: str
    message: str
    acknowledged: bool
    acknowledged_by: Optional[str]


class ExecuteResponse(BaseModel):
    execution_id: str
    catena_version: str
    as_of: str
    worst_status: str
    indicators: list[IndicatorOut]
    new_deviations: list[DeviationOut]
    recoveries: list[list[str]]


class ViewSummary(BaseModel):
    view: str
    kind: str
    status: str
    contributing: list[str]


class AckRequest(BaseModel):
    role: str


class ParamUpdate(BaseModel):
    params: dict[str, Any]


class ParamUpdateResponse(BaseModel):
    function: str
    params: dict[str, Any]
    catena_version: int
    reexecution_required: bool


class ViewOptionsResponse(BaseModel):
    view: str
    options: dict[str, Any]
    catena_version: int
    reexecution_required: bool


class IncidentSpec(BaseModel):
    id: str
    node: str
    start: str
    detected_deadline: str


class PostmortemRequest(BaseModel):
    incidents: list[IncidentSpec]


class PostmortemResponse(BaseModel):
    in_time: list[str]
    too_late: list[str]
    missed: list[str]
    false_positives: list[str]
    counts: dict[str, int]


class FeedbackItem(BaseModel):
    key: str
    value: str


class PackageRequest(BaseModel):
    feedback: list[FeedbackItem] = Field(default_factory=list)
    tighten_factor: float = 0.8


class ExperienceOut(BaseModel):
    kind: str
    key: str
    value: Any
    source_project: str
    created: str


class PackageResponse(BaseModel):
    records: list[ExperienceOut]
