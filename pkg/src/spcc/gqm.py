"""Goal-driven composition: control goals and questions are matched against
a repository of reusable control components and compiled into an executable
visualization catena.

Matching is a deterministic predicate (purpose, focus overlap, role,
metric coverage) with a reproducible score ordering; composition emits
stable node ids so identical inputs produce byte-identical catenas.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Mapping, Optional, Sequence

from .catena import FunctionInstance, SeriesBinding, ViewInstance, VisualizationCatena
from .errors import EmptyRepository, MissingParameter, UnboundMetric
from .model import ContextVector, Project

ANY_ROLE = "ANY"

CHECKLIST_LETTERS = ("a", "b", "c", "d", "e")
CHECKLIST_LABELS = {
    "a": "analysis support",
    "b": "analysis type fit",
    "c": "appropriate detail",
    "d": "action cue",
    "e": "timeliness",
}


class Purpose(enum.Enum):
    CHARACTERIZE = "CHARACTERIZE"
    MONITOR = "MONITOR"
    CONTROL = "CONTROL"
    PREDICT = "PREDICT"
    IMPROVE = "IMPROVE"


class ComponentKind(enum.Enum):
    TECHNIQUE = "TECHNIQUE"
    VIEW = "VIEW"


@dataclass(frozen=True)
class ControlGoal:
    id: str
    object: str
    purpose: Purpose
    quality_focus: frozenset
    viewpoint: str
    context: ContextVector = ContextVector()

    def __post_init__(self):
        object.__setattr__(self, "quality_focus", frozenset(self.quality_focus))
        if isinstance(self.purpose, str):
            object.__setattr__(self, "purpose", Purpose(self.purpose))
        if not self.quality_focus:
            raise ValueError(f"goal {self.id}: quality_focus must be non-empty")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "object": self.object,
            "purpose": self.purpose.value,
            "quality_focus": sorted(self.quality_focus),
            "viewpoint": self.viewpoint,
            "context": self.context.as_dict(),
        }


@dataclass(frozen=True)
class Question:
    id: str
    goal: str
    text: str
    metrics: frozenset

    def __post_init__(self):
        object.__setattr__(self, "metrics", frozenset(self.metrics))
        if not self.metrics:
            raise ValueError(f"question {self.id}: metrics must be non-empty")

    def to_dict(self) -> dict:
        return {"id": self.id, "goal": self.goal, "text": self.text, "metrics": sorted(self.metrics)}


@dataclass(frozen=True)
class ParamSpec:
    name: str
    default: object = None
    required: bool = False


@dataclass(frozen=True)
class ComponentDescriptor:
    """Repository entry for one reusable control component.

    `implementation` names the registered technique kind (TECHNIQUE) or the
    scene kind (VIEW). `applicable_roles` of None means any role.
    """

    id: str
    kind: ComponentKind
    implementation: str
    applicable_purposes: frozenset
    applicable_focus: frozenset
    applicable_roles: Optional[frozenset] = None
    required_metrics: frozenset = frozenset()
    parameters: tuple = ()
    indicator_checklist: tuple = (True,) * 5

    def __post_init__(self):
        object.__setattr__(self, "applicable_purposes",
                           frozenset(Purpose(p) if isinstance(p, str) else p for p in self.applicable_purposes))
        object.__setattr__(self, "applicable_focus", frozenset(self.applicable_focus))
        if self.applicable_roles is not None:
            object.__setattr__(self, "applicable_roles", frozenset(self.applicable_roles))
        object.__setattr__(self, "required_metrics", frozenset(self.required_metrics))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", ComponentKind(self.kind))
        checklist = tuple(bool(b) for b in self.indicator_checklist)
        if len(checklist) != 5:
            raise ValueError(f"component {self.id}: checklist needs exactly five entries")
        object.__setattr__(self, "indicator_checklist", checklist)
        if self.kind == ComponentKind.TECHNIQUE and not self.required_metrics:
            raise ValueError(f"component {self.id}: required_metrics may be empty only for views")

    def checklist_count(self) -> int:
        return sum(self.indicator_checklist)


@dataclass(frozen=True)
class ComponentMatch:
    descriptor: ComponentDescriptor
    goal: str
    focus_overlap: frozenset
    score: int


@dataclass(frozen=True)
class ChecklistReport:
    component: str
    passed: tuple
    failed: tuple

    @property
    def count(self) -> int:
        return len(self.passed)

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "count": self.count,
            "passed": [{"criterion": c, "label": CHECKLIST_LABELS[c]} for c in self.passed],
            "failed": [{"criterion": c, "label": CHECKLIST_LABELS[c]} for c in self.failed],
        }


def checklist_report(descriptor: ComponentDescriptor) -> ChecklistReport:
    """Project the five indicator criteria into pass/fail lists."""
    passed = tuple(c for c, ok in zip(CHECKLIST_LETTERS, descriptor.indicator_checklist) if ok)
    failed = tuple(c for c, ok in zip(CHECKLIST_LETTERS, descriptor.indicator_checklist) if not ok)
    return ChecklistReport(descriptor.id, passed, failed)


def match_components(goal: ControlGoal, questions: Sequence[Question],
                     repo: Sequence[ComponentDescriptor]) -> list:
    """Every repository component applicable to the goal, best first.

    A component matches when it supports the goal's purpose, shares at
    least one focus tag, accepts the goal's viewpoint role, and all its
    required metrics are covered by the goal's questions. Score is focus
    overlap plus checklist count; ties break on id. Questions for other
    goals are ignored.
    """
    if not repo:
        raise EmptyRepository("component repository is empty")
    available = set()
    for q in questions:
        if q.goal == goal.id:
            available |= q.metrics
    matches = []
    for desc in repo:
        if goal.purpose not in desc.applicable_purposes:
            continue
        overlap = desc.applicable_focus & goal.quality_focus
        if not overlap:
            continue
        if desc.applicable_roles is not None and goal.viewpoint not in desc.applicable_roles:
            continue
        if not desc.required_metrics <= available:
            continue
        matches.append(ComponentMatch(desc, goal.id, frozenset(overlap),
                                      len(overlap) + desc.checklist_count()))
    return sorted(matches, key=lambda m: (-m.score, m.descriptor.id))


ExperienceLookup = Callable[[ContextVector, str], object]


def _resolve_params(desc: ComponentDescriptor, context: ContextVector,
                    experience: Optional[ExperienceLookup]) -> dict:
    resolved = {}
    for spec in desc.parameters:
        value = experience(context, f"{desc.id}.{spec.name}") if experience else None
        if value is None:
            value = spec.default
        if value is None and spec.required:
            raise MissingParameter(desc.id, spec.name)
        if value is not None:
            resolved[spec.name] = value
    return resolved


def compose_catena(goal_matches: Mapping, project: Project, known_metrics: set,
                   questions: Sequence[Question] = (),
                   experience: Optional[ExperienceLookup] = None) -> VisualizationCatena:
    """Compile matched components into an executable catena.

    Per goal: every required metric becomes a series binding (unknown
    metrics raise UnboundMetric), technique matches become function
    instances with parameters from defaults overridden by experience
    retrievals, view matches become view instances wired to the goal's
    function outputs (plus their own metric bindings), and each view is
    assigned to the goal's viewpoint role. Goals whose views would
    otherwise have no data path fall back to bindings for the goal's
    question metrics.
    """
    bindings: dict = {}
    functions: list = []
    views: list = []
    role_assignments: dict = {}
    goal_trace: dict = {}

    def bind(goal: ControlGoal, metric: str) -> str:
        node_id = f"b-{goal.id}-{metric}"
        if node_id not in bindings:
            if metric not in known_metrics:
                raise UnboundMetric(metric, goal.id)
            bindings[node_id] = SeriesBinding(node_id, metric, "*")
            goal_trace[node_id] = goal.id
        return node_id

    for goal in sorted(goal_matches, key=lambda g: g.id):
        matches = goal_matches[goal]
        technique_matches = [m for m in matches if m.descriptor.kind == ComponentKind.TECHNIQUE]
        view_matches = [m for m in matches if m.descriptor.kind == ComponentKind.VIEW]
        # Experience retrieval keys on the project characterization, refined
        # by any goal-specific context attributes.
        lookup_context = ContextVector({**project.context.as_dict(), **goal.context.as_dict()})

        goal_functions: list = []
        aggregates: list = []
        for match in technique_matches:
            desc = match.descriptor
            node_id = f"f-{goal.id}-{desc.id}"
            params = _resolve_params(desc, lookup_context, experience)
            inputs = tuple(bind(goal, m) for m in sorted(desc.required_metrics))
            instance = FunctionInstance(node_id, desc.id, desc.implementation, params, inputs)
            goal_trace[node_id] = goal.id
            if desc.implementation == "aggregate":
                aggregates.append(instance)
            else:
                goal_functions.append(instance)
        # Aggregators consume their sibling functions' outputs.
        for instance in aggregates:
            siblings = tuple(f.id for f in goal_functions)
            goal_functions.append(
                FunctionInstance(instance.id, instance.component, instance.technique,
                                 instance.params, siblings or instance.inputs))
        functions.extend(goal_functions)

        goal_binding_ids = tuple(b for b in bindings if goal_trace[b] == goal.id)
        for match in view_matches:
            desc = match.descriptor
            node_id = f"v-{goal.id}-{desc.id}"
            options = _resolve_params(desc, lookup_context, experience)
            inputs = list(f.id for f in goal_functions)
            inputs += [bind(goal, m) for m in sorted(desc.required_metrics)]
            if not inputs:
                inputs = list(goal_binding_ids)
            if not inputs:
                fallback = sorted({m for q in questions if q.goal == goal.id for m in q.metrics})
                inputs = [bind(goal, m) for m in fallback]
            views.append(ViewInstance(node_id, desc.id, desc.implementation, tuple(inputs), options))
            goal_trace[node_id] = goal.id
            role_assignments.setdefault(goal.viewpoint, []).append(node_id)

    return VisualizationCatena(
        bindings=tuple(bindings[b] for b in sorted(bindings)),
        functions=tuple(functions),
        views=tuple(views),
        role_assignments={r: tuple(v) for r, v in role_assignments.items()},
        goal_trace=goal_trace,
    )


def compose_project(goals: Sequence[ControlGoal], questions: Sequence[Question],
                    repo: Sequence[ComponentDescriptor], project: Project,
                    known_metrics: set,
                    experience: Optional[ExperienceLookup] = None) -> VisualizationCatena:
    """Match every goal against the repository, then compose."""
    goal_matches = {g: match_components(g, questions, repo) for g in goals}
    return compose_catena(goal_matches, project, known_metrics, questions, experience)


def descriptor_from_dict(doc: dict) -> ComponentDescriptor:
    roles = doc.get("applicable_roles", ANY_ROLE)
    params = tuple(
        ParamSpec(name, spec.get("default"), bool(spec.get("required", False)))
        for name, spec in doc.get("parameters", {}).items()
    )
    checklist = doc.get("indicator_checklist", {})
    if isinstance(checklist, dict):
        checklist = tuple(bool(checklist.get(c, False)) for c in CHECKLIST_LETTERS)
    return ComponentDescriptor(
        id=doc["id"],
        kind=ComponentKind(doc["kind"]),
        implementation=doc["implementation"],
        applicable_purposes=frozenset(doc["applicable_purposes"]),
        applicable_focus=frozenset(doc["applicable_focus"]),
        applicable_roles=None if roles == ANY_ROLE else frozenset(roles),
        required_metrics=frozenset(doc.get("required_metrics", ())),
        parameters=params,
        indicator_checklist=checklist,
    )


def load_repository(path=None) -> list:
    """Component descriptors from a repository file (default: packaged)."""
    if path is None:
        text = resources.files("spcc").joinpath("data/components.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    return [descriptor_from_dict(d) for d in doc["components"]]
