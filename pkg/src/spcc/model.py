"""Shared domain vocabulary: projects, plans, metrics, roles, risks, traces, statuses.

All values here are immutable after construction and safe to share between
threads. Plan-level invariants are *reported* by `validate_plan` rather than
raised, so that broken input plans can be diagnosed; point-level types such
as `MeasurementPoint` reject bad values at construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from typing import Iterable, Optional, Sequence, Union

from .errors import NotFound
from .serialization import format_instant, parse_instant


class StatusColor(enum.IntEnum):
    """Assessment color with a total severity order (NO_DATA lowest)."""

    NO_DATA = 0
    GREEN = 1
    YELLOW = 2
    RED = 3

    @property
    def severity(self) -> int:
        return int(self)


def worst_status(statuses: Iterable[StatusColor]) -> StatusColor:
    """Most severe member, NO_DATA when the iterable is empty."""
    result = StatusColor.NO_DATA
    for s in statuses:
        if s > result:
            result = s
    return result


class Scale(enum.Enum):
    NOMINAL = "NOMINAL"
    ORDINAL = "ORDINAL"
    INTERVAL = "INTERVAL"
    RATIO = "RATIO"


@dataclass(frozen=True)
class MetricDef:
    id: str
    name: str
    unit: str = ""
    scale: Scale = Scale.RATIO


@dataclass(frozen=True)
class Role:
    id: str
    name: str


@dataclass(frozen=True)
class MeasurementPoint:
    """One timestamped metric value for one entity. Rejects NaN/infinity."""

    metric: str
    entity: str
    timestamp: datetime
    value: float

    def __post_init__(self):
        object.__setattr__(self, "timestamp", parse_instant(self.timestamp))
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"measurement value must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "entity": self.entity,
            "timestamp": format_instant(self.timestamp),
            "value": self.value,
        }


@dataclass(frozen=True)
class DataSeries:
    """Time-ordered points sharing one metric and one entity."""

    metric: str
    entity: str
    points: tuple = ()

    def __post_init__(self):
        pts = tuple(self.points)
        for p in pts:
            if p.metric != self.metric or p.entity != self.entity:
                raise ValueError(f"point ({p.metric},{p.entity}) does not belong to series ({self.metric},{self.entity})")
        for a, b in zip(pts, pts[1:]):
            if a.timestamp >= b.timestamp:
                raise ValueError(f"series timestamps must be strictly increasing (at {format_instant(b.timestamp)})")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return not self.points

    def truncated(self, as_of: datetime) -> "DataSeries":
        """Points with timestamp <= as_of."""
        as_of = parse_instant(as_of)
        return replace(self, points=tuple(p for p in self.points if p.timestamp <= as_of))

    def latest(self) -> MeasurementPoint:
        if not self.points:
            raise NotFound(f"series {self.metric}/{self.entity} is empty")
        return self.points[-1]

    def values(self) -> list:
        return [p.value for p in self.points]

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "entity": self.entity,
            "points": [{"t": format_instant(p.timestamp), "v": p.value} for p in self.points],
        }


@dataclass(frozen=True)
class Task:
    """One plan entry. Invariants are checked by `validate_plan`, not here,
    so that invalid plans can be loaded and diagnosed."""

    id: str
    name: str
    planned_start: date
    planned_end: date
    budget: float = 0.0
    percent_complete: float = 0.0
    parent: Optional[str] = None
    actual_start: Optional[date] = None
    actual_end: Optional[date] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "parent": self.parent,
            "planned_start": self.planned_start.isoformat(),
            "planned_end": self.planned_end.isoformat(),
            "actual_start": self.actual_start.isoformat() if self.actual_start else None,
            "actual_end": self.actual_end.isoformat() if self.actual_end else None,
            "budget": self.budget,
            "percent_complete": self.percent_complete,
        }


@dataclass(frozen=True)
class PlanViolation:
    task_id: str
    kind: str
    message: str

    def to_dict(self) -> dict:
        return {"task_id": self.task_id, "kind": self.kind, "message": self.message}


@dataclass(frozen=True)
class Risk:
    id: str
    name: str
    probability: float
    importance: float
    damage: float

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"risk {self.id}: probability must be in [0,1], got {self.probability}")
        if not 0.0 <= self.importance <= 1.0:
            raise ValueError(f"risk {self.id}: importance must be in [0,1], got {self.importance}")
        if self.damage < 0:
            raise ValueError(f"risk {self.id}: damage must be >= 0, got {self.damage}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "probability": self.probability,
            "importance": self.importance,
            "damage": self.damage,
        }


class TraceOutcome(enum.Enum):
    OK = "OK"
    FAULT = "FAULT"


@dataclass(frozen=True)
class TraceEvent:
    """One observed communication between two components."""

    timestamp: datetime
    source: str
    target: str
    outcome: TraceOutcome

    def __post_init__(self):
        object.__setattr__(self, "timestamp", parse_instant(self.timestamp))
        if isinstance(self.outcome, str):
            object.__setattr__(self, "outcome", TraceOutcome(self.outcome))

    @staticmethod
    def create(timestamp, source: str, target: str, outcome, *, allow_self: bool = False) -> "TraceEvent":
        if source == target and not allow_self:
            raise ValueError(f"self-communication {source}->{target} rejected (allow_self not set)")
        return TraceEvent(timestamp, source, target, outcome)


@dataclass(frozen=True)
class ContextVector:
    """Ordered named attributes characterizing a project environment."""

    attributes: tuple = ()

    def __post_init__(self):
        if isinstance(self.attributes, dict):
            attrs = tuple(self.attributes.items())
        else:
            attrs = tuple((str(k), str(v)) for k, v in self.attributes)
        names = [k for k, _ in attrs]
        if len(names) != len(set(names)):
            raise ValueError("context attribute names must be unique")
        object.__setattr__(self, "attributes", attrs)

    def as_dict(self) -> dict:
        return dict(self.attributes)

    def get(self, name: str, default=None):
        return self.as_dict().get(name, default)

    def similarity(self, other: "ContextVector") -> float:
        """Fraction of equal attributes over the union of attribute names."""
        a, b = self.as_dict(), other.as_dict()
        names = set(a) | set(b)
        if not names:
            return 1.0
        equal = sum(1 for n in names if n in a and n in b and a[n] == b[n])
        return equal / len(names)


@dataclass(frozen=True)
class Project:
    id: str
    name: str
    context: ContextVector = field(default_factory=ContextVector)
    plan: tuple = ()
    roles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "plan", tuple(self.plan))
        object.__setattr__(self, "roles", tuple(self.roles))
        role_ids = [r.id for r in self.roles]
        if len(role_ids) != len(set(role_ids)):
            raise ValueError(f"project {self.id}: duplicate role ids")
        violations = validate_plan(self.plan)
        if violations:
            from .errors import PlanInvalid

            raise PlanInvalid(violations)

    def role_ids(self) -> set:
        return {r.id for r in self.roles}


@dataclass(frozen=True)
class IndicatorValue:
    """Interpreted output of one control technique.

    `series` is a DataSeries, a scalar, or None; status is NO_DATA exactly
    when there is nothing to assess (empty series / no value).
    """

    node: str
    name: str
    series: Union[DataSeries, float, None]
    status: StatusColor
    explanation: str

    def __post_init__(self):
        empty = self.series is None or (isinstance(self.series, DataSeries) and self.series.is_empty)
        if (self.status == StatusColor.NO_DATA) != empty:
            raise ValueError(f"indicator {self.name!r}: status NO_DATA iff series empty (status={self.status.name}, empty={empty})")

    def to_dict(self) -> dict:
        if isinstance(self.series, DataSeries):
            series = self.series.to_dict()
        else:
            series = self.series
        return {
            "node": self.node,
            "name": self.name,
            "series": series,
            "status": self.status.name,
            "explanation": self.explanation,
        }


def _parent_map(plan: Sequence[Task]) -> dict:
    return {t.id: t for t in plan}


def validate_plan(plan: Sequence[Task]) -> list:
    """Return every plan invariant violation; empty list iff the plan is valid.

    Violations are data, not failures: duplicate ids, unknown parents,
    date inversions, negative budgets, out-of-range progress, parent cycles.
    """
    violations: list[PlanViolation] = []
    seen: set[str] = set()
    for t in plan:
        if t.id in seen:
            violations.append(PlanViolation(t.id, "duplicate id", f"task id {t.id!r} appears more than once"))
        seen.add(t.id)

    by_id = _parent_map(plan)
    for t in plan:
        if t.parent is not None and t.parent not in by_id:
            violations.append(PlanViolation(t.id, "unknown parent", f"task {t.id!r} references missing parent {t.parent!r}"))
        if t.planned_start > t.planned_end:
            violations.append(PlanViolation(t.id, "date inversion", f"task {t.id!r}: planned_start {t.planned_start} after planned_end {t.planned_end}"))
        if t.actual_start and t.actual_end and t.actual_start > t.actual_end:
            violations.append(PlanViolation(t.id, "actual date inversion", f"task {t.id!r}: actual_start {t.actual_start} after actual_end {t.actual_end}"))
        if t.budget < 0:
            violations.append(PlanViolation(t.id, "negative budget", f"task {t.id!r}: budget {t.budget} is negative"))
        if not 0.0 <= t.percent_complete <= 1.0:
            violations.append(PlanViolation(t.id, "percent out of range", f"task {t.id!r}: percent_complete {t.percent_complete} outside [0,1]"))

    # Parent cycles: walk parent chains, report each cycle once keyed by its
    # smallest member.
    state: dict[str, int] = {}  # 0 visiting, 1 done
    reported: set[frozenset] = set()
    for t in plan:
        if state.get(t.id) == 1:
            continue
        chain: list[str] = []
        cur: Optional[str] = t.id
        while cur is not None and cur in by_id and state.get(cur) is None:
            state[cur] = 0
            chain.append(cur)
            cur = by_id[cur].parent
        if cur is not None and state.get(cur) == 0 and cur in chain:
            members = frozenset(chain[chain.index(cur):])
            if members not in reported:
                reported.add(members)
                names = ",".join(sorted(members))
                violations.append(PlanViolation(min(members), "parent cycle", f"parent cycle {{{names}}}"))
        for node in chain:
            state[node] = 1
    return violations


def _children_map(plan: Sequence[Task]) -> dict:
    children: dict[str, list] = {t.id: [] for t in plan}
    for t in plan:
        if t.parent is not None and t.parent in children:
            children[t.parent].append(t)
    return children


def descendants(plan: Sequence[Task], task_id: str) -> list:
    """Strict descendants in depth-first plan order."""
    children = _children_map(plan)
    out: list[Task] = []
    stack = list(reversed(children.get(task_id, [])))
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(children.get(node.id, [])))
    return out


def rollup(plan: Sequence[Task], task_id: str) -> Task:
    """Synthetic task summarizing a subtree.

    Planned interval is the hull of all strict descendants' planned
    intervals; budget sums over leaf descendants; percent_complete is the
    budget-weighted mean of leaf progress (unweighted when the leaf budget
    total is zero). A leaf rolls up to itself. Actual interval is the hull
    of the descendants' actual dates; the end is reported only when every
    leaf carries one.
    """
    by_id = _parent_map(plan)
    if task_id not in by_id:
        raise NotFound(f"unknown task id {task_id!r}")
    task = by_id[task_id]
    desc = descendants(plan, task_id)
    if not desc:
        return task

    children = _children_map(plan)
    leaves = [t for t in desc if not children.get(t.id)]
    start = min(t.planned_start for t in desc)
    end = max(t.planned_end for t in desc)
    budget = sum(t.budget for t in leaves)
    if budget > 0:
        percent = sum(t.budget * t.percent_complete for t in leaves) / budget
    else:
        percent = sum(t.percent_complete for t in leaves) / len(leaves)

    actual_starts = [t.actual_start for t in desc if t.actual_start]
    actual_start = min(actual_starts) if actual_starts else None
    if leaves and all(t.actual_end for t in leaves):
        actual_end = max(t.actual_end for t in desc if t.actual_end)
    else:
        actual_end = None

    return Task(
        id=task.id,
        name=task.name,
        parent=task.parent,
        planned_start=start,
        planned_end=end,
        actual_start=actual_start,
        actual_end=actual_end,
        budget=budget,
        percent_complete=percent,
    )
