"""Per-project persistence and the cross-project experience base.

Everything lives in a transparent on-disk layout under one data directory:
append-only ndjson logs for measurements, traces, and deviations, plus
snapshot JSON files for plan, risks, goals, catena versions, and recorded
executions. File writes go through a temp-file-plus-rename, so an
interrupted ingest leaves either none or all of a file's rows visible.

One writer per project: all mutations take the project's lock; readers see
the latest committed state.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .catena import (
    DeviationEvent,
    ExecutionResult,
    GroundTruthIncident,
    PostmortemReport,
    ViewState,
    VisualizationCatena,
)
from .errors import AlreadyExists, HeaderMismatch, InvalidInput, NotFound, PlanInvalid, ProjectActive
from .gqm import ControlGoal, Question
from .model import (
    ContextVector,
    DataSeries,
    IndicatorValue,
    MeasurementPoint,
    Project,
    Risk,
    Role,
    StatusColor,
    Task,
    TraceEvent,
    validate_plan,
)
from .serialization import (
    canonical_json,
    format_instant,
    parse_day,
    parse_instant,
)

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_LOCKS: dict = {}
_LOCKS_GUARD = threading.Lock()

MEASUREMENT_HEADER = ["metric", "entity", "timestamp", "value"]
RISK_HEADER = ["id", "name", "probability", "importance", "damage"]
TRACE_HEADER = ["timestamp", "source", "target", "outcome"]

DEFAULT_TIGHTEN_FACTOR = 0.8


def _lock_for(key: str) -> threading.RLock:
    with _LOCKS_GUARD:
        if key not in _LOCKS:
            _LOCKS[key] = threading.RLock()
        return _LOCKS[key]


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _append_atomic(path: Path, lines: Sequence[str]) -> None:
    existing = path.read_text(encoding="utf-8") if path.exists() else ""
    _atomic_write(path, existing + "".join(line + "\n" for line in lines))


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    rejected: tuple  # (line number, reason)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": [{"line": line, "reason": reason} for line, reason in self.rejected],
        }


class ExperienceKind(enum.Enum):
    BASELINE = "BASELINE"
    THRESHOLD = "THRESHOLD"
    PARAMETER = "PARAMETER"
    FEEDBACK = "FEEDBACK"


@dataclass(frozen=True)
class ExperienceRecord:
    context: ContextVector
    kind: ExperienceKind
    key: str
    value: object
    source_project: str
    created: datetime

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", ExperienceKind(self.kind))
        object.__setattr__(self, "created", parse_instant(self.created))
        if not self.key:
            raise ValueError("experience key must be non-empty")
        if self.kind == ExperienceKind.FEEDBACK:
            if not isinstance(self.value, str):
                raise ValueError("feedback value must be text")
        elif not isinstance(self.value, (int, float, str, list)):
            raise ValueError(f"{self.kind.value} value must be a scalar or series")

    def to_dict(self) -> dict:
        return {
            "context": self.context.as_dict(),
            "kind": self.kind.value,
            "key": self.key,
            "value": self.value,
            "source_project": self.source_project,
            "created": format_instant(self.created),
        }

    @staticmethod
    def from_dict(doc: dict) -> "ExperienceRecord":
        return ExperienceRecord(
            context=ContextVector(doc["context"]),
            kind=ExperienceKind(doc["kind"]),
            key=doc["key"],
            value=doc["value"],
            source_project=doc["source_project"],
            created=parse_instant(doc["created"]),
        )


class ExperienceBase:
    """Context-indexed store of baselines, thresholds, parameters, feedback."""

    SIMILARITY_CUTOFF = 0.75

    def __init__(self, path: Path):
        self.path = Path(path)

    def records(self) -> list:
        if not self.path.exists():
            return []
        out = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(ExperienceRecord.from_dict(json.loads(line)))
        return out

    def add(self, records: Iterable[ExperienceRecord]) -> None:
        _append_atomic(self.path, [canonical_json(r.to_dict()) for r in records])

    def retrieve(self, context: ContextVector, key: str) -> Optional[ExperienceRecord]:
        """Exact context match first, then best similarity >= 0.75; ties go
        to the most recently created record (then latest appended)."""
        candidates = [r for r in self.records() if r.key == key]
        exact = [r for r in candidates if r.context.as_dict() == context.as_dict()]
        if exact:
            return max(enumerate(exact), key=lambda ir: (ir[1].created, ir[0]))[1]
        scored = [(r.context.similarity(context), i, r) for i, r in enumerate(candidates)]
        scored = [s for s in scored if s[0] >= self.SIMILARITY_CUTOFF]
        if not scored:
            return None
        return max(scored, key=lambda s: (s[0], s[2].created, s[1]))[2]

    def lookup_value(self, context: ContextVector, key: str):
        record = self.retrieve(context, key)
        return record.value if record else None


def _goal_from_dict(doc: dict) -> ControlGoal:
    return ControlGoal(
        id=doc["id"],
        object=doc["object"],
        purpose=doc["purpose"],
        quality_focus=frozenset(doc["quality_focus"]),
        viewpoint=doc["viewpoint"],
        context=ContextVector(doc.get("context", {})),
    )


def _question_from_dict(doc: dict) -> Question:
    return Question(doc["id"], doc["goal"], doc.get("text", ""), frozenset(doc["metrics"]))


def _task_from_dict(doc: dict) -> Task:
    return Task(
        id=doc["id"],
        name=doc.get("name", doc["id"]),
        parent=doc.get("parent"),
        planned_start=parse_day(doc["planned_start"]),
        planned_end=parse_day(doc["planned_end"]),
        actual_start=parse_day(doc["actual_start"]) if doc.get("actual_start") else None,
        actual_end=parse_day(doc["actual_end"]) if doc.get("actual_end") else None,
        budget=float(doc.get("budget", 0.0)),
        percent_complete=float(doc.get("percent_complete", 0.0)),
    )


def _indicator_from_dict(doc: dict) -> IndicatorValue:
    series = doc["series"]
    if isinstance(series, dict):
        points = tuple(
            MeasurementPoint(series["metric"], series["entity"], p["t"], p["v"])
            for p in series["points"]
        )
        series = DataSeries(series["metric"], series["entity"], points)
    return IndicatorValue(doc["node"], doc["name"], series, StatusColor[doc["status"]], doc["explanation"])


def _execution_from_dict(doc: dict) -> ExecutionResult:
    return ExecutionResult(
        execution_id=doc["execution_id"],
        catena_version=doc["catena_version"],
        as_of=parse_instant(doc["as_of"]),
        order=tuple(doc["order"]),
        indicators=tuple(_indicator_from_dict(i) for i in doc["indicators"]),
        view_states=tuple(
            ViewState(v["view"], v["kind"], StatusColor[v["status"]], v["payload"], tuple(v["contributing"]))
            for v in doc["view_states"]
        ),
        deviations=tuple(_deviation_from_dict(d) for d in doc["deviations"]),
        recoveries=tuple(tuple(r) for r in doc.get("recoveries", ())),
    )


def _deviation_from_dict(doc: dict) -> DeviationEvent:
    return DeviationEvent(
        id=doc["id"],
        node=doc["node"],
        timestamp=parse_instant(doc["timestamp"]),
        severity=StatusColor[doc["severity"]],
        message=doc["message"],
        acknowledged=doc.get("acknowledged", False),
        acknowledged_by=doc.get("acknowledged_by"),
    )


class ProjectStore:
    """Handle to one project's on-disk state."""

    def __init__(self, root: Path, project_id: str):
        self.root = Path(root)
        self.project_id = project_id
        self.dir = self.root / "projects" / project_id
        self._lock = _lock_for(str(self.dir.resolve()))
        self._measurements: Optional[dict] = None  # (metric, entity) -> [points]
        self._dup_keys: Optional[set] = None

    @property
    def lock(self) -> threading.RLock:
        """Single-writer lock; also serializes execute-and-record runs."""
        return self._lock

    # -- lifecycle -----------------------------------------------------

    @staticmethod
    def create(root: Path, project: Project) -> "ProjectStore":
        if not _ID_RE.match(project.id):
            raise InvalidInput(f"project id {project.id!r} must match {_ID_RE.pattern}")
        store = ProjectStore(root, project.id)
        if store.dir.exists():
            raise AlreadyExists(f"project {project.id!r} already exists")
        violations = validate_plan(project.plan)
        if violations:
            raise PlanInvalid(violations)
        (store.dir / "executions").mkdir(parents=True)
        (store.dir / "catena").mkdir()
        store._write_meta({
            "id": project.id,
            "name": project.name,
            "context": project.context.as_dict(),
            "roles": [{"id": r.id, "name": r.name} for r in project.roles],
            "complete": False,
        })
        store.set_plan(project.plan)
        return store

    @staticmethod
    def open(root: Path, project_id: str) -> "ProjectStore":
        store = ProjectStore(root, project_id)
        if not (store.dir / "meta.json").exists():
            raise NotFound(f"unknown project {project_id!r}")
        return store

    @staticmethod
    def list_projects(root: Path) -> list:
        base = Path(root) / "projects"
        if not base.exists():
            return []
        return sorted(p.name for p in base.iterdir() if (p / "meta.json").exists())

    def _write_meta(self, meta: dict) -> None:
        _atomic_write(self.dir / "meta.json", canonical_json(meta))

    def meta(self) -> dict:
        return json.loads((self.dir / "meta.json").read_text(encoding="utf-8"))

    def project(self) -> Project:
        meta = self.meta()
        return Project(
            id=meta["id"],
            name=meta["name"],
            context=ContextVector(meta["context"]),
            plan=tuple(self.plan()),
            roles=tuple(Role(r["id"], r["name"]) for r in meta["roles"]),
        )

    def is_complete(self) -> bool:
        return bool(self.meta().get("complete"))

    def set_complete(self, complete: bool = True) -> None:
        with self._lock:
            meta = self.meta()
            meta["complete"] = bool(complete)
            self._write_meta(meta)

    # -- measurements ---------------------------------------------------

    def _load_measurements(self) -> None:
        if self._measurements is not None:
            return
        self._measurements = {}
        self._dup_keys = set()
        path = self.dir / "measurements.ndjson"
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                doc = json.loads(line)
                point = MeasurementPoint(doc["metric"], doc["entity"], doc["timestamp"], doc["value"])
                self._measurements.setdefault((point.metric, point.entity), []).append(point)
                self._dup_keys.add((point.metric, point.entity, format_instant(point.timestamp)))
        for points in self._measurements.values():
            points.sort(key=lambda p: p.timestamp)

    def ingest_csv(self, text: str) -> IngestReport:
        """Validate and append measurement rows; the whole batch lands
        atomically. Duplicate (metric, entity, timestamp) keys are rejected,
        including duplicates within the file."""
        with self._lock:
            self._load_measurements()
            reader = csv.reader(io.StringIO(text))
            try:
                header = next(reader)
            except StopIteration:
                return IngestReport(0, ())
            if [h.strip().lower() for h in header] != MEASUREMENT_HEADER:
                raise HeaderMismatch(f"expected header {','.join(MEASUREMENT_HEADER)!r}, got {','.join(header)!r}")

            accepted: list = []
            rejected: list = []
            batch_keys: set = set()
            for line_no, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 4:
                    rejected.append((line_no, f"expected 4 fields, got {len(row)}"))
                    continue
                metric, entity, ts_raw, value_raw = (c.strip() for c in row)
                try:
                    ts = format_instant(parse_instant(ts_raw))
                except ValueError:
                    rejected.append((line_no, f"bad timestamp {ts_raw!r}"))
                    continue
                try:
                    value = float(value_raw)
                except ValueError:
                    rejected.append((line_no, "non-numeric value"))
                    continue
                if not math.isfinite(value):
                    rejected.append((line_no, "non-finite value"))
                    continue
                key = (metric, entity, ts)
                if key in self._dup_keys or key in batch_keys:
                    rejected.append((line_no, "duplicate"))
                    continue
                batch_keys.add(key)
                accepted.append(MeasurementPoint(metric, entity, ts, value))

            if accepted:
                _append_atomic(self.dir / "measurements.ndjson",
                               [canonical_json(p.to_dict()) for p in accepted])
                for p in accepted:
                    self._measurements.setdefault((p.metric, p.entity), []).append(p)
                    self._dup_keys.add((p.metric, p.entity, format_instant(p.timestamp)))
                for points in self._measurements.values():
                    points.sort(key=lambda p: p.timestamp)
            return IngestReport(len(accepted), tuple(rejected))

    def series(self, metric: str, selector: str = "*", as_of=None) -> list:
        """DataSeries per matching entity, truncated at as_of when given."""
        self._load_measurements()
        out = []
        for (m, entity), points in sorted(self._measurements.items()):
            if m != metric or (selector != "*" and entity != selector):
                continue
            series = DataSeries(metric, entity, tuple(points))
            if as_of is not None:
                series = series.truncated(parse_instant(as_of))
            out.append(series)
        return out

    def latest_values(self, metric: str, as_of=None) -> dict:
        """Entity -> most recent value at or before as_of."""
        return {
            s.entity: s.latest().value
            for s in self.series(metric, "*", as_of)
            if not s.is_empty
        }

    def known_metrics(self) -> set:
        self._load_measurements()
        return {metric for metric, _ in self._measurements}

    # -- plan / risks / traces / clusters --------------------------------

    def set_plan(self, tasks: Sequence[Task]) -> None:
        violations = validate_plan(tasks)
        if violations:
            raise PlanInvalid(violations)
        with self._lock:
            _atomic_write(self.dir / "plan.json",
                          canonical_json({"tasks": [t.to_dict() for t in tasks]}))

    def load_plan_json(self, text: str) -> int:
        doc = json.loads(text)
        tasks = [_task_from_dict(t) for t in doc["tasks"]]
        self.set_plan(tasks)
        return len(tasks)

    def plan(self) -> list:
        path = self.dir / "plan.json"
        if not path.exists():
            return []
        doc = json.loads(path.read_text(encoding="utf-8"))
        return [_task_from_dict(t) for t in doc["tasks"]]

    def ingest_risks_csv(self, text: str) -> int:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != RISK_HEADER:
            raise HeaderMismatch(f"expected header {','.join(RISK_HEADER)!r}")
        risks = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            rid, name, p, imp, dmg = (c.strip() for c in row)
            risks.append(Risk(rid, name, float(p), float(imp), float(dmg)))
        with self._lock:
            _atomic_write(self.dir / "risks.json",
                          canonical_json({"risks": [r.to_dict() for r in risks]}))
        return len(risks)

    def risks(self) -> list:
        path = self.dir / "risks.json"
        if not path.exists():
            return []
        doc = json.loads(path.read_text(encoding="utf-8"))
        return [Risk(r["id"], r["name"], r["probability"], r["importance"], r["damage"])
                for r in doc["risks"]]

    def ingest_traces_csv(self, text: str, allow_self: bool = False) -> IngestReport:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != TRACE_HEADER:
            raise HeaderMismatch(f"expected header {','.join(TRACE_HEADER)!r}")
        accepted: list = []
        rejected: list = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                rejected.append((line_no, f"expected 4 fields, got {len(row)}"))
                continue
            ts, source, target, outcome = (c.strip() for c in row)
            try:
                event = TraceEvent.create(ts, source, target, outcome.upper(), allow_self=allow_self)
            except ValueError as exc:
                rejected.append((line_no, str(exc)))
                continue
            accepted.append(event)
        if accepted:
            with self._lock:
                _append_atomic(self.dir / "traces.ndjson", [
                    canonical_json({
                        "timestamp": format_instant(e.timestamp),
                        "source": e.source,
                        "target": e.target,
                        "outcome": e.outcome.value,
                    }) for e in accepted
                ])
        return IngestReport(len(accepted), tuple(rejected))

    def trace_events(self) -> list:
        path = self.dir / "traces.ndjson"
        if not path.exists():
            return []
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                doc = json.loads(line)
                events.append(TraceEvent(doc["timestamp"], doc["source"], doc["target"], doc["outcome"]))
        return events

    def set_clustering(self, clustering: dict) -> None:
        with self._lock:
            _atomic_write(self.dir / "clusters.json",
                          canonical_json({"clusters": dict(sorted(clustering.items()))}))

    def clustering(self) -> dict:
        path = self.dir / "clusters.json"
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))["clusters"]

    # -- goals / questions ------------------------------------------------

    def add_goal(self, goal: ControlGoal) -> None:
        project = self.project()
        if goal.viewpoint not in project.role_ids():
            raise NotFound(f"viewpoint role {goal.viewpoint!r} not declared in project {self.project_id!r}")
        with self._lock:
            goals = {g.id: g for g in self.goals()}
            goals[goal.id] = goal
            _atomic_write(self.dir / "goals.json", canonical_json(
                {"goals": [goals[k].to_dict() for k in sorted(goals)]}))

    def goals(self) -> list:
        path = self.dir / "goals.json"
        if not path.exists():
            return []
        doc = json.loads(path.read_text(encoding="utf-8"))
        return [_goal_from_dict(g) for g in doc["goals"]]

    def add_question(self, question: Question) -> None:
        if question.goal not in {g.id for g in self.goals()}:
            raise NotFound(f"question {question.id!r} references unknown goal {question.goal!r}")
        with self._lock:
            questions = {q.id: q for q in self.questions()}
            questions[question.id] = question
            _atomic_write(self.dir / "questions.json", canonical_json(
                {"questions": [questions[k].to_dict() for k in sorted(questions)]}))

    def questions(self) -> list:
        path = self.dir / "questions.json"
        if not path.exists():
            return []
        doc = json.loads(path.read_text(encoding="utf-8"))
        return [_question_from_dict(q) for q in doc["questions"]]

    # -- catena versions ---------------------------------------------------

    def save_catena(self, catena: VisualizationCatena) -> int:
        with self._lock:
            version = self.catena_version() + 1
            _atomic_write(self.dir / "catena" / f"v{version:04d}.json", catena.to_json())
            return version

    def catena_version(self) -> int:
        versions = sorted((self.dir / "catena").glob("v*.json"))
        return int(versions[-1].stem[1:]) if versions else 0

    def catena(self) -> Optional[VisualizationCatena]:
        version = self.catena_version()
        if version == 0:
            return None
        path = self.dir / "catena" / f"v{version:04d}.json"
        return VisualizationCatena.from_dict(json.loads(path.read_text(encoding="utf-8")))

    # -- executions and deviations -----------------------------------------

    def record_execution(self, result: ExecutionResult) -> None:
        with self._lock:
            _atomic_write(self.dir / "executions" / f"{result.execution_id}.json",
                          canonical_json(result.to_dict()))
            _append_atomic(self.dir / "executions.log", [canonical_json({
                "execution_id": result.execution_id,
                "as_of": format_instant(result.as_of),
            })])
            known = {e.id for e in self._deviation_events()}
            fresh = [e for e in result.deviations if e.id not in known]
            if fresh:
                _append_atomic(self.dir / "deviations.ndjson", [
                    canonical_json({"type": "emitted", "event": e.to_dict()}) for e in fresh
                ])

    def executions(self) -> list:
        path = self.dir / "executions.log"
        if not path.exists():
            return []
        out = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(json.loads(line))
        return out

    def execution(self, execution_id: str) -> ExecutionResult:
        path = self.dir / "executions" / f"{execution_id}.json"
        if not path.exists():
            raise NotFound(f"unknown execution {execution_id!r}")
        return _execution_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def latest_execution(self) -> Optional[ExecutionResult]:
        log = self.executions()
        if not log:
            return None
        return self.execution(log[-1]["execution_id"])

    def execution_for(self, as_of) -> Optional[ExecutionResult]:
        token = format_instant(parse_instant(as_of))
        for entry in reversed(self.executions()):
            if entry["as_of"] == token:
                return self.execution(entry["execution_id"])
        return None

    def _deviation_events(self) -> list:
        path = self.dir / "deviations.ndjson"
        if not path.exists():
            return []
        events: dict = {}
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            if doc["type"] == "emitted":
                event = _deviation_from_dict(doc["event"])
                events[event.id] = event
            elif doc["type"] == "ack" and doc["id"] in events:
                from dataclasses import replace

                events[doc["id"]] = replace(events[doc["id"]], acknowledged=True,
                                            acknowledged_by=doc["role"])
        return sorted(events.values(), key=lambda e: (e.timestamp, e.id))

    def deviations(self, since=None) -> list:
        events = self._deviation_events()
        if since is not None:
            cutoff = parse_instant(since)
            events = [e for e in events if e.timestamp >= cutoff]
        return events

    def acknowledge(self, deviation_id: str, role: str) -> DeviationEvent:
        with self._lock:
            events = {e.id: e for e in self._deviation_events()}
            if deviation_id not in events:
                raise NotFound(f"unknown deviation {deviation_id!r}")
            _append_atomic(self.dir / "deviations.ndjson",
                           [canonical_json({"type": "ack", "id": deviation_id, "role": role})])
            from dataclasses import replace

            return replace(events[deviation_id], acknowledged=True, acknowledged_by=role)

    # -- postmortem ----------------------------------------------------------

    def save_postmortem(self, report: PostmortemReport, incidents: Sequence[GroundTruthIncident]) -> None:
        with self._lock:
            _atomic_write(self.dir / "postmortem.json", canonical_json({
                "report": report.to_dict(),
                "incidents": [{
                    "id": i.id,
                    "node": i.node,
                    "start": format_instant(i.start),
                    "detected_deadline": format_instant(i.detected_deadline),
                } for i in incidents],
            }))

    def postmortem(self) -> Optional[tuple]:
        path = self.dir / "postmortem.json"
        if not path.exists():
            return None
        doc = json.loads(path.read_text(encoding="utf-8"))
        report = PostmortemReport(
            tuple(doc["report"]["in_time"]),
            tuple(doc["report"]["too_late"]),
            tuple(doc["report"]["missed"]),
            tuple(doc["report"]["false_positives"]),
        )
        incidents = [GroundTruthIncident(i["id"], i["node"], i["start"], i["detected_deadline"])
                     for i in doc["incidents"]]
        return report, incidents


def experience_base(root: Path) -> ExperienceBase:
    return ExperienceBase(Path(root) / "experience.ndjson")


def _reference_instant(store: ProjectStore) -> datetime:
    """Deterministic 'now' for packaging: the latest execution's as_of,
    else the newest measurement, else the epoch."""
    latest = store.latest_execution()
    if latest:
        return latest.as_of
    newest = None
    for metric in sorted(store.known_metrics()):
        for series in store.series(metric):
            if not series.is_empty:
                ts = series.latest().timestamp
                newest = ts if newest is None or ts > newest else newest
    return newest or datetime(1970, 1, 1, tzinfo=timezone.utc)


def package(store: ProjectStore, report: PostmortemReport,
            incidents: Sequence[GroundTruthIncident],
            feedback: Sequence = (),
            tighten_factor: float = DEFAULT_TIGHTEN_FACTOR) -> list:
    """Distill a completed project into experience records.

    Baselines capture the final actual per (metric, entity). Tolerance
    thresholds implicated in TOO_LATE or MISSED incidents are tightened by
    `tighten_factor`; thresholds that detected IN_TIME are retained as-is.
    Stakeholder feedback is stored verbatim. Everything is tagged with the
    project's context vector.
    """
    if not store.is_complete():
        raise ProjectActive(f"project {store.project_id!r} is not marked complete")
    context = store.project().context
    created = _reference_instant(store)
    records: list = []

    for metric in sorted(store.known_metrics()):
        for series in store.series(metric):
            if not series.is_empty:
                records.append(ExperienceRecord(
                    context, ExperienceKind.BASELINE,
                    key=f"{metric}:{series.entity}",
                    value=series.latest().value,
                    source_project=store.project_id,
                    created=created,
                ))

    catena = store.catena()
    if catena is not None:
        class_of = {}
        for incident in incidents:
            bucket = ("in_time" if incident.id in report.in_time
                      else "too_late" if incident.id in report.too_late
                      else "missed" if incident.id in report.missed
                      else None)
            if bucket:
                class_of.setdefault(incident.node, set()).add(bucket)
        for f in catena.functions:
            if f.technique != "tolerance" or f.id not in class_of:
                continue
            tol = float(f.params.get("tol", 0.1))
            buckets = class_of[f.id]
            value = tol * tighten_factor if buckets & {"too_late", "missed"} else tol
            records.append(ExperienceRecord(
                context, ExperienceKind.THRESHOLD,
                key=f"{f.component}.tol",
                value=value,
                source_project=store.project_id,
                created=created,
            ))

    for item in feedback:
        records.append(ExperienceRecord(
            context, ExperienceKind.FEEDBACK,
            key=item["key"], value=str(item["value"]),
            source_project=store.project_id, created=created,
        ))

    experience_base(store.root).add(records)
    return records
