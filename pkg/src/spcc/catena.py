"""Visualization catena: the typed DAG wiring data series through control
techniques into role-assigned views, plus its validator and executor.

Execution is pure given (catena, store snapshot, as_of): nodes evaluate in
topological order, bindings resolve to series truncated at as_of, and
deviation events are edge-triggered against the previous recorded
execution. Persistence belongs to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Optional, Sequence

from .errors import UnknownComponent, Unvalidated
from .model import (
    DataSeries,
    IndicatorValue,
    StatusColor,
    Task,
    worst_status,
)
from .serialization import (
    canonical_json,
    content_hash,
    format_instant,
    parse_instant,
    safe_instant_token,
)
from . import techniques
from .techniques import (
    AggregationMode,
    ToleranceSpec,
    TrendSpec,
    aggregate_status,
    evm,
    tolerance_check,
    trend_project,
)


@dataclass(frozen=True)
class SeriesBinding:
    """Data collection node: one metric, one entity or '*' for all."""

    id: str
    metric: str
    entity_selector: str = "*"

    def to_dict(self) -> dict:
        return {"id": self.id, "metric": self.metric, "entity_selector": self.entity_selector}


@dataclass(frozen=True)
class FunctionInstance:
    """Interpretation node: a control technique with bound parameters."""

    id: str
    component: str
    technique: str
    parameters: tuple = ()
    inputs: tuple = ()

    def __post_init__(self):
        params = self.parameters
        if isinstance(params, dict):
            params = tuple(sorted(params.items()))
        object.__setattr__(self, "parameters", tuple(params))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def params(self) -> dict:
        return dict(self.parameters)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "component": self.component,
            "technique": self.technique,
            "parameters": dict(self.parameters),
            "inputs": list(self.inputs),
        }


@dataclass(frozen=True)
class ViewInstance:
    """Visualization node: a scene kind fed by function or binding nodes."""

    id: str
    component: str
    kind: str
    inputs: tuple = ()
    options: tuple = ()

    def __post_init__(self):
        opts = self.options
        if isinstance(opts, dict):
            opts = tuple(sorted(opts.items()))
        object.__setattr__(self, "options", tuple(opts))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def opts(self) -> dict:
        return dict(self.options)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "component": self.component,
            "kind": self.kind,
            "inputs": list(self.inputs),
            "options": dict(self.options),
        }


@dataclass(frozen=True)
class VisualizationCatena:
    bindings: tuple = ()
    functions: tuple = ()
    views: tuple = ()
    role_assignments: tuple = ()  # (role id, (view ids...)) pairs
    goal_trace: tuple = ()  # (node id, goal id) pairs

    def __post_init__(self):
        object.__setattr__(self, "bindings", tuple(self.bindings))
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "views", tuple(self.views))
        roles = self.role_assignments
        if isinstance(roles, dict):
            roles = tuple(sorted((r, tuple(v)) for r, v in roles.items()))
        object.__setattr__(self, "role_assignments", tuple((r, tuple(v)) for r, v in roles))
        trace = self.goal_trace
        if isinstance(trace, dict):
            trace = tuple(sorted(trace.items()))
        object.__setattr__(self, "goal_trace", tuple(trace))

    def nodes(self) -> dict:
        out: dict = {}
        for b in self.bindings:
            out[b.id] = b
        for f in self.functions:
            out[f.id] = f
        for v in self.views:
            out[v.id] = v
        return out

    def roles(self) -> dict:
        return {r: tuple(v) for r, v in self.role_assignments}

    def trace(self) -> dict:
        return dict(self.goal_trace)

    def to_dict(self) -> dict:
        return {
            "bindings": [b.to_dict() for b in self.bindings],
            "functions": [f.to_dict() for f in self.functions],
            "views": [v.to_dict() for v in self.views],
            "role_assignments": {r: list(v) for r, v in self.role_assignments},
            "goal_trace": {n: g for n, g in self.goal_trace},
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def version(self) -> str:
        return content_hash(self.to_dict())

    @staticmethod
    def from_dict(doc: dict) -> "VisualizationCatena":
        return VisualizationCatena(
            bindings=tuple(SeriesBinding(**b) for b in doc.get("bindings", ())),
            functions=tuple(FunctionInstance(**f) for f in doc.get("functions", ())),
            views=tuple(ViewInstance(**v) for v in doc.get("views", ())),
            role_assignments=doc.get("role_assignments", {}),
            goal_trace=doc.get("goal_trace", {}),
        )


@dataclass(frozen=True)
class CatenaViolation:
    node: str
    kind: str
    message: str

    def to_dict(self) -> dict:
        return {"node": self.node, "kind": self.kind, "message": self.message}


def validate(catena: VisualizationCatena) -> list:
    """Every violated catena invariant; empty list iff executable."""
    violations: list[CatenaViolation] = []
    seen: set[str] = set()
    for node_id in [b.id for b in catena.bindings] + [f.id for f in catena.functions] + [v.id for v in catena.views]:
        if node_id in seen:
            violations.append(CatenaViolation(node_id, "duplicate id", f"node id {node_id!r} is not unique"))
        seen.add(node_id)

    nodes = catena.nodes()
    edges: list[tuple] = []  # (input, consumer)
    for f in catena.functions:
        for ref in f.inputs:
            if ref not in nodes:
                violations.append(CatenaViolation(f.id, "dangling reference", f"dangling reference {ref}"))
            else:
                edges.append((ref, f.id))
    for v in catena.views:
        for ref in v.inputs:
            if ref not in nodes:
                violations.append(CatenaViolation(v.id, "dangling reference", f"dangling reference {ref}"))
            else:
                edges.append((ref, v.id))
    for role, view_ids in catena.role_assignments:
        for ref in view_ids:
            if ref not in nodes:
                violations.append(CatenaViolation(role, "dangling reference", f"role {role!r} assigned missing view {ref}"))
    for node_id, _goal in catena.goal_trace:
        if node_id not in nodes:
            violations.append(CatenaViolation(node_id, "dangling reference", f"goal trace references missing node {node_id}"))

    # Cycle detection over the resolved edges (self-loops included).
    adjacency: dict = {n: [] for n in nodes}
    for src, dst in edges:
        adjacency[src].append(dst)
    state: dict = {}
    stack: list = []

    def dfs(node: str) -> Optional[list]:
        state[node] = 1
        stack.append(node)
        for nxt in adjacency[node]:
            if state.get(nxt) == 1:
                return stack[stack.index(nxt):]
            if state.get(nxt) is None:
                cycle = dfs(nxt)
                if cycle:
                    return cycle
        stack.pop()
        state[node] = 2
        return None

    for n in sorted(nodes):
        if state.get(n) is None:
            cycle = dfs(n)
            if cycle:
                violations.append(CatenaViolation(min(cycle), "cycle", "cycle " + "->".join(cycle + [cycle[0]])))
                break

    # Every view must be reachable from at least one binding.
    reachable: set = {b.id for b in catena.bindings}
    changed = True
    while changed:
        changed = False
        for f in catena.functions:
            if f.id not in reachable and any(i in reachable for i in f.inputs):
                reachable.add(f.id)
                changed = True
    for v in catena.views:
        if not any(i in reachable for i in v.inputs):
            violations.append(CatenaViolation(v.id, "unreachable view", f"view {v.id} is not reachable from any binding"))
    return violations


def topological_order(catena: VisualizationCatena) -> list:
    """Kahn's algorithm with lexicographic tie-break (deterministic)."""
    nodes = catena.nodes()
    indeg = {n: 0 for n in nodes}
    out: dict = {n: [] for n in nodes}
    for consumer in list(catena.functions) + list(catena.views):
        for ref in consumer.inputs:
            if ref in nodes:
                out[ref].append(consumer.id)
                indeg[consumer.id] += 1
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        inserted = False
        for nxt in out[node]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
                inserted = True
        if inserted:
            ready.sort()
    return order


@dataclass(frozen=True)
class DeviationEvent:
    id: str
    node: str
    timestamp: datetime
    severity: StatusColor
    message: str
    acknowledged: bool = False
    acknowledged_by: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "timestamp", parse_instant(self.timestamp))
        if self.severity not in (StatusColor.YELLOW, StatusColor.RED):
            raise ValueError(f"deviation severity must be YELLOW or RED, got {self.severity.name}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "node": self.node,
            "timestamp": format_instant(self.timestamp),
            "severity": self.severity.name,
            "message": self.message,
            "acknowledged": self.acknowledged,
            "acknowledged_by": self.acknowledged_by,
        }


@dataclass(frozen=True)
class ViewState:
    """Marshalled inputs for one view, ready for the layout engines."""

    view: str
    kind: str
    status: StatusColor
    payload: dict
    contributing: tuple = ()

    def to_dict(self) -> dict:
        return {
            "view": self.view,
            "kind": self.kind,
            "status": self.status.name,
            "payload": self.payload,
            "contributing": list(self.contributing),
        }


@dataclass(frozen=True)
class ExecutionResult:
    execution_id: str
    catena_version: str
    as_of: datetime
    order: tuple
    indicators: tuple  # IndicatorValue, in evaluation order
    view_states: tuple
    deviations: tuple
    recoveries: tuple = ()  # informational (node, from, to) downgrades

    def indicator_map(self) -> dict:
        return {i.node: i for i in self.indicators}

    def to_dict(self) -> dict:
        return {
            "execution_id": self.execution_id,
            "catena_version": self.catena_version,
            "as_of": format_instant(self.as_of),
            "order": list(self.order),
            "indicators": [i.to_dict() for i in self.indicators],
            "view_states": [v.to_dict() for v in self.view_states],
            "deviations": [d.to_dict() for d in self.deviations],
            "recoveries": [list(r) for r in self.recoveries],
        }


class TechniqueContext:
    """Everything a technique runner may consult for one node."""

    def __init__(self, store, as_of, node: FunctionInstance, input_series: dict, input_indicators: dict):
        self.store = store
        self.as_of = as_of
        self.node = node
        self.input_series = input_series  # input node id -> list[DataSeries]
        self.input_indicators = input_indicators  # input node id -> IndicatorValue
        self.aux: dict = {}

    def series_by_metric(self, metric: str) -> list:
        """All input series for a metric, sorted by entity."""
        found = []
        for series_list in self.input_series.values():
            found.extend(s for s in series_list if s.metric == metric)
        return sorted(found, key=lambda s: s.entity)


def _no_data(node: FunctionInstance, name: str, explanation: str) -> IndicatorValue:
    return IndicatorValue(node.id, name, None, StatusColor.NO_DATA, explanation)


def _run_evm(ctx: TechniqueContext) -> IndicatorValue:
    p = ctx.node.params
    pv = ctx.series_by_metric(p.get("pv_metric", "pv"))
    ev = ctx.series_by_metric(p.get("ev_metric", "ev"))
    ac = ctx.series_by_metric(p.get("ac_metric", "ac"))
    if not (pv and ev and ac):
        return _no_data(ctx.node, "earned value", "missing pv/ev/ac data")
    bac = p.get("bac", "from_plan")
    if bac == "from_plan":
        plan = ctx.store.plan()
        children = {t.parent for t in plan if t.parent}
        bac = sum(t.budget for t in plan if t.id not in children)
    if not bac or bac <= 0:
        return _no_data(ctx.node, "earned value", "budget at completion unavailable")
    snapshots = evm(pv[0], ev[0], ac[0], float(bac),
                    float(p.get("green_cut", techniques.EVM_GREEN_CUT)),
                    float(p.get("yellow_cut", techniques.EVM_YELLOW_CUT)))
    ctx.aux["snapshots"] = [s.to_dict() for s in snapshots]
    if not snapshots:
        return _no_data(ctx.node, "earned value", "no common pv/ev/ac timestamps")
    points = []
    from .model import MeasurementPoint

    for s in snapshots:
        ratios = [r for r in (s.cpi, s.spi) if r is not None]
        if ratios:
            points.append(MeasurementPoint("evm.min_index", pv[0].entity, s.t, min(ratios)))
    latest = snapshots[-1]
    series = DataSeries("evm.min_index", pv[0].entity, points)
    if series.is_empty:
        return _no_data(ctx.node, "earned value", "cpi and spi undefined on every snapshot")
    detail = []
    for label, value in (("cpi", latest.cpi), ("spi", latest.spi), ("eac", latest.eac)):
        detail.append(f"{label}={value:.4f}" if value is not None else f"{label}=undefined")
    return IndicatorValue(ctx.node.id, "earned value", series, latest.status,
                          f"{', '.join(detail)} at {format_instant(latest.t)}")


def _run_tolerance(ctx: TechniqueContext) -> IndicatorValue:
    p = ctx.node.params
    metric = p.get("metric")
    actual_series = ctx.series_by_metric(metric) if metric else [
        s for lst in ctx.input_series.values() for s in lst]
    if not actual_series:
        return _no_data(ctx.node, f"tolerance({metric or '?'})", "no data")
    baseline_metric = p.get("baseline_metric")
    baseline_series = ctx.series_by_metric(baseline_metric) if baseline_metric else []
    candidates = []
    for actual in sorted(actual_series, key=lambda s: s.entity):
        if baseline_metric:
            same_entity = [b for b in baseline_series if b.entity == actual.entity]
            if same_entity:
                baseline = same_entity[0]
            elif len(baseline_series) == 1:
                baseline = baseline_series[0]
            else:
                continue
        else:
            baseline = float(p["baseline"])
        spec = ToleranceSpec(
            baseline=baseline,
            tol=float(p.get("tol", 0.1)),
            red_factor=float(p.get("red_factor", 2.0)),
            abs_tol=float(p["abs_tol"]) if p.get("abs_tol") is not None else None,
        )
        ind = tolerance_check(actual, spec)
        candidates.append((actual.entity, ind))
    if not candidates:
        return _no_data(ctx.node, f"tolerance({metric})", "no baseline series matches the data")
    entity, worst = max(candidates, key=lambda c: (c[1].status.severity, c[0]))
    return replace(worst, node=ctx.node.id,
                   explanation=f"{worst.explanation} (entity {entity})")


def _run_trend(ctx: TechniqueContext) -> IndicatorValue:
    from .errors import InsufficientData

    p = ctx.node.params
    metric = p.get("metric")
    spec = TrendSpec(int(p.get("window", 5)), float(p["threshold"]), p.get("direction", "ABOVE"))
    series_list = ctx.series_by_metric(metric) if metric else [
        s for lst in ctx.input_series.values() for s in lst]
    name = f"trend({metric or '?'})"
    results = []
    for series in series_list:
        try:
            results.append((series, trend_project(series, spec)))
        except InsufficientData:
            continue
    if not results:
        return _no_data(ctx.node, name, f"fewer than {spec.window} points in every input series")
    crossings = [(s, r) for s, r in results if r.crossing is not None]
    if crossings:
        series, result = min(crossings, key=lambda sr: (sr[1].crossing, sr[0].entity))
        ctx.aux["trend"] = result.to_dict()
        return IndicatorValue(
            ctx.node.id, name, series, StatusColor.YELLOW,
            f"projected to cross {spec.threshold:.6g} ({spec.direction}) at {format_instant(result.crossing)}; "
            f"slope {result.slope:.6g}/day")
    series, result = results[0]
    ctx.aux["trend"] = result.to_dict()
    return IndicatorValue(ctx.node.id, name, series, StatusColor.GREEN,
                          f"no projected crossing of {spec.threshold:.6g} ({spec.direction}); "
                          f"slope {result.slope:.6g}/day")


def _run_aggregate(ctx: TechniqueContext) -> IndicatorValue:
    p = ctx.node.params
    weights = dict(p.get("weights", ()))
    children = []
    for input_id in ctx.node.inputs:
        ind = ctx.input_indicators.get(input_id)
        if ind is not None:
            children.append((ind.status, float(weights.get(input_id, 1.0))))
    name = "status aggregate"
    if not children:
        return _no_data(ctx.node, name, "no indicator inputs")
    mode = p.get("mode", AggregationMode.WORST)
    status = aggregate_status(children, mode,
                              float(p.get("green_cut", 0.75)), float(p.get("yellow_cut", 0.4)))
    live = [(s, w) for s, w in children if s != StatusColor.NO_DATA]
    if status == StatusColor.NO_DATA:
        return _no_data(ctx.node, name, "all inputs NO_DATA")
    total = sum(w for _, w in live)
    m = sum({StatusColor.GREEN: 1.0, StatusColor.YELLOW: 0.5, StatusColor.RED: 0.0}[s] * w
            for s, w in live) / total if total else None
    counts = ", ".join(f"{s.name}:{sum(1 for c, _ in live if c == s)}"
                       for s in (StatusColor.GREEN, StatusColor.YELLOW, StatusColor.RED))
    return IndicatorValue(ctx.node.id, name, m if m is not None else float(status.severity),
                          status, f"{mode} over {len(live)} inputs ({counts})")


TECHNIQUES: dict = {
    "evm": _run_evm,
    "tolerance": _run_tolerance,
    "trend": _run_trend,
    "aggregate": _run_aggregate,
}


def register_technique(kind: str, runner: Callable) -> None:
    TECHNIQUES[kind] = runner


def _build_view_state(view: ViewInstance, store, as_of, indicators: dict,
                      binding_series: dict, contributing: tuple) -> ViewState:
    status = worst_status(indicators[f].status for f in contributing if f in indicators)
    payload: dict = {}
    kind = view.kind
    opts = view.opts
    if kind == "GANTT":
        payload = {
            "plan": [t.to_dict() for t in store.plan()],
            "today": parse_instant(as_of).date().isoformat(),
        }
    elif kind == "BUBBLE":
        payload = {
            "risks": [r.to_dict() for r in store.risks()],
            "options": {k: v for k, v in sorted(opts.items())},
        }
    elif kind == "GRAPH3D":
        from .faults import component_stats, edge_stats

        events = [e for e in store.trace_events() if e.timestamp <= parse_instant(as_of)]
        edges = edge_stats(events)
        components = component_stats(edges, store.clustering())
        payload = {
            "edges": [e.to_dict() for e in edges],
            "components": [c.to_dict() for c in components],
            "options": {k: v for k, v in sorted(opts.items())},
        }
    elif kind == "TREEMAP3D":
        size_m = opts.get("size_metric", "size")
        height_m = opts.get("height_metric", "height")
        color_m = opts.get("color_metric", "color")
        sizes = store.latest_values(size_m, as_of)
        heights = store.latest_values(height_m, as_of)
        colors = store.latest_values(color_m, as_of)
        leaves = [{
            "entity": entity,
            "size": value,
            "height": heights.get(entity, 0.0),
            "color": colors.get(entity, 0.0),
        } for entity, value in sorted(sizes.items())]
        payload = {
            "tree": {"entity": store.project_id, "children": leaves},
            "algo": opts.get("algo", "SQUARIFIED"),
        }
    elif kind == "TIMESERIES":
        items = []
        for input_id in view.inputs:
            ind = indicators.get(input_id)
            if ind is not None and isinstance(ind.series, DataSeries):
                items.append({"name": ind.name, "status": ind.status.name, "series": ind.series.to_dict()})
            for series in binding_series.get(input_id, ()):
                items.append({"name": f"{series.metric} ({series.entity})", "status": None,
                              "series": series.to_dict()})
        payload = {"series": items}
    elif kind == "TABLE":
        rows = []
        for input_id in view.inputs:
            ind = indicators.get(input_id)
            if ind is None:
                continue
            latest = None
            if isinstance(ind.series, DataSeries) and not ind.series.is_empty:
                latest = ind.series.latest().value
            elif isinstance(ind.series, (int, float)):
                latest = float(ind.series)
            rows.append({"node": ind.node, "name": ind.name, "status": ind.status.name,
                         "value": latest, "explanation": ind.explanation})
        payload = {"rows": rows}
    else:
        payload = {"unsupported": kind}
    return ViewState(view.id, kind, status, payload, contributing)


def execute(catena: VisualizationCatena, store, as_of) -> ExecutionResult:
    """Evaluate every node at `as_of` and diff function statuses against
    the store's previous recorded execution for deviation events."""
    violations = validate(catena)
    if violations:
        raise Unvalidated("catena invalid: " + "; ".join(v.message for v in violations))
    as_of = parse_instant(as_of)
    nodes = catena.nodes()
    order = topological_order(catena)

    binding_series: dict = {}
    indicators: dict = {}
    view_states: list = []

    # Transitive function contributions per node (for view status/ordering).
    contrib: dict = {}

    for node_id in order:
        node = nodes[node_id]
        if isinstance(node, SeriesBinding):
            series = store.series(node.metric, node.entity_selector, as_of)
            binding_series[node_id] = tuple(sorted((s for s in series if not s.is_empty),
                                                   key=lambda s: s.entity))
            contrib[node_id] = ()
        elif isinstance(node, FunctionInstance):
            runner = TECHNIQUES.get(node.technique)
            if runner is None:
                raise UnknownComponent(f"unknown technique kind {node.technique!r}")
            ctx = TechniqueContext(
                store, as_of, node,
                {i: binding_series.get(i, ()) for i in node.inputs},
                {i: indicators[i] for i in node.inputs if i in indicators},
            )
            indicators[node_id] = runner(ctx)
            upstream = [c for i in node.inputs for c in contrib.get(i, ())]
            contrib[node_id] = tuple(dict.fromkeys(upstream + [node_id]))
        else:
            upstream = [c for i in node.inputs for c in contrib.get(i, ())]
            contributing = tuple(dict.fromkeys(upstream))
            view_states.append(_build_view_state(node, store, as_of, indicators,
                                                 binding_series, contributing))
            contrib[node_id] = contributing

    previous = store.latest_execution()
    prev_status = previous.indicator_map() if previous else {}
    deviations: list = []
    recoveries: list = []
    for f in sorted(catena.functions, key=lambda f: f.id):
        new = indicators[f.id].status
        old = prev_status[f.id].status if f.id in prev_status else StatusColor.NO_DATA
        if new > old and new in (StatusColor.YELLOW, StatusColor.RED):
            deviations.append(DeviationEvent(
                id=f"{store.project_id}:{f.id}:{format_instant(as_of)}",
                node=f.id,
                timestamp=as_of,
                severity=new,
                message=f"{old.name}->{new.name}: {indicators[f.id].explanation}",
            ))
        elif new < old:
            recoveries.append((f.id, old.name, new.name))

    return ExecutionResult(
        execution_id=f"exec-{safe_instant_token(as_of)}",
        catena_version=catena.version(),
        as_of=as_of,
        order=tuple(order),
        indicators=tuple(indicators[f.id] for f in catena.functions if f.id in indicators),
        view_states=tuple(view_states),
        deviations=tuple(deviations),
        recoveries=tuple(recoveries),
    )


def role_view(result: ExecutionResult, catena: VisualizationCatena, role: str) -> list:
    """View states assigned to `role`, most severe first, id as tie-break."""
    assigned = catena.roles().get(role, ())
    states = {vs.view: vs for vs in result.view_states}
    chosen = [states[v] for v in assigned if v in states]
    return sorted(chosen, key=lambda vs: (-vs.status.severity, vs.view))


@dataclass(frozen=True)
class GroundTruthIncident:
    id: str
    node: str
    start: datetime
    detected_deadline: datetime

    def __post_init__(self):
        object.__setattr__(self, "start", parse_instant(self.start))
        object.__setattr__(self, "detected_deadline", parse_instant(self.detected_deadline))


@dataclass(frozen=True)
class PostmortemReport:
    in_time: tuple
    too_late: tuple
    missed: tuple
    false_positives: tuple  # event ids matching no incident

    def counts(self) -> dict:
        return {
            "in_time": len(self.in_time),
            "too_late": len(self.too_late),
            "missed": len(self.missed),
            "false_positives": len(self.false_positives),
        }

    def to_dict(self) -> dict:
        return {
            "in_time": list(self.in_time),
            "too_late": list(self.too_late),
            "missed": list(self.missed),
            "false_positives": list(self.false_positives),
            "counts": self.counts(),
        }


def postmortem(events: Sequence[DeviationEvent], incidents: Sequence[GroundTruthIncident]) -> PostmortemReport:
    """Classify incidents as detected in time, too late, or missed.

    An event matches an incident when it references the incident's function
    node and occurs at or after the incident start; events matching no
    incident are false positives.
    """
    in_time, too_late, missed = [], [], []
    matched_events: set = set()
    for incident in incidents:
        matching = [e for e in events if e.node == incident.node and e.timestamp >= incident.start]
        matched_events.update(e.id for e in matching)
        if not matching:
            missed.append(incident.id)
        elif min(e.timestamp for e in matching) <= incident.detected_deadline:
            in_time.append(incident.id)
        else:
            too_late.append(incident.id)
    false_positives = [e.id for e in events if e.id not in matched_events]
    return PostmortemReport(tuple(in_time), tuple(too_late), tuple(missed), tuple(false_positives))
