"""Hierarchical Gantt rows: one row per task in depth-first plan order,
parents summarized by rollup."""

from __future__ import annotations

from datetime import date
from typing import Sequence

from ..model import Task, rollup, validate_plan
from ..errors import PlanInvalid
from .colors import legend
from .scene import SceneDocument, SceneKind

PLANNED_COLOR = (70, 130, 180)
ACTUAL_COLOR = (46, 204, 64)


def gantt_layout(plan: Sequence[Task], today: date, meta: dict | None = None) -> SceneDocument:
    """Scene with one row per task; depth-first plan order, indentation by
    depth, parent rows rolled up, day-resolution bar coordinates relative
    to the chart start, plus a "today" marker.
    """
    violations = validate_plan(plan)
    if violations:
        raise PlanInvalid(violations)

    children: dict = {t.id: [] for t in plan}
    for t in plan:
        if t.parent is not None:
            children[t.parent].append(t)
    roots = [t for t in plan if t.parent is None]

    rows = []  # (task-or-rollup, depth, is_parent)

    def visit(task: Task, depth: int):
        kids = children[task.id]
        rows.append((rollup(plan, task.id) if kids else task, depth, bool(kids)))
        for kid in kids:
            visit(kid, depth + 1)

    for root in roots:
        visit(root, 0)

    if rows:
        chart_start = min(t.planned_start for t, _, _ in rows)
        chart_end = max(t.planned_end for t, _, _ in rows)
        for t, _, _ in rows:
            if t.actual_start:
                chart_start = min(chart_start, t.actual_start)
            if t.actual_end:
                chart_end = max(chart_end, t.actual_end)
        chart_start = min(chart_start, today)
        chart_end = max(chart_end, today)
    else:
        chart_start = chart_end = today

    def day(d: date) -> int:
        return (d - chart_start).days

    items = []
    for row_index, (t, depth, is_parent) in enumerate(rows):
        item = {
            "id": t.id,
            "name": t.name,
            "row": row_index,
            "depth": depth,
            "is_parent": is_parent,
            "planned_start": t.planned_start.isoformat(),
            "planned_end": t.planned_end.isoformat(),
            "bar_start": day(t.planned_start),
            # Bars span whole days, so a one-day task is one unit wide.
            "bar_days": day(t.planned_end) - day(t.planned_start) + 1,
            "progress": t.percent_complete,
            "color": list(PLANNED_COLOR),
            "actual_start": t.actual_start.isoformat() if t.actual_start else None,
            "actual_end": t.actual_end.isoformat() if t.actual_end else None,
        }
        if t.actual_start:
            until = t.actual_end if t.actual_end else today
            item["actual_bar_start"] = day(t.actual_start)
            item["actual_bar_days"] = max(1, day(until) - day(t.actual_start) + 1)
            item["actual_color"] = list(ACTUAL_COLOR)
        else:
            item["actual_bar_start"] = None
            item["actual_bar_days"] = None
            item["actual_color"] = None
        item["actions"] = []
        items.append(item)

    return SceneDocument(
        kind=SceneKind.GANTT,
        items=tuple(items),
        legend=legend("progress"),
        meta=dict(meta or {"node": "", "as_of": None},
                  window={
                      "start": chart_start.isoformat(),
                      "end": chart_end.isoformat(),
                      "days": (chart_end - chart_start).days + 1,
                      "today": today.isoformat(),
                      "today_offset": (today - chart_start).days,
                  }),
    )
