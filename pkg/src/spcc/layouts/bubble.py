"""Risk portfolio bubbles: probability vs. importance, area proportional
to possible damage, action quadrant per 0.5 thresholds."""

from __future__ import annotations

import math
from typing import Sequence

from ..model import Risk
from .scene import BUBBLE_R_MAX, BubbleItem, SceneDocument, SceneKind

QUADRANT_COLORS = {
    "ACCEPT": (46, 204, 64),
    "WATCH": (255, 220, 0),
    "PREVENT": (255, 133, 27),
    "MITIGATE": (255, 65, 54),
}


def quadrant_of(probability: float, importance: float, threshold: float = 0.5) -> str:
    if probability >= threshold:
        return "MITIGATE" if importance >= threshold else "WATCH"
    return "PREVENT" if importance >= threshold else "ACCEPT"


def bubble_portfolio(risks: Sequence[Risk], meta: dict | None = None,
                     threshold: float = 0.5, r_max: float = BUBBLE_R_MAX) -> SceneDocument:
    """Scene with one bubble per risk; an empty register yields an empty,
    valid scene. Radii scale with sqrt(damage / max damage) so bubble area
    is proportional to damage; when every damage is equal (including all
    zero) every radius is r_max.
    """
    max_damage = max((r.damage for r in risks), default=0.0)
    items = []
    for risk in risks:
        if max_damage > 0:
            radius = r_max * math.sqrt(risk.damage / max_damage)
        else:
            radius = r_max
        q = quadrant_of(risk.probability, risk.importance, threshold)
        items.append(BubbleItem(
            risk=risk.id,
            x=risk.probability,
            y=risk.importance,
            r=radius,
            color=QUADRANT_COLORS[q],
            quadrant=q,
        ))
    return SceneDocument(
        kind=SceneKind.BUBBLE,
        items=tuple(b.to_item() for b in items),
        legend={
            "label": "action quadrant",
            "stops": [{"x": i / 3, "rgb": list(QUADRANT_COLORS[q])}
                      for i, q in enumerate(("ACCEPT", "WATCH", "PREVENT", "MITIGATE"))],
        },
        meta=dict(meta or {"node": "", "as_of": None}, quadrant_threshold=threshold),
    )
