"""Green-yellow-red color scale used by all scene kinds."""

from __future__ import annotations

import math

GREEN = (46, 204, 64)
YELLOW = (255, 220, 0)
RED = (255, 65, 54)


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def color_scale(x: float) -> tuple:
    """Piecewise-linear green -> yellow (at 0.5) -> red, clamped to [0,1].

    Channels are rounded half-up so the scale is reproducible across
    platforms.
    """
    x = 0.0 if x < 0 else 1.0 if x > 1 else float(x)
    if x <= 0.5:
        a, b, f = GREEN, YELLOW, x / 0.5
    else:
        a, b, f = YELLOW, RED, (x - 0.5) / 0.5
    return tuple(_round_half_up(a[i] + (b[i] - a[i]) * f) for i in range(3))


def legend(label: str = "status") -> dict:
    """Scale description embedded in every scene document."""
    return {
        "label": label,
        "stops": [
            {"x": 0.0, "rgb": list(GREEN)},
            {"x": 0.5, "rgb": list(YELLOW)},
            {"x": 1.0, "rgb": list(RED)},
        ],
    }
