"""Pure geometry producers for the view families."""

from .bubble import bubble_portfolio, quadrant_of
from .colors import color_scale, legend
from .force import ForceParams, force_layout, layout_energy
from .gantt import gantt_layout
from .scene import (
    BUBBLE_R_MAX,
    BubbleItem,
    Cuboid,
    GraphScene,
    SceneDocument,
    SceneKind,
)
from .treemap import MetricTree, TreemapAlgo, layout_rects, max_aspect_ratio, treemap3d

__all__ = [
    "BUBBLE_R_MAX",
    "BubbleItem",
    "Cuboid",
    "ForceParams",
    "GraphScene",
    "MetricTree",
    "SceneDocument",
    "SceneKind",
    "TreemapAlgo",
    "bubble_portfolio",
    "color_scale",
    "force_layout",
    "gantt_layout",
    "layout_energy",
    "layout_rects",
    "legend",
    "max_aspect_ratio",
    "quadrant_of",
    "treemap3d",
]
