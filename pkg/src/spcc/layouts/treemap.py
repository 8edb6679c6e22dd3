"""3D treemap layout: slice-and-dice and squarified planar algorithms with
height and color channels per leaf.

Rectangle edges come from shared cumulative sums, so sibling regions tile
their parent exactly (no gaps, no overlap); a node's region always equals
the union of its children's regions.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegenerateTree
from .colors import color_scale, legend
from .scene import Cuboid, SceneDocument, SceneKind


class TreemapAlgo:
    SLICE_DICE = "SLICE_DICE"
    SQUARIFIED = "SQUARIFIED"


@dataclass(frozen=True)
class MetricTree:
    """Hierarchy node carrying the three mapped metrics.

    `size` drives base area (leaves only; internal sizes are the sum of
    their children), `height` the cuboid height, `color` the fill color.
    """

    entity: str
    size: float = 0.0
    height: float = 0.0
    color: float = 0.0
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(
            c if isinstance(c, MetricTree) else MetricTree(**c) for c in self.children
        ))
        if self.size < 0:
            raise ValueError(f"node {self.entity}: size must be >= 0")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def subtree_size(self) -> float:
        if self.is_leaf:
            return self.size
        return sum(c.subtree_size() for c in self.children)

    def leaves(self) -> list:
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    @staticmethod
    def from_dict(doc: dict) -> "MetricTree":
        return MetricTree(
            entity=doc["entity"],
            size=doc.get("size", 0.0),
            height=doc.get("height", 0.0),
            color=doc.get("color", 0.0),
            children=tuple(MetricTree.from_dict(c) for c in doc.get("children", ())),
        )


def _worst_ratio(areas, side: float) -> float:
    s = sum(areas)
    if s <= 0 or side <= 0:
        return float("inf")
    s2, w2 = s * s, side * side
    return max(max(w2 * a / s2, s2 / (w2 * a)) for a in areas)


def _split_edges(lo: float, extent: float, weights) -> list:
    """Edge positions splitting [lo, lo+extent] proportionally to weights."""
    total = 0.0
    prefix = [0.0]
    for w in weights:
        total += w
        prefix.append(total)
    return [lo + extent * (p / total) for p in prefix]


def _slice_dice(node: MetricTree, rect, depth: int, out: dict):
    out[node.entity] = rect
    kids = [c for c in node.children if c.subtree_size() > 0]
    if not kids:
        return
    x, y, w, h = rect
    weights = [c.subtree_size() for c in kids]
    edges = _split_edges(x if depth % 2 == 0 else y, w if depth % 2 == 0 else h, weights)
    for i, child in enumerate(kids):
        if depth % 2 == 0:
            child_rect = (edges[i], y, edges[i + 1] - edges[i], h)
        else:
            child_rect = (x, edges[i], w, edges[i + 1] - edges[i])
        _slice_dice(child, child_rect, depth + 1, out)


def squarify_row_layout(areas, rect) -> list:
    """Squarified packing of `areas` (descending) into `rect`.

    Returns one (x, y, w, h) per area, in input order. Areas are rescaled
    to sum to the rectangle's area. The greedy rule adds an item to the
    current row while the row's worst aspect ratio does not get worse; each
    row is laid along the shorter side of the remaining rectangle and the
    final row fills it exactly.
    """
    x, y, w, h = rect
    total = sum(areas)
    scale = (w * h) / total
    areas = [a * scale for a in areas]
    rects = []
    i = 0
    n = len(areas)
    while i < n:
        side = min(w, h)
        row = [areas[i]]
        i += 1
        while i < n and _worst_ratio(row + [areas[i]], side) <= _worst_ratio(row, side):
            row.append(areas[i])
            i += 1
        s = sum(row)
        horizontal = w >= h  # row becomes a vertical strip on the left
        if horizontal:
            strip = w if i >= n else s / h
            edges = _split_edges(y, h, row)
            rects.extend((x, edges[j], strip, edges[j + 1] - edges[j]) for j in range(len(row)))
            x += strip
            w -= strip
        else:
            strip = h if i >= n else s / w
            edges = _split_edges(x, w, row)
            rects.extend((edges[j], y, edges[j + 1] - edges[j], strip) for j in range(len(row)))
            y += strip
            h -= strip
    return rects


def _squarified(node: MetricTree, rect, out: dict):
    out[node.entity] = rect
    kids = [c for c in node.children if c.subtree_size() > 0]
    if not kids:
        return
    order = sorted(kids, key=lambda c: (-c.subtree_size(), c.entity))
    rects = squarify_row_layout([c.subtree_size() for c in order], rect)
    for child, child_rect in zip(order, rects):
        _squarified(child, child_rect, out)


def layout_rects(tree: MetricTree, algo: str, rect=(0.0, 0.0, 1.0, 1.0)) -> dict:
    """Region per entity (every node with positive subtree size)."""
    if tree.subtree_size() <= 0:
        raise DegenerateTree("all treemap sizes are zero")
    if algo == TreemapAlgo.SLICE_DICE:
        out: dict = {}
        _slice_dice(tree, rect, 0, out)
        return out
    if algo == TreemapAlgo.SQUARIFIED:
        out = {}
        _squarified(tree, rect, out)
        return out
    raise ValueError(f"unknown treemap algorithm {algo!r}")


def max_aspect_ratio(rects) -> float:
    worst = 1.0
    for _, _, w, h in rects:
        if w > 0 and h > 0:
            worst = max(worst, w / h, h / w)
    return worst


def treemap3d(tree, algo: str = TreemapAlgo.SQUARIFIED, meta: dict | None = None) -> SceneDocument:
    """Scene with one cuboid per positive-size leaf.

    Leaf base areas are proportional to `size` within the unit square;
    heights and colors are normalized to [0,1] by the tree-wide maximum of
    their metric (all-zero or negative maxima flatten to 0). Zero-size
    leaves carry no area and are omitted.
    """
    if isinstance(tree, dict):
        tree = MetricTree.from_dict(tree)
    regions = layout_rects(tree, algo)
    leaves = [leaf for leaf in tree.leaves() if leaf.size > 0]
    h_max = max((leaf.height for leaf in leaves), default=0.0)
    c_max = max((leaf.color for leaf in leaves), default=0.0)

    def norm(v: float, vmax: float) -> float:
        if vmax <= 0:
            return 0.0
        return min(1.0, max(0.0, v / vmax))

    items = []
    for leaf in leaves:
        x, y, w, d = regions[leaf.entity]
        items.append(Cuboid(
            entity=leaf.entity,
            x=x, y=y, w=w, d=d,
            h=norm(leaf.height, h_max),
            color=color_scale(norm(leaf.color, c_max)),
        ))
    return SceneDocument(
        kind=SceneKind.TREEMAP3D,
        items=tuple(c.to_item() for c in items),
        legend=legend("color metric (normalized)"),
        meta=dict(meta or {"node": "", "as_of": None}, algo=algo),
    )
