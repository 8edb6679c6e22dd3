"""Static SVG export for the 2D scene kinds (GANTT, BUBBLE, TIMESERIES,
TABLE). 3D kinds are exported as structured scenes and rendered by the
cockpit."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .layouts import SceneDocument, SceneKind
from .serialization import parse_instant


def _rgb(color) -> str:
    r, g, b = color
    return f"rgb({r},{g},{b})"


def scene_to_svg(doc: SceneDocument, width: int = 900) -> str:
    if doc.kind == SceneKind.GANTT:
        return _gantt_svg(doc, width)
    if doc.kind == SceneKind.BUBBLE:
        return _bubble_svg(doc, min(width, 600))
    if doc.kind == SceneKind.TIMESERIES:
        return _timeseries_svg(doc, width)
    if doc.kind == SceneKind.TABLE:
        return _table_svg(doc, width)
    raise ValueError(f"no SVG export for scene kind {doc.kind!r} (export the structured scene instead)")


def _svg(width: int, height: int, body: list) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, *body, "</svg>"])


def _gantt_svg(doc: SceneDocument, width: int) -> str:
    label_w, row_h, pad = 180, 22, 4
    window = doc.meta["window"]
    days = max(1, window["days"])
    scale = (width - label_w - 10) / days
    body = []
    for item in doc.items:
        y = 10 + item["row"] * row_h
        indent = 10 + item["depth"] * 12
        name = escape(item["name"])
        weight = ' font-weight="bold"' if item["is_parent"] else ""
        body.append(f'<text x="{indent}" y="{y + row_h - 8}"{weight}>{name}</text>')
        x = label_w + item["bar_start"] * scale
        w = max(1.0, item["bar_days"] * scale)
        body.append(f'<rect x="{x:.1f}" y="{y}" width="{w:.1f}" height="{row_h - 2 * pad}" '
                    f'fill="{_rgb(item["color"])}" fill-opacity="0.35"/>')
        if item["progress"] > 0:
            body.append(f'<rect x="{x:.1f}" y="{y}" width="{w * item["progress"]:.1f}" '
                        f'height="{row_h - 2 * pad}" fill="{_rgb(item["color"])}"/>')
        if item["actual_bar_start"] is not None:
            ax = label_w + item["actual_bar_start"] * scale
            aw = max(1.0, item["actual_bar_days"] * scale)
            body.append(f'<rect x="{ax:.1f}" y="{y + row_h - 2 * pad - 4}" width="{aw:.1f}" '
                        f'height="4" fill="{_rgb(item["actual_color"])}"/>')
    height = 20 + len(doc.items) * row_h
    tx = label_w + window["today_offset"] * scale
    body.append(f'<line x1="{tx:.1f}" y1="5" x2="{tx:.1f}" y2="{height - 5}" '
                f'stroke="rgb(255,65,54)" stroke-dasharray="4,3"/>')
    return _svg(width, height, body)


def _bubble_svg(doc: SceneDocument, size: int) -> str:
    pad = 40
    span = size - 2 * pad

    def sx(v):
        return pad + v * span

    def sy(v):
        return size - pad - v * span

    threshold = doc.meta.get("quadrant_threshold", 0.5)
    body = [
        f'<rect x="{pad}" y="{pad}" width="{span}" height="{span}" fill="none" stroke="#999"/>',
        f'<line x1="{sx(threshold)}" y1="{pad}" x2="{sx(threshold)}" y2="{size - pad}" stroke="#bbb"/>',
        f'<line x1="{pad}" y1="{sy(threshold)}" x2="{size - pad}" y2="{sy(threshold)}" stroke="#bbb"/>',
        f'<text x="{size / 2}" y="{size - 8}" text-anchor="middle">probability</text>',
        f'<text x="12" y="{size / 2}" transform="rotate(-90 12 {size / 2})" text-anchor="middle">importance</text>',
    ]
    for item in doc.items:
        body.append(f'<circle cx="{sx(item["x"]):.1f}" cy="{sy(item["y"]):.1f}" '
                    f'r="{max(2.0, item["r"] * span):.1f}" fill="{_rgb(item["color"])}" '
                    f'fill-opacity="0.7" stroke="{_rgb(item["color"])}"/>')
        body.append(f'<text x="{sx(item["x"]):.1f}" y="{sy(item["y"]) - item["r"] * span - 3:.1f}" '
                    f'text-anchor="middle">{escape(item["risk"])}</text>')
    return _svg(size, size, body)


def _timeseries_svg(doc: SceneDocument, width: int) -> str:
    height, pad = 320, 40
    all_points = [(parse_instant(p["t"]).timestamp(), p["v"])
                  for item in doc.items for p in item["points"]]
    body = [f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
            f'fill="none" stroke="#999"/>']
    if all_points:
        t_lo, t_hi = min(t for t, _ in all_points), max(t for t, _ in all_points)
        v_lo, v_hi = min(v for _, v in all_points), max(v for _, v in all_points)
        t_span = (t_hi - t_lo) or 1.0
        v_span = (v_hi - v_lo) or 1.0

        def px(t):
            return pad + (t - t_lo) / t_span * (width - 2 * pad)

        def py(v):
            return height - pad - (v - v_lo) / v_span * (height - 2 * pad)

        for item in doc.items:
            pts = " ".join(f"{px(parse_instant(p['t']).timestamp()):.1f},{py(p['v']):.1f}"
                           for p in item["points"])
            if pts:
                body.append(f'<polyline points="{pts}" fill="none" '
                            f'stroke="{_rgb(item["color"])}" stroke-width="2"/>')
        for i, item in enumerate(doc.items):
            body.append(f'<text x="{pad + 4}" y="{pad + 14 + i * 14}" '
                        f'fill="{_rgb(item["color"])}">{escape(item["name"])}</text>')
    else:
        body.append(f'<text x="{width / 2}" y="{height / 2}" text-anchor="middle">no data yet</text>')
    return _svg(width, height, body)


def _table_svg(doc: SceneDocument, width: int) -> str:
    row_h = 20
    body = []
    for i, row in enumerate(doc.items):
        y = 16 + i * row_h
        body.append(f'<rect x="8" y="{y - 11}" width="12" height="12" fill="{_rgb(row["color"])}"/>')
        value = "" if row["value"] is None else f"{row['value']:.6g}"
        text = f'{row["name"]}: {row["status"]} {value} | {row["explanation"]}'
        body.append(f'<text x="26" y="{y}">{escape(text)}</text>')
    if not doc.items:
        body.append('<text x="26" y="16">no indicators</text>')
    return _svg(width, 24 + max(1, len(doc.items)) * row_h, body)
