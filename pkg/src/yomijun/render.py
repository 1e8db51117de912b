"""Static reading-path overlays.

Draws each reading order as a polyline through successive character
centers, in pixel coordinates, over optional bounding boxes.  Output is a
hand-assembled SVG string so that identical input yields identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Page, ReadingOrder, check_permutation

# Overlay palette keyed by conventional model names.
DEFAULT_COLORS = {
    "ground_truth": "blue",
    "gt": "blue",
    "simple": "red",
    "adaptive": "green",
    "deep": "violet",
    "deepar": "violet",
}
FALLBACK_COLORS = ("blue", "red", "green", "violet", "orange", "teal", "brown")


@dataclass(frozen=True)
class RenderSpec:
    page: Page
    orders: tuple[tuple[str, ReadingOrder, str], ...]
    stroke_width: float = 3.0
    draw_boxes: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(self.orders))
        for name, order, _ in self.orders:
            check_permutation(order, len(self.page.chars), self.page.page_id)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_paths(spec: RenderSpec) -> str:
    page = spec.page
    w_px, h_px = page.image_width, page.image_height
    chars = page.chars_by_id()
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_px}" height="{h_px}" '
        f'viewBox="0 0 {w_px} {h_px}">',
        f'<rect x="0" y="0" width="{w_px}" height="{h_px}" fill="white"/>',
    ]
    if spec.draw_boxes:
        for c in chars:
            out.append(
                f'<rect x="{_fmt(c.x * w_px)}" y="{_fmt(c.y * h_px)}" '
                f'width="{_fmt(c.w * w_px)}" height="{_fmt(c.h * h_px)}" '
                'fill="none" stroke="gray" stroke-width="1"/>'
            )
    for idx, (name, order, color) in enumerate(spec.orders):
        pts = [(chars[i].center_x * w_px, chars[i].center_y * h_px) for i in order]
        if len(pts) > 1:
            path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
            out.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" '
                f'stroke-width="{_fmt(spec.stroke_width)}" stroke-opacity="0.6"/>'
            )
        if pts:
            x0, y0 = pts[0]
            out.append(
                f'<circle cx="{_fmt(x0)}" cy="{_fmt(y0)}" '
                f'r="{_fmt(2 * spec.stroke_width)}" fill="{color}"/>'
            )
        out.append(
            f'<text x="10" y="{20 * (idx + 1)}" font-size="16" '
            f'fill="{color}">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def color_for(name: str, index: int) -> str:
    return DEFAULT_COLORS.get(name.lower(), FALLBACK_COLORS[index % len(FALLBACK_COLORS)])
