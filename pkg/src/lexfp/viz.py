"""Fingerprint profile plots as standalone SVG, plus plot-ready CSV export.

Rendering is a pure function of the plot spec: identical inputs produce
byte-identical SVG, so plots are diffable and safe to golden-test.
"""

import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import escape

from lexfp.fingerprint import Fingerprint
from lexfp.labeling import format_score
from lexfp.tsp import LabelAxis

Y_FIXED = (-1.0, 1.0)
Y_AUTO = "auto"

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
)
_MARGIN_LEFT = 56
_MARGIN_RIGHT = 16
_MARGIN_TOP = 20
_MARGIN_BOTTOM = 112

# Vertical pixels per legend entry; callers stacking many fingerprints can
# grow height_px by this much per fingerprint to keep the plot area fixed.
LEGEND_ROW_PX = 16


@dataclass(frozen=True)
class PlotSpec:
    """Everything `render_svg` and `export_plot_csv` need, validated upfront."""

    fingerprints: tuple[Fingerprint, ...]
    axis: LabelAxis
    width_px: int = 900
    height_px: int = 380
    label_every: int = 1
    y_range: tuple[float, float] | str = Y_FIXED

    def __post_init__(self) -> None:
        if not self.fingerprints:
            raise ValueError("plot needs at least one fingerprint")
        if not self.axis.order:
            raise ValueError("empty label axis")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError("plot dimensions must be positive")
        if self.label_every < 1:
            raise ValueError("label_every must be >= 1")
        for fp in self.fingerprints:
            if fp.axis_id != self.axis.axis_id or len(fp.values) != len(self.axis.order):
                raise ValueError(f"fingerprint {fp.ref_label} was computed on a different axis")
        if self.y_range != Y_AUTO:
            lo, hi = self.y_range
            if not lo < hi:
                raise ValueError("y_range must be (low, high) with low < high")


def _resolve_y_range(spec: PlotSpec) -> tuple[float, float]:
    if spec.y_range != Y_AUTO:
        return spec.y_range  # type: ignore[return-value]
    lo = min(float(fp.values.min()) for fp in spec.fingerprints)
    hi = max(float(fp.values.max()) for fp in spec.fingerprints)
    if lo == hi:
        return lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def render_svg(spec: PlotSpec) -> str:
    """One polyline per fingerprint across the axis, with legend and ticks."""
    n = len(spec.axis.order)
    legend_h = LEGEND_ROW_PX * len(spec.fingerprints)
    top = _MARGIN_TOP + legend_h
    plot_w = spec.width_px - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = spec.height_px - top - _MARGIN_BOTTOM
    if plot_w < 10 or plot_h < 10:
        raise ValueError("plot dimensions too small for margins and legend")
    y_lo, y_hi = _resolve_y_range(spec)

    def x_at(i: int) -> float:
        if n == 1:
            return _MARGIN_LEFT + plot_w / 2.0
        return _MARGIN_LEFT + i * plot_w / (n - 1)

    def y_at(v: float) -> float:
        return top + (y_hi - v) * plot_h / (y_hi - y_lo)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
        '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width_px}" height="{spec.height_px}" '
        f'viewBox="0 0 {spec.width_px} {spec.height_px}">',
        f'<rect x="0" y="0" width="{spec.width_px}" height="{spec.height_px}" fill="#ffffff"/>',
        f'<rect x="{_MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#cccccc"/>',
    ]

    # y ticks at the range ends and midpoint, plus a gridline at zero
    ticks = sorted({y_lo, (y_lo + y_hi) / 2.0, y_hi})
    for tv in ticks:
        ty = y_at(tv)
        out.append(
            f'<line x1="{_MARGIN_LEFT - 4}" y1="{ty:.2f}" x2="{_MARGIN_LEFT}" y2="{ty:.2f}" '
            f'stroke="#666666"/>'
        )
        out.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{ty + 4:.2f}" font-size="11" '
            f'text-anchor="end" fill="#333333">{tv:g}</text>'
        )
    if y_lo < 0.0 < y_hi:
        zy = y_at(0.0)
        out.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{zy:.2f}" x2="{_MARGIN_LEFT + plot_w}" y2="{zy:.2f}" '
            f'stroke="#999999" stroke-dasharray="4 3"/>'
        )

    # x ticks: every label_every-th term, rotated so long labels stay readable
    bottom = top + plot_h
    for i in range(0, n, spec.label_every):
        tx = x_at(i)
        out.append(
            f'<line x1="{tx:.2f}" y1="{bottom}" x2="{tx:.2f}" y2="{bottom + 4}" stroke="#666666"/>'
        )
        out.append(
            f'<text x="{tx:.2f}" y="{bottom + 8}" font-size="10" text-anchor="end" '
            f'fill="#333333" transform="rotate(-60 {tx:.2f} {bottom + 8})">'
            f"{escape(spec.axis.order[i])}</text>"
        )

    for idx, fp in enumerate(spec.fingerprints):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(
            f"{x_at(i):.2f},{y_at(float(v)):.2f}" for i, v in enumerate(fp.values)
        )
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        ly = _MARGIN_TOP + idx * LEGEND_ROW_PX
        out.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{ly:.2f}" x2="{_MARGIN_LEFT + 24}" y2="{ly:.2f}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{_MARGIN_LEFT + 30}" y="{ly + 4:.2f}" font-size="11" '
            f'fill="#333333">{escape(fp.ref_label)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_plot_csv(spec: PlotSpec) -> str:
    """Long-format rows `term,position,cluster,nmi` for external plotting tools."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["term", "position", "cluster", "nmi"])
    for fp in spec.fingerprints:
        for pos, term in enumerate(spec.axis.order):
            writer.writerow([term, pos, fp.ref_label, format_score(float(fp.values[pos]))])
    return buf.getvalue()
