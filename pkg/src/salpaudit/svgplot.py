"""Minimal deterministic SVG emission for result reporting.

Plots are plain SVG 1.1 text built with fixed formatting so the same inputs
always produce the same bytes. Log-scaled axes clamp nonpositive values to a
floor that is recorded in the SVG <metadata> block.
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import backend
from .core import RngStream

DEFAULT_LOG_FLOOR = 1e-16

PALETTE = (
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
    "#66a61e", "#e6ab02", "#a6761d", "#666666",
)

_WIDTH, _HEIGHT = 640, 420
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 150, 40, 50


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def _metadata(extra: dict) -> str:
    meta = {"generator": RngStream.generator_name, "backend": backend.name}
    meta.update(extra)
    return f"<metadata>{json.dumps(meta, sort_keys=True)}</metadata>"


def _svg(body: list[str], title: str, extra_meta: dict) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    )
    parts = [head, _metadata(extra_meta)]
    parts.append(f'<text x="{_MARGIN_L}" y="24" font-size="15" font-family="sans-serif">{title}</text>')
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _log_clamp(values: np.ndarray, floor: float) -> np.ndarray:
    return np.log10(np.maximum(values, floor))


def _y_pixel(logv, lo, hi):
    span = hi - lo if hi > lo else 1.0
    frac = (logv - lo) / span
    return _HEIGHT - _MARGIN_B - frac * (_HEIGHT - _MARGIN_T - _MARGIN_B)


def _log_axis(lo: float, hi: float) -> list[str]:
    items = [
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{_HEIGHT - _MARGIN_B}" stroke="black"/>',
        f'<line x1="{_MARGIN_L}" y1="{_HEIGHT - _MARGIN_B}" x2="{_WIDTH - _MARGIN_R}" '
        f'y2="{_HEIGHT - _MARGIN_B}" stroke="black"/>',
    ]
    for decade in range(int(math.floor(lo)), int(math.ceil(hi)) + 1):
        y = _y_pixel(decade, lo, hi)
        if not _MARGIN_T <= y <= _HEIGHT - _MARGIN_B:
            continue
        items.append(f'<line x1="{_MARGIN_L - 5}" y1="{_fmt(y)}" x2="{_MARGIN_L}" y2="{_fmt(y)}" stroke="black"/>')
        items.append(
            f'<text x="{_MARGIN_L - 8}" y="{_fmt(y + 4)}" font-size="11" '
            f'font-family="sans-serif" text-anchor="end">1e{decade}</text>'
        )
    return items


def abf_line_plot(curves: list[tuple[str, np.ndarray]], title: str,
                  log_floor: float = DEFAULT_LOG_FLOOR) -> str:
    """One polyline per algorithm: iteration (1-based) vs average best
    fitness on a log10 axis."""
    logged = [(label, _log_clamp(np.asarray(c, dtype=np.float64), log_floor)) for label, c in curves]
    lo = min(float(np.min(c)) for _, c in logged)
    hi = max(float(np.max(c)) for _, c in logged)
    if hi == lo:
        hi = lo + 1.0
    body = _log_axis(lo, hi)
    length = max(c.size for _, c in logged)
    x_span = _WIDTH - _MARGIN_L - _MARGIN_R
    for idx, (label, c) in enumerate(logged):
        color = PALETTE[idx % len(PALETTE)]
        points = []
        for i, v in enumerate(c):
            x = _MARGIN_L + (i / max(1, length - 1)) * x_span
            points.append(f"{_fmt(x)},{_fmt(_y_pixel(v, lo, hi))}")
        body.append(
            f'<polyline class="abf" fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{" ".join(points)}"/>'
        )
        ly = _MARGIN_T + 16 * idx + 10
        body.append(
            f'<rect x="{_WIDTH - _MARGIN_R + 10}" y="{ly - 9}" width="12" height="3" fill="{color}"/>'
        )
        body.append(
            f'<text x="{_WIDTH - _MARGIN_R + 28}" y="{ly}" font-size="12" '
            f'font-family="sans-serif">{label}</text>'
        )
    body.append(
        f'<text x="{(_MARGIN_L + _WIDTH - _MARGIN_R) // 2}" y="{_HEIGHT - 14}" font-size="12" '
        f'font-family="sans-serif" text-anchor="middle">iteration</text>'
    )
    return _svg(body, title, {"log_floor": log_floor, "plot": "abf"})


def _box_stats(values: np.ndarray) -> dict:
    q1, q2, q3 = (float(np.percentile(values, q)) for q in (25, 50, 75))
    iqr = q3 - q1
    in_lo = values[values >= q1 - 1.5 * iqr]
    in_hi = values[values <= q3 + 1.5 * iqr]
    lo = float(np.min(in_lo)) if in_lo.size else q1
    hi = float(np.max(in_hi)) if in_hi.size else q3
    outliers = values[(values < lo) | (values > hi)]
    return {"q1": q1, "median": q2, "q3": q3, "lo": lo, "hi": hi, "outliers": outliers}


def box_summary_plot(samples: list[tuple[str, np.ndarray]], title: str,
                     log_floor: float = DEFAULT_LOG_FLOOR) -> str:
    """Median/quartile boxes with whiskers at 1.5*IQR on a log10 axis."""
    clamped = [(label, np.maximum(np.asarray(v, dtype=np.float64), log_floor)) for label, v in samples]
    all_log = _log_clamp(np.concatenate([v for _, v in clamped]), log_floor)
    lo, hi = float(np.min(all_log)), float(np.max(all_log))
    if hi == lo:
        hi = lo + 1.0
    body = _log_axis(lo, hi)
    x_span = _WIDTH - _MARGIN_L - _MARGIN_R
    slot = x_span / len(clamped)
    for idx, (label, values) in enumerate(clamped):
        stats = _box_stats(values)
        cx = _MARGIN_L + slot * (idx + 0.5)
        half = min(28.0, slot * 0.3)
        color = PALETTE[idx % len(PALETTE)]
        y = {k: _y_pixel(math.log10(stats[k]), lo, hi) for k in ("q1", "median", "q3", "lo", "hi")}
        body.append(
            f'<rect class="box" x="{_fmt(cx - half)}" y="{_fmt(y["q3"])}" width="{_fmt(2 * half)}" '
            f'height="{_fmt(y["q1"] - y["q3"])}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>'
        )
        body.append(
            f'<line x1="{_fmt(cx - half)}" y1="{_fmt(y["median"])}" x2="{_fmt(cx + half)}" '
            f'y2="{_fmt(y["median"])}" stroke="{color}" stroke-width="2"/>'
        )
        for end in ("lo", "hi"):
            body.append(
                f'<line x1="{_fmt(cx)}" y1="{_fmt(y["q1" if end == "lo" else "q3"])}" '
                f'x2="{_fmt(cx)}" y2="{_fmt(y[end])}" stroke="{color}"/>'
            )
            body.append(
                f'<line x1="{_fmt(cx - half / 2)}" y1="{_fmt(y[end])}" '
                f'x2="{_fmt(cx + half / 2)}" y2="{_fmt(y[end])}" stroke="{color}"/>'
            )
        for v in stats["outliers"]:
            oy = _y_pixel(math.log10(max(v, log_floor)), lo, hi)
            body.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(oy)}" r="2" fill="{color}"/>')
        body.append(
            f'<text x="{_fmt(cx)}" y="{_HEIGHT - _MARGIN_B + 16}" font-size="11" '
            f'font-family="sans-serif" text-anchor="middle">{label}</text>'
        )
    return _svg(body, title, {"log_floor": log_floor, "plot": "box"})


def swarm_scatter_plot(initial_positions: np.ndarray, snapshots: np.ndarray,
                       leader_count: int, bound: float, title: str) -> str:
    """Small-multiple scatter of the first two coordinates: the start panel
    (labeled) followed by one panel per recorded iteration; leader-rule
    members are drawn distinctly."""
    frames = [initial_positions] + [snapshots[t] for t in range(snapshots.shape[0])]
    cols = min(6, len(frames))
    rows = (len(frames) + cols - 1) // cols
    panel = 100.0
    pad = 8.0
    width = int(cols * (panel + pad) + pad)
    height = int(rows * (panel + pad) + pad + 30)

    def px(v, origin):
        return origin + (v + bound) / (2 * bound) * panel

    body = []
    for f, frame in enumerate(frames):
        ox = pad + (f % cols) * (panel + pad)
        oy = 30 + pad + (f // cols) * (panel + pad)
        body.append(
            f'<rect x="{_fmt(ox)}" y="{_fmt(oy)}" width="{_fmt(panel)}" height="{_fmt(panel)}" '
            f'fill="none" stroke="#999"/>'
        )
        caption = "Start" if f == 0 else f"iter {f}"
        body.append(
            f'<text x="{_fmt(ox + 2)}" y="{_fmt(oy - 2)}" font-size="9" '
            f'font-family="sans-serif">{caption}</text>'
        )
        for i, pos in enumerate(frame):
            cx = px(pos[0], ox)
            cy = oy + panel - (px(pos[1], 0.0))
            if i < leader_count:
                body.append(
                    f'<circle class="leader" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.4" '
                    f'fill="#d95f02" stroke="black" stroke-width="0.4"/>'
                )
            else:
                body.append(
                    f'<circle class="follower" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="1.6" fill="#1b9e77"/>'
                )
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )
    parts = [head, _metadata({"plot": "dynamics", "bound": bound, "leader_count": leader_count})]
    parts.append(f'<text x="{pad}" y="18" font-size="13" font-family="sans-serif">{title}</text>')
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
