"""Static SVG line charts for metrics CSVs — no plotting dependency.

Output is a plain-text SVG assembled from formatted strings only, so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import os

from .harness import read_metrics_csv

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 20, 48
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)
X_COLUMNS = ("iterations", "executions")


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def render_loss_svg(csv_paths, x_axis: str, out_path) -> None:
    """One polyline per CSV, loss against iterations or cumulative executions."""
    if x_axis not in X_COLUMNS:
        raise ValueError(f"x_axis must be one of {X_COLUMNS}, got {x_axis!r}")
    if not csv_paths:
        raise ValueError("need at least one CSV path")
    series = []
    for path in csv_paths:
        rows = read_metrics_csv(path)
        if not rows:
            raise ValueError(f"{path}: no data rows")
        xs = [r.iteration if x_axis == "iterations" else r.executions for r in rows]
        ys = [r.loss for r in rows]
        label = os.path.splitext(os.path.basename(str(path)))[0]
        series.append((label, xs, ys))

    x_lo = min(min(xs) for _, xs, _ in series)
    x_hi = max(max(xs) for _, xs, _ in series)
    y_lo = min(min(ys) for _, _, ys in series)
    y_hi = max(max(ys) for _, _, ys in series)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>',
    ]
    for tick in _ticks(x_lo, x_hi):
        px = sx(tick)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{MARGIN_T + plot_h}" x2="{_fmt(px)}" '
            f'y2="{MARGIN_T + plot_h + 5}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{MARGIN_T + plot_h + 20}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle">'
            f"{_fmt(tick)}</text>"
        )
    for tick in _ticks(y_lo, y_hi):
        py = sy(tick)
        parts.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(py)}" x2="{MARGIN_L}" '
            f'y2="{_fmt(py)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(py)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end" dominant-baseline="middle">'
            f"{_fmt(tick)}</text>"
        )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 10}" '
        f'font-family="sans-serif" font-size="13" text-anchor="middle">'
        f"{x_axis}</text>"
    )
    parts.append(
        f'<text x="14" y="{MARGIN_T + plot_h / 2:.0f}" '
        f'font-family="sans-serif" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {MARGIN_T + plot_h / 2:.0f})">loss</text>'
    )
    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 14 + 16 * k
        parts.append(
            f'<line x1="{MARGIN_L + plot_w - 130}" y1="{ly - 4}" '
            f'x2="{MARGIN_L + plot_w - 106}" y2="{ly - 4}" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L + plot_w - 100}" y="{ly}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    with open(out_path, "w", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
