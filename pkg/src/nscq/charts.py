"""Minimal hand-rolled SVG line charts for sweep results (no plotting deps).

Presentation only: solid polyline per (K, k) series of seed-averaged success
probability versus network size, dashed polyline for the matching baseline.
"""
from __future__ import annotations

from collections import defaultdict

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)


def render_sweep_svg(rows, width: int = 720, height: int = 480,
                     title: str = "Success probability vs network size") -> str:
    """Render sweep rows (objects with n, K, k, success, baseline) as SVG."""
    usable = [r for r in rows if r.success is not None]
    if not usable:
        raise ValueError("no plottable rows (every cell was skipped)")
    series: dict[tuple[int, int], dict[int, list]] = defaultdict(lambda: defaultdict(list))
    for r in usable:
        series[(r.K, r.k)][r.n].append(r)

    left, right, top, bottom = 64, 24, 48, 56
    plot_w, plot_h = width - left - right, height - top - bottom
    sizes = sorted({r.n for r in usable})
    lo, hi = min(sizes), max(sizes)
    span = max(hi - lo, 1)

    def sx(n):
        return left + plot_w * (n - lo) / span

    def sy(p):
        return top + plot_h * (1.0 - p)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(tick)
        parts.append(f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" '
                     'stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{tick:g}</text>')
    for n in sizes:
        xpos = sx(n)
        parts.append(f'<line x1="{xpos:.1f}" y1="{top + plot_h}" x2="{xpos:.1f}" '
                     f'y2="{top + plot_h + 4}" stroke="black"/>')
        parts.append(f'<text x="{xpos:.1f}" y="{top + plot_h + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{n}</text>')
    parts.append(f'<text x="{left + plot_w / 2:.1f}" y="{height - 12}" '
                 'text-anchor="middle" font-family="sans-serif" font-size="12">'
                 'network size n</text>')

    for color_idx, ((K, k), by_n) in enumerate(sorted(series.items())):
        color = _PALETTE[color_idx % len(_PALETTE)]
        pts = [(sx(n), sy(_mean(r.success for r in by_n[n]))) for n in sorted(by_n)]
        base = [(sx(n), sy(_mean(r.baseline for r in by_n[n]))) for n in sorted(by_n)]
        line = " ".join(f"{px:.1f},{py:.1f}" for px, py in pts)
        dash = " ".join(f"{px:.1f},{py:.1f}" for px, py in base)
        parts.append(f'<polyline points="{line}" fill="none" stroke="{color}" '
                     'stroke-width="2"/>')
        parts.append(f'<polyline points="{dash}" fill="none" stroke="{color}" '
                     'stroke-width="1" stroke-dasharray="5,4"/>')
        ly = top + 16 * color_idx
        parts.append(f'<line x1="{left + plot_w - 140}" y1="{ly}" '
                     f'x2="{left + plot_w - 116}" y2="{ly}" stroke="{color}" '
                     'stroke-width="2"/>')
        parts.append(f'<text x="{left + plot_w - 110}" y="{ly + 4}" '
                     f'font-family="sans-serif" font-size="11">K={K}, k={k} '
                     '(dashed: baseline)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
