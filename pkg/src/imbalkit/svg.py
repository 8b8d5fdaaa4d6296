"""Minimal deterministic SVG 1.1 emitters (no timestamps, fixed precision)."""

from __future__ import annotations

import numpy as np

__all__ = ["bar_chart_svg", "heatmap_svg", "roc_svg"]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _esc(s: str) -> str:
    return (str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _header(width: int, height: int) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>\n'
    )


def bar_chart_svg(labels, values, title: str = "", width: int = 640) -> str:
    values = np.asarray(values, dtype=float)
    n = len(labels)
    row_h = 22
    left = 220
    height = 50 + n * row_h
    vmax = float(np.max(np.abs(values))) if n else 1.0
    vmax = vmax if vmax > 0 else 1.0
    scale = (width - left - 30) / vmax
    parts = [_header(width, height)]
    parts.append(f'<text x="10" y="22" font-family="sans-serif" font-size="14">{_esc(title)}</text>\n')
    for i, (label, v) in enumerate(zip(labels, values)):
        y = 40 + i * row_h
        w = abs(v) * scale
        color = "#4878a8" if v >= 0 else "#c44e52"
        parts.append(
            f'<text x="{left - 8}" y="{y + 14}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_esc(label)}</text>\n'
        )
        parts.append(
            f'<rect x="{left}" y="{y}" width="{_fmt(w)}" height="{row_h - 6}" fill="{color}"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(left + w + 4)}" y="{y + 14}" '
            f'font-family="sans-serif" font-size="10">{v:.4f}</text>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def _heat_color(v: float) -> str:
    """0 -> white, 1 -> deep blue."""
    v = min(max(v, 0.0), 1.0)
    r = int(round(255 - 183 * v))
    g = int(round(255 - 135 * v))
    b = int(round(255 - 87 * v))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(matrix, labels, title: str = "") -> str:
    M = np.asarray(matrix, dtype=float)
    n = M.shape[0]
    cell = 26
    left, top = 180, 170
    width = left + n * cell + 30
    height = top + n * cell + 30
    parts = [_header(width, height)]
    parts.append(f'<text x="10" y="22" font-family="sans-serif" font-size="14">{_esc(title)}</text>\n')
    for i, label in enumerate(labels):
        parts.append(
            f'<text x="{left - 6}" y="{top + i * cell + 17}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_esc(label)}</text>\n'
        )
        x = left + i * cell + cell / 2
        parts.append(
            f'<text x="{_fmt(x)}" y="{top - 6}" font-family="sans-serif" font-size="10" '
            f'transform="rotate(-60 {_fmt(x)} {top - 6})">{_esc(label)}</text>\n'
        )
    for i in range(n):
        for j in range(n):
            v = M[i, j]
            parts.append(
                f'<rect x="{left + j * cell}" y="{top + i * cell}" width="{cell}" '
                f'height="{cell}" fill="{_heat_color(v)}" stroke="#dddddd"/>\n'
            )
            parts.append(
                f'<text x="{left + j * cell + cell // 2}" y="{top + i * cell + 17}" '
                f'text-anchor="middle" font-family="sans-serif" font-size="8">{v:.2f}</text>\n'
            )
    parts.append("</svg>\n")
    return "".join(parts)


_CURVE_COLORS = [
    "#4878a8", "#ee854a", "#6acc64", "#d65f5f", "#956cb4",
    "#8c613c", "#dc7ec0", "#797979", "#d5bb67", "#82c6e2",
]


def roc_svg(curves: dict, width: int = 520, height: int = 520) -> str:
    """curves: name -> (fpr array, tpr array, auc)."""
    pad = 50
    plot = width - 2 * pad
    parts = [_header(width, height)]

    def X(v):
        return pad + v * plot

    def Y(v):
        return height - pad - v * plot

    parts.append(
        f'<rect x="{pad}" y="{pad}" width="{plot}" height="{height - 2 * pad}" '
        'fill="none" stroke="#333333"/>\n'
    )
    parts.append(
        f'<line x1="{_fmt(X(0))}" y1="{_fmt(Y(0))}" x2="{_fmt(X(1))}" y2="{_fmt(Y(1))}" '
        'stroke="#aaaaaa" stroke-dasharray="4 4"/>\n'
    )
    parts.append(
        f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">false positive rate</text>\n'
    )
    parts.append(
        f'<text x="16" y="{height // 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {height // 2})">true positive rate</text>\n'
    )
    for k, (name, (fpr, tpr, auc)) in enumerate(sorted(curves.items())):
        color = _CURVE_COLORS[k % len(_CURVE_COLORS)]
        pts = " ".join(f"{_fmt(X(f))},{_fmt(Y(t))}" for f, t in zip(fpr, tpr))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>\n')
        y_leg = 60 + 16 * k
        parts.append(f'<rect x="{width - 250}" y="{y_leg - 10}" width="12" height="12" fill="{color}"/>\n')
        parts.append(
            f'<text x="{width - 232}" y="{y_leg}" font-family="sans-serif" '
            f'font-size="11">{_esc(name)} (AUC {auc:.4f})</text>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)
