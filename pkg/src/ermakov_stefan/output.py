"""CSV / JSON writers and a minimal standalone SVG renderer."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np


def fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_csv(path: Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in r] for r in reader if r]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(dumps(obj))


# SVG ------------------------------------------------------------------------

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _frame(title: str, xlabel: str, ylabel: str, xr, yr) -> list[str]:
    x0, x1 = xr
    y0, y1 = yr
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{_W / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{_ML + pw / 2}" y="{_H - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">{xlabel}</text>',
        f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {_MT + ph / 2})">{ylabel}</text>',
    ]
    for v in _ticks(x0, x1):
        px = _ML + (v - x0) / ((x1 - x0) or 1.0) * pw
        out.append(f'<text x="{px:.1f}" y="{_MT + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">{v:.3g}</text>')
    for v in _ticks(y0, y1):
        py = _MT + ph - (v - y0) / ((y1 - y0) or 1.0) * ph
        out.append(f'<text x="{_ML - 6}" y="{py + 3:.1f}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.3g}</text>')
    return out


def line_plot(series: Sequence[tuple[str, np.ndarray, np.ndarray]], title: str, xlabel: str, ylabel: str) -> str:
    """Overlayed polylines; ``series`` holds (label, x, y) triples."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 - y0 < 1e-12 * max(1.0, abs(y0)):
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    out = _frame(title, xlabel, ylabel, (x0, x1), (y0, y1))
    for idx, (label, x, y) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        px = _ML + (np.asarray(x, float) - x0) / ((x1 - x0) or 1.0) * pw
        py = _MT + ph - (np.asarray(y, float) - y0) / (y1 - y0) * ph
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{_ML + pw - 8}" y="{_MT + 16 + 14 * idx}" text-anchor="end" fill="{color}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap(x: np.ndarray, t: np.ndarray, values: np.ndarray, title: str, xlabel: str = "x", ylabel: str = "t") -> str:
    """Scattered (x, t, value) samples drawn as cells coloured by log10 |value|."""
    x = np.asarray(x, float)
    t = np.asarray(t, float)
    mag = np.log10(np.maximum(np.abs(np.asarray(values, float)), 1e-300))
    finite = np.isfinite(mag)
    lo, hi = (float(mag[finite].min()), float(mag[finite].max())) if finite.any() else (0.0, 1.0)
    ux, ut = np.unique(x), np.unique(t)
    x0, x1, t0, t1 = float(x.min()), float(x.max()), float(t.min()), float(t.max())
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    cw = pw / max(len(ux), 1)
    ch = ph / max(len(ut), 1)
    out = _frame(f"{title} (log10 |value| in [{lo:.2f}, {hi:.2f}])", xlabel, ylabel, (x0, x1), (t0, t1))
    for xi, ti, m in zip(x, t, mag):
        frac = 0.0 if hi == lo or not math.isfinite(m) else (m - lo) / (hi - lo)
        r, b = int(255 * frac), int(255 * (1.0 - frac))
        px = _ML + (xi - x0) / ((x1 - x0) or 1.0) * (pw - cw)
        py = _MT + ph - ch - (ti - t0) / ((t1 - t0) or 1.0) * (ph - ch)
        out.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{cw + 0.5:.2f}" height="{ch + 0.5:.2f}" fill="rgb({r},40,{b})"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
