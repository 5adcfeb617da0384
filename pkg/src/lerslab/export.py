"""Wavefront OBJ export of surfaces and an SVG log-log plot of a size table."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import numpy as np

from lerslab.lattice import Chain2, CubicalComplex
from lerslab.stats import HYPOTHESIS, ExponentEstimate, Summary


def surface_obj(surface: Chain2, complex_: CubicalComplex) -> str:
    """One quad per face, shared vertices deduplicated, +Z up, unit spacing."""
    faces = surface.indices()
    corners = np.concatenate([complex_.face_vertices(int(f)) for f in faces]) if len(faces) else np.zeros((0, 3), int)
    uniq, inverse = np.unique(corners, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    lines = [f"# loop-erased random surface, n={complex_.n}, faces={len(faces)}"]
    lines += [f"v {x} {y} {z}" for x, y, z in uniq.tolist()]
    for k in range(len(faces)):
        a, b, c, d = (inverse[4 * k : 4 * k + 4] + 1).tolist()
        lines.append(f"f {a} {b} {c} {d}")
    return "\n".join(lines) + "\n"


def write_obj(surface: Chain2, complex_: CubicalComplex, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(surface_obj(surface, complex_))


def loglog_svg(
    summaries: Sequence[Summary],
    estimate: ExponentEstimate,
    width: int = 640,
    height: int = 480,
) -> str:
    """Per-n box-and-whisker marks on log-log axes with the fitted line."""
    margin = 60
    ns = [s.n for s in summaries]
    lo_y = min(s.min for s in summaries)
    hi_y = max(s.max for s in summaries)
    x0, x1 = math.log(min(ns)) - 0.1, math.log(max(ns)) + 0.1
    y0, y1 = math.log(lo_y) - 0.2, math.log(hi_y) + 0.2

    def px(n: float) -> float:
        return margin + (math.log(n) - x0) / (x1 - x0) * (width - 2 * margin)

    def py(m: float) -> float:
        return height - margin - (math.log(m) - y0) / (y1 - y0) * (height - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="14">n (log scale)</text>',
        f'<text x="18" y="{height / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {height / 2:.1f})">surface size M (log scale)</text>',
    ]
    for n in ns:
        out.append(f'<text x="{px(n):.1f}" y="{height - margin + 16}" text-anchor="middle" font-size="10">{n}</text>')
    for k in range(math.floor(y0 / math.log(10)), math.ceil(y1 / math.log(10)) + 1):
        m = 10.0**k
        if y0 <= math.log(m) <= y1:
            out.append(f'<text x="{margin - 6}" y="{py(m) + 4:.1f}" text-anchor="end" font-size="10">1e{k}</text>')
    tick = 5
    for s in summaries:
        x = px(s.n)
        out.append(f'<line x1="{x:.1f}" y1="{py(s.min):.1f}" x2="{x:.1f}" y2="{py(s.max):.1f}" stroke="gray"/>')
        for v in (s.min, s.max):
            out.append(f'<line x1="{x - tick:.1f}" y1="{py(v):.1f}" x2="{x + tick:.1f}" y2="{py(v):.1f}" stroke="gray"/>')
        out.append(
            f'<rect x="{x - tick:.1f}" y="{py(s.q3):.1f}" width="{2 * tick}" '
            f'height="{max(py(s.q1) - py(s.q3), 0.5):.1f}" fill="none" stroke="black"/>'
        )
        out.append(f'<line x1="{x - tick:.1f}" y1="{py(s.median):.1f}" x2="{x + tick:.1f}" y2="{py(s.median):.1f}" stroke="black"/>')
        out.append(f'<circle cx="{x:.1f}" cy="{py(s.mean):.1f}" r="2.5" fill="crimson"/>')
    fit = lambda n: math.exp(estimate.intercept + estimate.slope * math.log(n))  # noqa: E731
    out.append(
        f'<line x1="{px(min(ns)):.1f}" y1="{py(fit(min(ns))):.1f}" x2="{px(max(ns)):.1f}" '
        f'y2="{py(fit(max(ns))):.1f}" stroke="steelblue" stroke-width="1.5"/>'
    )
    label = f"slope = {estimate.slope:.4f}"
    if estimate.has_interval:
        pct = round(100 * (1 - estimate.alpha))
        inside = "inside" if estimate.contains(HYPOTHESIS) else "outside"
        label += f", {pct}% CI [{estimate.lo:.4f}, {estimate.hi:.4f}] (48/19 {inside})"
    out.append(f'<text x="{margin + 10}" y="{margin - 20}" font-size="13">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
