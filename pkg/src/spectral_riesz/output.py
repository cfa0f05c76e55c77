"""Report persistence: canonical number formatting, CSV/JSON/SVG writers.

All files are written atomically (temp file in the target directory, then
rename).  Floats print with 17 significant digits so every value
round-trips through text; exact rationals print as num/den.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Iterable, Sequence

from .scan import Series


def fmt_number(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 \
            else str(x.numerator)
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps_json(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, round-trip stable."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def write_json(path: str, obj):
    atomic_write(path, dumps_json(obj) + "\n")


def series_csv(series_list: Sequence[Series]) -> str:
    lines = ["z,series_label,value"]
    for s in series_list:
        for z, v in s.points:
            lines.append(f"{fmt_number(z)},{s.label},{fmt_number(v)}")
    return "\n".join(lines) + "\n"


def write_series_csv(path: str, series_list: Sequence[Series]):
    atomic_write(path, series_csv(series_list))


def table_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_number(c) for c in row))
    return "\n".join(lines) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#9467bd", "#ff7f0e", "#2ca02c",
            "#8c564b", "#e377c2", "#7f7f7f")


def series_svg(series_list: Sequence[Series], width: int = 900,
               height: int = 540) -> str:
    """Bare polyline rendering, viewBox normalized to the data extents."""
    pts = [(z, v) for s in series_list for z, v in s.points]
    if not pts:
        return ('<svg xmlns="http://www.w3.org/2000/svg" '
                f'viewBox="0 0 {width} {height}"></svg>')
    zmin = min(z for z, _ in pts)
    zmax = max(z for z, _ in pts)
    vmin = min(v for _, v in pts)
    vmax = max(v for _, v in pts)
    zspan = (zmax - zmin) or 1.0
    vspan = (vmax - vmin) or 1.0

    def sx(z):
        return (z - zmin) / zspan * width

    def sy(v):
        return height - (v - vmin) / vspan * height

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="0 0 {width} {height}">']
    for i, s in enumerate(series_list):
        colour = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(z):.3f},{sy(v):.3f}" for z, v in s.points)
        parts.append(f'<polyline fill="none" stroke="{colour}" '
                     f'stroke-width="1" points="{coords}">'
                     f'<title>{s.label}</title></polyline>')
    parts.append("</svg>")
    return "\n".join(parts)


def write_series_svg(path: str, series_list: Sequence[Series]):
    atomic_write(path, series_svg(series_list) + "\n")
