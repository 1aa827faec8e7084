"""Flat-file writers: CSV tables, JSON envelopes and single-curve SVG plots."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__


def fmt_number(v) -> str:
    """17 significant digits in scientific notation; round-trips through float()."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if v is None:
        return ""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt_number(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item"):  # numpy scalar
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    results: dict
    wall_time: float = 0.0
    version: str = __version__
    warnings: list = field(default_factory=list)

    def payload(self) -> str:
        """Deterministic part of the report (everything except timing)."""
        return dumps({"command": self.command, "config": self.config, "version": self.version, "results": self.results})

    def to_json(self) -> str:
        return dumps(
            {
                "command": self.command,
                "config": self.config,
                "version": self.version,
                "wall_time": self.wall_time,
                "warnings": self.warnings,
                "results": self.results,
            }
        )


def svg_polyline(xs, ys, title: str, xlabel: str = "t", ylabel: str = "‖ψ‖", width=640, height=400) -> str:
    """Minimal line plot: one polyline, two labeled axes, a title."""
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    if x1 == x0:
        x1 = x0 + 1

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(xs, ys))
    ticks = []
    for k in range(5):
        xv = x0 + k * (x1 - x0) / 4
        yv = y0 + k * (y1 - y0) / 4
        ticks.append(f'<text x="{sx(xv):.1f}" y="{mt + ph + 18}" text-anchor="middle" font-size="11">{xv:.4g}</text>')
        ticks.append(f'<text x="{ml - 6}" y="{sy(yv) + 4:.1f}" text-anchor="end" font-size="11">{yv:.4g}</text>')
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
            f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
            f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
            *ticks,
            f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle" font-size="13">{xlabel}</text>',
            f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" font-size="13" '
            f'transform="rotate(-90 16 {mt + ph / 2})">{ylabel}</text>',
            f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{title}</text>',
            f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>',
            "</svg>",
            "",
        ]
    )
