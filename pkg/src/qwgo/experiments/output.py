"""CSV writers and a dependency-free SVG polyline plot."""

from __future__ import annotations

import csv
import io
import sys
from contextlib import contextmanager
from html import escape

TRACE_COLUMNS = ("iteration", "step_kind", "rotations", "cum_evals", "sample_index", "sample_x",
                 "sample_f", "threshold_c", "best_x", "best_f", "success")
CURVE_COLUMNS = ("algorithm", "objective", "r0", "axis", "axis_value", "success_prob", "stderr", "runs")
PDF_COLUMNS = ("iteration", "state_index", "x", "mean_probability")


def fmt(v) -> str:
    # repr is the shortest round-tripping form, so output bytes are stable.
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_rows(path, columns, rows) -> None:
    with _sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def trace_rows(trace):
    for r in trace.records:
        yield (r.iteration, r.step_kind, r.rotations, r.cum_evals, r.sample_index, r.sample_x,
               r.sample_f, r.threshold_c, r.best_x, r.best_f, r.success)


def curve_rows(curves):
    for c in curves:
        for p in c.points:
            yield (c.algorithm, c.objective, c.r0, c.axis, p.axis_value, p.success_prob, p.stderr, c.runs)


def pdf_rows(pdfs, coords):
    for avg in pdfs:
        for j, p in enumerate(avg.mean_probability):
            yield avg.iteration, j, float(coords[j]), float(p)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def polyline_svg(series, title="", xlabel="", ylabel="", width=640, height=400, opacity=1.0) -> str:
    """series: iterable of (label, xs, ys). Axes span the data range; no ticks beyond the extremes."""
    series = [(label, list(map(float, xs)), list(map(float, ys))) for label, xs, ys in series]
    all_x = [x for _, xs, _ in series for x in xs] or [0.0, 1.0]
    all_y = [y for _, _, ys in series for y in ys] or [0.0, 1.0]
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = min(all_y), max(all_y)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    ml, mr, mt, mb = 60, 150, 30, 45
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
              f'font-family="sans-serif" font-size="11">\n')
    out.write(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>\n')
    out.write(f'<text x="{ml + pw / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>\n')
    out.write(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>\n')
    out.write(f'<text x="14" y="{mt + ph / 2:.1f}" transform="rotate(-90 14 {mt + ph / 2:.1f})" '
              f'text-anchor="middle">{escape(ylabel)}</text>\n')
    for val, anchor, x in ((x0, "start", ml), (x1, "end", ml + pw)):
        out.write(f'<text x="{x}" y="{mt + ph + 14}" text-anchor="{anchor}">{val:.4g}</text>\n')
    for val, y in ((y0, mt + ph), (y1, mt + 4)):
        out.write(f'<text x="{ml - 4}" y="{y}" text-anchor="end">{val:.4g}</text>\n')
    for k, (label, xs, ys) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.write(f'<polyline fill="none" stroke="{color}" stroke-opacity="{opacity}" points="{pts}"/>\n')
        if len(series) <= 12:
            out.write(f'<text x="{ml + pw + 8}" y="{mt + 14 * (k + 1)}" fill="{color}">{escape(label)}</text>\n')
    out.write("</svg>\n")
    return out.getvalue()


def write_svg(path, svg: str) -> None:
    with open(path, "w") as fh:
        fh.write(svg)
