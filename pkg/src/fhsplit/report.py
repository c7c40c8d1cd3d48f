"""CSV tables and SVG charts for computed rate tables.

Output depends only on the input values: no timestamps, fixed float
formatting, stable ordering. Charts are plain SVG 1.1 text.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from ._io import emit
from .model import RateTable, SplitOption

__all__ = [
    "CSV_HEADER",
    "format_rate_sci",
    "format_percent",
    "format_rate_si",
    "csv_text",
    "emit_csv",
    "sweep_csv_text",
    "bar_chart_svg",
    "emit_bar_chart_svg",
    "sweep_chart_svg",
    "emit_sweep_chart_svg",
]

CSV_HEADER = ("scenario", "band", "service", "split_option", "rate_bps", "reduction_vs_opt8_percent")
SWEEP_OPTIONS = (SplitOption.OPT7_3, SplitOption.OPT6, SplitOption.OPT2)

PALETTE = {
    SplitOption.OPT8: "#4e79a7",
    SplitOption.OPT7_1: "#f28e2b",
    SplitOption.OPT7_2: "#e15759",
    SplitOption.OPT7_3: "#76b7b2",
    SplitOption.OPT6: "#59a14f",
    SplitOption.OPT2: "#b07aa1",
}

_SI = ((1e15, "P"), (1e12, "T"), (1e9, "G"), (1e6, "M"), (1e3, "k"))


def format_rate_sci(rate: float) -> str:
    """Six significant digits, compact exponent: ``4.20105e12``."""
    mantissa, exp = f"{rate:.5e}".split("e")
    return f"{mantissa}e{int(exp)}"


def format_percent(value) -> str:
    return "" if value is None else f"{value:.2f}"


def format_rate_si(rate: float, digits: int = 3) -> str:
    """Auto-scaled rate in powers of 1000, e.g. ``7.163 Tbit/s``."""
    for scale, prefix in _SI:
        if abs(rate) >= scale:
            return f"{rate / scale:.{digits}f} {prefix}bit/s"
    return f"{rate:.{digits}f} bit/s"


def _sorted_tables(tables):
    return sorted(tables, key=lambda t: (t.scenario_name, t.band or "", t.service or ""))


def csv_text(tables) -> str:
    tables = list(tables)
    if not tables:
        raise ValueError("nothing to emit")
    lines = [",".join(CSV_HEADER)]
    for t in _sorted_tables(tables):
        for opt in sorted(t.entries):
            lines.append(",".join((
                t.scenario_name,
                t.band or "",
                t.service or "",
                opt.value,
                format_rate_sci(t.entries[opt]),
                format_percent(t.reduction(opt)),
            )))
    return "\n".join(lines) + "\n"


def emit_csv(tables, destination) -> None:
    """Write one row per (table, split option) to a path or text stream."""
    emit(destination, csv_text(tables))


def sweep_csv_text(sweep) -> str:
    sweep = list(sweep)
    if not sweep:
        raise ValueError("nothing to emit")
    lines = ["scenario,band,service,m,rc," + ",".join(f"{o.value}_bps" for o in SWEEP_OPTIONS)]
    for m, rc, t in sweep:
        rates = ",".join(format_rate_sci(t.entries[o]) for o in SWEEP_OPTIONS)
        lines.append(f"{t.scenario_name},{t.band or ''},{t.service or ''},{m},{rc!r},{rates}")
    return "\n".join(lines) + "\n"


# --- SVG ------------------------------------------------------------------


def _num(x: float) -> str:
    return f"{x:.2f}"


class _LogAxis:
    """Maps positive values onto [lo_px, hi_px] using whole decades."""

    def __init__(self, values, lo_px, hi_px):
        positive = [v for v in values if v > 0]
        if not positive:
            positive = [1.0]
        self.dmin = math.floor(math.log10(min(positive)))
        self.dmax = math.ceil(math.log10(max(positive)))
        if self.dmax == self.dmin:
            self.dmax += 1
        self.lo_px = lo_px
        self.hi_px = hi_px

    def __call__(self, value):
        if value <= 0:
            return self.lo_px
        frac = (math.log10(value) - self.dmin) / (self.dmax - self.dmin)
        return self.lo_px + frac * (self.hi_px - self.lo_px)

    def decades(self):
        return range(self.dmin, self.dmax + 1)


def _svg_open(width, height, title):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{_num(width / 2)}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]


def _y_axis(parts, axis, left, right, label):
    for d in axis.decades():
        y = axis(10.0**d)
        parts.append(
            f'<line class="grid" x1="{_num(left)}" y1="{_num(y)}" x2="{_num(right)}" y2="{_num(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_num(left - 6)}" y="{_num(y + 4)}" text-anchor="end" font-size="11">1e{d}</text>'
        )
    parts.append(
        f'<line x1="{_num(left)}" y1="{_num(axis.lo_px)}" x2="{_num(left)}" y2="{_num(axis.hi_px)}" '
        f'stroke="#000000"/>'
    )
    mid = (axis.lo_px + axis.hi_px) / 2
    parts.append(
        f'<text x="16" y="{_num(mid)}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_num(mid)})">{escape(label)}</text>'
    )


def _group_key(table: RateTable, grouping: str):
    if grouping == "by_band":
        return (table.band or "", table.scenario_name, table.service or "")
    return (table.scenario_name, table.band or "", table.service or "")


def bar_chart_svg(tables, grouping: str = "by_scenario", title: str = "Uplink fronthaul rate per split option") -> str:
    tables = list(tables)
    if not tables:
        raise ValueError("nothing to emit")
    if grouping not in ("by_scenario", "by_band"):
        raise ValueError(f"grouping must be 'by_scenario' or 'by_band', got {grouping!r}")
    tables.sort(key=lambda t: _group_key(t, grouping))
    show_service = len({t.service for t in tables}) > 1

    options = list(SplitOption)
    bar_w, bar_gap, group_gap = 22, 3, 30
    group_w = len(options) * (bar_w + bar_gap) - bar_gap
    left, top, bottom_pad, right_pad = 80, 40, 110, 150
    plot_h = 360
    width = left + len(tables) * (group_w + group_gap) + right_pad
    height = top + plot_h + bottom_pad
    base = top + plot_h

    axis = _LogAxis([r for t in tables for r in t.entries.values()], base, top)
    parts = _svg_open(width, height, title)
    _y_axis(parts, axis, left, width - right_pad, "rate [bit/s]")

    x = left + group_gap / 2
    for t in tables:
        label = f"{t.scenario_name} {t.band or ''}".strip()
        if show_service:
            label += f" {t.service}"
        parts.append(f'<g class="group" id="{escape(t.label)}">')
        for i, opt in enumerate(options):
            rate = t.entries.get(opt, 0.0)
            bx = x + i * (bar_w + bar_gap)
            y = axis(rate)
            parts.append(
                f'<rect class="bar" data-option="{opt.value}" data-rate="{format_rate_sci(rate)}" '
                f'x="{_num(bx)}" y="{_num(y)}" width="{bar_w}" height="{_num(base - y)}" '
                f'fill="{PALETTE[opt]}"/>'
            )
            lx, ly = bx + bar_w / 2 + 4, y - 4
            parts.append(
                f'<text class="bar-label" x="{_num(lx)}" y="{_num(ly)}" font-size="9" '
                f'transform="rotate(-90 {_num(lx)} {_num(ly)})">{format_rate_sci(rate)}</text>'
            )
        parts.append(
            f'<text x="{_num(x + group_w / 2)}" y="{_num(base + 18)}" text-anchor="middle" '
            f'font-size="12">{escape(label)}</text>'
        )
        parts.append("</g>")
        x += group_w + group_gap

    parts.append(
        f'<line x1="{_num(left)}" y1="{_num(base)}" x2="{_num(width - right_pad)}" y2="{_num(base)}" stroke="#000000"/>'
    )
    lx = width - right_pad + 15
    for i, opt in enumerate(options):
        ly = top + 10 + i * 20
        parts.append(f'<rect class="legend" x="{lx}" y="{ly}" width="12" height="12" fill="{PALETTE[opt]}"/>')
        parts.append(f'<text x="{lx + 18}" y="{ly + 10}" font-size="12">Option {opt.label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_bar_chart_svg(tables, grouping, destination) -> None:
    """Grouped bar chart on a log rate axis, one bar per split option."""
    emit(destination, bar_chart_svg(tables, grouping))


def sweep_chart_svg(sweep, title: str = "Fronthaul rate vs modulation order") -> str:
    sweep = list(sweep)
    if not sweep:
        raise ValueError("nothing to emit")
    left, top, plot_w, plot_h, right_pad, bottom_pad = 80, 40, 480, 320, 140, 60
    width = left + plot_w + right_pad
    height = top + plot_h + bottom_pad
    base = top + plot_h

    ms = [m for m, _, _ in sweep]
    x_lo = math.log2(min(ms))
    x_hi = math.log2(max(ms))
    span = (x_hi - x_lo) or 1.0

    def xpos(m):
        return left + 20 + (math.log2(m) - x_lo) / span * (plot_w - 40)

    axis = _LogAxis([t.entries[o] for _, _, t in sweep for o in SWEEP_OPTIONS], base, top)
    parts = _svg_open(width, height, title)
    _y_axis(parts, axis, left, left + plot_w, "rate [bit/s]")
    parts.append(
        f'<line x1="{left}" y1="{base}" x2="{left + plot_w}" y2="{base}" stroke="#000000"/>'
    )
    for m, rc, _ in sweep:
        x = xpos(m)
        parts.append(f'<line x1="{_num(x)}" y1="{base}" x2="{_num(x)}" y2="{base + 5}" stroke="#000000"/>')
        parts.append(
            f'<text x="{_num(x)}" y="{base + 18}" text-anchor="middle" font-size="11">'
            f'({m}, {rc:g})</text>'
        )
    parts.append(
        f'<text x="{_num(left + plot_w / 2)}" y="{base + 44}" text-anchor="middle" font-size="12">'
        f'(M, code rate), log-scale M</text>'
    )

    for i, opt in enumerate(SWEEP_OPTIONS):
        points = " ".join(f"{_num(xpos(m))},{_num(axis(t.entries[opt]))}" for m, _, t in sweep)
        parts.append(
            f'<polyline class="series" data-option="{opt.value}" points="{points}" '
            f'fill="none" stroke="{PALETTE[opt]}" stroke-width="2"/>'
        )
        for m, _, t in sweep:
            parts.append(
                f'<circle cx="{_num(xpos(m))}" cy="{_num(axis(t.entries[opt]))}" r="3" fill="{PALETTE[opt]}"/>'
            )
        lx, ly = left + plot_w + 15, top + 10 + i * 20
        parts.append(f'<line x1="{lx}" y1="{ly + 6}" x2="{lx + 14}" y2="{ly + 6}" stroke="{PALETTE[opt]}" stroke-width="2"/>')
        parts.append(f'<text class="legend" x="{lx + 20}" y="{ly + 10}" font-size="12">Option {opt.label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_sweep_chart_svg(sweep, destination) -> None:
    """Line chart of options 7.3, 6 and 2 against modulation order."""
    emit(destination, sweep_chart_svg(sweep))
