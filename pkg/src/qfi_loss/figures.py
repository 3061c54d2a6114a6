"""Data series behind the published plots, one CSV per sub-plot.

Figures are numbered 1-6: no loss, one ancilla lost (depolarizing, then
phase-flip), arbitrary loss (depolarizing, then phase-flip) and optimal
ancilla numbers. Right-hand plots use ``p = 0.2``.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from . import analytic
from .schemes import Scheme
from .sweep import DEFAULT_GRID, evaluate, fmt, method_name, p_grid, write_text

FIGURE_IDS = (1, 2, 3, 4, 5, 6)
FIGURE_HEADER = ("series", "p", "n", "l", "value")
RIGHT_P = 0.2

Row = tuple[str, float, int, int, float]


def _value(s: Scheme, p: float, method: str) -> float:
    # the compressed path covers GHZ/W only; benchmark curves come from closed forms
    if method_name(method) == "compressed" and s.input not in ("ghz", "w"):
        method = "closed-form"
    return evaluate(s, p, method).value


def _vs_p(name, s: Scheme, ps, method) -> list[Row]:
    return [(name, p, s.n, s.l, _value(s, p, method)) for p in ps]


def _fig_no_loss(ps, p0, method):
    dep, ph = "depolarizing", "phase-flip"
    left = _vs_p("GHZ (optimal strategy)", Scheme(dep, "ghz", 1), ps, method)
    left += _vs_p("W-1", Scheme(dep, "w", 1), ps, method)
    for n in (5, 10, 20):
        left += _vs_p(f"W-{n}", Scheme(dep, "w", n), ps, method)
    left += _vs_p("separable state", Scheme(dep, "sep", 0), ps, method)
    right = _vs_p("GHZ (optimal separable scheme)", Scheme(ph, "ghz", 1), ps, method)
    right += _vs_p("W-1", Scheme(ph, "w", 1), ps, method)
    for n in (5, 10, 20, 50):
        right += _vs_p(f"W-{n}", Scheme(ph, "w", n), ps, method)
    return {"left": left, "right": right}


def _fig_lost_one(channel, ps, p0, method, n_max=30):
    dep = channel == "depolarizing"
    left = _vs_p(
        "optimal strategy / GHZ with no loss" if dep else "GHZ with no loss / optimal separable scheme",
        Scheme(channel, "ghz", 1), ps, method,
    )
    lost = "one lost" if dep else "one qubit lost"
    for n in (2, 5):
        left += _vs_p(f"W-{n} with no loss", Scheme(channel, "w", n), ps, method)
        left += _vs_p(f"W-{n} with {lost}", Scheme(channel, "w", n, 1), ps, method)
    if dep:
        left += _vs_p("separable scheme / GHZ with one qubit lost", Scheme(channel, "ghz", 2, 1), ps, method)
    else:
        left += _vs_p("GHZ with one qubit lost", Scheme(channel, "ghz", 2, 1), ps, method)
    right: list[Row] = []
    ghz_name = "GHZ with no loss" if dep else "GHZ with no loss / optimal separable scheme"
    for n in range(1, n_max + 1):
        right.append((ghz_name, p0, n, 0, _value(Scheme(channel, "ghz", n), p0, method)))
    for n in range(1, n_max + 1):
        right.append(("W states with no loss", p0, n, 0, _value(Scheme(channel, "w", n), p0, method)))
    for n in range(1, n_max + 1):
        right.append(("W states with one ancilla lost", p0, n, 1, _value(Scheme(channel, "w", n, 1), p0, method)))
    tail = "separable scheme / GHZ with one ancilla lost" if dep else "GHZ with one ancilla lost"
    for n in range(2, n_max + 1):
        right.append((tail, p0, n, 1, _value(Scheme(channel, "ghz", n, 1), p0, method)))
    return {"left": left, "right": right}


def _loss_vs_l(channel, p0, method, sizes=(15, 20, 25)):
    rows: list[Row] = []
    for n in sizes:
        base = _value(Scheme(channel, "w", n), p0, method)
        rows += [(f"W-{n} with no loss", p0, n, l, base) for l in range(n + 1)]
        rows += [(f"W-{n} with loss", p0, n, l, _value(Scheme(channel, "w", n, l), p0, method))
                 for l in range(n + 1)]
    return rows


def _fig_lost_many_dep(ps, p0, method, surface_n=30):
    ch = "depolarizing"
    left = _vs_p("GHZ with no loss", Scheme(ch, "ghz", 1), ps, method)
    left += _vs_p("W-8 with no loss", Scheme(ch, "w", 8), ps, method)
    for l in (2, 6):
        left += _vs_p(f"W-8 with {l} lost", Scheme(ch, "w", 8, l), ps, method)
    left += _vs_p("separable strategy / GHZ with one lost", Scheme(ch, "sep", 0), ps, method)
    right = _loss_vs_l(ch, p0, method)
    sep = analytic.qfi_sep(ch, p0)
    right += [("separable strategy / GHZ with one lost", p0, 25, l, sep) for l in range(26)]
    surface: list[Row] = []
    for n in range(1, surface_n + 1):
        for l in range(n + 1):
            surface.append(("W states", p0, n, l, _value(Scheme(ch, "w", n, l), p0, method)))
            surface.append(("separable strategy / GHZ with loss", p0, n, l, sep))
    return {"left": left, "right": right, "surface": surface}


def _fig_lost_many_ph(ps, p0, method):
    ch = "phase-flip"
    left = _vs_p("optimal strategy / GHZ with no loss", Scheme(ch, "ghz", 1), ps, method)
    left += _vs_p("W-10 with no loss", Scheme(ch, "w", 10), ps, method)
    for l in (6, 9):
        left += _vs_p(f"W-10 with {l} lost", Scheme(ch, "w", 10, l), ps, method)
    left += _vs_p("GHZ with at least one ancilla lost", Scheme(ch, "ghz", 2, 1), ps, method)
    right = _loss_vs_l(ch, p0, method)
    right += [("GHZ with loss", p0, 25, l, _value(Scheme(ch, "ghz", 25, l), p0, method))
              for l in range(1, 26)]
    return {"left": left, "right": right}


def _fig_n_opt(ps, p0, method, n_max=40, l_max=20):
    out = {}
    for side, ch in (("left", "depolarizing"), ("right", "phase-flip")):
        rows: list[Row] = []
        for l in (3, 4, 5, 6):
            rows += [(f"{l} ancillas lost", p0, n, l, _value(Scheme(ch, "w", n, l), p0, method))
                     for n in range(l, n_max + 1)]
        out[side] = rows
        inset: list[Row] = []
        for l in range(1, l_max + 1):
            if ch == "depolarizing":
                inset.append(("n_opt", p0, analytic.n_opt_dep(l, p0), l, analytic.n_opt_dep(l, p0)))
                lead = analytic.n_opt_dep_leading(l, p0)
                inset.append(("leading term", p0, round(lead), l, lead))
            else:
                for n in analytic.n_opt_ph(l):
                    inset.append(("n_opt", p0, n, l, n))
        out[f"{side}_inset"] = inset
    return out


def figure_data(which: int, grid=DEFAULT_GRID, p0: float = RIGHT_P, method: str = "closed-form") -> dict[str, list[Row]]:
    """Sub-plot name -> rows ``(series, p, n, l, value)``."""
    if which not in FIGURE_IDS:
        raise ValueError(f"figure id must be one of {FIGURE_IDS}, got {which}")
    ps = p_grid(*grid)
    if which == 1:
        return _fig_no_loss(ps, p0, method)
    if which == 2:
        return _fig_lost_one("depolarizing", ps, p0, method)
    if which == 3:
        return _fig_lost_one("phase-flip", ps, p0, method)
    if which == 4:
        return _fig_lost_many_dep(ps, p0, method)
    if which == 5:
        return _fig_lost_many_ph(ps, p0, method)
    return _fig_n_opt(ps, p0, method)


def rows_to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIGURE_HEADER)
    for series, p, n, l, value in rows:
        w.writerow([series, fmt(p), n, l, fmt(value)])
    return buf.getvalue()


def write_figure(which: int, out_dir: str | Path, **kw) -> list[Path]:
    """Write ``fig{which}_{subplot}.csv`` files into ``out_dir``; returns their paths."""
    paths = []
    for sub, rows in figure_data(which, **kw).items():
        path = Path(out_dir) / f"fig{which}_{sub}.csv"
        write_text(path, rows_to_csv(rows))
        paths.append(path)
    return paths
