"""Tabulated data behind the three plots: f(b), Re S2(b) and its normalised comparison."""
from __future__ import annotations

import csv
import math

import numpy as np

from . import lattice_sums

__all__ = ["FIGURE_HEADERS", "figure_grid", "figure_rows", "write_figure_csv"]

FIGURE_HEADERS = {
    1: ("b", "value"),
    2: ("b", "re_s2"),
    3: ("b", "exact", "asymptotic_paper", "asymptotic_resolved"),
}
N_POINTS = 400


def figure_grid(fig: int) -> np.ndarray:
    if fig == 1:
        return np.geomspace(0.01, 10.0, N_POINTS)
    if fig in (2, 3):
        return np.linspace(0.5, 40.0, N_POINTS)
    raise ValueError(f"unknown figure {fig}")


def _theta_or_none(b: float, precision: str):
    try:
        return lattice_sums.re_s2_theta(b, precision=precision)
    except lattice_sums.PrecisionLossError:
        return None


def figure_rows(fig: int, precision: str = "auto") -> list[tuple]:
    """Rows for figure ``fig``; ``None`` marks a point lost to precision."""
    rows = []
    for b in figure_grid(fig):
        b = float(b)
        if fig == 1:
            rows.append((b, lattice_sums.f_dim1(b)))
            continue
        re = _theta_or_none(b, precision)
        if fig == 2:
            rows.append((b, re))
            continue
        s = math.pi * math.sqrt(2.0 * b)
        shape = math.sin(s - math.pi / 8.0)
        exact = None if re is None else b**0.75 * math.exp(s) * re / (4.0 * math.pi**2)
        rows.append((b, exact, -shape, lattice_sums.RESOLVED_SIGN * shape))
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    return format(v, ".17g")


def write_figure_csv(stream, fig: int, precision: str = "auto") -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(FIGURE_HEADERS[fig])
    for row in figure_rows(fig, precision):
        w.writerow([_cell(v) for v in row])
