"""Figure rendering for the CLI report path.

Each report command can drop a PNG next to its text output. Figures are a
convenience view of the same payload data; they are not covered by the
byte-determinism contract.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .growth import (  # noqa: E402
    CoercivityVerdict,
    ErrorBoundReport,
    GoodnessReport,
    LojaReport,
    SublevelSet1D,
)
from .poly import Instance  # noqa: E402
from .selections import SelectionLike, eval_selection  # noqa: E402

_DPI = 130


def _axis_window(instance: Instance, anchors) -> tuple[float, float]:
    finite = [a for a in anchors if a is not None and math.isfinite(a)]
    if not finite:
        return (-3.0, 3.0)
    lo, hi = min(finite), max(finite)
    pad = max(1.0, 0.25 * (hi - lo))
    return (lo - pad, hi + pad)


def instance_figure(instance: Instance, path: str, catalog=None,
                    selections=None, title: str = "") -> str | None:
    """Candidate curves over a window, with cataloged points overlaid."""
    if instance.n != 1:
        return None
    anchors = []
    if catalog is not None:
        anchors.extend(p.x[0] for p in catalog.points)
    if selections is not None:
        for sel in selections:
            anchors.extend(sel.decomposition.breakpoints)
    lo, hi = _axis_window(instance, anchors)
    xs = np.linspace(lo, hi, 600)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i in range(1, instance.r + 1):
        ys = [instance.poly(i).eval([x]) for x in xs]
        ax.plot(xs, ys, lw=1.0, alpha=0.7, label=f"f{i}")
    if selections is not None:
        for k, sel in enumerate(selections[:8]):
            ys = [eval_selection(sel, instance, x) for x in xs]
            ax.plot(xs, ys, lw=2.0, alpha=0.9,
                    label=f"selection {k + 1}" if k < 4 else None)
    if catalog is not None and catalog.points:
        px = [p.x[0] for p in catalog.points]
        py = [p.value for p in catalog.points]
        ax.scatter(px, py, color="black", zorder=5, s=30, label="stationary")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    if instance.r <= 10:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def loja_figure(report: LojaReport, path: str) -> str:
    radii = [r for r, m in zip(report.radii, report.min_ratios) if m is not None]
    mins = [m for m in report.min_ratios if m is not None]
    fig, ax = plt.subplots(figsize=(6, 4))
    if radii:
        ax.loglog(radii, mins, "o-")
    ax.set_xlabel("radius")
    ax.set_ylabel("min slope / |value|^exponent")
    ax.set_title(f"exponent {report.exponent_used:.6g}, verdict {report.verdict}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def errorbound_figure(instance: Instance, selection: SelectionLike,
                      s: SublevelSet1D, report: ErrorBoundReport,
                      path: str) -> str:
    xs, ratios = [], []
    count = int(math.floor((report.grid_hi - report.grid_lo) / report.grid_step + 1e-9)) + 1
    for k in range(count):
        x = report.grid_lo + k * report.grid_step
        dist = s.dist(x)
        if dist <= 0:
            continue
        fplus = max(eval_selection(selection, instance, x), 0.0)
        xs.append(x)
        ratios.append(fplus**report.alpha / dist)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(xs, ratios, ".", ms=3)
    for lo, hi in s.intervals:
        ax.axvspan(max(lo, report.grid_lo), min(hi, report.grid_hi),
                   color="tan", alpha=0.3)
    ax.set_xlabel("x")
    ax.set_ylabel("local ratio")
    ax.set_title(f"alpha {report.alpha:.6g}, min {report.min_local_ratio}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def goodness_figure(report: GoodnessReport, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(report.radii, report.min_slopes, "o-")
    if report.c_estimate is not None:
        ax.axhline(report.c_estimate, color="green", lw=0.8, ls="--",
                   label=f"floor {report.c_estimate:.4g}")
        ax.legend()
    ax.set_xlabel("radius")
    ax.set_ylabel("min sampled slope")
    ax.set_title("good at infinity" if report.good else "no positive floor found")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def coercivity_figure(instance: Instance, selection: SelectionLike,
                      verdict: CoercivityVerdict, path: str) -> str | None:
    if instance.n != 1:
        return None
    r = verdict.r_witness if verdict.r_witness else 4.0
    xs = np.linspace(-4.0 * r, 4.0 * r, 600)
    ys = [eval_selection(selection, instance, x) for x in xs]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(xs, ys, lw=1.5, label="selection")
    if verdict.coercive and verdict.c_witness:
        ax.plot(xs, [verdict.c_witness * abs(x) for x in xs], "--", lw=1.0,
                label=f"{verdict.c_witness:.4g}|x|")
    ax.legend(fontsize=8)
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    ax.set_title(
        f"bounded below: {verdict.bounded_below}, coercive: {verdict.coercive}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
