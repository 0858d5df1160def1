"""Matplotlib renderings of a finished run: a lifetime barcode, the
event counters and the active-cell count over time."""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .engine import KineticEngine
from .medusa import MedusaCell

ORIGIN_COLORS = {
    "INITIAL": "#4878cf",
    "FINAL": "#6acc65",
    "RADIUS": "#d65f5f",
    "FLIP_FILL": "#b47cc7",
    "INSERT_FILL": "#c4ad66",
    "DELETE_FILL": "#77bedb",
}


def _span(cell: MedusaCell) -> tuple[float, float]:
    b, d = float(cell.birth), float(cell.death)
    return b, max(d - b, 0.0)


def render_barcode(cells: Sequence[MedusaCell], path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, max(3, 0.14 * len(cells) + 1)))
    ordered = sorted(cells, key=lambda c: (c.dim, float(c.birth)))
    ticks, labels = [], []
    prev_dim = None
    for row, cell in enumerate(ordered):
        start, width = _span(cell)
        color = ORIGIN_COLORS.get(cell.origin, "#555555")
        if width == 0.0:
            ax.plot(start, row, marker="d", color=color, markersize=4)
        else:
            ax.barh(row, width, left=start, height=0.7, color=color)
        if cell.dim != prev_dim:
            ticks.append(row)
            labels.append(f"dim {cell.dim}")
            prev_dim = cell.dim
    ax.set_yticks(ticks, labels)
    ax.set_xlim(-0.02, 1.02)
    ax.set_xlabel("time")
    ax.set_title("cell lifetimes (diamonds are instantaneous fills)")
    ax.invert_yaxis()
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=c) for c in ORIGIN_COLORS.values()
    ]
    ax.legend(handles, ORIGIN_COLORS.keys(), loc="upper right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_counters(engine: KineticEngine, path: str) -> None:
    counts = engine.stats().as_dict()
    names = list(counts)
    values = [counts[k] for k in names]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(range(len(names)), values, color="#4878cf")
    ax.set_xticks(range(len(names)), names, rotation=40, ha="right", fontsize=8)
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom", fontsize=7)
    ax.set_title("event and certificate counters")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_activity(cells: Sequence[MedusaCell], path: str) -> None:
    deltas: dict[float, int] = {}
    for cell in cells:
        if cell.is_fill():
            continue
        b, d = float(cell.birth), float(cell.death)
        deltas[b] = deltas.get(b, 0) + 1
        deltas[d] = deltas.get(d, 0) - 1
    xs, ys, active = [0.0], [0], 0
    for t in sorted(deltas):
        active += deltas[t]
        xs.append(t)
        ys.append(active)
    xs.append(1.0)
    ys.append(active)
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.step(xs, ys, where="post", color="#d65f5f")
    ax.set_xlim(-0.02, 1.02)
    ax.set_xlabel("time")
    ax.set_ylabel("alive cells")
    ax.set_title("complex size over time")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(
    engine: KineticEngine, cells: Sequence[MedusaCell], directory: str
) -> list[str]:
    """Write the three standard figures into ``directory`` and return
    the file paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, draw in (
        ("barcode.png", lambda p: render_barcode(cells, p)),
        ("counters.png", lambda p: render_counters(engine, p)),
        ("activity.png", lambda p: render_activity(cells, p)),
    ):
        path = os.path.join(directory, name)
        draw(path)
        paths.append(path)
    return paths
