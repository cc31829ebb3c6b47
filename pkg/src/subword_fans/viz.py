"""Matplotlib figure rendering for the report-producing commands.

Every renderer writes a file and returns the path; layouts are
deterministic so identical inputs give identical figures.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .coxeter import BraidGraph

__all__ = [
    "draw_braid_graph",
    "draw_f_vector",
    "draw_signature_counts",
    "draw_survey_tally",
]


def draw_braid_graph(graph: BraidGraph, path: str, title: str = "") -> str:
    """Circular layout; odd (adjacent) braid edges thin blue, even
    (commutation) edges thick red, matching the usual convention."""
    n = len(graph.vertices)
    pos = {}
    for i in range(n):
        angle = 2 * math.pi * i / max(n, 1)
        pos[i] = (math.cos(angle), math.sin(angle))
    fig, ax = plt.subplots(figsize=(7, 7))
    for u, v, (a, b) in graph.edges:
        odd = abs(a - b) == 1
        x = [pos[u][0], pos[v][0]]
        y = [pos[u][1], pos[v][1]]
        ax.plot(x, y, color="tab:blue" if odd else "tab:red",
                linewidth=1.0 if odd else 2.0, zorder=1)
        ax.annotate(f"{{{a},{b}}}", ((x[0] + x[1]) / 2, (y[0] + y[1]) / 2),
                    fontsize=6, color="gray", ha="center")
    for i, word in enumerate(graph.vertices):
        ax.scatter(*pos[i], s=250, color="white", edgecolor="black", zorder=2)
        ax.annotate("".join(map(str, word)), pos[i], fontsize=6,
                    ha="center", va="center", zorder=3)
    ax.set_title(title or f"braid graph on {n} reduced words")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def draw_f_vector(fvector, path: str, title: str = "") -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    dims = list(range(-1, len(fvector) - 1))
    ax.bar([str(d) for d in dims], fvector, color="tab:blue")
    for x, f in zip(range(len(fvector)), fvector):
        ax.annotate(str(f), (x, f), ha="center", va="bottom", fontsize=7)
    ax.set_xlabel("face dimension")
    ax.set_ylabel("number of faces")
    ax.set_title(title or "f-vector")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def draw_signature_counts(rows, path: str, title: str = "") -> str:
    """Grouped bars of (label, good, bad, zero) rows."""
    labels = [r[0] for r in rows]
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.27
    for off, (key, color) in enumerate(
            [("good", "tab:green"), ("bad", "tab:red"), ("zero", "tab:gray")]):
        vals = [r[1 + off] for r in rows]
        ax.bar([x + (off - 1) * width for x in xs], vals, width,
               label=key, color=color)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_yscale("symlog")
    ax.set_ylabel("reduced-expression subwords")
    ax.legend()
    ax.set_title(title or "determinant sign tallies")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def draw_survey_tally(tally: dict, path: str, title: str = "") -> str:
    keys = ["regular", "non_regular", "incomplete"]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(keys, [tally.get(k, 0) for k in keys],
           color=["tab:green", "tab:red", "tab:gray"])
    for x, k in enumerate(keys):
        ax.annotate(str(tally.get(k, 0)), (x, tally.get(k, 0)),
                    ha="center", va="bottom")
    ax.set_ylabel("fans")
    ax.set_title(title or "regularity survey")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
