"""Matplotlib renderings of the report outputs.

Figures are a visual companion to the machine-readable files (CSV, JSON,
PGM); nothing downstream parses them. The Agg backend keeps rendering
headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["save_curves_figure", "save_slice_figure"]

_CURVE_COLORS = ["#0072B2", "#D55E00", "#009E73", "#CC79A7", "#E69F00", "#56B4E9"]


def save_curves_figure(path, curves, bounds, title=""):
    """3D line plot of the vortex curves, one color per component."""
    fig = plt.figure(figsize=(6, 6), dpi=150)
    ax = fig.add_subplot(projection="3d")
    for i, curve in enumerate(curves):
        v = curve.vertices
        if curve.closed:
            v = np.vstack([v, v[:1]])
        label = f"component {i}" + ("" if curve.closed else " (open)")
        ax.plot(v[:, 0], v[:, 1], v[:, 2],
                color=_CURVE_COLORS[i % len(_CURVE_COLORS)],
                lw=1.2, label=label)
    for setter, (lo, hi) in zip((ax.set_xlim, ax.set_ylim, ax.set_zlim), bounds):
        setter(lo, hi)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_slice_figure(path, log10_u, extent, axis_labels, title=""):
    """Heatmap of log10 energy density over a plane slice."""
    fig, ax = plt.subplots(figsize=(6, 5), dpi=150)
    im = ax.imshow(log10_u.T, origin="lower", extent=extent, aspect="equal",
                   cmap="inferno")
    fig.colorbar(im, ax=ax, label="log10 u")
    ax.set_xlabel(axis_labels[0])
    ax.set_ylabel(axis_labels[1])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
