"""Figures rendered next to CLI reports."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def root_plot(moduli_or_roots, radius: float, path, title: str = ""):
    """Inverse-root scatter against the circle |z| = radius."""
    plt = _pyplot()
    z = np.asarray(moduli_or_roots, dtype=complex)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    th = np.linspace(0, 2 * np.pi, 400)
    ax.plot(radius * np.cos(th), radius * np.sin(th), lw=0.8, color="0.6")
    ax.scatter(z.real, z.imag, s=8)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def census_plot(slices: dict, path, title: str = ""):
    """Histogram of N(x, d) over classes x, one panel per degree d."""
    plt = _pyplot()
    ds = sorted(slices)
    fig, axes = plt.subplots(1, len(ds), figsize=(2.6 * len(ds), 2.6), squeeze=False)
    for ax, d in zip(axes[0], ds):
        v = np.asarray(slices[d])
        vals, cnt = np.unique(v, return_counts=True)
        ax.bar(vals, cnt, width=0.8)
        ax.set_title(f"d = {d}", fontsize=9)
        ax.set_xlabel("N(x, d)")
    axes[0][0].set_ylabel("classes")
    if title:
        fig.suptitle(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
