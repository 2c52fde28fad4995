"""Figure rendering for the report commands.

The fig-* CLI commands write delimited data and, next to it, a rendered
matplotlib figure of the same rows.  Rendering is file-only (Agg backend);
nothing opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rc("figure", figsize=(6.4, 4.0), dpi=150)
plt.rc("axes", linewidth=0.6)
plt.rc("font", size=9)


def save_relerr_figure(block_sizes, rel_errors, path) -> None:
    """Relative error of the asymptotic entropy against block size."""
    fig, ax = plt.subplots()
    ax.semilogy(block_sizes, np.abs(rel_errors), "o-", ms=2.5, lw=0.8, color="#1f77b4")
    ax.set_xlabel("block size $L$")
    ax.set_ylabel(r"$|S_{\mathrm{asym}} - S_{\mathrm{exact}}| / S_{\mathrm{exact}}$")
    ax.grid(True, which="both", alpha=0.3, lw=0.4)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_surface_figure(rows, m, path) -> None:
    """Entropy over the field plane (su(3) scans) as a heatmap.

    The S column dives toward minus infinity next to the simplex edges;
    the color scale is clipped below at zero so the structure elsewhere
    stays visible.  The underlying CSV keeps the raw values.
    """
    if m != 2:
        raise ValueError("surface rendering is for two field components")
    rows = np.asarray(rows)
    h1 = np.unique(rows[:, 0])
    h2 = np.unique(rows[:, 1])
    surface = rows[:, -1].reshape(h1.size, h2.size)
    fig, ax = plt.subplots()
    mesh = ax.pcolormesh(h1, h2, surface.T, cmap="viridis",
                         vmin=0.0, vmax=max(surface.max(), 1e-12), shading="nearest")
    fig.colorbar(mesh, ax=ax, label="$S$")
    ax.set_xlabel("$h_1$")
    ax.set_ylabel("$h_2$")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
