"""Figure rendering for the report path (matplotlib, file output only)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

LOG_SCALE_FAMILIES = {"werner_qutrit", "werner_qubit_qutrit"}


def render_curve(fam_id: str, grid: np.ndarray, values: np.ndarray,
                 path: str | Path, var_name: str = "theta",
                 ylabel: str = "prior density") -> Path:
    """Render one prior or marginal curve to an image file."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    mask = np.isfinite(values)
    ax.plot(grid[mask], values[mask], lw=1.4)
    ax.set_xlabel(var_name)
    ax.set_ylabel(ylabel)
    ax.set_title(fam_id)
    if fam_id in LOG_SCALE_FAMILIES and np.any(values[mask] > 0):
        ax.set_yscale("log")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def render_report_figures(out_dir: str | Path, points: int = 400) -> list[Path]:
    """Write the standard set of prior/marginal figures next to a report."""
    from .cli import plot_table, PLOTTABLE

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fam_id in PLOTTABLE:
        var_name, grid, values = plot_table(fam_id, points)
        ylabel = "marginal density" if fam_id in ("twoparam_intra",
                                                  "threeparam_intra",
                                                  "rho_p", "tsallis_q1",
                                                  "tsallis_qhalf") else "prior density"
        written.append(render_curve(fam_id, grid, values,
                                    out_dir / f"prior_{fam_id}.png",
                                    var_name, ylabel))
    return written
