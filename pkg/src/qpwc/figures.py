"""Figure rendering for verify and sweep reports.

One PNG per report, written next to the delimited output.  The figures are
presentation-only: nothing in the reports depends on them, and they can be
switched off on the command line.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .checks import CheckResult, SweepResult

_FLOOR = 1e-17  # keeps exact zeros visible on log axes


def figure_path(out_path) -> Path:
    return Path(out_path).with_suffix(".png")


def render_verify_figure(results: list[CheckResult], path) -> Path:
    path = Path(path)
    n = max(len(results), 1)
    fig, ax = plt.subplots(figsize=(9, 0.28 * n + 1.6))
    ids = [r.check_id for r in results][::-1]
    residuals = np.array([max(r.residual, _FLOOR) for r in results])[::-1]
    tolerances = np.array([max(r.tolerance, _FLOOR) for r in results])[::-1]
    colors = ["#2a7e43" if r.passed else "#b03a2e" for r in results][::-1]
    y = np.arange(len(ids))
    ax.barh(y, residuals, color=colors, height=0.6, zorder=2)
    ax.scatter(tolerances, y, marker="|", s=120, color="#1b2631", zorder=3,
               label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(ids, fontsize=7)
    ax.set_xlabel("residual (log scale); tick = tolerance")
    ax.set_title("verification residuals")
    ax.grid(axis="x", alpha=0.3, zorder=0)
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_sweep_figure(result: SweepResult, path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    residuals = [max(r, _FLOOR) for r in result.residuals]
    ax.plot(result.dims, residuals, "o-", color="#1f618d")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("clock dimension d")
    ax.set_ylabel("residual")
    flag = "required non-increasing" if result.monotone_required else "reported"
    ax.set_title(f"{result.check_id} ({flag})")
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
