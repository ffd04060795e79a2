"""Figures rendered next to the CSV reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .coverage import CoverageProfile  # noqa: E402
from .metrics import MetricsReport  # noqa: E402


def _values(reports, attr):
    return np.array([np.nan if getattr(r, attr) is None else getattr(r, attr) for r in reports], dtype=float)


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_baseline(reports: Sequence[MetricsReport], path) -> Path:
    t = np.array([r.time for r in reports])
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    ax = axes[0, 0]
    ax.plot(t, _values(reports, "avg_degree_sat"), "o-", label="satellites")
    ax.plot(t, _values(reports, "avg_degree_gs"), "s-", label="gateways")
    ax.set_ylabel("average degree")
    ax.legend(frameon=False)

    ax = axes[0, 1]
    ax.plot(t, _values(reports, "avg_clustering_sat"), "o-", label="satellites")
    ax.plot(t, _values(reports, "avg_clustering_gs"), "s-", label="gateways")
    ax.set_ylabel("average clustering")
    ax.legend(frameon=False)

    ax = axes[1, 0]
    ax.plot(t, _values(reports, "diameter"), "o-", label="diameter")
    ax.plot(t, _values(reports, "apl"), "s-", label="APL")
    ax.set_ylabel("hops")
    ax.set_xlabel("time [s]")
    ax.legend(frameon=False)

    ax = axes[1, 1]
    ax.plot(t, _values(reports, "div_bc"), "o-", color="C3")
    ax.set_ylim(0, 1)
    ax.set_ylabel("gateway betweenness divergence")
    ax.set_xlabel("time [s]")
    return _save(fig, path)


def plot_robustness(summary: dict[float, dict[str, float | None]], path) -> Path:
    """Across-window means against dropout probability (evenly spaced categories)."""
    probs = sorted(summary)
    x = np.arange(len(probs))

    def col(key):
        return np.array([np.nan if summary[p][key] is None else summary[p][key] for p in probs], dtype=float)

    panels = [
        (("components", "isolated_gs"), "count"),
        (("avg_deg_sat", "avg_deg_gs"), "average degree"),
        (("clust_sat", "clust_gs"), "average clustering"),
        (("diameter", "apl"), "hops"),
        (("div_bc",), "betweenness divergence"),
    ]
    fig, axes = plt.subplots(1, len(panels), figsize=(18, 3.6))
    for ax, (keys, label) in zip(axes, panels):
        for k in keys:
            ax.plot(x, col(k), "o-", label=k)
        ax.set_ylabel(label)
        ax.set_xticks(x)
        ax.set_xticklabels([f"{100 * p:g}" for p in probs], rotation=60, fontsize=8)
        ax.set_xlabel("gateway dropout [%]")
        ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)


def plot_coverage(profile: CoverageProfile, path) -> Path:
    lat = profile.lat_centers
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k, name in enumerate(profile.shell_names):
        ax.plot(lat, profile.per_shell[k], lw=1.2, label=name)
    if profile.shell_names:
        ax.plot(lat, profile.combined, "k-", lw=2, label="all shells")
    ax.set_xlim(-90, 90)
    ax.set_xlabel("latitude [deg]")
    ax.set_ylabel(f"mean visible satellites (elev >= {profile.threshold:g} deg)")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)
