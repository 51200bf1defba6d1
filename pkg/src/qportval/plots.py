"""Figure rendering for the report paths.

Each CLI report command writes a PNG next to its data output: an error-bar
comparison for pricing runs, a log-log scaling plot for sweeps, and a fidelity
bar chart.  The data files remain the primary output; figures are a
convenience view of the same numbers.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_METHOD_COLORS = {"classical": "tab:blue", "quantum": "tab:orange"}


def figure_path_for(out_path: str | Path) -> Path:
    """Sibling PNG path for a data output file."""
    return Path(out_path).with_suffix(".png")


def render_price_figure(report: dict, path: str | Path) -> Path:
    """Mean estimates with error bars against the market-value line."""
    summary = report["summary"]
    labels = ["classical", "quantum"]
    means = [summary["classical_mean_euros"], summary["quantum_mean_euros"]]
    errs = [summary["classical_sigma_euros"], summary["quantum_sigma_euros"]]

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for x, (label, mean, err) in enumerate(zip(labels, means, errs)):
        ax.errorbar(
            [x], [mean], yerr=[err], fmt="o", capsize=6,
            color=_METHOD_COLORS[label], label=label,
        )
    ax.axhline(
        report["market_value_euros"], color="black", linestyle="--",
        linewidth=1, label="market value",
    )
    ax.axhline(
        report["reference_mean_euros"], color="gray", linestyle=":",
        linewidth=1, label="grid mean (oracle)",
    )
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_xlim(-0.5, len(labels) - 0.5)
    ax.set_ylabel("intrinsic value (EUR)")
    ax.set_title(f"{report['market']} market, {summary['n_queries']} queries")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_sweep_figure(rows: list[dict], slopes: dict[str, float], path: str | Path) -> Path:
    """Estimation error versus query count, log-log, with fitted slopes."""
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    for method, color in _METHOD_COLORS.items():
        pts = [(r["n_queries"], r["sigma_euros"]) for r in rows if r["method"] == method]
        if not pts:
            continue
        nq, sig = zip(*pts)
        slope = slopes.get(method, float("nan"))
        marker = "o" if method == "classical" else "^"
        ax.loglog(nq, sig, marker, color=color, label=f"{method} (slope {slope:+.2f})")
        # guide line through the first point with the fitted slope
        guide = sig[0] * (np.asarray(nq) / nq[0]) ** slope
        ax.loglog(nq, guide, "--", color=color, linewidth=1, alpha=0.6)
    ax.set_xlabel("queries to the loading operator")
    ax.set_ylabel("estimation error (EUR)")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_fidelity_figure(reports: list[dict], path: str | Path) -> Path:
    """Fidelity per circuit with dispersion bars."""
    labels = [r["circuit"] for r in reports]
    mus = [r["mu"] for r in reports]
    sigmas = [r["sigma"] for r in reports]

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    xs = range(len(labels))
    ax.bar(xs, mus, yerr=sigmas, capsize=6, color="tab:green", alpha=0.8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=15, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("Hellinger fidelity")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
