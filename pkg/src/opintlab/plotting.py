"""Matplotlib figure rendering for the CLI report paths.

Each renderer takes already-computed records and writes a single PNG next to
the delimited output; no randomness, no recomputation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_ratio_sweep_figure(records, path) -> None:
    """Max and mean normalized ratio versus dimension, one line per p."""
    by_p: dict = {}
    for rec in records:
        by_p.setdefault(rec.p, {}).setdefault(rec.dim, []).append(rec.normalized_ratio)
    fig, ax = plt.subplots(figsize=(6, 4))
    for p in sorted(by_p):
        dims = sorted(by_p[p])
        maxima = [max(by_p[p][d]) for d in dims]
        label = "p=inf" if p == float("inf") else f"p={p:g}"
        ax.plot(dims, maxima, marker="o", label=label)
    ax.set_xlabel("dimension")
    ax.set_ylabel("max normalized ratio")
    ax.set_title("Lipschitz ratio sweep")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_escape_probe_figure(rows, path) -> None:
    """lhs/rhs of the adjacent-measure probe versus dimension."""
    dims = [row["dim"] for row in rows]
    ratios = [row["ratio"] for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(dims, ratios, marker="s", color="tab:red")
    ax.set_xlabel("dimension")
    ax.set_ylabel("||W||_p / (rep norm * ||Q||_p)")
    ax.set_title("Adjacent-measure escape probe")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trajectory_figure(trajectory, path) -> None:
    """Accepted-move trajectory of one search run."""
    steps = [s for s, _ in trajectory]
    ratios = [r for _, r in trajectory]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(steps, ratios, where="post")
    ax.set_xlabel("step")
    ax.set_ylabel("best normalized ratio")
    ax.set_title("Counterexample search trajectory")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_residual_figure(residuals, tol, path) -> None:
    """Residual distribution for the perturbation-identity check."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(range(len(residuals)), sorted(residuals), marker=".", linestyle="none")
    ax.axhline(tol, color="tab:red", linestyle="--", label=f"tol={tol:g}")
    ax.set_xlabel("instance (sorted)")
    ax.set_ylabel("relative residual")
    ax.set_title("Perturbation identity residuals")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
