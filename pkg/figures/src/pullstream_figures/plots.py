"""The four report panels: topology scatter plus one CDF per QoE metric."""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import empirical_cdf, validate_cdf

PANELS = ("topology", "cdf_quality", "cdf_prebuffer", "cdf_rebuffer")


def plot_topology(topology, ax=None):
    if ax is None:
        _, ax = plt.subplots(figsize=(4.2, 3.4))
    users = topology["user"]
    helpers = topology["helper"]
    if users.size:
        ax.scatter(users[:, 0], users[:, 1], s=22, marker="o", label="users")
    if helpers.size:
        ax.scatter(helpers[:, 0], helpers[:, 1], s=140, marker="^", label="helpers")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("topology")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    return ax.figure


def plot_cdf_panel(runs, metric, xlabel, title, ax=None):
    if ax is None:
        _, ax = plt.subplots(figsize=(4.2, 3.4))
    for run in runs:
        x, F = empirical_cdf(getattr(run, metric))
        validate_cdf(x, F)
        ax.step(x, F, where="post", label=run.label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("CDF over users")
    ax.set_ylim(0.0, 1.05)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    return ax.figure


def render_panels(runs, topology, out_dir, formats=("png", "svg"), dpi=150) -> list:
    """Write every panel in every format; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    panels = {
        "topology": lambda: plot_topology(topology),
        "cdf_quality": lambda: plot_cdf_panel(
            runs, "quality", "average video quality (SSIM-like index)", "CDF of avg. video quality"),
        "cdf_prebuffer": lambda: plot_cdf_panel(
            runs, "prebuffer_s", "pre-buffering time (s)", "CDF of pre-buffering time"),
        "cdf_rebuffer": lambda: plot_cdf_panel(
            runs, "rebuffer_pct", "rebuffering (% of video duration)", "CDF of rebuffering percentage"),
    }
    written = []
    for name in PANELS:
        fig = panels[name]()
        fig.tight_layout()
        for ext in formats:
            path = os.path.join(out_dir, f"{name}.{ext}")
            fig.savefig(path, dpi=dpi)
            written.append(path)
        plt.close(fig)
    return written
