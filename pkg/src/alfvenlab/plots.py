"""Figure rendering for the report path.

All figures are written to files (Agg backend); the delimited tables they
accompany are produced by the experiments module.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_functional_series",
    "plot_scaling_fit",
    "plot_decay_series",
    "render_record_figures",
]

_FIGSIZE = (6.4, 4.0)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_functional_series(record, path):
    """E_k, W_k, D_k time series of one run."""
    ts = [r.t_star for r in record.reports]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(ts, [r.energy for r in record.reports], label="$E_k$")
    ax.plot(ts, [r.weighted for r in record.reports], label="$W_k$")
    ax.plot(ts, [r.dissipation for r in record.reports], label="$D_k$")
    ax.set_xlabel("fast time $t_*$")
    ax.set_yscale("log")
    ax.set_title(f"weighted functionals, eps={record.epsilon:g}, nu={record.nu:g}")
    ax.legend()
    return _save(fig, path)


def plot_decay_series(record, path):
    """Weighted pointwise sup and ball sup over time."""
    ts = [r.t_star for r in record.reports]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(ts, [r.decay_sup_plus for r in record.reports], label="weighted sup (+)")
    ax.plot(ts, [r.decay_sup_minus for r in record.reports], label="weighted sup (-)")
    ax.plot(ts, [r.ball_sup for r in record.reports], label="ball sup")
    ax.set_xlabel("fast time $t_*$")
    ax.set_yscale("log")
    ax.set_title(f"decay diagnostics, eps={record.epsilon:g}, nu={record.nu:g}")
    ax.legend()
    return _save(fig, path)


def plot_scaling_fit(fit, path, xlabel="parameter", title="scaling fit"):
    """Log-log data points with the fitted power law."""
    xs = np.asarray(fit.xs)
    ys = np.asarray(fit.ys)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.loglog(xs, ys, "o", label="measured")
    xx = np.linspace(xs.min(), xs.max(), 50)
    ax.loglog(xx, np.exp(fit.log_intercept) * xx ** fit.exponent, "-",
              label=f"slope {fit.exponent:.3f}, $r^2$={fit.r_squared:.4f}")
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    ax.legend()
    return _save(fig, path)


def render_record_figures(records, out_dir):
    """One functional figure and one decay figure per record."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for rec in records:
        stem = f"run_eps{rec.epsilon:g}_nu{rec.nu:g}"
        written.append(plot_functional_series(
            rec, os.path.join(out_dir, stem + "_functionals.png")))
        written.append(plot_decay_series(
            rec, os.path.join(out_dir, stem + "_decay.png")))
    return written
