"""Companion figures for the command-line tables, rendered headlessly."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first
import numpy as np  # noqa: E402

__all__ = ["png_path_for", "save_line_plot", "save_histogram", "save_errorbar"]


def png_path_for(output_path) -> str:
    """sample.csv -> sample.png; extensionless paths just gain .png."""
    base, ext = os.path.splitext(str(output_path))
    return (base if ext else str(output_path)) + ".png"


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), constrained_layout=True)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path) -> None:
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_line_plot(path, x, curves, title, xlabel, ylabel, logy=False) -> None:
    """curves: mapping label -> y values over the common abscissae x."""
    fig, ax = _new_axes(title, xlabel, ylabel)
    for label, y in curves.items():
        ax.plot(x, y, label=label)
    if logy:
        ax.set_yscale("log")
    if len(curves) > 1:
        ax.legend()
    _finish(fig, path)


def save_histogram(path, values, title, xlabel, bins=60, overlay=None) -> None:
    """overlay: optional (x, y, label) curve drawn over the density histogram."""
    fig, ax = _new_axes(title, xlabel, "density")
    ax.hist(np.asarray(values, dtype=float), bins=bins, density=True,
            alpha=0.65, color="#4878a8")
    if overlay is not None:
        ox, oy, label = overlay
        ax.plot(ox, oy, "r-", label=label)
        ax.legend()
    _finish(fig, path)


def save_errorbar(path, labels, estimates, stderrs, references, title, ylabel) -> None:
    """Monte Carlo estimates with 3-sigma whiskers next to reference marks."""
    fig, ax = _new_axes(title, "", ylabel)
    pos = np.arange(len(labels))
    ax.errorbar(pos, estimates, yerr=3.0 * np.asarray(stderrs, dtype=float),
                fmt="o", capsize=4, label="monte carlo (3 se)")
    ax.plot(pos, references, "r_", markersize=18, label="closed form")
    ax.set_xticks(pos)
    ax.set_xticklabels(labels)
    ax.legend()
    _finish(fig, path)
