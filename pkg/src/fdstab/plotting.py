"""Static figures written next to the CSV/JSON outputs of the command line tool."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (6.0, 3.7),
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_integrand(omega, values, path, *, title=None, log_x=True):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(omega, values)
        if log_x:
            ax.set_xscale("log")
        ax.axhline(0.0, color="k", lw=0.6)
        ax.set_xlabel(r"$\omega$")
        ax.set_ylabel(r"Re$\{\Delta'(i\omega)/\Delta(i\omega)\}$")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_impulse(times, values, path, *, title=None, decay=None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(times, values)
        ax.axhline(0.0, color="k", lw=0.6)
        ax.set_xlabel("t")
        ax.set_ylabel("h(t)")
        label = title or "impulse response"
        ax.set_title(f"{label} ({decay})" if decay is not None else label)
        return _save(fig, path)


def plot_sweep(values, m_raw, path, *, param="p", title=None):
    m = np.array([np.nan if v is None else v for v in m_raw], dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(values, m, "o-", ms=3)
        top = np.nanmax(m) if np.isfinite(m).any() else 1.0
        for k in range(0, int(np.ceil(top)) + 1):
            ax.axhline(k, color="k", lw=0.4, ls=":")
        ax.set_xlabel(param)
        ax.set_ylabel("M (unstable roots)")
        if title:
            ax.set_title(title)
        return _save(fig, path)
