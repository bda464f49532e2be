"""Figure rendering for sweep and verification reports.

matplotlib is imported lazily so the numerical library never pays for it.
"""
import math
from collections import defaultdict

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "legend.fontsize": 9,
    "legend.frameon": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_sweep(rows, path, var, ylabel="value", title=None):
    """One curve per method label from ``(x, label, value)`` rows."""
    plt = _pyplot()
    curves = defaultdict(list)
    for x, label, value in rows:
        curves[label].append((x, value))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label in sorted(curves):
            xs, ys = zip(*sorted(curves[label]))
            style = "-" if label.startswith(("closed", "oracle", "series", "auto")) else "--"
            ax.plot(xs, ys, style, label=label)
        ax.set_xlabel(var)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_verification(results, path):
    """Horizontal bars: log10(worst / tol) for tolerance checks, margin for strict ones."""
    plt = _pyplot()
    names, scores, colours = [], [], []
    for res in results:
        names.append(res.name)
        if res.tol is None:
            score = res.worst
        else:
            score = math.log10(max(res.worst, 1e-300) / res.tol)
        scores.append(score)
        colours.append("tab:green" if res.passed else "tab:red")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(7.0, 0.45 * len(names) + 1.2))
        ax.barh(range(len(names)), scores, color=colours)
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names)
        ax.axvline(0.0, color="k", linewidth=0.8)
        ax.set_xlabel("log10(worst error / tol)   |   min sandwich margin")
        ax.invert_yaxis()
        fig.savefig(path)
        plt.close(fig)
    return path
