"""Figure rendering for case-study enclosures.

matplotlib is imported lazily with the Agg backend so that headless runs
and library users who never plot pay nothing for it.
"""

from __future__ import annotations


def render_enclosures(path: str, rows, frame=None, title: str = "",
                      xlabel: str = "", ylabel: str = "") -> None:
    """Draw enclosure rectangles (one per CSV row) to an image file.

    rows: iterables (case, piece_id, x_lo, x_hi, y_lo, y_hi).
    frame: optional (x_lo, x_hi, y_lo, y_hi) reference rectangle drawn
    behind the enclosures (e.g. the trapping region).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    fig, ax = plt.subplots(figsize=(7, 5))
    if frame is not None:
        fx0, fx1, fy0, fy1 = frame
        ax.add_patch(Rectangle((fx0, fy0), fx1 - fx0, fy1 - fy0,
                               fill=False, edgecolor="black", linewidth=1.2))
    for _, _, x_lo, x_hi, y_lo, y_hi in rows:
        ax.add_patch(Rectangle((x_lo, y_lo), max(x_hi - x_lo, 1e-12),
                               max(y_hi - y_lo, 1e-12),
                               facecolor="tab:blue", edgecolor="tab:blue",
                               alpha=0.5, linewidth=0.4))
    ax.autoscale_view()
    ax.relim()
    # autoscale ignores patches; set limits from the data directly
    xs = [r[2] for r in rows] + [r[3] for r in rows]
    ys = [r[4] for r in rows] + [r[5] for r in rows]
    if frame is not None:
        xs += [frame[0], frame[1]]
        ys += [frame[2], frame[3]]
    if xs and ys:
        px = 0.05 * (max(xs) - min(xs)) or 0.1
        py = 0.05 * (max(ys) - min(ys)) or 0.1
        ax.set_xlim(min(xs) - px, max(xs) + px)
        ax.set_ylim(min(ys) - py, max(ys) + py)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
