"""Render a database to files: one TSV per table plus a map figure.

The figure draws every stored entity's cell decomposition in world
coordinates (areas as filled blocks, lines as outlined blocks, points as
markers), which makes the mixed block sizes of condensed regions visible
at a glance. Matplotlib loads lazily so the engine itself stays import-light.
"""

from __future__ import annotations

from pathlib import Path

from .quadcode import cell_rect
from .relengine import Database
from .storage import save_db

_LAYERS = (
    # table, fill, edge, alpha
    ("AREAS", "#7fb3d5", "#2471a3", 0.6),
    ("LINES", "#f5b041", "#af601a", 0.8),
    ("POINTS", "#e74c3c", "#922b21", 0.9),
)


def _world_rect(db: Database, code):
    x0, y0, x1, y1 = cell_rect(code)
    minx, miny, maxx, maxy = db.window.window
    w = maxx - minx
    h = maxy - miny
    return (minx + x0 * w, miny + y0 * h, (x1 - x0) * w, (y1 - y0) * h)


def render_map(db: Database, out_path) -> Path:
    """Draw all stored entities' cells to a PNG; returns the file path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    fig, ax = plt.subplots(figsize=(8, 8))
    minx, miny, maxx, maxy = db.window.window
    ax.add_patch(
        Rectangle((minx, miny), maxx - minx, maxy - miny,
                  fill=False, edgecolor="#555555", linewidth=1.2)
    )
    labeled = set()
    for table, fill, edge, alpha in _LAYERS:
        if not db.has_table(table):
            continue
        rel = db.table(table)
        try:
            code_idx = rel.column_index("CODE")
        except Exception:
            continue
        for row in rel.sorted_rows():
            code = row[code_idx]
            if code is None:
                continue
            x, y, w, h = _world_rect(db, code)
            label = None
            if table not in labeled:
                label = table.capitalize()
                labeled.add(table)
            if table == "POINTS":
                ax.plot(x + w / 2, y + h / 2, "o", color=fill,
                        markeredgecolor=edge, markersize=6, label=label)
                ax.add_patch(Rectangle((x, y), w, h, fill=False,
                                       edgecolor=edge, linewidth=0.6))
            else:
                ax.add_patch(Rectangle((x, y), w, h, facecolor=fill,
                                       edgecolor=edge, alpha=alpha,
                                       linewidth=0.7, label=label))
    ax.set_xlim(minx, maxx)
    ax.set_ylim(miny, maxy)
    ax.set_aspect("equal")
    ax.set_title("stored entities and their cell decomposition")
    if labeled:
        ax.legend(loc="upper right", fontsize=8)
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def write_report(db: Database, out_dir) -> list[Path]:
    """Write per-table TSVs and map.png into out_dir; returns written paths.

    The TSV files are the storage format, so the report doubles as an
    exportable snapshot of the relations.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_db(db, out)
    written = [out / f"{name}.tsv" for name in sorted(db.tables)]
    written.append(render_map(db, out / "map.png"))
    return written
