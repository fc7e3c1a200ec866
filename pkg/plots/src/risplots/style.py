"""Deterministic matplotlib setup shared by all renderers."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams.update(
    {
        "figure.figsize": (7.0, 4.2),
        "figure.dpi": 120,
        "savefig.dpi": 120,
        "svg.hashsalt": "risplots",  # stable element ids in SVG output
        "axes.grid": True,
        "grid.alpha": 0.3,
    }
)

COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def save_figure(fig, path):
    """Write the raster and vector twins with no volatile metadata."""
    from .io import default_sibling
    from pathlib import Path

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    for target in (path, default_sibling(path)):
        fig.savefig(target, metadata={"Date": None} if target.suffix == ".svg" else None)
    plt.close(fig)
    return path
