"""Trailing-window statistics.

Must stay numerically identical to the producer's smoothing (same trailing
window, same prefix warm-up, same per-window mean/std evaluation order) so
plotted bands agree with the training harness bit for bit.
"""

from __future__ import annotations

import numpy as np


def rolling_stats(series, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Mean and std over the last `window` points; prefixes use what exists."""
    if window < 1:
        raise ValueError("window must be >= 1")
    values = np.asarray(series, dtype=float)
    means = np.empty(values.size)
    stds = np.empty(values.size)
    for i in range(values.size):
        chunk = values[max(0, i + 1 - window) : i + 1]
        means[i] = chunk.mean()
        stds[i] = chunk.std()
    return means, stds
