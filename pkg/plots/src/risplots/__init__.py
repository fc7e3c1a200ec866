"""Batch renderers for risbandit result artifacts.

Everything here is a pure reader of the documented CSV/JSON schemas:
training-curve figures with rolling-statistics bands, grouped sum-rate
bars across RIS sizes, and a normalized-rate table across transmit
powers. Outputs are deterministic so figures can be diffed.
"""

__version__ = "0.1.0"

from .bars import plot_rate_bars
from .curves import CurveSpec, plot_training_curves
from .rolling import rolling_stats
from .tables import emit_power_table

__all__ = [
    "CurveSpec",
    "emit_power_table",
    "plot_rate_bars",
    "plot_training_curves",
    "rolling_stats",
]
