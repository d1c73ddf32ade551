"""
Plotting for witness slopes and area profiles.
"""

from .plot_config import PlotConfig, PlotTheme, PUBLICATION_THEME
from .scientific_plots import AreaProfilePlotter, BasePlotter, ExponentPlotter

__all__ = [
    'PlotConfig',
    'PlotTheme',
    'PUBLICATION_THEME',
    'BasePlotter',
    'ExponentPlotter',
    'AreaProfilePlotter',
]
