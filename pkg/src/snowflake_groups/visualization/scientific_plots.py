"""
Plots for witness distortion slopes and van Kampen area profiles.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from scipy import stats

from ..service.dehn_service import ExponentReport
from .plot_config import PUBLICATION_THEME, SERIES_COLORS, PlotConfig, PlotTheme

logger = logging.getLogger(__name__)


class BasePlotter:
    """Base class for plotters with common functionality."""

    def __init__(self, config: Optional[PlotConfig] = None, theme: Optional[PlotTheme] = None):
        self.config = config or PlotConfig()
        self.theme = theme or PUBLICATION_THEME
        self.config.apply_theme(self.theme)

    def _save_figure(self, fig: plt.Figure, output_path: Path, close_fig: bool = True) -> None:
        """Save figure with proper formatting and cleanup."""
        output_path.parent.mkdir(parents=True, exist_ok=True)

        fig.savefig(
            output_path,
            format=self.config.output_format,
            dpi=self.config.output_dpi,
            bbox_inches=self.config.bbox_inches,
            facecolor='white',
            edgecolor='none'
        )

        logger.info(f"Saved plot to {output_path}")

        if close_fig:
            plt.close(fig)


class ExponentPlotter(BasePlotter):
    """Witness slope samples s_k against the predicted exponent."""

    def plot_slope_convergence(self, reports: Sequence[ExponentReport], output_dir: Path) -> Path:
        """
        Plot slope samples per level, one series per (p, q).

        Args:
            reports: exponent reports to draw
            output_dir: directory for the figure

        Returns:
            Path to saved plot
        """
        fig, ax = plt.subplots(1, 1, figsize=self.config.figsize_slopes)

        for i, report in enumerate(reports):
            color = SERIES_COLORS[i % len(SERIES_COLORS)]
            levels = np.arange(len(report.slope_samples))
            ax.plot(levels, report.slope_samples, marker='o', color=color,
                    alpha=self.theme.alpha, label=f'p={report.p}, q={report.q}')
            if self.config.show_alpha_reference:
                ax.axhline(y=report.alpha, color=color, linestyle='--', linewidth=1, alpha=0.6)
            if self.config.show_witness_limit and report.q > 1:
                ax.axhline(y=report.witness_limit, color=color, linestyle=':', linewidth=1, alpha=0.6)

        ax.set_xlabel('Witness level k')
        ax.set_ylabel('Slope sample s_k')
        ax.set_title('Distortion slopes of witness words (dashed: log2(2p/q))')
        ax.legend(loc='lower right')

        plt.tight_layout()
        name = "_".join(f"p{r.p}q{r.q}" for r in reports) or "empty"
        output_path = output_dir / f"slopes_{name}.{self.config.output_format}"
        self._save_figure(fig, output_path)
        return output_path


class AreaProfilePlotter(BasePlotter):
    """Maximal minimal area against word length, with an optional log-log power fit."""

    def plot_profile(self, frame: pd.DataFrame, title: str, output_dir: Path) -> Path:
        """
        Plot an area profile table with columns ``n`` and ``max_area``.

        Args:
            frame: output of ``AreaProfile.to_frame``
            title: family label used in the title and file name
            output_dir: directory for the figure

        Returns:
            Path to saved plot
        """
        fig, ax = plt.subplots(1, 1, figsize=self.config.figsize_profile)

        ax.step(frame['n'], frame['max_area'], where='post', color=self.theme.primary_color,
                label='max area')

        positive = frame[(frame['max_area'] > 0) & (frame['n'] > 0)]
        if self.config.show_power_fit and len(positive) >= self.config.min_points_for_fit:
            fit = stats.linregress(np.log(positive['n'].astype(float)),
                                   np.log(positive['max_area'].astype(float)))
            fitted = np.exp(fit.intercept) * positive['n'].astype(float) ** fit.slope
            ax.plot(positive['n'], fitted, linestyle='--', color=self.theme.accent_color,
                    label=f'power fit, exponent {fit.slope:.2f}')

        ax.set_xlabel('Word length n')
        ax.set_ylabel('Maximal minimal area')
        ax.set_title(f'Area profile: {title}')
        ax.legend(loc='upper left')

        plt.tight_layout()
        output_path = output_dir / f"profile_{title}.{self.config.output_format}"
        self._save_figure(fig, output_path)
        return output_path
