"""SVG Exporter Module - static scatter plots of (co)amoeba samples"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from config.config import get_config  # noqa: E402
from ..errors import InvalidSpec, IoError, UnknownColumn  # noqa: E402

logger = logging.getLogger(__name__)

PATTERN_COLUMN = 'pattern'


@dataclass(frozen=True)
class PlotStyle:
    """Scatter appearance"""

    marker_size: float = 4.0
    alpha: float = 0.7
    color: str = '#1f77b4'
    title: Optional[str] = None


class SVGExporter:
    """Render 2D or 3D scatter plots of point clouds as standalone SVG"""

    def __init__(self, size: Optional[int] = None):
        """
        Initialize SVG exporter

        Args:
            size: Width and height of the viewport in points (export.svg_size)
        """
        self.size = int(size if size is not None else get_config('export.svg_size', 800))

    def export(self, cloud: pd.DataFrame, axes: Sequence[str], path: Union[str, Path],
               style: Optional[PlotStyle] = None) -> str:
        """
        Scatter the named columns of a point cloud

        Points are coloured by the 'pattern' column when present. Output bytes
        depend only on the input.

        Args:
            cloud: Point cloud
            axes: Two or three column names
            path: Output file
            style: Plot style

        Returns:
            Path to exported file
        """
        axes = list(axes)
        if len(axes) not in (2, 3):
            raise InvalidSpec(f"need two or three axes, got {len(axes)}")
        for column in axes:
            if column not in cloud.columns:
                raise UnknownColumn(column)
        style = style or PlotStyle()
        filepath = Path(path)

        inches = self.size / 72.0
        with plt.rc_context({'svg.hashsalt': 'amoeba', 'svg.fonttype': 'path'}):
            fig = plt.figure(figsize=(inches, inches), dpi=72)
            try:
                projection = '3d' if len(axes) == 3 else None
                ax = fig.add_subplot(1, 1, 1, projection=projection)
                self._scatter(ax, cloud, axes, style)
                ax.set_xlabel(axes[0])
                ax.set_ylabel(axes[1])
                if len(axes) == 3:
                    ax.set_zlabel(axes[2])
                if style.title:
                    ax.set_title(style.title)

                filepath.parent.mkdir(parents=True, exist_ok=True)
                fig.savefig(filepath, format='svg', metadata={'Date': None})
            except OSError as e:
                logger.error(f"Error exporting to SVG: {str(e)}")
                raise IoError(f"cannot write {filepath}: {e}")
            finally:
                plt.close(fig)

        logger.info(f"Plotted {len(cloud)} points to SVG: {filepath}")
        return str(filepath)

    @staticmethod
    def _scatter(ax, cloud: pd.DataFrame, axes: Sequence[str], style: PlotStyle) -> None:
        columns = [cloud[c].to_numpy(dtype=float) for c in axes]
        if PATTERN_COLUMN not in cloud.columns:
            ax.scatter(*columns, s=style.marker_size, alpha=style.alpha, color=style.color)
            return

        labels = cloud[PATTERN_COLUMN].astype(str).to_numpy()
        cmap = plt.get_cmap('tab20')
        for index, label in enumerate(sorted(set(labels))):
            mask = labels == label
            ax.scatter(*[c[mask] for c in columns], s=style.marker_size, alpha=style.alpha,
                       color=cmap(index % cmap.N), label=label)
        ax.legend(loc='upper right', fontsize='small')


def emit_svg(cloud: pd.DataFrame, axes: Sequence[str], path: Union[str, Path],
             style: Optional[PlotStyle] = None) -> str:
    return SVGExporter().export(cloud, axes, path, style)
