"""CSV Exporter Module"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..errors import InvalidSpec, IoError

logger = logging.getLogger(__name__)


def validate_cloud(cloud: pd.DataFrame) -> pd.DataFrame:
    """
    Check that every numeric column of a point cloud is finite

    Args:
        cloud: Point cloud (parameter coords, image coords, optional pattern labels)

    Returns:
        The same DataFrame
    """
    numeric = cloud.select_dtypes(include=[np.number])
    if numeric.size and not np.all(np.isfinite(numeric.to_numpy(dtype=float))):
        raise InvalidSpec("point cloud has non-finite values")
    return cloud


class CSVExporter:
    """Export point clouds to CSV"""

    def __init__(self, output_dir: Optional[str] = None):
        """
        Initialize CSV exporter

        Args:
            output_dir: Directory for relative paths (None keeps paths as given)
        """
        self.output_dir = Path(output_dir) if output_dir else None

    def _resolve(self, path: Union[str, Path]) -> Path:
        filepath = Path(path)
        if self.output_dir is not None and not filepath.is_absolute():
            filepath = self.output_dir / filepath
        return filepath

    def export(self, cloud: pd.DataFrame, path: Union[str, Path]) -> str:
        """
        Write a point cloud as CSV

        Header row, RFC-4180 quoting and CRLF line ends; floats carry 17
        significant digits so values re-parse bit-identically.

        Args:
            cloud: Point cloud
            path: Output file

        Returns:
            Path to exported file
        """
        validate_cloud(cloud)
        filepath = self._resolve(path)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
            cloud.to_csv(filepath, index=False, float_format='%.17g', lineterminator='\r\n')
        except OSError as e:
            logger.error(f"Error exporting to CSV: {str(e)}")
            raise IoError(f"cannot write {filepath}: {e}")

        logger.info(f"Exported {len(cloud)} points to CSV: {filepath}")
        return str(filepath)


def emit_csv(cloud: pd.DataFrame, path: Union[str, Path]) -> str:
    return CSVExporter().export(cloud, path)
