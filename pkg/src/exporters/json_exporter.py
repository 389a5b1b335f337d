"""JSON Exporter Module"""

import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..errors import IoError

logger = logging.getLogger(__name__)


def _to_builtin(value: Any) -> Any:
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(report: Any) -> str:
    """Serialize a report (dict or object with to_dict) keeping key insertion order"""
    payload = report.to_dict() if hasattr(report, 'to_dict') else report
    return json.dumps(payload, indent=2, default=_to_builtin) + "\n"


class JSONExporter:
    """Export result reports to JSON"""

    def export(self, report: Any, path: Union[str, Path]) -> str:
        """
        Write a report as JSON

        Args:
            report: Dict or result object with to_dict()
            path: Output file

        Returns:
            Path to exported file
        """
        filepath = Path(path)
        text = to_json(report)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
            filepath.write_text(text)
        except OSError as e:
            logger.error(f"Error exporting to JSON: {str(e)}")
            raise IoError(f"cannot write {filepath}: {e}")

        logger.info(f"Report exported to JSON: {filepath}")
        return str(filepath)


def emit_json(report: Any, path: Union[str, Path]) -> str:
    return JSONExporter().export(report, path)
