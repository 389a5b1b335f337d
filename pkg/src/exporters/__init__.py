"""Exporters Module - Point cloud and report export"""

from .csv_exporter import CSVExporter, emit_csv
from .json_exporter import JSONExporter, emit_json, to_json
from .svg_exporter import PlotStyle, SVGExporter, emit_svg

__all__ = ['CSVExporter', 'JSONExporter', 'SVGExporter', 'PlotStyle', 'emit_csv', 'emit_json', 'emit_svg', 'to_json']
