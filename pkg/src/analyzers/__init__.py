"""Analyzers Module - (Co)amoeba computations"""

from .rank_analyzer import RankAnalyzer, ModulusCoords, ArgCoords, GaussMatrix
from .line_analyzer import LineAnalyzer, QuadricCoeffs, LineMembership, FiberSolutions
from .coamoeba_solver import CoamoebaSolver, SignPattern, CoamoebaMembership, TilingStats
from .amoeba_volume import AmoebaVolumeAnalyzer, MultistartConfig, FiberCountResult
from .certificate_analyzer import (
    CertificateAnalyzer,
    CertificateReport,
    TorusFiber,
    conjugate_reflection,
    coamoeba_reflection,
)

__all__ = [
    'RankAnalyzer', 'ModulusCoords', 'ArgCoords', 'GaussMatrix',
    'LineAnalyzer', 'QuadricCoeffs', 'LineMembership', 'FiberSolutions',
    'CoamoebaSolver', 'SignPattern', 'CoamoebaMembership', 'TilingStats',
    'AmoebaVolumeAnalyzer', 'MultistartConfig', 'FiberCountResult',
    'CertificateAnalyzer', 'CertificateReport', 'TorusFiber',
    'conjugate_reflection', 'coamoeba_reflection',
]
