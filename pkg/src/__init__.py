"""Amoebas and coamoebas of affine linear spaces - Main Package"""

__version__ = "1.0.0"
__description__ = "Membership, dimension, volume and fiber computations for (co)amoebas of linear spaces"

from .models import AffineSpaceSpec, LaurentPolynomial, normalize
from .analyzers import (
    AmoebaVolumeAnalyzer,
    CertificateAnalyzer,
    CoamoebaSolver,
    LineAnalyzer,
    RankAnalyzer,
)
from .pipeline import AmoebaPipeline

__all__ = [
    'AffineSpaceSpec',
    'LaurentPolynomial',
    'normalize',
    'RankAnalyzer',
    'LineAnalyzer',
    'CoamoebaSolver',
    'AmoebaVolumeAnalyzer',
    'CertificateAnalyzer',
    'AmoebaPipeline',
]
