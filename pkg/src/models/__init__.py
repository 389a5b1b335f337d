"""Models Module - Affine spaces, torus points and Laurent polynomials"""

from .affine_space import (
    AffineSpaceSpec,
    CanonicalSpec,
    LogPoint,
    ParameterPoint,
    TorusPoint,
    TranslationRecord,
    arg_map,
    evaluate,
    is_real,
    line_spec,
    load_spec,
    log_map,
    normalize,
    realify,
    spec_from_dict,
    spec_to_dict,
)
from .estimates import VolumeEstimate
from .laurent import LaurentPolynomial, load_ideal, monomial

__all__ = [
    'AffineSpaceSpec', 'CanonicalSpec', 'LogPoint', 'ParameterPoint', 'TorusPoint', 'TranslationRecord',
    'arg_map', 'evaluate', 'is_real', 'line_spec', 'load_spec', 'log_map', 'normalize', 'realify',
    'spec_from_dict', 'spec_to_dict', 'VolumeEstimate', 'LaurentPolynomial', 'load_ideal', 'monomial',
]
