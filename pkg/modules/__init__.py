"""
Paquete de Módulos del Analizador de Integrales de Sensibilidad
Desarrollado para Su Majestad

Este paquete contiene los módulos para verificar numéricamente las
restricciones integrales de sensibilidad y sensibilidad complementaria de
lazos discretos SISO y MIMO cuadrados.
"""

from .polynomial import Polynomial, RootSet, roots, from_roots, eval_at, cancel_common_roots
from .lti import (
    RationalSystem, StateSpaceSystem, sensitivity, complementary, classify_roots,
    markov_gain, freq_response, interpolation_check
)
from .mimo import (
    PolynomialMatrix, TransferMatrix, RightMfd, build_right_mfd, det_poly_matrix,
    char_polynomials, det_sensitivity, det_complementary, transmission_zeros, mimo_gain
)
from .integrals import (
    QuadratureConfig, IntegralResult, WeightedIntegralSpec, WaterbedReport,
    StabilityVerdict, log_modulus_integral, identity_integral,
    predict_sensitivity_integral, predict_complementary_integral,
    weighted_sensitivity_integral, waterbed_verify
)
from .system_file import SystemFile, SystemKind, parse_system_file, serialize_system_file
from .config_manager import ConfigManager
from .errors import WaterbedError

__all__ = [
    'Polynomial',
    'RootSet',
    'roots',
    'from_roots',
    'eval_at',
    'cancel_common_roots',
    'RationalSystem',
    'StateSpaceSystem',
    'sensitivity',
    'complementary',
    'classify_roots',
    'markov_gain',
    'freq_response',
    'interpolation_check',
    'PolynomialMatrix',
    'TransferMatrix',
    'RightMfd',
    'build_right_mfd',
    'det_poly_matrix',
    'char_polynomials',
    'det_sensitivity',
    'det_complementary',
    'transmission_zeros',
    'mimo_gain',
    'QuadratureConfig',
    'IntegralResult',
    'WeightedIntegralSpec',
    'WaterbedReport',
    'StabilityVerdict',
    'log_modulus_integral',
    'identity_integral',
    'predict_sensitivity_integral',
    'predict_complementary_integral',
    'weighted_sensitivity_integral',
    'waterbed_verify',
    'SystemFile',
    'SystemKind',
    'parse_system_file',
    'serialize_system_file',
    'ConfigManager',
    'WaterbedError'
]

__version__ = '1.0.0'
