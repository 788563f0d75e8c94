"""Compression-based set complexity of strings, network trajectories and graphs."""

__version__ = "0.1.0"

from .bitstrings import BitString, flip_bits, make_rng, permute_bits, random_bitstring
from .compression import CompressorSpec, compressed_size, joint_size
from .errors import CalibrationError, ConfigurationError, DomainError, FormatError
from .graphinfo import Graph, conjugate, graph_psi, maximize_psi
from .infodist import Calibration, DistanceMatrix, apply_calibration, calibrate, distance_matrix, ncd_raw
from .setmeasures import Kernel, MeasureReport, decomposition, lambda_avg, phi, pi_general, psi, theta
from .stringset import StringSet

__all__ = [
    "BitString", "flip_bits", "make_rng", "permute_bits", "random_bitstring",
    "CompressorSpec", "compressed_size", "joint_size",
    "CalibrationError", "ConfigurationError", "DomainError", "FormatError",
    "Graph", "conjugate", "graph_psi", "maximize_psi",
    "Calibration", "DistanceMatrix", "apply_calibration", "calibrate", "distance_matrix", "ncd_raw",
    "Kernel", "MeasureReport", "decomposition", "lambda_avg", "phi", "pi_general", "psi", "theta",
    "StringSet",
]
