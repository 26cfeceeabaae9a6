"""Quantum Fisher information of GHZ sensing under transverse dephasing with repeated error correction."""

from .core import Method, ParameterError, QfiResult, Scenario, SystemParams, validate
from .dual import Dual, DualComplexPolar
from .ecc import (
    GhzMixedState,
    RecurrenceData,
    argmax_rounds_case1,
    extract_g,
    g_bounds,
    g_coefficient,
    qfi_bitflip,
    qfi_case1_series,
    qfi_case2_series,
    qfi_case3_series,
    qfi_exact,
    qfi_from_state,
    recurrence_data,
    solve_recurrence,
    t_opt,
)
from .fisher import PovmAngle, SpectralDecomposition, fisher_povm, qfi_spectral
from .kernels import diagonal_kernel, round_factor, signal_kernel, trig_delta
from .noec import HammingSpectrum, hamming_spectrum, qfi_noec_exact, qfi_noec_taylor
from .sweep import SweepConfig, expand_preset, run_sweep

__all__ = [
    "Dual", "DualComplexPolar", "GhzMixedState", "HammingSpectrum", "Method", "ParameterError",
    "PovmAngle", "QfiResult", "RecurrenceData", "Scenario", "SpectralDecomposition", "SweepConfig",
    "SystemParams", "argmax_rounds_case1", "diagonal_kernel", "expand_preset", "extract_g",
    "fisher_povm", "g_bounds", "g_coefficient", "hamming_spectrum", "qfi_bitflip",
    "qfi_case1_series", "qfi_case2_series", "qfi_case3_series", "qfi_exact", "qfi_from_state",
    "qfi_noec_exact", "qfi_noec_taylor", "qfi_spectral", "recurrence_data", "round_factor",
    "run_sweep", "signal_kernel", "solve_recurrence", "t_opt", "trig_delta", "validate",
]
