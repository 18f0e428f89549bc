"""Simulation and analysis of the generalized n-particle Hardy paradox."""
from .analytics import (asymptote, entropy, integrate_P, negativity, optimize_A, p_nonlocal_equal,
                        p_nonlocal_general)
from .circuit import build_circuit, run_exact, sample_shots, theta_of_A
from .state import TransformCoefficients, cd_amplitudes, mixed_amplitudes, uv_amplitudes
from .verify import certify, cross_validate

__version__ = "0.1.0"

__all__ = [
    "TransformCoefficients", "uv_amplitudes", "mixed_amplitudes", "cd_amplitudes",
    "theta_of_A", "build_circuit", "run_exact", "sample_shots",
    "p_nonlocal_general", "p_nonlocal_equal", "optimize_A", "asymptote", "integrate_P",
    "entropy", "negativity", "certify", "cross_validate",
]
