"""Rotationally invariant spin channels and their entropy landscape.

The package builds the isotropic channel for any half-integer spin, searches
for minimum output entropy and minimum entropy gain by multi-start
derivative-free optimization, and decomposes rotationally invariant two-spin
states into total-spin blocks with cross-checked closed-form references.
"""

from .channel import (
    KrausChannel,
    apply,
    channel_from_json,
    channel_to_json,
    entropy_gain,
    fixed_point_state,
    isotropic_channel,
    load_channel,
    output_gram,
    random_channel,
    save_channel,
    tensor,
    time_reversal_apply,
)
from .invariant import (
    EXACT_EXCESS,
    EXACT_PAIR_ENTROPY,
    EXACT_SINGLE_CHANNEL_MIN,
    IsotypicDistribution,
    SingletDecoherenceReport,
    decohered_singlet,
    invariant_state_entropy,
    isotypic_probabilities,
    moment_probabilities,
    singlet_decoherence,
    state_from_distribution,
)
from .linalg import (
    ConsistencyError,
    ContractViolation,
    check_density_matrix,
    check_pure_state,
    hermitian_eigensystem,
    hermiticity_defect,
    is_unitary,
    kron,
    kron_vec,
    log_divisor,
    operator_norm,
    partial_trace,
    relative_entropy,
    spectrum_entropy,
    unitarity_defect,
    von_neumann_entropy,
)
from .optimize import (
    ProbeReport,
    SearchConfig,
    SearchReport,
    additivity_probe,
    haar_pure,
    min_entropy_gain,
    min_output_entropy,
    schmidt_coefficients,
)
from .spin import (
    SpinLabel,
    casimir_projectors,
    coupled_zero_m_state,
    rotation_unitary,
    singlet_state,
    spin_operators,
    total_spin_squared,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ContractViolation",
    "EXACT_EXCESS",
    "EXACT_PAIR_ENTROPY",
    "EXACT_SINGLE_CHANNEL_MIN",
    "IsotypicDistribution",
    "KrausChannel",
    "ProbeReport",
    "SearchConfig",
    "SearchReport",
    "SingletDecoherenceReport",
    "SpinLabel",
    "additivity_probe",
    "apply",
    "casimir_projectors",
    "channel_from_json",
    "channel_to_json",
    "check_density_matrix",
    "check_pure_state",
    "coupled_zero_m_state",
    "decohered_singlet",
    "entropy_gain",
    "fixed_point_state",
    "haar_pure",
    "hermitian_eigensystem",
    "hermiticity_defect",
    "invariant_state_entropy",
    "is_unitary",
    "isotropic_channel",
    "isotypic_probabilities",
    "kron",
    "kron_vec",
    "load_channel",
    "log_divisor",
    "min_entropy_gain",
    "min_output_entropy",
    "moment_probabilities",
    "operator_norm",
    "output_gram",
    "partial_trace",
    "random_channel",
    "relative_entropy",
    "rotation_unitary",
    "save_channel",
    "schmidt_coefficients",
    "singlet_decoherence",
    "singlet_state",
    "spectrum_entropy",
    "spin_operators",
    "state_from_distribution",
    "tensor",
    "time_reversal_apply",
    "total_spin_squared",
    "unitarity_defect",
    "von_neumann_entropy",
]
