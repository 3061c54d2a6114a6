"""Quantum Fisher information for depolarizing and phase-flip channels with ancillas and particle loss."""

from .analytic import (
    GBlock,
    KBlock,
    closed_form_qfi,
    compressed_qfi,
    g_block_spectrum,
    half_loss_threshold,
    k_block_spectrum,
    n_opt_dep,
    n_opt_dep_leading,
    n_opt_ph,
)
from .channels import (
    ChannelFamily,
    KrausChannel,
    apply,
    depolarizing,
    extend,
    output_derivative,
    pauli_channel,
    phase_flip,
)
from .errors import DimensionError, DomainError
from .linalg import bures_distance_sq, fidelity, herm_eig, partial_trace, tensor_product
from .qfi import (
    QfiEvaluation,
    qcrb_bound,
    qfi_fidelity_fd,
    qfi_for_scheme,
    qfi_pure,
    qfi_sld,
)
from .schemes import Scheme
from .states import bell_state, density_of, equatorial_state, ghz_state, w_state

__version__ = "0.1.0"
