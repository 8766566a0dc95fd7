"""Rates and distillation for the joint amplitude-damping / dephasing qubit channel."""

from .capacity import (
    OptResult,
    ad_ir_dominates_ic,
    asymptotic_ir,
    eps_star,
    half_mutual_info_bound,
    ic_channel,
    ic_complement_positive,
    ir_channel,
    nonadditivity_delta,
    singularity_rate,
    small_eps_ir,
    two_letter_ansatz_ic,
)
from .channels import (
    ChannelParams,
    KrausChannel,
    TimeParams,
    antideg_threshold,
    antidegrading_map,
    damping_channel,
    damping_complement,
    dephasing_channel,
    dephasing_complement,
    g_max,
    joint_channel,
    joint_complement,
    joint_complement_alt,
    params_from_times,
    times_from_params,
)
from .distillation import (
    ProtocolConfig,
    RecurrenceOutcome,
    combined_lower_bound,
    recurrence_step,
    yield_ir_ratio_asymptotic,
    yield_rate,
)
from .entropic import (
    binary_entropy,
    channel_mutual_information,
    coherent_information,
    reverse_coherent_information,
    von_neumann_entropy,
)
from .errors import ContractViolation, DomainError, ParameterError, PostSelectionError
from .scan import ScanRecord, phase_scan

__version__ = "0.1.0"
