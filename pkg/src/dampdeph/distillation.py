"""Backward-communication distillation: a modified recurrence step followed by hashing.

Alice encodes the reference half of an entangled pair into two qubits
``a1 a2`` that are sent through ``F (x) F``. Bob checks the parity of the
outputs ``d1 d2``: amplitude damping of either qubit flips it, so keeping
odd parity discards every damping event. Only dephasing survives, and the
kept pair is then fed to hashing.

The parity check is simulated as the projector ``(1 - Z_d1 Z_d2)/2`` followed
by the correcting CNOT ``d1 -> d2``. The literal circuit (CNOT, then ``Z`` on
``d2`` with outcome 1) is available as ``method="circuit"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import ir_channel
from .channels import I2, KET0, KET1, X, Z, ChannelParams, identity_channel, joint_channel, tensor
from .entropic import binary_entropy
from .errors import ContractViolation, DomainError, ParameterError, PostSelectionError
from .linalg import apply_kraus, kron, partial_trace, projector

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
PARITY_ODD = (np.eye(4) - np.kron(Z, Z)) / 2
MIN_SUCCESS = 1e-14


def _check_s(s: float) -> float:
    if not 0 <= s <= 1:
        raise ParameterError(f"input weight s={s} outside [0, 1]")
    return float(s)


@dataclass(frozen=True)
class ProtocolConfig:
    params: ChannelParams
    s: float = 0.5

    def __post_init__(self):
        _check_s(self.s)


@dataclass(frozen=True)
class RecurrenceOutcome:
    success_prob: float
    post_state: np.ndarray = field(repr=False)
    q: float
    bell_fidelity: float


def prepare_input(s: float = 0.5) -> np.ndarray:
    """``sqrt(s)|0>|01> + sqrt(1-s)|1>|10>`` on ``r1 (x) a1 (x) a2``."""
    s = _check_s(s)
    psi = np.zeros(8, dtype=complex)
    psi[0b001] = math.sqrt(s)
    psi[0b110] = math.sqrt(1 - s)
    return psi


def prepare_input_circuit(s: float = 0.5) -> np.ndarray:
    """Same state built gate by gate: pair on ``r1 a1``, CNOT ``a1 -> a2``, X on ``a2``."""
    s = _check_s(s)
    pair = math.sqrt(s) * np.kron(KET0, KET0) + math.sqrt(1 - s) * np.kron(KET1, KET1)
    psi = np.kron(pair, KET0)
    psi = kron(I2, CNOT) @ psi
    return kron(I2, I2, X) @ psi


def bell_dephased_state(p: float) -> np.ndarray:
    """``(1 - q/2) phi + (q/2) Z_d1 phi Z_d1`` with ``q = 4p(1-p)``."""
    q = 4 * p * (1 - p)
    phi = projector(PHI_PLUS)
    zd = np.kron(I2, Z)
    return (1 - q / 2) * phi + (q / 2) * zd @ phi @ zd


def _dephasing_weight(rho: np.ndarray) -> float:
    # 1 - |coherence| / sqrt(populations) on span{|00>, |11>}.
    pop = math.sqrt(rho[0, 0].real * rho[3, 3].real)
    return 1 - abs(rho[0, 3]) / pop if pop > 0 else math.nan


def recurrence_step(config: ProtocolConfig, method: str = "projector") -> RecurrenceOutcome:
    """Run one modified recurrence step exactly on density matrices.

    Returns the probability of the accepted outcome and the ``r1 d1`` state
    kept afterwards. ``q`` is read off the kept state as
    ``1 - |<00|rho|11>| / sqrt(<00|rho|00><11|rho|11>)``.
    """
    params = config.params
    psi = prepare_input(config.s)
    two_uses = tensor(identity_channel(2), joint_channel(params), joint_channel(params))
    rho2 = apply_kraus(two_uses, projector(psi))
    cnot = kron(I2, CNOT)

    if method == "projector":
        proj = kron(I2, PARITY_ODD)
        success = float(np.trace(proj @ rho2).real)
        if success < MIN_SUCCESS:
            raise PostSelectionError(f"parity check succeeds with probability {success:.3e}")
        rho3 = cnot @ (proj @ rho2 @ proj) @ cnot.conj().T / success
    elif method == "circuit":
        rho_c = cnot @ rho2 @ cnot.conj().T
        meas = kron(I2, I2, projector(KET1))
        success = float(np.trace(meas @ rho_c).real)
        if success < MIN_SUCCESS:
            raise PostSelectionError(f"outcome 1 occurs with probability {success:.3e}")
        rho3 = meas @ rho_c @ meas / success
    else:
        raise ValueError(f"unknown method {method!r}")

    d2 = partial_trace(rho3, [2, 2, 2], [2])
    if np.max(np.abs(d2 - projector(KET1))) > 1e-12:
        raise ContractViolation("flag qubit d2 is not left in |1>")
    post = partial_trace(rho3, [2, 2, 2], [0, 1])
    fidelity = float((PHI_PLUS.conj() @ post @ PHI_PLUS).real)
    return RecurrenceOutcome(success, post, _dephasing_weight(post), fidelity)


def yield_rate(params: ChannelParams) -> float:
    """Recurrence step at ``s = 1/2`` then hashing: ``(1-g)(1 - h(2p(1-p)))/2``."""
    if not isinstance(params, ChannelParams):
        raise ParameterError("yield_rate expects ChannelParams")
    p, g = params.p, params.g
    return 0.5 * (1 - g) * (1 - binary_entropy(2 * p * (1 - p)))


def yield_ir_ratio_asymptotic(p: float, delta_g: float) -> float:
    """Small-``delta_g`` ratio of the yield to the asymptotic reverse coherent information."""
    if not 0 < p < 0.5:
        raise DomainError(f"ratio needs 0 < p < 1/2, got p={p}")
    if not 0 < delta_g <= 1:
        raise DomainError(f"ratio needs 0 < delta_g <= 1, got {delta_g}")
    q = 4 * p * (1 - p)
    k = q / (1 - q)
    return (1 - binary_entropy(q / 2)) / (2 * (1 - q) * q**k) / delta_g**k


def combined_lower_bound(params: ChannelParams, ir: float | None = None) -> float:
    """``max(I_r, Y)``; pass ``ir`` to reuse an already optimized value."""
    ir = ir_channel(params).value if ir is None else ir
    return max(ir, yield_rate(params))
