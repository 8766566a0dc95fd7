"""Entropy functionals, all in bits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, ParameterError
from .linalg import apply_kraus, as_matrix, check_density, clamp_spectrum, dagger, hermitian_eigenvalues


def entropy_of_spectrum(evals) -> float:
    lam = clamp_spectrum(evals)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho, method: str = "lapack") -> float:
    """``-Tr rho log2 rho`` with ``0 log 0 = 0``."""
    return entropy_of_spectrum(hermitian_eigenvalues(as_matrix(rho), method=method))


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise ParameterError(f"binary entropy argument {x} outside [0, 1]")
    if x == 0 or x == 1:
        return 0.0
    return -(x * math.log2(x) + (1 - x) * math.log2(1 - x))


def qubit_entropy_from_bloch(r) -> float:
    """Qubit entropy through ``h((1 + |r|)/2)``."""
    n = float(np.linalg.norm(r))
    return binary_entropy(min((1 + n) / 2, 1.0))


@dataclass(frozen=True)
class EntropicReport:
    value: float
    input_state: np.ndarray = field(repr=False)
    components: dict


def _check_pair(rho, *channels):
    rho = check_density(rho)
    for ch in channels:
        if ch.in_dim != rho.shape[0]:
            raise ContractViolation(
                f"channel {ch.label!r} takes dim {ch.in_dim}, input has dim {rho.shape[0]}"
            )
    return rho


def coherent_information(forward, complement, rho) -> EntropicReport:
    """``S(N(rho)) - S(N^c(rho))``."""
    rho = _check_pair(rho, forward, complement)
    s_out = von_neumann_entropy(apply_kraus(forward, rho))
    s_env = von_neumann_entropy(apply_kraus(complement, rho))
    return EntropicReport(s_out - s_env, rho, {"S_out": s_out, "S_env": s_env})


def reverse_coherent_information(complement, rho) -> EntropicReport:
    """``S(rho) - S(N^c(rho))``."""
    rho = _check_pair(rho, complement)
    s_in = von_neumann_entropy(rho)
    s_env = von_neumann_entropy(apply_kraus(complement, rho))
    return EntropicReport(s_in - s_env, rho, {"S_in": s_in, "S_env": s_env})


def exchange_matrix(channel, rho) -> np.ndarray:
    """``W_ij = Tr[E_i rho E_j^dag]``; Hermitian, PSD and unit trace for a valid channel."""
    kraus = getattr(channel, "kraus", channel)
    rho = as_matrix(rho)
    w = np.array([[np.trace(ei @ rho @ dagger(ej)) for ej in kraus] for ei in kraus])
    if abs(np.trace(w).real - 1) > 1e-10:
        raise ContractViolation(f"exchange matrix has trace {np.trace(w).real!r}")
    return w


def entropy_exchange(channel, rho) -> float:
    """``-Tr[W log2 W]``, equal to the environment entropy."""
    return von_neumann_entropy(exchange_matrix(channel, rho))


def channel_mutual_information(channel, rho) -> EntropicReport:
    """``S(rho) + S(N(rho)) - S_exchange``."""
    rho = _check_pair(rho, channel)
    s_in = von_neumann_entropy(rho)
    s_out = von_neumann_entropy(apply_kraus(channel, rho))
    s_ex = entropy_exchange(channel, rho)
    return EntropicReport(
        s_in + s_out - s_ex, rho, {"S_in": s_in, "S_out": s_out, "S_exchange": s_ex}
    )
