"""Dephasing, amplitude damping and joint damping-dephasing qubit channels.

Every channel is a :class:`KrausChannel`. Complements are built from the
Stinespring isometry of the forward channel, so a forward/complement pair
always shares one environment and the entropic code can rely on that.

Kraus operator conventions
--------------------------
* dephasing ``D_p``: ``sqrt(1-p) I``, ``sqrt(p) Z``; complement ``|phi_j><j|``
  with ``|phi_j> = sqrt(1-p)|+> + (-1)^j sqrt(p)|->``.
* damping ``A_g``: ``|0><0| + sqrt(1-g)|1><1|``, ``sqrt(g)|0><1|``.
* joint ``F``: ``O_0, O_1, O_2`` with ``O_1`` the damping jump.
  Its complement ``F^c`` (``P_0, P_1``) puts the damping event on
  environment level 0, ``O_0`` on level 1 and ``O_2`` on level 2
  (see :data:`JOINT_ENV_ORDER`).
* the alternative complement ``G`` (``Q_0, Q_1``) lands on ``c2 (x) c1``,
  c2 being the most significant factor, which makes its output the 2x2-block
  matrix indexed by the c2 level.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractViolation, DomainError, ParameterError
from .linalg import apply_kraus, as_matrix, dagger, kron

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = (KET0 + KET1) / math.sqrt(2)
KET_MINUS = (KET0 - KET1) / math.sqrt(2)

# Environment level of F^c that each joint Kraus operator O_0, O_1, O_2 feeds.
JOINT_ENV_ORDER = (1, 0, 2)
# Conjugation on the F^c environment that mirrors Z on the input.
W_ENV = np.diag([-1.0, 1.0, 1.0]).astype(complex)

COMPLETENESS_TOL = 1e-12


def _outer(u, v) -> np.ndarray:
    return np.outer(np.asarray(u, dtype=complex), np.conj(np.asarray(v, dtype=complex)))


@dataclass(frozen=True)
class KrausChannel:
    """A channel given by an ordered list of Kraus operators.

    Construction checks ``sum_i K_i^dag K_i = I`` to 1e-12 entrywise.
    """

    kraus: tuple
    label: str = ""
    in_dim: int = field(init=False)
    out_dim: int = field(init=False)

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise ContractViolation("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ContractViolation(f"Kraus operators of {self.label!r} differ in shape")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "out_dim", shape[0])
        object.__setattr__(self, "in_dim", shape[1])
        dev = self.completeness_deviation()
        if dev > COMPLETENESS_TOL:
            raise ContractViolation(
                f"Kraus operators of {self.label!r} are not complete (deviation {dev:.3e})"
            )

    def completeness_deviation(self) -> float:
        s = sum(dagger(k) @ k for k in self.kraus)
        return float(np.max(np.abs(s - np.eye(self.in_dim))))

    def __call__(self, rho) -> np.ndarray:
        return apply_kraus(self, rho)

    def __len__(self):
        return len(self.kraus)

    def then(self, outer: "KrausChannel") -> "KrausChannel":
        """``outer o self``."""
        return compose(outer, self)


def compose(outer: KrausChannel, inner: KrausChannel, label: str | None = None) -> KrausChannel:
    """Channel ``outer o inner`` with Kraus set ``{A_i B_j}`` (no rank reduction)."""
    if outer.in_dim != inner.out_dim:
        raise ContractViolation(
            f"cannot compose: {outer.label!r} takes dim {outer.in_dim}, "
            f"{inner.label!r} gives dim {inner.out_dim}"
        )
    ops = [a @ b for a in outer.kraus for b in inner.kraus]
    return KrausChannel(tuple(ops), label or f"{outer.label}o{inner.label}")


def tensor(*channels: KrausChannel) -> KrausChannel:
    """Parallel use of several channels, Kraus operators in row-major order."""
    ops = [np.eye(1, dtype=complex)]
    for ch in channels:
        ops = [kron(a, b) for a in ops for b in ch.kraus]
    return KrausChannel(tuple(ops), "(x)".join(ch.label for ch in channels))


def complement_of(channel: KrausChannel) -> KrausChannel:
    """Complementary channel read off the Kraus operators: <i|L_j|k> = <j|K_i|k>."""
    k = np.array(channel.kraus)  # (n_kraus, out, in)
    ops = [k[:, j, :] for j in range(channel.out_dim)]
    return KrausChannel(tuple(ops), channel.label + "^c")


def duality_deviation(
    forward: KrausChannel, complement: KrausChannel, env_order: Sequence[int] | None = None
) -> float:
    """Largest violation of ``<j|K_i|k> = <env_order[i]|L_j|k>``.

    A zero deviation means both Kraus sets come from one isometry.
    """
    env_order = list(range(len(forward))) if env_order is None else list(env_order)
    if len(env_order) != len(forward) or len(complement) != forward.out_dim:
        raise ContractViolation("forward/complement Kraus counts do not match")
    dev = 0.0
    for i, k in enumerate(forward.kraus):
        for j in range(forward.out_dim):
            dev = max(dev, float(np.max(np.abs(k[j, :] - complement.kraus[j][env_order[i], :]))))
    return dev


@dataclass(frozen=True)
class ChannelParams:
    """Dephasing probability ``p`` in [0, 1/2] and damping probability ``g`` in [0, 1]."""

    p: float
    g: float

    def __post_init__(self):
        check_p(self.p)
        check_g(self.g)


@dataclass(frozen=True)
class TimeParams:
    """Elapsed time ``t`` with relaxation ``T1`` and dephasing ``T2`` times."""

    t: float
    T1: float
    T2: float

    def __post_init__(self):
        if not self.t >= 0:
            raise ParameterError(f"t must be non-negative, got {self.t}")
        if not (self.T1 > 0 and self.T2 > 0):
            raise ParameterError(f"T1 and T2 must be positive, got {self.T1}, {self.T2}")
        if self.T2 > 2 * self.T1 * (1 + 1e-12):
            raise ParameterError(f"T2={self.T2} exceeds 2*T1={2 * self.T1}")


def check_p(p: float) -> float:
    if not 0 <= p <= 0.5:
        raise ParameterError(f"dephasing probability p={p} outside [0, 1/2]")
    return float(p)


def check_g(g: float) -> float:
    if not 0 <= g <= 1:
        raise ParameterError(f"damping probability g={g} outside [0, 1]")
    return float(g)


def _params(params_or_p, g=None) -> ChannelParams:
    if isinstance(params_or_p, ChannelParams):
        return params_or_p
    return ChannelParams(params_or_p, g)


def phi_states(p: float) -> tuple[np.ndarray, np.ndarray]:
    """Environment states ``|phi_0>, |phi_1>`` of the dephasing isometry."""
    a, b = math.sqrt(1 - p), math.sqrt(p)
    return a * KET_PLUS + b * KET_MINUS, a * KET_PLUS - b * KET_MINUS


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),), "id")


def dephasing_channel(p: float) -> KrausChannel:
    p = check_p(p)
    return KrausChannel((math.sqrt(1 - p) * I2, math.sqrt(p) * Z), f"D[{p:g}]")


def dephasing_complement(p: float) -> KrausChannel:
    p = check_p(p)
    phi0, phi1 = phi_states(p)
    return KrausChannel((_outer(phi0, KET0), _outer(phi1, KET1)), f"D[{p:g}]^c")


def damping_channel(g: float) -> KrausChannel:
    g = check_g(g)
    a0 = np.diag([1.0, math.sqrt(1 - g)]).astype(complex)
    a1 = math.sqrt(g) * _outer(KET0, KET1)
    return KrausChannel((a0, a1), f"A[{g:g}]")


def damping_complement(g: float) -> KrausChannel:
    g = check_g(g)
    b0 = _outer(KET1, KET0) + math.sqrt(g) * _outer(KET0, KET1)
    b1 = math.sqrt(1 - g) * _outer(KET1, KET1)
    return KrausChannel((b0, b1), f"A[{g:g}]^c")


def joint_channel(params: ChannelParams) -> KrausChannel:
    p, g = params.p, params.g
    o0 = math.sqrt(1 - p) * np.diag([1.0, math.sqrt(1 - g)]).astype(complex)
    o1 = math.sqrt(g) * _outer(KET0, KET1)
    o2 = math.sqrt(p) * np.diag([1.0, -math.sqrt(1 - g)]).astype(complex)
    return KrausChannel((o0, o1, o2), f"F[{p:g},{g:g}]")


def joint_complement(params: ChannelParams) -> KrausChannel:
    p, g = params.p, params.g
    p0 = np.zeros((3, 2), dtype=complex)
    p0[0, 1] = math.sqrt(g)
    p0[1, 0] = math.sqrt(1 - p)
    p0[2, 0] = math.sqrt(p)
    p1 = np.zeros((3, 2), dtype=complex)
    p1[1, 1] = math.sqrt((1 - g) * (1 - p))
    p1[2, 1] = -math.sqrt(p * (1 - g))
    return KrausChannel((p0, p1), f"F[{p:g},{g:g}]^c")


def joint_complement_alt(params: ChannelParams) -> KrausChannel:
    """Complement through the concatenated isometry, output on ``c2 (x) c1``."""
    p, g = params.p, params.g
    phi0, phi1 = phi_states(p)
    q0 = _outer(np.kron(KET0, phi0), KET0) + math.sqrt(g) * _outer(np.kron(KET1, phi1), KET1)
    q1 = math.sqrt(1 - g) * _outer(np.kron(KET0, phi1), KET1)
    return KrausChannel((q0, q1), f"G[{p:g},{g:g}]")


def alt_complement_block_form(params: ChannelParams, rho11: float, rho01: complex) -> np.ndarray:
    """Closed-form 4x4 output of the alternative complement, block by block."""
    p, g = params.p, params.g
    phi0, phi1 = phi_states(p)
    f00, f11, f01 = _outer(phi0, phi0), _outer(phi1, phi1), _outer(phi0, phi1)
    top_left = (1 - g) * rho11 * f11 + (1 - rho11) * f00
    top_right = math.sqrt(g) * rho01 * f01
    bottom_right = g * rho11 * f11
    return np.block([[top_left, top_right], [dagger(top_right), bottom_right]])


# -- Bloch vectors -----------------------------------------------------------

def bloch_to_density(r) -> np.ndarray:
    x, y, z = (float(c) for c in r)
    if x * x + y * y + z * z > 1 + 1e-12:
        raise ContractViolation(f"Bloch vector {r} has norm above one")
    return (I2 + x * X + y * Y + z * Z) / 2


def density_to_bloch(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise ContractViolation("Bloch vectors exist for qubits only")
    return np.array([np.trace(rho @ s).real for s in (X, Y, Z)])


def dephasing_bloch(p: float, r) -> np.ndarray:
    x, y, z = r
    return np.array([(1 - 2 * p) * x, (1 - 2 * p) * y, z])


def dephasing_complement_bloch(p: float, r) -> np.ndarray:
    return np.array([1 - 2 * p, 0.0, 2 * math.sqrt(p * (1 - p)) * r[2]])


def damping_bloch(g: float, r) -> np.ndarray:
    x, y, z = r
    s = math.sqrt(1 - g)
    return np.array([s * x, s * y, (1 - g) * z + g])


def damping_complement_bloch(g: float, r) -> np.ndarray:
    x, y, z = r
    s = math.sqrt(g)
    return np.array([s * x, -s * y, g - g * z - 1])


def joint_bloch(params: ChannelParams, r) -> np.ndarray:
    p, g = params.p, params.g
    x, y, z = r
    f = (1 - 2 * p) * math.sqrt(1 - g)
    return np.array([f * x, f * y, (1 - g) * z + g])


# -- T1 / T2 ---------------------------------------------------------------

def params_from_times(tp: TimeParams) -> ChannelParams:
    g = -math.expm1(-tp.t / tp.T1)
    p = -0.5 * math.expm1(-tp.t * (1 / tp.T2 - 1 / (2 * tp.T1)))
    # T2 == 2 T1 up to rounding can leave p at -1e-17.
    return ChannelParams(min(max(p, 0.0), 0.5), g)


def times_from_params(params: ChannelParams, t: float) -> TimeParams:
    """Invert :func:`params_from_times` for a given elapsed time ``t > 0``.

    ``g = 0`` maps to ``T1 = inf`` (and ``p = g = 0`` to ``T2 = inf``).
    """
    p, g = params.p, params.g
    if not t > 0:
        raise DomainError("times can only be recovered for t > 0")
    if g >= 1 or p >= 0.5:
        raise DomainError("p = 1/2 or g = 1 corresponds to infinite decay rates")
    rate1 = -math.log1p(-g) / t
    rate2 = -math.log1p(-2 * p) / t + rate1 / 2
    T1 = math.inf if rate1 == 0 else 1 / rate1
    T2 = math.inf if rate2 == 0 else 1 / rate2
    return TimeParams(t, T1, T2)


# -- degradability thresholds and the anti-degrading map ---------------------

def g_max(p: float) -> float:
    """Damping level below which the single-letter coherent information is positive."""
    p = check_p(p)
    return 1 - 1 / (2 * (1 - 2 * p * (1 - p)))


def antideg_threshold(p: float) -> float:
    """Smallest ``g`` at which the joint channel becomes anti-degradable."""
    s = (1 - 2 * check_p(p)) ** 2
    return s / (1 + s)


def antidegrading_parameters(params: ChannelParams) -> tuple[float, float]:
    """Damping ``gamma`` and dephasing ``delta`` of the anti-degrading map."""
    p, g = params.p, params.g
    thr = antideg_threshold(p)
    if g < thr - 1e-12:
        raise DomainError(
            f"g={g} is below the anti-degradability threshold {thr:.12g} for p={p}"
        )
    v = 1 - 2 * p
    s = v * v
    gamma = (g - s * (1 - g)) / (1 - s * (1 - g))
    delta = 0.5 if v == 0 else 0.5 - v * math.sqrt(1 - s * (1 - g)) / (2 * math.sqrt(g))
    for name, val in (("gamma", gamma), ("delta", delta)):
        if not -1e-12 <= val <= 1 + 1e-12:
            warnings.warn(f"anti-degrading {name}={val} outside [0, 1] at p={p}, g={g}")
    return min(max(gamma, 0.0), 1.0), min(max(delta, 0.0), 1.0)


def relabel_map(p: float) -> KrausChannel:
    """Qutrit-to-qubit map that starts the anti-degrading construction."""
    p = check_p(p)
    e0, e1, e2 = np.eye(3, dtype=complex)
    kappa0 = math.sqrt(1 - p) * e1 + math.sqrt(p) * e2
    kappa1_t = math.sqrt(p) * e1 - math.sqrt(1 - p) * e2
    r0 = _outer(KET1, e0) + _outer(KET0, kappa0)
    r1 = _outer(KET1, kappa1_t)
    return KrausChannel((r0, r1), "R")


def antidegrading_map(params: ChannelParams) -> KrausChannel:
    """Channel taking the environment output of ``F^c`` back to the output of ``F``."""
    gamma, delta = antidegrading_parameters(params)
    ch = compose(dephasing_channel(delta), compose(damping_channel(gamma), relabel_map(params.p)))
    return KrausChannel(ch.kraus, f"Ftilde[{params.p:g},{params.g:g}]")
