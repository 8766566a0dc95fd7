"""Single- and two-letter rate optimizers for the joint damping-dephasing channel.

Single-letter quantities are maximized over diagonal qubit inputs
``diag((1+z)/2, (1-z)/2)``: golden-section search seeded by a 65-point grid
(multi-start from the best three grid points when the objective is not known
to be concave). The two-letter ansatz is searched with Nelder-Mead over a
softmax parametrization of the probability simplex, all restarts in lockstep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .channels import (
    W_ENV,
    Z,
    ChannelParams,
    KrausChannel,
    g_max,
    joint_channel,
    joint_complement,
    tensor,
)
from .entropic import entropy_of_spectrum
from .errors import ContractViolation, DomainError, ParameterError
from .linalg import apply_kraus, projector
from .simplex import batched_nelder_mead

GOLDEN = (math.sqrt(5) - 1) / 2
GRID_POINTS = 65
INTERVAL_TOL = 1e-10
NONADD_THRESHOLD = 1e-6
ANSATZ_RESTARTS = 64
ANSATZ_MAXFEV = 2000
SINGULARITY_EPS = (1e-5, 3e-6, 1e-6)
VANISHING_CUTOFF = 1e-3


@dataclass(frozen=True)
class OptResult:
    value: float
    argmax: tuple
    evaluations: int
    converged: bool


def _entropy(m: np.ndarray) -> float:
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def diag_state(z: float) -> np.ndarray:
    """Qubit state with Bloch vector ``(0, 0, z)``."""
    return np.diag([(1 + z) / 2, (1 - z) / 2]).astype(complex)


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = INTERVAL_TOL):
    """Maximize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x), evaluations, converged)``; ``converged`` means the
    bracket shrank below ``tol``.
    """
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while b - a > tol and n < 400:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        n += 1
    x, fx = (c, fc) if fc >= fd else (d, fd)
    return x, fx, n, b - a <= tol


def maximize_on_interval(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    starts: int = 3,
    tol: float = INTERVAL_TOL,
    grid: int = GRID_POINTS,
) -> OptResult:
    """Grid-seeded golden-section maximization with ``starts`` local refinements."""
    xs = np.linspace(lo, hi, grid)
    fs = np.array([f(x) for x in xs])
    evals = grid
    best_x, best_f = float(xs[np.argmax(fs)]), float(fs.max())
    converged = True
    # Stable sort keeps the result deterministic under ties.
    for i in np.argsort(-fs, kind="stable")[:starts]:
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
        x, fx, n, ok = golden_section_max(f, a, b, tol)
        evals += n
        converged = converged and ok
        if fx > best_f:
            best_x, best_f = x, fx
    return OptResult(float(best_f), (float(best_x),), evals, converged)


def _check(params) -> ChannelParams:
    if not isinstance(params, ChannelParams):
        raise ParameterError(f"expected ChannelParams, got {type(params).__name__}")
    return params


def ic_objective(params: ChannelParams) -> Callable[[float], float]:
    fwd, comp = joint_channel(params), joint_complement(params)

    def f(z: float) -> float:
        rho = diag_state(z)
        return _entropy(apply_kraus(fwd, rho)) - _entropy(apply_kraus(comp, rho))

    return f


def ir_objective(params: ChannelParams) -> Callable[[float], float]:
    comp = joint_complement(params)

    def f(z: float) -> float:
        rho = diag_state(z)
        return _entropy(rho) - _entropy(apply_kraus(comp, rho))

    return f


def ic_channel(params: ChannelParams, tol: float = INTERVAL_TOL) -> OptResult:
    """Single-letter coherent information, maximized along the z axis.

    Not clamped at zero. ``argmax`` holds the optimal ``z``.
    """
    return maximize_on_interval(ic_objective(_check(params)), -1.0, 1.0, starts=3, tol=tol)


def _eta(x: float) -> float:
    return 0.0 if x <= 0 else -x * math.log2(x)


def _eta_one_minus(s: float) -> float:
    # -(1-s) log2(1-s) without losing s when it is tiny.
    return 0.0 if s <= 0 or s >= 1 else -(1 - s) * math.log1p(-s) / math.log(2)


def ir_nearly_pure(params: ChannelParams, eps: float, upper: bool = True) -> float:
    """Reverse coherent information at ``diag(1-eps, eps)`` (``upper``) or ``diag(eps, 1-eps)``.

    Closed form accurate to relative precision for tiny ``eps``. The
    environment splits into the damping level ``g b`` and a 2x2 block with
    trace ``1 - g b`` and determinant ``a c q``, where ``(a, b)`` are the input
    populations, ``c = (1-g) b`` and ``q = 4p(1-p)``.
    """
    p, g = params.p, params.g
    q = 4 * p * (1 - p)
    a, b = (1 - eps, eps) if upper else (eps, 1 - eps)
    lam0 = g * b
    trace = 1 - lam0
    det = a * (1 - g) * b * q
    lam_minus = 2 * det / (trace + math.sqrt(max(trace * trace - 4 * det, 0.0))) if det > 0 else 0.0
    s_in = _eta(eps) + _eta_one_minus(eps)
    s_env = _eta(lam0) + _eta(lam_minus) + _eta_one_minus(lam0 + lam_minus)
    return s_in - s_env


def _ir_tails(params: ChannelParams, tol: float) -> OptResult:
    # I_r can be positive only for inputs far closer to pure than z can resolve
    # (rate gap (1-g)(1-q) near p = 1/2); search log10(eps) on both ends.
    best = OptResult(-math.inf, (0.0,), 0, True)
    for upper in (True, False):
        f = lambda u: ir_nearly_pure(params, 10.0 ** u, upper)  # noqa: E731
        u, fu, n, ok = golden_section_max(f, -300.0, -2.0, tol)
        if fu > best.value:
            z = 1 - 2 * 10.0**u if upper else 2 * 10.0**u - 1
            best = OptResult(fu, (z,), best.evaluations + n, ok)
        else:
            best = OptResult(best.value, best.argmax, best.evaluations + n, best.converged and ok)
    return best


def ir_channel(params: ChannelParams, tol: float = INTERVAL_TOL) -> OptResult:
    """Reverse coherent information; the objective is concave so one bracket suffices.

    A second search in ``log10(eps)`` near both pure inputs picks up maxima at
    ``eps`` far below what ``z`` resolves. Such an optimum is reported with
    ``z`` rounded to the interval end.
    """
    main = maximize_on_interval(ir_objective(_check(params)), -1.0, 1.0, starts=1, tol=tol)
    tail = _ir_tails(params, tol)
    evals = main.evaluations + tail.evaluations
    if tail.value > main.value:
        return OptResult(float(tail.value), tail.argmax, evals, tail.converged)
    return OptResult(main.value, main.argmax, evals, main.converged)


@dataclass(frozen=True)
class ComplementWitness:
    covered: bool
    positive: bool
    value: float
    rho: np.ndarray | None


def ic_complement_positive(params: ChannelParams, eps_grid: Sequence[float] | None = None) -> ComplementWitness:
    """Search for an input where the complement's coherent information is positive.

    Scans ``diag(1-eps, eps)`` and ``diag(eps, 1-eps)`` on a log grid of ``eps``.
    Outside ``0 < p <= 1/2, 0 < g < 1`` positivity is not claimed and the
    result has ``covered=False``.
    """
    _check(params)
    covered = 0 < params.p <= 0.5 and 0 < params.g < 1
    fwd, comp = joint_channel(params), joint_complement(params)
    eps_grid = np.logspace(-1, -6, 26) if eps_grid is None else eps_grid
    best, best_rho = -math.inf, None
    for eps in eps_grid:
        for rho in (np.diag([1 - eps, eps]), np.diag([eps, 1 - eps])):
            rho = rho.astype(complex)
            v = _entropy(apply_kraus(comp, rho)) - _entropy(apply_kraus(fwd, rho))
            if v > best:
                best, best_rho = v, rho
    return ComplementWitness(covered, covered and best > 0, float(best), best_rho)


# -- two-letter ansatz ---------------------------------------------------------

_PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
_Z_FIRST = np.diag([1, 1, -1, -1]).astype(complex)
ANSATZ_BASIS = (
    np.diag([1, 0, 0, 0]).astype(complex),
    projector(_PSI_PLUS),
    _Z_FIRST @ projector(_PSI_PLUS) @ _Z_FIRST,
    np.diag([0, 0, 0, 1]).astype(complex),
)


def ansatz_state(weights) -> np.ndarray:
    """Two-qubit ansatz ``l1|00><00| + l2 psi + l3 Z1 psi Z1 + l4|11><11|``.

    ``psi`` is the projector on ``(|01> + |10>)/sqrt(2)``; with
    ``l = ((1+z)^2, 1-z^2, 1-z^2, (1-z)^2)/4`` this is ``rho_z (x) rho_z``.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or w.min() < -1e-12 or abs(w.sum() - 1) > 1e-12:
        raise ParameterError(f"ansatz weights must be a probability vector, got {weights}")
    return sum(wi * b for wi, b in zip(w, ANSATZ_BASIS))


def product_weights(z: float) -> np.ndarray:
    return np.array([(1 + z) ** 2, 1 - z * z, 1 - z * z, (1 - z) ** 2]) / 4


def _softmax(t: np.ndarray) -> np.ndarray:
    # Last logit pinned to zero; works row-wise on a (k, 3) batch.
    t = np.asarray(t, dtype=float)
    u = np.concatenate([t, np.zeros(t.shape[:-1] + (1,))], axis=-1)
    u = np.exp(u - u.max(axis=-1, keepdims=True))
    return u / u.sum(axis=-1, keepdims=True)


def two_letter_objective(params: ChannelParams) -> Callable[[np.ndarray], float]:
    """Coherent information of ``F (x) F`` at the ansatz, as a function of weights.

    The ansatz commutes with ``Z (x) Z``, so the output splits into two parity
    blocks and the environment into two ``W (x) W`` blocks. All four blocks are
    real; they are zero-padded into one stack for a single batched eigensolve.
    """
    f2 = tensor(joint_channel(params), joint_channel(params))
    fc2 = tensor(joint_complement(params), joint_complement(params))
    out = np.array([apply_kraus(f2, b) for b in ANSATZ_BASIS])
    env = np.array([apply_kraus(fc2, b) for b in ANSATZ_BASIS])
    zz = np.diag(np.kron(Z, Z)).real
    ww = np.diag(np.kron(W_ENV, W_ENV)).real
    blocks = []
    for maps, signs, sign in ((out, zz, 1.0), (env, ww, -1.0)):
        if np.max(np.abs(maps.imag)) > 1e-14 or np.max(np.abs(maps[:, np.not_equal.outer(signs, signs)])) > 1e-14:
            raise ContractViolation("ansatz outputs lost their parity block structure")
        for parity in (1, -1):
            idx = np.flatnonzero(signs == parity)
            blocks.append((maps.real[:, idx[:, None], idx[None, :]], sign))
    size = max(b.shape[1] for b, _ in blocks)
    # Stacked (4 weights, 4 blocks, size, size); padding adds zero eigenvalues only.
    stack = np.zeros((4, len(blocks), size, size))
    for k, (b, _) in enumerate(blocks):
        stack[:, k, : b.shape[1], : b.shape[1]] = b
    signs = np.array([s for _, s in blocks])[:, None]

    def f(weights: np.ndarray):
        w = np.asarray(weights, dtype=float)
        lam = np.linalg.eigvalsh(np.tensordot(w, stack, 1))
        if lam.min() < -1e-10:
            raise ContractViolation(f"negative eigenvalue {lam.min():.3e} in ansatz output")
        lam = np.where(lam > 0, lam, 1.0)
        val = -np.sum(signs * lam * np.log2(lam), axis=(-2, -1))
        return float(val) if w.ndim == 1 else val

    return f


def two_letter_ansatz_ic(
    params: ChannelParams,
    restarts: int = ANSATZ_RESTARTS,
    seed: int = 0,
    maxfev: int = ANSATZ_MAXFEV,
    single: OptResult | None = None,
) -> OptResult:
    """Maximize the two-letter coherent information over the ansatz weights.

    The product point at the single-letter optimum is always a candidate, so
    the result is never below ``2 * ic_channel(params).value``.
    """
    _check(params)
    f = two_letter_objective(params)
    single = ic_channel(params) if single is None else single
    best_w = product_weights(single.argmax[0])
    best = f(best_w)
    evals = 1
    converged = True
    rng = np.random.default_rng(seed)
    starts = rng.normal(scale=2.0, size=(restarts, 3))
    if restarts:
        res = batched_nelder_mead(lambda t: -f(_softmax(t)), starts, maxfev=maxfev)
        evals += int(res.nfev.sum())
        i = int(np.argmin(res.fun))
        if -res.fun[i] > best:
            best, best_w = float(-res.fun[i]), _softmax(res.x[i])
            converged = bool(res.success[i])
    return OptResult(float(best), tuple(float(w) for w in best_w), evals, converged)


@dataclass(frozen=True)
class NonAdditivity:
    delta: float
    single: OptResult
    two_letter: OptResult

    @property
    def significant(self) -> bool:
        return self.delta > NONADD_THRESHOLD


def nonadditivity_delta(
    params: ChannelParams, restarts: int = ANSATZ_RESTARTS, seed: int = 0, tol: float = INTERVAL_TOL
) -> NonAdditivity:
    """Half the two-letter ansatz value minus the single-letter coherent information."""
    single = ic_channel(params, tol=tol)
    two = two_letter_ansatz_ic(params, restarts=restarts, seed=seed, single=single)
    return NonAdditivity(two.value / 2 - single.value, single, two)


def nonadditivity_onset(p: float, g_grid: Sequence[float], **kw) -> float | None:
    """Smallest ``g`` on the grid with significant non-additivity, if any."""
    for g in g_grid:
        if nonadditivity_delta(ChannelParams(p, g), **kw).significant:
            return float(g)
    return None


# -- log-singularity rates -----------------------------------------------------

@dataclass(frozen=True)
class SingularityRates:
    x_a: float
    x_d: float
    x_e: float


def _vanishing_slope(spectra_at, eps_values: Sequence[float]) -> float:
    base = np.sort(spectra_at(0.0))
    k = int(np.sum(base < VANISHING_CUTOFF))
    if k == 0:
        return 0.0
    e = np.asarray(eps_values, dtype=float)
    y = np.array([np.sort(spectra_at(x))[:k].sum() for x in e])
    # Least-squares line through the origin: the vanishing eigenvalues are 0 at eps = 0.
    return float(np.dot(e, y) / np.dot(e, e))


def singularity_rate(params: ChannelParams, family: str = "ground", eps_values=SINGULARITY_EPS) -> SingularityRates:
    """Rates of the ``eps log eps`` singularities of input, output and environment entropies.

    ``family="ground"`` perturbs the ground state, ``diag(1-eps, eps)``;
    ``family="excited"`` perturbs the excited one, ``diag(eps, 1-eps)``.
    """
    _check(params)
    if family == "ground":
        state = lambda e: np.diag([1 - e, e]).astype(complex)  # noqa: E731
    elif family == "excited":
        state = lambda e: np.diag([e, 1 - e]).astype(complex)  # noqa: E731
    else:
        raise ValueError(f"unknown input family {family!r}")
    fwd, comp = joint_channel(params), joint_complement(params)
    spec = lambda ch: (lambda e: np.linalg.eigvalsh(apply_kraus(ch, state(e))))  # noqa: E731
    return SingularityRates(
        x_a=_vanishing_slope(lambda e: np.linalg.eigvalsh(state(e)), eps_values),
        x_d=_vanishing_slope(spec(fwd), eps_values),
        x_e=_vanishing_slope(spec(comp), eps_values),
    )


# -- small delta-g asymptotics -------------------------------------------------

def _check_asym(p: float, delta_g: float) -> float:
    if not 0 < p < 0.5:
        raise DomainError(f"asymptotic forms need 0 < p < 1/2, got p={p}")
    if not 0 < delta_g < 1:
        raise DomainError(f"asymptotic forms need 0 < delta_g < 1, got {delta_g}")
    return 4 * p * (1 - p)


def small_eps_coefficients(p: float, delta_g: float) -> tuple[float, float]:
    """``(alpha, beta)`` of the small-``eps`` reverse coherent information."""
    q = _check_asym(p, delta_g)
    a0, b1, b2 = q - 1, 1 - q + q * math.log(q), q
    return a0 * delta_g, (b1 + b2 * math.log(delta_g)) * delta_g


def small_eps_ir(p: float, delta_g: float, eps: float) -> float:
    """``(alpha eps ln eps + beta eps) log2(e)``."""
    alpha, beta = small_eps_coefficients(p, delta_g)
    return (alpha * eps * math.log(eps) + beta * eps) / math.log(2)


def eps_star(p: float, delta_g: float) -> float:
    alpha, beta = small_eps_coefficients(p, delta_g)
    return math.exp(-(1 + beta / alpha))


def asymptotic_ir(p: float, delta_g: float) -> float:
    """``dg (1-q) (q dg)^(q/(1-q))`` with ``q = 4p(1-p)``."""
    q = _check_asym(p, delta_g)
    return delta_g * (1 - q) * (q * delta_g) ** (q / (1 - q))


# -- pure amplitude damping ----------------------------------------------------

@dataclass(frozen=True)
class DominanceRecord:
    g: float
    ic: float
    ir: float
    margin: float
    holds: bool
    strict: bool | None


def ad_ir_dominates_ic(g_grid: Sequence[float], tol: float = INTERVAL_TOL) -> list[DominanceRecord]:
    """Compare reverse and forward coherent information of pure amplitude damping.

    ``strict`` is ``None`` at the endpoints ``g = 0, 1`` where no gap is expected.
    """
    out = []
    for g in g_grid:
        params = ChannelParams(0.0, g)
        ic = ic_channel(params, tol).value
        ir = ir_channel(params, tol).value
        margin = ir - ic
        strict = None if g in (0, 1) else margin > 1e-9
        out.append(DominanceRecord(float(g), ic, ir, margin, margin >= -1e-9, strict))
    return out


# -- mutual information upper bound --------------------------------------------

def half_mutual_info_bound(channel, tol: float = INTERVAL_TOL) -> OptResult:
    """Half the channel mutual information, maximized over ``diag(1-w, w)``.

    ``channel`` may be :class:`ChannelParams` (joint channel) or any qubit
    :class:`KrausChannel`. ``argmax`` holds ``w``.
    """
    if isinstance(channel, ChannelParams):
        channel = joint_channel(channel)
    if not isinstance(channel, KrausChannel) or channel.in_dim != 2:
        raise ParameterError("half_mutual_info_bound needs a qubit channel")
    kraus = channel.kraus

    def f(w: float) -> float:
        rho = np.diag([1 - w, w]).astype(complex)
        wmat = np.array([[np.trace(a @ rho @ b.conj().T) for b in kraus] for a in kraus])
        return _entropy(rho) + _entropy(apply_kraus(channel, rho)) - _entropy(wmat)

    res = maximize_on_interval(f, 0.0, 1.0, starts=1, tol=tol)
    return OptResult(res.value / 2, res.argmax, res.evaluations, res.converged)


def gmax_consistency(p_values=(0.05, 0.15, 0.25, 0.35), offset: float = 0.02) -> list[tuple]:
    """``(p, ic below g_max - offset, ic above g_max + offset)`` per ``p``."""
    rows = []
    for p in p_values:
        gm = g_max(p)
        below = ic_channel(ChannelParams(p, gm - offset)).value
        above = ic_channel(ChannelParams(p, min(gm + offset, 1.0))).value
        rows.append((p, below, above))
    return rows
