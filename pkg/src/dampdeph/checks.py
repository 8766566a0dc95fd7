"""Fast invariant suite behind ``dampdeph check``.

Each check returns ``(name, passed, detail)``. Everything here must hold for
a correct build; nothing depends on optimizer luck.
"""

from __future__ import annotations

import numpy as np

from . import channels as ch
from .capacity import gmax_consistency, ir_channel
from .distillation import ProtocolConfig, bell_dephased_state, recurrence_step, yield_rate
from .entropic import binary_entropy, entropy_exchange, von_neumann_entropy
from .linalg import random_density, trace_distance

GRID = np.round(np.linspace(0, 1, 21), 12)


def _completeness():
    worst = 0.0
    for p in GRID[GRID <= 0.5]:
        for g in GRID:
            prm = ch.ChannelParams(p, g)
            for c in (ch.joint_channel(prm), ch.joint_complement(prm), ch.joint_complement_alt(prm)):
                worst = max(worst, c.completeness_deviation())
    return worst < 1e-12, f"max deviation {worst:.2e}"


def _duality():
    worst = 0.0
    for p in GRID[GRID <= 0.5]:
        for g in GRID:
            prm = ch.ChannelParams(p, g)
            worst = max(worst, ch.duality_deviation(
                ch.joint_channel(prm), ch.joint_complement(prm), ch.JOINT_ENV_ORDER))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def _antidegrading():
    worst = 0.0
    basis = [np.outer(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)]
    for p in GRID[GRID <= 0.5]:
        for g in GRID:
            if g < ch.antideg_threshold(p):
                continue
            prm = ch.ChannelParams(p, g)
            ft, fc, f = ch.antidegrading_map(prm), ch.joint_complement(prm), ch.joint_channel(prm)
            for e in basis:
                worst = max(worst, float(np.max(np.abs(ft(fc(e)) - f(e)))))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def _threshold_forms():
    worst = max(abs(ch.g_max(p) - ch.antideg_threshold(p)) for p in np.linspace(0, 0.5, 100))
    return worst < 1e-14, f"max difference {worst:.2e}"


def _entropy_exchange():
    rng = np.random.default_rng(7)
    worst = 0.0
    for p, g in [(0.05, 0.1), (0.15, 0.2), (0.25, 0.5), (0.4, 0.8), (0.5, 0.3)]:
        prm = ch.ChannelParams(p, g)
        f, fc = ch.joint_channel(prm), ch.joint_complement(prm)
        for _ in range(20):
            rho = random_density(2, rng)
            worst = max(worst, abs(entropy_exchange(f, rho) - von_neumann_entropy(fc(rho))))
    return worst < 1e-9, f"max difference {worst:.2e}"


def _protocol_symmetric():
    worst_p, worst_d = 0.0, 0.0
    for p in np.linspace(0, 0.5, 6):
        for g in np.linspace(0, 0.9, 6):
            out = recurrence_step(ProtocolConfig(ch.ChannelParams(p, g), 0.5))
            worst_p = max(worst_p, abs(out.success_prob - (1 - g)))
            worst_d = max(worst_d, trace_distance(out.post_state, bell_dephased_state(p)))
    ok = worst_p < 1e-12 and worst_d < 1e-12
    return ok, f"probability error {worst_p:.2e}, state distance {worst_d:.2e}"


def _gmax():
    # Just below g_max the optimum sits at a nearly pure input and the rate is
    # tiny (down to ~1e-9), so positivity is tested against round-off only.
    rows = gmax_consistency()
    ok = all(below > 1e-12 and above < 1e-12 for _, below, above in rows)
    return ok, "; ".join(f"p={p:g}: {b:.2e}/{a:.2e}" for p, b, a in rows)


def _dephasing_line():
    worst = 0.0
    for p in (0.05, 0.15, 0.25):
        prm = ch.ChannelParams(p, 0.0)
        worst = max(worst, abs(ir_channel(prm).value - (1 - binary_entropy(p))))
    return worst < 1e-8, f"max error {worst:.2e}"


def _yield_nonnegative():
    vals = [yield_rate(ch.ChannelParams(p, g)) for p in GRID[GRID <= 0.5] for g in GRID]
    return min(vals) >= 0, f"min {min(vals):.2e}"


CHECKS = {
    "kraus completeness": _completeness,
    "isometry duality": _duality,
    "anti-degrading identity": _antidegrading,
    "threshold closed forms": _threshold_forms,
    "entropy exchange": _entropy_exchange,
    "recurrence step (s=1/2)": _protocol_symmetric,
    "g_max consistency": _gmax,
    "dephasing line": _dephasing_line,
    "yield non-negative": _yield_nonnegative,
}


def run_checks():
    results = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed invariant
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
