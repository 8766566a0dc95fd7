"""Nelder-Mead over many independent starts at once.

Every start keeps its own simplex and follows the textbook rules (reflection
1, expansion 2, contraction 1/2, shrink 1/2; initial simplex perturbs each
coordinate by 5%, or by 0.00025 when it is zero). The starts only share the
objective calls: each iteration evaluates all trial points of all active
simplices in one vectorized call, which is what makes many restarts cheap
when a single evaluation is dominated by interpreter overhead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

RHO, CHI, PSI, SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: np.ndarray
    nfev: np.ndarray
    success: np.ndarray


def initial_simplices(x0: np.ndarray) -> np.ndarray:
    """``(m, n+1, n)`` starting simplices for ``m`` start points."""
    m, n = x0.shape
    sim = np.repeat(x0[:, None, :], n + 1, axis=1)
    for k in range(n):
        col = sim[:, k + 1, k]
        sim[:, k + 1, k] = np.where(col != 0, 1.05 * col, 0.00025)
    return sim


def batched_nelder_mead(
    fun: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    maxfev: int = 2000,
    maxiter: int | None = None,
    xatol: float = 1e-8,
    fatol: float = 1e-12,
) -> SimplexResult:
    """Minimize ``fun`` from each row of ``x0``.

    ``fun`` maps a ``(k, n)`` array of points to ``k`` values. Counts of
    evaluations are per start and include only the points the rules ask for,
    so they match a one-start-at-a-time run.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    m, n = x0.shape
    maxiter = 200 * n if maxiter is None else maxiter
    sim = initial_simplices(x0)
    fsim = fun(sim.reshape(-1, n)).reshape(m, n + 1)
    nfev = np.full(m, n + 1)
    active = np.ones(m, dtype=bool)
    success = np.zeros(m, dtype=bool)
    rows = np.arange(m)

    for _ in range(maxiter):
        order = np.argsort(fsim, axis=1, kind="stable")
        sim = sim[rows[:, None], order]
        fsim = fsim[rows[:, None], order]
        spread_x = np.max(np.abs(sim[:, 1:] - sim[:, :1]), axis=(1, 2))
        spread_f = np.max(np.abs(fsim[:, 1:] - fsim[:, :1]), axis=1)
        done = active & (spread_x <= xatol) & (spread_f <= fatol)
        success |= done
        active &= ~done & (nfev < maxfev)
        if not active.any():
            break
        a = np.flatnonzero(active)
        s, fs = sim[a], fsim[a]
        xbar = s[:, :-1].mean(axis=1)
        xw = s[:, -1]
        trial = np.stack([
            (1 + RHO) * xbar - RHO * xw,                    # reflection
            (1 + RHO * CHI) * xbar - RHO * CHI * xw,        # expansion
            (1 + PSI * RHO) * xbar - PSI * RHO * xw,        # outside contraction
            (1 - PSI) * xbar + PSI * xw,                    # inside contraction
        ], axis=1)
        ft = fun(trial.reshape(-1, n)).reshape(len(a), 4)
        fr, fe, fc, fcc = ft.T
        f0, fn1, fw = fs[:, 0], fs[:, -2], fs[:, -1]

        expand = fr < f0
        take_e = expand & (fe < fr)
        take_r = (expand & ~take_e) | (~expand & (fr < fn1))
        outside = ~expand & ~(fr < fn1) & (fr < fw)
        inside = ~expand & ~(fr < fn1) & ~(fr < fw)
        take_c = outside & (fc <= fr)
        take_cc = inside & (fcc < fw)
        shrink = (outside & ~take_c) | (inside & ~take_cc)

        new_x = np.select(
            [take_e[:, None], take_r[:, None], take_c[:, None], take_cc[:, None]],
            [trial[:, 1], trial[:, 0], trial[:, 2], trial[:, 3]],
            default=xw,
        )
        new_f = np.select([take_e, take_r, take_c, take_cc], [fe, fr, fc, fcc], default=fw)
        s[:, -1], fs[:, -1] = new_x, new_f
        nfev[a] += 1 + (expand | outside | inside)

        if shrink.any():
            k = np.flatnonzero(shrink)
            pts = s[k, :1] + SIGMA * (s[k, 1:] - s[k, :1])
            s[k, 1:] = pts
            fs[k, 1:] = fun(pts.reshape(-1, n)).reshape(len(k), n)
            nfev[a[k]] += n
        sim[a], fsim[a] = s, fs

    best = np.argmin(fsim, axis=1)
    return SimplexResult(sim[rows, best], fsim[rows, best], nfev, success)
