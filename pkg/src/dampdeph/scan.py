"""Parameter scans and their CSV form.

Grid points are independent; a scan with ``jobs > 1`` farms them out to a
process pool and merges by index, so output never depends on ``jobs``.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

from .capacity import (
    ANSATZ_RESTARTS,
    INTERVAL_TOL,
    half_mutual_info_bound,
    ic_channel,
    ir_channel,
    nonadditivity_delta,
)
from .channels import ChannelParams, antideg_threshold
from .distillation import combined_lower_bound, yield_rate

CSV_COLUMNS = ("p", "g", "ic", "ir", "yield", "lower_bound", "delta_nonadd", "half_mi", "flags")
ALL_QUANTITIES = frozenset({"ic", "ir", "yield", "lower_bound", "delta_nonadd", "half_mi"})
SIG_DIGITS = 12


def _round(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.{SIG_DIGITS}g}")


@dataclass(frozen=True)
class ScanRecord:
    """One grid point. Values are stored at 12 significant digits so CSV round-trips exactly."""

    p: float
    g: float
    ic: float | None = None
    ir: float | None = None
    yield_: float | None = None
    lower_bound: float | None = None
    delta_nonadd: float | None = None
    half_mi: float | None = None
    flags: tuple = field(default=())
    error: str | None = None

    def row(self) -> list[str]:
        vals = [self.p, self.g, self.ic, self.ir, self.yield_, self.lower_bound,
                self.delta_nonadd, self.half_mi]
        out = ["" if v is None else f"{v:.{SIG_DIGITS}g}" for v in vals]
        flags = list(self.flags) + ([f"error:{self.error}"] if self.error else [])
        return out + [";".join(flags)]


@dataclass(frozen=True)
class ScanSettings:
    quantities: frozenset = ALL_QUANTITIES
    restarts: int = ANSATZ_RESTARTS
    seed: int = 0
    tol: float = INTERVAL_TOL


def evaluate_point(p: float, g: float, settings: ScanSettings = ScanSettings()) -> ScanRecord:
    """All requested quantities at one ``(p, g)``; parameter errors are recorded, not raised."""
    try:
        params = ChannelParams(p, g)
    except ValueError as exc:
        return ScanRecord(p, g, error=str(exc).replace(",", " "))
    want = settings.quantities
    vals: dict = {}
    flags = []
    if g >= antideg_threshold(p):
        flags.append("antideg")
    if "ic" in want or "delta_nonadd" in want:
        if "delta_nonadd" in want:
            na = nonadditivity_delta(params, restarts=settings.restarts, seed=settings.seed, tol=settings.tol)
            vals["delta_nonadd"] = na.delta
            vals["ic"] = na.single.value
            if na.significant:
                flags.append("nonadd")
        else:
            vals["ic"] = ic_channel(params, tol=settings.tol).value
        if "ic" not in want:
            del vals["ic"]
    if want & {"ir", "lower_bound"}:
        vals["ir"] = ir_channel(params, tol=settings.tol).value
    if want & {"yield", "lower_bound"}:
        vals["yield_"] = yield_rate(params)
    if "lower_bound" in want:
        vals["lower_bound"] = combined_lower_bound(params, ir=vals["ir"])
        if vals["yield_"] > vals["ir"]:
            flags.append("yield>ir")
    if "half_mi" in want:
        vals["half_mi"] = half_mutual_info_bound(params, tol=settings.tol).value
    if "ir" not in want:
        vals.pop("ir", None)
    if "yield" not in want:
        vals.pop("yield_", None)
    return ScanRecord(_round(p), _round(g), flags=tuple(flags),
                      **{k: _round(v) for k, v in vals.items()})


def _eval_star(args):
    return evaluate_point(*args)


def phase_scan(
    p_grid: Sequence[float],
    g_grid: Sequence[float],
    settings: ScanSettings = ScanSettings(),
    jobs: int = 1,
) -> list[ScanRecord]:
    """Evaluate every ``(p, g)`` pair, rows in row-major order (``p`` outer)."""
    tasks = [(float(p), float(g), settings) for p in p_grid for g in g_grid]
    if jobs <= 1 or len(tasks) <= 1:
        return [evaluate_point(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_eval_star, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def records_to_csv(records: Iterable[ScanRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def write_csv(records: Iterable[ScanRecord], path: str | os.PathLike) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    text = records_to_csv(records)
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".scan-", suffix=".csv", dir=d)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_csv(text: str) -> list[ScanRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {rows[0] if rows else None}")
    names = [f.name for f in fields(ScanRecord)][:8]
    out = []
    for row in rows[1:]:
        num = {n: (float(v) if v != "" else None) for n, v in zip(names, row[:8])}
        flags = [f for f in row[8].split(";") if f] if row[8] else []
        error = next((f[len("error:"):] for f in flags if f.startswith("error:")), None)
        flags = tuple(f for f in flags if not f.startswith("error:"))
        out.append(ScanRecord(flags=flags, error=error, **num))
    return out


def read_csv(path: str | os.PathLike) -> list[ScanRecord]:
    with open(path, newline="") as fh:
        return parse_csv(fh.read())
