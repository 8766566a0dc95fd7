"""Small dense complex linear algebra for qubit channel work.

Matrices are plain ``numpy`` arrays (complex128). The largest object that
appears anywhere in the package is 9x9 (the two-letter environment), so
nothing here tries to be clever about sparsity or scaling.

Subsystem ordering: index 0 is the leftmost (most significant) tensor factor.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NEG_EIG_TOL = 1e-10
JACOBI_TOL = 1e-13


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ContractViolation(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    return reduce(np.kron, (as_matrix(m) for m in mats))


def ket(*bits: int, dim: int = 2) -> np.ndarray:
    """Computational basis column vector |b0 b1 ...> as a (d**n, 1) matrix."""
    v = np.zeros(dim ** len(bits), dtype=complex)
    idx = 0
    for b in bits:
        idx = idx * dim + b
    v[idx] = 1.0
    return v.reshape(-1, 1)


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1, 1)
    return v @ dagger(v)


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem of ``m`` whose index is not in ``keep``.

    Kept subsystems retain their original relative order.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise ContractViolation(f"subsystem dimensions must be positive: {dims}")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ContractViolation(
            f"matrix shape {m.shape} does not match subsystem dims {dims}"
        )
    keep = sorted(set(keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ContractViolation(f"keep indices {keep} out of range for {n} subsystems")

    t = m.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # Trace from the highest index down so lower axis numbers stay valid.
    cur = n
    for i in reversed(traced):
        t = np.trace(t, axis1=i, axis2=i + cur)
        cur -= 1
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"matrix is not square: {m.shape}")
    dev = np.max(np.abs(m - dagger(m))) if m.size else 0.0
    if dev > tol:
        raise ContractViolation(f"matrix is not Hermitian (max deviation {dev:.3e})")


def jacobi_eigenvalues(m, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm drops
    below ``tol`` times the matrix Frobenius norm. Returned descending.
    """
    a = as_matrix(m).copy()
    check_hermitian(a)
    a = (a + dagger(a)) / 2
    n = a.shape[0]
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # Unitary = diag(1, conj(phase)) times a real Jacobi rotation.
                phase = apq / mag
                theta = (aqq - app) / (2 * mag)
                if theta == 0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1))
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -s * np.conj(phase)
                rot[q, q] = c * np.conj(phase)
                a = dagger(rot) @ a @ rot
                a[p, q] = a[q, p] = 0.0
    else:
        raise ContractViolation("Jacobi eigensolver did not converge")
    return np.sort(np.diag(a).real)[::-1]


def hermitian_eigenvalues(m, method: str = "lapack") -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, real and sorted descending.

    ``method="lapack"`` uses ``numpy.linalg.eigvalsh``; ``method="jacobi"``
    runs :func:`jacobi_eigenvalues`. Both reject input that is not Hermitian
    to within 1e-10.
    """
    a = as_matrix(m)
    if method == "jacobi":
        return jacobi_eigenvalues(a)
    if method != "lapack":
        raise ValueError(f"unknown eigenvalue method {method!r}")
    check_hermitian(a)
    return np.linalg.eigvalsh((a + dagger(a)) / 2)[::-1]


def clamp_spectrum(evals: np.ndarray, tol: float = NEG_EIG_TOL) -> np.ndarray:
    """Zero out tiny negative eigenvalues; anything below ``-tol`` is a bug."""
    evals = np.asarray(evals, dtype=float)
    if evals.size and evals.min() < -tol:
        raise ContractViolation(
            f"eigenvalue {evals.min():.3e} is negative beyond tolerance {tol:g}"
        )
    return np.where(evals < 0, 0.0, evals)


def check_density(rho, tol_trace: float = TRACE_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = as_matrix(rho)
    check_hermitian(rho, 1e-12)
    tr = np.trace(rho).real
    if abs(tr - 1) > tol_trace:
        raise ContractViolation(f"density matrix trace is {tr!r}, expected 1")
    clamp_spectrum(hermitian_eigenvalues(rho))
    return rho


def trace_distance(a, b) -> float:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ContractViolation(f"shape mismatch {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(hermitian_eigenvalues(a - b))))


def apply_kraus(channel, rho) -> np.ndarray:
    """Apply a channel (``KrausChannel`` or a list of Kraus matrices) to ``rho``.

    Works on any operator, not only density matrices, so it can be used to
    push a full operator basis through a channel.
    """
    kraus = getattr(channel, "kraus", channel)
    rho = as_matrix(rho)
    k0 = kraus[0]
    if rho.shape != (k0.shape[1], k0.shape[1]):
        raise ContractViolation(
            f"channel input dimension {k0.shape[1]} does not match operator {rho.shape}"
        )
    out = np.zeros((k0.shape[0], k0.shape[0]), dtype=complex)
    for k in kraus:
        out += k @ rho @ dagger(k)
    return out


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix (Ginibre ensemble) for property tests and checks."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real
