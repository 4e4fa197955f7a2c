"""Dense complex linear algebra used throughout qchan.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Vectorization is row-major everywhere: ``vec(m)[i * cols + j] == m[i, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotHermitianError, RankDeficientError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
RANK_TOL = 1e-10
GAUGE_TIE_TOL = 1e-12


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array (copying)."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name}: expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name}: entries must be finite (found NaN or Inf)")
    return arr


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, int]:
    d_a, d_b = (int(d) for d in dims)
    if d_a < 1 or d_b < 1:
        raise DimensionError(f"dims must be positive, got {tuple(dims)}")
    n = d_a * d_b
    if m.shape != (n, n):
        raise DimensionError(
            f"matrix of shape {m.shape} does not match dims {d_a}x{d_b} (expected {n}x{n})")
    return d_a, d_b


def vec(m) -> np.ndarray:
    """Row-major stacking of a matrix into a 1-D vector."""
    return as_matrix(m).reshape(-1)


def unvec(v, rows: int, cols: int) -> np.ndarray:
    """Exact inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise DimensionError(f"vector of length {v.size} cannot be reshaped to {rows}x{cols}")
    return v.reshape(rows, cols).copy()


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def partial_trace(m, dims: Sequence[int], keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``dims[0] x dims[1]``.

    ``keep`` selects the factor that survives, ``"A"`` (first) or ``"B"`` (second).
    """
    m = as_matrix(m)
    d_a, d_b = _check_dims(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(m, dims: Sequence[int], side: str = "B") -> np.ndarray:
    m = as_matrix(m)
    d_a, d_b = _check_dims(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if side == "B":
        t = t.transpose(0, 3, 2, 1)
    elif side == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return t.reshape(d_a * d_b, d_a * d_b).copy()


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m - m.conj().T))


def fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rephase each column so its largest-magnitude entry is real and nonnegative.

    Near-ties are broken by the lowest index, which keeps the choice stable
    under round-off.
    """
    out = np.array(vectors, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0:
            continue
        idx = int(np.flatnonzero(mags >= top - GAUGE_TIE_TOL)[0])
        out[:, j] = col * (mags[idx] / col[idx])
        out[idx, j] = mags[idx]
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with gauge-fixed orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    psd_tol: float = PSD_TOL

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def is_psd(self) -> bool:
        return self.min_eigenvalue >= -self.psd_tol

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(m, hermitian_tol: float = HERMITIAN_TOL,
                  psd_tol: float = PSD_TOL) -> SpectralDecomposition:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {m.shape}")
    res = hermiticity_residual(m)
    if res > hermitian_tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: ||m - m^dagger||_F = {res:.3e} > {hermitian_tol:.1e}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(w[order].copy(), fix_gauge(v[:, order]), psd_tol)


class UnitarityReport(NamedTuple):
    is_unitary: bool
    residual: float


def unitarity_check(m, tol: float = 1e-9) -> UnitarityReport:
    """Frobenius residual of ``m^dagger m - I``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitarity_check needs a square matrix, got {m.shape}")
    residual = float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))
    return UnitarityReport(residual <= tol, residual)


def nearest_unitary(m) -> np.ndarray:
    """Unitary factor of the polar decomposition ``m = U P``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"nearest_unitary needs a square matrix, got {m.shape}")
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= RANK_TOL * max(s[0], 1.0):
        raise RankDeficientError(
            f"matrix is rank deficient (smallest singular value {s[-1]:.3e})")
    u, _ = scipy.linalg.polar(m)
    return u
