"""Seeded random matrices, states and channels for property sweeps."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .chanrep import SignedKrausSet


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(d, random_state=rng)


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (``rows >= cols``)."""
    if rows < cols:
        raise ValueError(f"an isometry needs rows >= cols, got {rows}x{cols}")
    q, r = np.linalg.qr(ginibre(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    g = ginibre(rng, d, rank or d)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, d: int) -> np.ndarray:
    v = ginibre(rng, d, 1)[:, 0]
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = ginibre(rng, d, d)
    return (g + g.conj().T) / 2


def random_cptp(rng: np.random.Generator, d_in: int, d_out: int | None = None,
                n_ops: int | None = None) -> SignedKrausSet:
    """Kraus blocks of a random Stinespring isometry ``C^d_in -> C^d_out (x) C^n_ops``."""
    d_out = d_out or d_in
    least = -(-d_in // d_out)
    n_ops = n_ops or int(rng.integers(least, d_in * d_out + 1))
    if n_ops < least:
        raise ValueError(f"{n_ops} operators cannot form a channel from dimension {d_in} to {d_out}")
    v = random_isometry(rng, d_out * n_ops, d_in)
    ops = tuple(v[i * d_out:(i + 1) * d_out, :] for i in range(n_ops))
    return SignedKrausSet(d_in, d_out, ops, ())
