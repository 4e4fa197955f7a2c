"""Kraus operators of the system and environment channels of a joint unitary.

For a joint unitary ``U`` on ``H_S (x) H_E`` and a spectator state with
spectral decomposition ``sum_k p_k |a_k><a_k|``, the system-side operators are

    K_i = sum_k sqrt(p_k) <a_i|_E U |a_k>_E

(one ``dS x dS`` operator per spectator eigenvector), and the environment-side
operators are built the same way with the roles of the two factors swapped.
Zero operators are kept so that operator counts line up with hand-derived
listings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import numkit
from .chanrep import SignedKrausSet
from .errors import DimensionError, InvalidStateError, NotUnitaryError
from .numkit import SpectralDecomposition

log = logging.getLogger(__name__)

SIDES = ("system", "environment")


def ensure_unitary(u, tol: float = 1e-9, repair: bool = False,
                   name: str = "unitary") -> tuple[np.ndarray, list[str]]:
    """Validate ``u``; with ``repair`` replace it by its nearest unitary instead of raising.

    Returns the (possibly repaired) matrix and a list of warnings.
    """
    u = numkit.as_matrix(u, name)
    report = numkit.unitarity_check(u, tol)
    if report.is_unitary:
        return u, []
    if not repair:
        raise NotUnitaryError(f"{name} is not unitary: ||U^+U - I||_F = {report.residual:.3e}")
    fixed = numkit.nearest_unitary(u)
    msg = (f"{name} failed the unitarity check (residual {report.residual:.6g}); replaced by "
           f"its nearest unitary (Frobenius distance {np.linalg.norm(fixed - u):.6g})")
    log.warning(msg)
    return fixed, [msg]


@dataclass(frozen=True)
class DilationSpec:
    """Joint unitary, bipartition and the spectral data of the traced-out factor.

    ``side`` names the channel being extracted.  For ``"system"`` the spectator
    is the environment state, for ``"environment"`` it is the system state.
    """

    joint_unitary: np.ndarray
    dims: tuple
    spectator: SpectralDecomposition
    side: str = "system"
    unitary_tol: float = 1e-9

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        d_s, d_e = (int(d) for d in self.dims)
        object.__setattr__(self, "dims", (d_s, d_e))
        u, _ = ensure_unitary(self.joint_unitary, self.unitary_tol, name="joint_unitary")
        if u.shape != (d_s * d_e, d_s * d_e):
            raise DimensionError(f"joint unitary of shape {u.shape} does not match dims {d_s}x{d_e}")
        object.__setattr__(self, "joint_unitary", u)
        expected = d_e if self.side == "system" else d_s
        if self.spectator.dim != expected:
            raise DimensionError(f"spectator has dimension {self.spectator.dim}, expected "
                                 f"{expected} for side={self.side}")
        total = float(np.sum(self.spectator.eigenvalues))
        if abs(total - 1) > 1e-10:
            raise InvalidStateError(f"spectator eigenvalues sum to {total!r}, expected 1")
        if not self.spectator.is_psd:
            raise InvalidStateError(
                f"spectator has negative eigenvalue {self.spectator.min_eigenvalue:.3e}")

    @classmethod
    def from_state(cls, joint_unitary, dims: Sequence[int], spectator_state,
                   side: str = "system", **kwargs) -> "DilationSpec":
        return cls(joint_unitary, tuple(dims), numkit.hermitian_eig(spectator_state), side, **kwargs)


# eigenvalues this small are eigensolver round-off; their square roots would not be
ROUNDOFF_WEIGHT = 1e-14


def _weighted_vector(spectator: SpectralDecomposition) -> np.ndarray:
    lam = np.where(spectator.eigenvalues > ROUNDOFF_WEIGHT, spectator.eigenvalues, 0.0)
    weights = np.sqrt(lam)
    return spectator.eigenvectors @ weights


def extract_kraus(spec: DilationSpec) -> SignedKrausSet:
    d_s, d_e = spec.dims
    # axes: (s_out, e_out, s_in, e_in)
    t = spec.joint_unitary.reshape(d_s, d_e, d_s, d_e)
    ket = _weighted_vector(spec.spectator)
    basis = spec.spectator.eigenvectors
    if spec.side == "system":
        ops = [np.einsum("e,sefg,g->sf", basis[:, i].conj(), t, ket) for i in range(d_e)]
        return SignedKrausSet(d_s, d_s, tuple(ops), ())
    ops = [np.einsum("s,sefg,f->eg", basis[:, j].conj(), t, ket) for j in range(d_s)]
    return SignedKrausSet(d_e, d_e, tuple(ops), ())


def check_density(rho, tol: float = 1e-9, name: str = "state") -> np.ndarray:
    rho = numkit.as_matrix(rho, name)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"{name} must be square, got {rho.shape}")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidStateError(f"{name} has trace {np.trace(rho).real:.6g}, expected 1")
    spec = numkit.hermitian_eig(rho, hermitian_tol=max(tol, numkit.HERMITIAN_TOL))
    if spec.min_eigenvalue < -tol:
        raise InvalidStateError(f"{name} is not positive semidefinite "
                                f"(min eigenvalue {spec.min_eigenvalue:.3e})")
    return rho


def reduced_spectra(joint_state, dims: Sequence[int]) -> tuple[SpectralDecomposition,
                                                             SpectralDecomposition]:
    """Spectral decompositions of ``Tr_E`` and ``Tr_S`` of a joint state."""
    rho_s = numkit.partial_trace(joint_state, dims, keep="A")
    rho_e = numkit.partial_trace(joint_state, dims, keep="B")
    return numkit.hermitian_eig(rho_s), numkit.hermitian_eig(rho_e)


class Propagation(NamedTuple):
    next_joint: np.ndarray
    reduced_system: SpectralDecomposition
    reduced_environment: SpectralDecomposition


def propagate(u, joint_state, dims: Sequence[int], tol: float = 1e-9) -> Propagation:
    u, _ = ensure_unitary(u, tol, name="stage unitary")
    rho = check_density(joint_state, tol, name="joint_state")
    if u.shape != rho.shape:
        raise DimensionError(f"unitary {u.shape} and state {rho.shape} do not match")
    nxt = u @ rho @ u.conj().T
    sys_spec, env_spec = reduced_spectra(nxt, dims)
    return Propagation(nxt, sys_spec, env_spec)


class JointCompleteness(NamedTuple):
    product_residual: float
    sys_residual: float
    env_residual: float
    both_or_neither: bool


def _gram(k: SignedKrausSet) -> np.ndarray:
    return sum(op.conj().T @ op for op in k.positive_ops)


def joint_completeness_check(sys: SignedKrausSet, env: SignedKrausSet,
                             tol: float = 1e-9) -> JointCompleteness:
    """Distances of ``sum A^+A (x) sum B^+B``, ``sum A^+A`` and ``sum B^+B`` from identity."""
    if not (sys.is_unsigned and env.is_unsigned):
        raise ValueError("joint_completeness_check expects unsigned Kraus sets")
    ga, gb = _gram(sys), _gram(env)
    prod = float(np.linalg.norm(np.kron(ga, gb) - np.eye(ga.shape[0] * gb.shape[0])))
    ra = float(np.linalg.norm(ga - np.eye(ga.shape[0])))
    rb = float(np.linalg.norm(gb - np.eye(gb.shape[0])))
    return JointCompleteness(prod, ra, rb, (prod <= tol) == (ra <= tol and rb <= tol))
