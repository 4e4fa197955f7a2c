"""Channel representations and the conversions among them.

Three carriers are used:

* :class:`SignedKrausSet` -- positively weighted operators ``D`` and negatively
  weighted operators ``F``, acting as ``rho -> sum D rho D^+ - sum F rho F^+``.
  An empty negative list is an ordinary Kraus set.
* :class:`ChoiMatrix` -- ``B = sum vec(D) vec(D)^+ - sum vec(F) vec(F)^+`` with
  the row-major ``vec`` of :mod:`qchan.numkit`.  Its row index is the pair
  ``(out, in)``; ``B[(k, i), (l, j)] = eps(|i><j|)[k, l]``.
* :class:`Superoperator` -- ``vec(eps(rho)) = S @ vec(rho)``.

Channel equality is always judged on the Choi matrix, never on individual
Kraus operators, since Kraus sets are only defined up to unitary mixing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from . import numkit
from .errors import DimensionError, NotHermitianError, NotIsometryError, QChanError
from .numkit import RANK_TOL, HERMITIAN_TOL


def _as_ops(ops: Iterable, name: str) -> tuple[np.ndarray, ...]:
    return tuple(numkit.as_matrix(op, f"{name}[{i}]") for i, op in enumerate(ops))


@dataclass(frozen=True)
class SignedKrausSet:
    dim_in: int
    dim_out: int
    positive_ops: tuple = ()
    negative_ops: tuple = ()

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise DimensionError(f"dimensions must be positive, got {self.dim_in}->{self.dim_out}")
        pos = _as_ops(self.positive_ops, "positive")
        neg = _as_ops(self.negative_ops, "negative")
        for label, ops in (("positive", pos), ("negative", neg)):
            for i, op in enumerate(ops):
                if op.shape != (self.dim_out, self.dim_in):
                    raise DimensionError(
                        f"{label}[{i}] has shape {op.shape}, expected "
                        f"{(self.dim_out, self.dim_in)}")
        object.__setattr__(self, "positive_ops", pos)
        object.__setattr__(self, "negative_ops", neg)

    @classmethod
    def from_ops(cls, positive: Sequence, negative: Sequence = ()) -> "SignedKrausSet":
        """Build a set, inferring the dimensions from the first operator."""
        ops = list(positive) + list(negative)
        if not ops:
            raise DimensionError("cannot infer dimensions from an empty operator list")
        first = numkit.as_matrix(ops[0], "operator")
        return cls(first.shape[1], first.shape[0], tuple(positive), tuple(negative))

    @property
    def is_unsigned(self) -> bool:
        return not self.negative_ops

    @property
    def all_ops(self) -> tuple:
        return self.positive_ops + self.negative_ops

    def __len__(self):
        return len(self.positive_ops) + len(self.negative_ops)


@dataclass(frozen=True)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = numkit.as_matrix(self.matrix, "choi")
        n = self.dim_in * self.dim_out
        if m.shape != (n, n):
            raise DimensionError(f"Choi matrix for {self.dim_in}->{self.dim_out} must be "
                                 f"{n}x{n}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def is_hermitian(self) -> bool:
        return numkit.hermiticity_residual(self.matrix) <= HERMITIAN_TOL


@dataclass(frozen=True)
class Superoperator:
    dim_in: int
    dim_out: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = numkit.as_matrix(self.matrix, "superoperator")
        shape = (self.dim_out ** 2, self.dim_in ** 2)
        if m.shape != shape:
            raise DimensionError(f"superoperator for {self.dim_in}->{self.dim_out} must be "
                                 f"{shape[0]}x{shape[1]}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def apply(self, rho) -> np.ndarray:
        rho = numkit.as_matrix(rho, "rho")
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionError(f"rho has shape {rho.shape}, expected {self.dim_in}x{self.dim_in}")
        return numkit.unvec(self.matrix @ numkit.vec(rho), self.dim_out, self.dim_out)


Channel = Union[SignedKrausSet, ChoiMatrix, Superoperator]


def kraus_to_choi(k: SignedKrausSet) -> ChoiMatrix:
    n = k.dim_in * k.dim_out
    b = np.zeros((n, n), dtype=complex)
    for op in k.positive_ops:
        v = op.reshape(-1)
        b += np.outer(v, v.conj())
    for op in k.negative_ops:
        v = op.reshape(-1)
        b -= np.outer(v, v.conj())
    return ChoiMatrix(k.dim_in, k.dim_out, b)


def choi_to_kraus(c: ChoiMatrix, rank_tol: float = RANK_TOL,
                  hermitian_tol: float = HERMITIAN_TOL) -> SignedKrausSet:
    """Signed Kraus set from the eigendecomposition of a Hermitian Choi matrix.

    Each eigenpair with ``|lambda| > rank_tol`` contributes
    ``sqrt(|lambda|) * unvec(v)``, to the positive list when ``lambda > 0`` and
    to the negative list otherwise.  Eigenvalues are visited in descending
    order, so the output is deterministic.
    """
    try:
        spec = numkit.hermitian_eig(c.matrix, hermitian_tol=hermitian_tol)
    except NotHermitianError as exc:
        raise NotHermitianError(f"Choi matrix is not Hermitian: {exc}") from None
    pos, neg = [], []
    for lam, v in zip(spec.eigenvalues, spec.eigenvectors.T):
        if abs(lam) <= rank_tol:
            continue
        op = np.sqrt(abs(lam)) * numkit.unvec(v, c.dim_out, c.dim_in)
        (pos if lam > 0 else neg).append(op)
    return SignedKrausSet(c.dim_in, c.dim_out, tuple(pos), tuple(neg))


def choi_to_super(c: ChoiMatrix) -> Superoperator:
    # (k, i, l, j) -> (k, l, i, j); super_to_choi applies the same axis swap
    t =c.matrix.reshape(c.dim_out, c.dim_in, c.dim_out, c.dim_in).transpose(0, 2, 1, 3)
    return Superoperator(c.dim_in, c.dim_out, t.reshape(c.dim_out ** 2, c.dim_in ** 2))


def super_to_choi(s: Superoperator) -> ChoiMatrix:
    t = s.matrix.reshape(s.dim_out, s.dim_out, s.dim_in, s.dim_in).transpose(0, 2, 1, 3)
    n = s.dim_out * s.dim_in
    return ChoiMatrix(s.dim_in, s.dim_out, t.reshape(n, n))


def choi_super_convert(x: Union[ChoiMatrix, Superoperator]) -> Union[ChoiMatrix, Superoperator]:
    """Convert a Choi matrix to its superoperator or back; applying twice is the identity."""
    if isinstance(x, ChoiMatrix):
        return choi_to_super(x)
    if isinstance(x, Superoperator):
        return super_to_choi(x)
    raise TypeError(f"expected ChoiMatrix or Superoperator, got {type(x).__name__}")


def kraus_to_super(k: SignedKrausSet) -> Superoperator:
    s = np.zeros((k.dim_out ** 2, k.dim_in ** 2), dtype=complex)
    for op in k.positive_ops:
        s += np.kron(op, op.conj())
    for op in k.negative_ops:
        s -= np.kron(op, op.conj())
    return Superoperator(k.dim_in, k.dim_out, s)


def _check_channel(x):
    if not isinstance(x, (SignedKrausSet, ChoiMatrix, Superoperator)):
        raise TypeError(f"expected a SignedKrausSet, ChoiMatrix or Superoperator, "
                        f"got {type(x).__name__}")


def to_kraus(x: Channel, rank_tol: float = RANK_TOL) -> SignedKrausSet:
    _check_channel(x)
    if isinstance(x, SignedKrausSet):
        return x
    if isinstance(x, Superoperator):
        x = super_to_choi(x)
    return choi_to_kraus(x, rank_tol=rank_tol)


def to_choi(x: Channel) -> ChoiMatrix:
    _check_channel(x)
    if isinstance(x, ChoiMatrix):
        return x
    if isinstance(x, Superoperator):
        return super_to_choi(x)
    return kraus_to_choi(x)


def to_super(x: Channel) -> Superoperator:
    _check_channel(x)
    if isinstance(x, Superoperator):
        return x
    if isinstance(x, ChoiMatrix):
        return choi_to_super(x)
    return kraus_to_super(x)


def apply_channel(k: SignedKrausSet, rho) -> np.ndarray:
    rho = numkit.as_matrix(rho, "rho")
    if rho.shape != (k.dim_in, k.dim_in):
        raise DimensionError(f"rho has shape {rho.shape}, expected {k.dim_in}x{k.dim_in}")
    out = np.zeros((k.dim_out, k.dim_out), dtype=complex)
    for op in k.positive_ops:
        out += op @ rho @ op.conj().T
    for op in k.negative_ops:
        out -= op @ rho @ op.conj().T
    return out


def tensor_channels(a: SignedKrausSet, b: SignedKrausSet) -> SignedKrausSet:
    """Kraus set of ``a (x) b``; a pair is negative when exactly one factor is."""
    pos = [np.kron(x, y) for x in a.positive_ops for y in b.positive_ops]
    pos += [np.kron(x, y) for x in a.negative_ops for y in b.negative_ops]
    neg = [np.kron(x, y) for x in a.positive_ops for y in b.negative_ops]
    neg += [np.kron(x, y) for x in a.negative_ops for y in b.positive_ops]
    return SignedKrausSet(a.dim_in * b.dim_in, a.dim_out * b.dim_out, tuple(pos), tuple(neg))


def tensor_choi(a: ChoiMatrix, b: ChoiMatrix) -> ChoiMatrix:
    """Choi matrix of ``a (x) b`` assembled directly from the factor Choi matrices."""
    ta = a.matrix.reshape(a.dim_out, a.dim_in, a.dim_out, a.dim_in)
    tb = b.matrix.reshape(b.dim_out, b.dim_in, b.dim_out, b.dim_in)
    t = np.einsum("kilj,KILJ->kKiIlLjJ", ta, tb)
    d_in, d_out = a.dim_in * b.dim_in, a.dim_out * b.dim_out
    return ChoiMatrix(d_in, d_out, t.reshape(d_in * d_out, d_in * d_out))


def mix_kraus(k: SignedKrausSet, mixing, tol: float = 1e-10) -> SignedKrausSet:
    """Unitary freedom of Kraus sets: ``L_j = sum_i mixing[j, i] K_i``.

    ``mixing`` must be an isometry (``mixing^+ mixing = I``) with one column per
    operator.  Only unsigned sets are accepted.
    """
    if not k.is_unsigned:
        raise QChanError("mix_kraus is only defined for unsigned Kraus sets")
    w = numkit.as_matrix(mixing, "mixing")
    n = len(k.positive_ops)
    if w.shape[1] != n or w.shape[0] < n:
        raise DimensionError(f"mixing must be m x {n} with m >= {n}, got {w.shape}")
    residual = float(np.linalg.norm(w.conj().T @ w - np.eye(n)))
    if residual > tol:
        raise NotIsometryError(f"mixing matrix is not an isometry (residual {residual:.3e})")
    ops = np.stack(k.positive_ops)
    mixed = np.einsum("ji,iab->jab", w, ops)
    return SignedKrausSet(k.dim_in, k.dim_out, tuple(mixed), ())


def compose(second: Superoperator, first: Superoperator) -> Superoperator:
    """Superoperator of ``second o first``."""
    if second.dim_in != first.dim_out:
        raise DimensionError(f"cannot compose {first.dim_in}->{first.dim_out} with "
                             f"{second.dim_in}->{second.dim_out}")
    return Superoperator(first.dim_in, second.dim_out, second.matrix @ first.matrix)


def choi_distance(a: Channel, b: Channel) -> float:
    """Frobenius distance between Choi matrices: the channel equality measure."""
    ca, cb = to_choi(a), to_choi(b)
    if (ca.dim_in, ca.dim_out) != (cb.dim_in, cb.dim_out):
        raise DimensionError("channels act between different spaces")
    return float(np.linalg.norm(ca.matrix - cb.matrix))


def identity_channel(d: int) -> SignedKrausSet:
    return SignedKrausSet(d, d, (np.eye(d),), ())


def transpose_channel(d: int = 2) -> SignedKrausSet:
    """Signed Kraus set of the transpose ``rho -> rho^T``.

    The Choi matrix is the swap on ``d x d``: symmetric operators carry weight
    +1 and antisymmetric ones weight -1.
    """
    def e(i, j):
        m = np.zeros((d, d), dtype=complex)
        m[i, j] = 1
        return m

    pos = [e(i, i) for i in range(d)]
    neg = []
    for i in range(d):
        for j in range(i + 1, d):
            pos.append((e(i, j) + e(j, i)) / np.sqrt(2))
            neg.append((e(j, i) - e(i, j)) / np.sqrt(2))
    return SignedKrausSet(d, d, tuple(pos), tuple(neg))


def unitary_channel(u) -> SignedKrausSet:
    u = numkit.as_matrix(u, "u")
    return SignedKrausSet(u.shape[1], u.shape[0], (u,), ())


def depolarizing_super(p: float, d: int = 2) -> Superoperator:
    """``rho -> p rho + (1 - p) Tr(rho) I/d``; these compose multiplicatively in ``p``."""
    ident = np.eye(d * d)
    omega = numkit.vec(np.eye(d))
    return Superoperator(d, d, p * ident + (1 - p) * np.outer(omega, omega) / d)


def swap_matrix(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1
    return s
