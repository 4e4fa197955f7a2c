"""Channel verdicts and CP-divisibility analysis.

Two unitality notions are reported side by side:

``unital_canonical``
    the map fixes the identity, ``eps(I) = I``, using signed application;
``unital_unsigned``
    ``sum E E^+ = I`` over every Kraus operator taken with a positive sign.

They disagree for non-CP maps such as the transpose, which fixes ``I`` but
whose unsigned sum is ``2 I``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from . import numkit
from .chanrep import (ChoiMatrix, SignedKrausSet, Superoperator, apply_channel,
                      choi_to_kraus, compose, kraus_to_choi, super_to_choi, to_super)
from .dilation import (DilationSpec, check_density, ensure_unitary,
                       extract_kraus, joint_completeness_check, reduced_spectra)
from .errors import DimensionError, SingularStageError, StageMismatchError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Tolerances:
    verdict: float = DEFAULT_TOL
    psd: float = numkit.PSD_TOL
    hermitian: float = numkit.HERMITIAN_TOL
    rank: float = numkit.RANK_TOL
    unitary: float = 1e-9
    singular: float = 1e-9

    @classmethod
    def with_tol(cls, tol: Optional[float]) -> "Tolerances":
        """Defaults, with the verdict and PSD thresholds replaced by ``tol`` when given."""
        if tol is None:
            return cls()
        return cls(verdict=tol, psd=tol)

    def to_dict(self) -> dict:
        return asdict(self)


class Check(NamedTuple):
    flag: bool
    residual: float


@dataclass(frozen=True)
class CPResult:
    flag: bool
    min_eigenvalue: float
    choi_eigenvalues: tuple
    witness_residual: Optional[float] = None
    witness_agrees: Optional[bool] = None

    @property
    def anomaly(self) -> bool:
        return self.witness_agrees is False


class UnitalResult(NamedTuple):
    canonical: Check
    unsigned: Check


def _gram(ops) -> np.ndarray:
    return sum(op.conj().T @ op for op in ops)


def check_tp(k: SignedKrausSet, tol: float = DEFAULT_TOL) -> Check:
    """Signed completeness ``sum D^+D - sum F^+F = I``."""
    g = np.zeros((k.dim_in, k.dim_in), dtype=complex)
    if k.positive_ops:
        g += _gram(k.positive_ops)
    if k.negative_ops:
        g -= _gram(k.negative_ops)
    residual = float(np.linalg.norm(g - np.eye(k.dim_in)))
    return Check(residual <= tol, residual)


def unsigned_completeness(k: SignedKrausSet, tol: float = DEFAULT_TOL) -> Check:
    """``sum E^+E = I`` with every operator counted positively."""
    g = _gram(k.all_ops) if len(k) else np.zeros((k.dim_in, k.dim_in))
    residual = float(np.linalg.norm(g - np.eye(k.dim_in)))
    return Check(residual <= tol, residual)


def check_cp(x: Union[ChoiMatrix, SignedKrausSet], tol: float = DEFAULT_TOL) -> CPResult:
    """Complete positivity from the Choi spectrum.

    For trace-preserving inputs the completeness relation is recorded as a
    second witness; ``witness_agrees`` is ``False`` when it contradicts the
    spectrum.
    """
    if isinstance(x, ChoiMatrix):
        choi, kraus = x, choi_to_kraus(x)
    else:
        choi, kraus = kraus_to_choi(x), x
    spec = numkit.hermitian_eig(choi.matrix, psd_tol=tol)
    flag = spec.min_eigenvalue >= -tol
    witness_residual = witness_agrees = None
    if check_tp(kraus, tol).flag:
        wit = unsigned_completeness(kraus, tol)
        witness_residual, witness_agrees = wit.residual, wit.flag == flag
    return CPResult(flag, spec.min_eigenvalue, tuple(float(v) for v in spec.eigenvalues),
                    witness_residual, witness_agrees)


def check_unital(k: SignedKrausSet, tol: float = DEFAULT_TOL) -> UnitalResult:
    ident_out = np.eye(k.dim_out)
    if k.dim_in == k.dim_out:
        canon = float(np.linalg.norm(apply_channel(k, np.eye(k.dim_in)) - ident_out))
    else:
        canon = float("inf")
    outer = sum((op @ op.conj().T for op in k.all_ops), np.zeros((k.dim_out, k.dim_out)))
    unsigned = float(np.linalg.norm(outer - ident_out))
    return UnitalResult(Check(canon <= tol, canon), Check(unsigned <= tol, unsigned))


@dataclass(frozen=True)
class Verdict:
    trace_preserving: Check
    completely_positive: CPResult
    unital_canonical: Check
    unital_unsigned: Check
    completeness_unsigned: Check
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def negative(self) -> bool:
        """True when the map is not trace preserving or not completely positive."""
        return not (self.trace_preserving.flag and self.completely_positive.flag)

    @property
    def anomalies(self) -> list[str]:
        if self.completely_positive.anomaly:
            return ["completeness-relation witness disagrees with the Choi spectrum"]
        return []

    def to_dict(self) -> dict:
        cp = self.completely_positive
        return {
            "trace_preserving": {"flag": self.trace_preserving.flag,
                                 "residual": self.trace_preserving.residual},
            "completely_positive": {
                "flag": cp.flag,
                "min_choi_eigenvalue": cp.min_eigenvalue,
                "choi_eigenvalues": list(cp.choi_eigenvalues),
                "witness_residual": cp.witness_residual,
                "witness_agrees": cp.witness_agrees,
            },
            "unital_canonical": {"flag": self.unital_canonical.flag,
                                 "residual": self.unital_canonical.residual},
            "unital_unsigned": {"flag": self.unital_unsigned.flag,
                                "residual": self.unital_unsigned.residual},
            "completeness_unsigned": {"flag": self.completeness_unsigned.flag,
                                      "residual": self.completeness_unsigned.residual},
            "anomalies": self.anomalies,
            "tolerances": self.tolerances.to_dict(),
        }


def analyze_channel(k: SignedKrausSet, tolerances: Optional[Tolerances] = None) -> Verdict:
    tols = tolerances or Tolerances()
    tol = tols.verdict
    unital = check_unital(k, tol)
    return Verdict(
        trace_preserving=check_tp(k, tol),
        completely_positive=check_cp(k, tols.psd),
        unital_canonical=unital.canonical,
        unital_unsigned=unital.unsigned,
        completeness_unsigned=unsigned_completeness(k, tol),
        tolerances=tols,
    )


@dataclass(frozen=True)
class StageVerdict:
    stage: int
    side: str
    verdict: Verdict
    kraus: SignedKrausSet

    def to_dict(self) -> dict:
        return {"stage": self.stage, "side": self.side, "verdict": self.verdict.to_dict()}


@dataclass
class DivisibilityReport:
    stages: list
    joint_completeness: list
    dims: tuple
    warnings: list = field(default_factory=list)

    def stage(self, index: int, side: str) -> StageVerdict:
        for s in self.stages:
            if s.stage == index and s.side == side:
                return s
        raise KeyError((index, side))

    @property
    def n_stages(self) -> int:
        return len(self.joint_completeness)

    def _all(self, side: str, attr) -> bool:
        return all(attr(s.verdict) for s in self.stages if s.side == side)

    @property
    def overall_cp_divisible(self) -> dict:
        return {side: self._all(side, lambda v: v.completely_positive.flag)
                for side in ("system", "environment")}

    @property
    def overall_unital(self) -> dict:
        return {side: self._all(side, lambda v: v.unital_canonical.flag)
                for side in ("system", "environment")}

    @property
    def symmetry_ok(self) -> bool:
        for i in range(self.n_stages):
            a = self.stage(i, "system").verdict.completely_positive.flag
            b = self.stage(i, "environment").verdict.completely_positive.flag
            if a != b:
                return False
        return True

    @property
    def max_completeness_residual(self) -> float:
        return max(max(j.sys_residual, j.env_residual, j.product_residual)
                   for j in self.joint_completeness)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "stages": [s.to_dict() for s in self.stages],
            "joint_completeness": [j._asdict() for j in self.joint_completeness],
            "overall_cp_divisible": self.overall_cp_divisible,
            "overall_unital": self.overall_unital,
            "symmetry_ok": self.symmetry_ok,
            "warnings": list(self.warnings),
        }


def analyze_divisibility_unitary(stages: Sequence, initial_joint, dims: Sequence[int],
                                 total=None, tolerances: Optional[Tolerances] = None,
                                 repair: bool = False) -> DivisibilityReport:
    """Stage-by-stage system and environment verdicts for a chain of joint unitaries.

    ``stages`` are applied in order (``stages[0]`` first).  Each stage's
    channels are extracted against the reduced states of the joint state that
    enters it.  When ``total`` is given, the ordered product of the stages must
    reproduce it.
    """
    tols = tolerances or Tolerances()
    dims = tuple(int(d) for d in dims)
    warnings: list[str] = []
    us = []
    for i, u in enumerate(stages):
        fixed, w = ensure_unitary(u, tols.unitary, repair=repair, name=f"stage {i}")
        if fixed.shape != (dims[0] * dims[1],) * 2:
            raise DimensionError(f"stage {i} has shape {fixed.shape}, incompatible with dims {dims}")
        us.append(fixed)
        warnings.extend(w)
    if not us:
        raise ValueError("at least one stage is required")
    if total is not None:
        product = np.eye(us[0].shape[0], dtype=complex)
        for u in us:
            product = u @ product
        mismatch = float(np.linalg.norm(product - numkit.as_matrix(total, "total")))
        if mismatch > 1e-9:
            raise StageMismatchError(f"product of stages differs from total unitary "
                                     f"(Frobenius {mismatch:.3e})")
    rho = check_density(initial_joint, tols.verdict, name="initial_joint")
    records, joint = [], []
    for i, u in enumerate(us):
        sys_spec, env_spec = reduced_spectra(rho, dims)
        sys_k = extract_kraus(DilationSpec(u, dims, env_spec, "system", tols.unitary))
        env_k = extract_kraus(DilationSpec(u, dims, sys_spec, "environment", tols.unitary))
        records.append(StageVerdict(i, "system", analyze_channel(sys_k, tols), sys_k))
        records.append(StageVerdict(i, "environment", analyze_channel(env_k, tols), env_k))
        joint.append(joint_completeness_check(sys_k, env_k, tols.verdict))
        rho = u @ rho @ u.conj().T
    return DivisibilityReport(records, joint, dims, warnings)


def intermediate_map(total: Superoperator, first: Superoperator,
                     singular_tol: float = 1e-9) -> Superoperator:
    """Solve ``total = X o first`` for ``X``, i.e. ``X = total @ first^-1``."""
    if first.dim_in != first.dim_out:
        raise DimensionError("intermediate_map needs a square first stage")
    if total.dim_in != first.dim_in:
        raise DimensionError("total and first stage act on different input spaces")
    s = np.linalg.svd(first.matrix, compute_uv=False)
    if s[-1] <= singular_tol:
        raise SingularStageError(
            f"divisibility undefined at this step: first stage is singular "
            f"(smallest singular value {s[-1]:.3e})")
    x = np.linalg.solve(first.matrix.T, total.matrix.T).T
    return Superoperator(first.dim_out, total.dim_out, x)


@dataclass
class ChainReport:
    status: str
    message: str
    first: Verdict
    total: Verdict
    intermediate: Optional[Superoperator] = None
    intermediate_verdict: Optional[Verdict] = None
    reconstruction_residual: Optional[float] = None

    @property
    def cp_divisible(self) -> Optional[bool]:
        if self.intermediate_verdict is None:
            return None
        return (self.first.completely_positive.flag
                and self.intermediate_verdict.completely_positive.flag)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "message": self.message,
            "cp_divisible": self.cp_divisible,
            "first": self.first.to_dict(),
            "total": self.total.to_dict(),
            "intermediate": (None if self.intermediate_verdict is None
                             else self.intermediate_verdict.to_dict()),
            "reconstruction_residual": self.reconstruction_residual,
        }


def analyze_channel_chain(total, first, tolerances: Optional[Tolerances] = None) -> ChainReport:
    """CP-divisibility of an abstract two-step chain ``total = X o first``."""
    tols = tolerances or Tolerances()
    s_total, s_first = to_super(total), to_super(first)
    v_total = analyze_channel(choi_to_kraus(super_to_choi(s_total), tols.rank), tols)
    v_first = analyze_channel(choi_to_kraus(super_to_choi(s_first), tols.rank), tols)
    try:
        x = intermediate_map(s_total, s_first, tols.singular)
    except SingularStageError as exc:
        return ChainReport("undefined", str(exc), v_first, v_total)
    v_x = analyze_channel(choi_to_kraus(super_to_choi(x), tols.rank), tols)
    resid = float(np.linalg.norm(compose(x, s_first).matrix - s_total.matrix))
    return ChainReport("ok", "intermediate map computed", v_first, v_total, x, v_x, resid)


def ppt_min_eigenvalue(rho, dims: Sequence[int], side: str = "B", tol: float = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of the partial transpose; negative values witness entanglement."""
    rho = check_density(rho, tol, name="rho")
    return numkit.hermitian_eig(numkit.partial_transpose(rho, dims, side)).min_eigenvalue
