"""Seeded randomized property suites.

Each sweep draws ``samples`` random instances from ``numpy.random.default_rng(seed)``
and records the worst residual seen for every checked quantity.  The result
depends only on ``(name, samples, seed, tolerances)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import numkit
from . import samplers as sm
from .chanrep import (ChoiMatrix, Superoperator, apply_channel, choi_super_convert, choi_to_kraus,
                      compose, identity_channel, kraus_to_choi, kraus_to_super, mix_kraus,
                      swap_matrix, tensor_channels, transpose_channel, unitary_channel)
from .dilation import DilationSpec, extract_kraus
from .verdicts import (Tolerances, analyze_channel, analyze_channel_chain,
                       analyze_divisibility_unitary, check_cp, check_tp, check_unital,
                       intermediate_map)

MAX_LISTED_FAILURES = 20


@dataclass
class SweepResult:
    name: str
    samples: int
    seed: int
    tolerances: dict
    max_residuals: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, key: str, value: float, limit: Optional[float] = None, sample: int = -1,
               above: bool = False):
        """Track the worst value of ``key``; with ``limit`` also flag a failure.

        ``above=True`` means the value must exceed ``limit`` and the smallest value is kept.
        """
        value = float(value)
        prev = self.max_residuals.get(key)
        if above:
            self.max_residuals[key] = value if prev is None else min(prev, value)
            bad = limit is not None and not value > limit
        else:
            self.max_residuals[key] = value if prev is None else max(prev, value)
            bad = limit is not None and not value <= limit
        if bad:
            self.fail(f"sample {sample}: {key} = {value:.3e} (limit {limit:.1e})")

    def fail(self, msg: str):
        if len(self.failures) < MAX_LISTED_FAILURES:
            self.failures.append(msg)
        self.counts["failures"] = self.counts.get("failures", 0) + 1

    def bump(self, key: str, by: int = 1):
        self.counts[key] = self.counts.get(key, 0) + by

    def to_dict(self) -> dict:
        return {"name": self.name, "samples": self.samples, "seed": self.seed,
                "passed": self.passed, "tolerances": self.tolerances,
                "max_residuals": dict(sorted(self.max_residuals.items())),
                "counts": dict(sorted(self.counts.items())), "failures": list(self.failures)}


def _basis(d: int):
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            yield e


def random_factorization(rng, u: np.ndarray, n_stages: int) -> list:
    """Stages ``[V1, ..., Vn]`` with ``Vn ... V1 = u``; all but the last are Haar random."""
    d = u.shape[0]
    stages = [sm.random_unitary(rng, d) for _ in range(n_stages - 1)]
    prod = np.eye(d, dtype=complex)
    for v in stages:
        prod = v @ prod
    stages.append(u @ prod.conj().T)
    return stages


def sweep_theorem3(res: SweepResult, rng, tols: Tolerances):
    """Random unitary chains: system and environment CP flags agree at every stage."""
    for n in range(res.samples):
        dims = [(2, 2), (2, 3)][n % 2]
        d = dims[0] * dims[1]
        u = sm.random_unitary(rng, d)
        stages = random_factorization(rng, u, int(rng.integers(2, 4)))
        rho0 = np.kron(sm.random_density(rng, dims[0]), sm.random_density(rng, dims[1]))
        report = analyze_divisibility_unitary(stages, rho0, dims, total=u, tolerances=tols)
        res.bump(f"dims_{dims[0]}x{dims[1]}")
        res.bump(f"stages_{report.n_stages}")
        if not report.symmetry_ok:
            res.fail(f"sample {n}: system/environment CP flags disagree")
        res.record("completeness", report.max_completeness_residual, tols.verdict, n)
        if not all(report.overall_cp_divisible.values()):
            res.fail(f"sample {n}: a dilation-extracted stage is not CP")


def sweep_theorem2(res: SweepResult, rng, tols: Tolerances):
    """Random dilations: both extracted channels are complete; pure spectators reproduce
    the reduced dynamics."""
    all_dims = [(2, 2), (2, 3), (3, 2)]
    for n in range(res.samples):
        dims = all_dims[n % 3]
        u = sm.random_unitary(rng, dims[0] * dims[1])
        rho_s, rho_e = sm.random_density(rng, dims[0]), sm.random_density(rng, dims[1])
        sys_k = extract_kraus(DilationSpec.from_state(u, dims, rho_e, "system"))
        env_k = extract_kraus(DilationSpec.from_state(u, dims, rho_s, "environment"))
        v_s, v_e = analyze_channel(sys_k, tols), analyze_channel(env_k, tols)
        res.record("system_completeness", v_s.trace_preserving.residual, tols.verdict, n)
        res.record("environment_completeness", v_e.trace_preserving.residual, tols.verdict, n)
        if v_s.completely_positive.flag != v_e.completely_positive.flag:
            res.fail(f"sample {n}: system/environment CP flags disagree")
        # reduced dynamics, product input with a pure spectator
        pure_e = sm.random_pure(rng, dims[1])
        k = extract_kraus(DilationSpec.from_state(u, dims, pure_e, "system"))
        joint = u @ np.kron(rho_s, pure_e) @ u.conj().T
        res.record("reduced_dynamics_system", np.linalg.norm(
            apply_channel(k, rho_s) - numkit.partial_trace(joint, dims, keep="A")), 1e-10, n)
        pure_s = sm.random_pure(rng, dims[0])
        k = extract_kraus(DilationSpec.from_state(u, dims, pure_s, "environment"))
        joint = u @ np.kron(pure_s, rho_e) @ u.conj().T
        res.record("reduced_dynamics_environment", np.linalg.norm(
            apply_channel(k, rho_e) - numkit.partial_trace(joint, dims, keep="B")), 1e-10, n)


def sweep_corollary1(res: SweepResult, rng, tols: Tolerances):
    """Isometric remixing of CPTP Kraus sets leaves the Gram sum and Choi matrix unchanged."""
    for n in range(res.samples):
        d = int(rng.integers(2, 4))
        k = sm.random_cptp(rng, d)
        m = len(k) + int(rng.integers(0, 3))
        mixing = sm.random_isometry(rng, m, len(k))
        mixed = mix_kraus(k, mixing)
        gram = sum(op.conj().T @ op for op in k.positive_ops)
        gram_mixed = sum(op.conj().T @ op for op in mixed.positive_ops)
        res.record("gram_change", np.linalg.norm(gram - gram_mixed), 1e-12, n)
        res.record("choi_change",
                   np.linalg.norm(kraus_to_choi(k).matrix - kraus_to_choi(mixed).matrix), 1e-12, n)
        res.record("tp_after_mixing", check_tp(mixed).residual, tols.verdict, n)


def sweep_roundtrip(res: SweepResult, rng, tols: Tolerances):
    """Kraus/Choi/superoperator conversions close, including indefinite Choi matrices."""
    shapes = [(2, 2), (3, 3), (2, 3), (3, 2)]
    for n in range(res.samples):
        d_in, d_out = shapes[n % 4]
        c = ChoiMatrix(d_in, d_out, sm.random_hermitian(rng, d_in * d_out))
        k = choi_to_kraus(c, tols.rank)
        if k.negative_ops:
            res.bump("indefinite")
        res.record("choi_kraus_choi", np.linalg.norm(kraus_to_choi(k).matrix - c.matrix), 1e-9, n)
        s = choi_super_convert(c)
        back = choi_super_convert(s)
        res.record("choi_super_choi", np.linalg.norm(back.matrix - c.matrix), 0.0, n)
        res.record("kraus_super_vs_choi_super",
                   np.linalg.norm(kraus_to_super(k).matrix - s.matrix), 1e-9, n)
        sk = kraus_to_super(k)
        worst = max(float(np.linalg.norm(apply_channel(k, e) - sk.apply(e))) for e in _basis(d_in))
        res.record("apply_kraus_vs_super", worst, 1e-12, n)


def _well_conditioned_channel(rng, d: int, floor: float = 0.05) -> Superoperator:
    """Noisy unitary channel ``(1-q) U.U^+ + q R`` with smallest singular value above ``floor``."""
    while True:
        q = float(rng.uniform(0, 0.4))
        u = kraus_to_super(unitary_channel(sm.random_unitary(rng, d))).matrix
        r = kraus_to_super(sm.random_cptp(rng, d)).matrix
        m = (1 - q) * u + q * r
        if np.linalg.svd(m, compute_uv=False)[-1] > floor:
            return Superoperator(d, d, m)


def sweep_intermediate(res: SweepResult, rng, tols: Tolerances):
    """``intermediate_map(compose(g, f), f)`` recovers ``g``."""
    for n in range(res.samples):
        d = int(rng.integers(2, 4))
        f = _well_conditioned_channel(rng, d)
        g = kraus_to_super(sm.random_cptp(rng, d))
        x = intermediate_map(compose(g, f), f, tols.singular)
        res.record("recovery", np.linalg.norm(x.matrix - g.matrix), 1e-9, n)
    chain = analyze_channel_chain(identity_channel(2), transpose_channel(2), tols)
    res.record("identity_transpose_min_eigenvalue",
               chain.intermediate_verdict.completely_positive.min_eigenvalue)
    if chain.cp_divisible is not False:
        res.fail("identity/transpose chain: intermediate map should be NCP")


def _p_family(p: float) -> ChoiMatrix:
    return ChoiMatrix(2, 2, p * swap_matrix(2) + (1 - p) * np.eye(4) / 2)


def sweep_witness(res: SweepResult, rng, tols: Tolerances):
    """For TP maps the completeness relation and Choi positivity agree; NCP samples are
    non-unital in the unsigned sense."""
    for n in range(res.samples):
        d = int(rng.integers(2, 4))
        k = sm.random_cptp(rng, d)
        cp = check_cp(k, tols.psd)
        res.bump("cptp")
        if not (cp.flag and cp.witness_agrees):
            res.fail(f"sample {n}: random CPTP set failed the CP witness cross-check")
        p = float(rng.uniform(0, 1))
        kp = choi_to_kraus(_p_family(p), tols.rank)
        cpp = check_cp(kp, tols.psd)
        res.record("p_family_min_eigenvalue_error", abs(cpp.min_eigenvalue - (1 - 3 * p) / 2),
                   1e-12, n)
        if cpp.witness_agrees is False:
            res.fail(f"sample {n}: witness disagrees for p={p:.6f}")
        if not cpp.flag:
            res.bump("ncp")
            res.record("ncp_unsigned_unital_residual", check_unital(kp).unsigned.residual,
                       tols.verdict, n, above=True)
    t = transpose_channel(2)
    it = tensor_channels(identity_channel(2), t)
    for label, k in (("transpose", t), ("identity_x_transpose", it)):
        cp = check_cp(k, tols.psd)
        if cp.flag or not cp.witness_agrees:
            res.fail(f"{label}: expected NCP with an agreeing witness")
        res.record(f"{label}_unsigned_unital_residual", check_unital(k).unsigned.residual,
                   tols.verdict, above=True)


SWEEPS: dict[str, Callable] = {
    "theorem2": sweep_theorem2,
    "theorem3": sweep_theorem3,
    "corollary1": sweep_corollary1,
    "roundtrip": sweep_roundtrip,
    "intermediate": sweep_intermediate,
    "witness": sweep_witness,
}


def run_sweep(name: str, samples: int = 100, seed: int = 0,
              tolerances: Optional[Tolerances] = None) -> SweepResult:
    if name not in SWEEPS:
        raise ValueError(f"unknown sweep {name!r}; choose from {sorted(SWEEPS)}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    tols = tolerances or Tolerances()
    res = SweepResult(name, samples, seed, tols.to_dict())
    start = time.perf_counter()
    SWEEPS[name](res, np.random.default_rng(seed), tols)
    res.elapsed = time.perf_counter() - start
    return res
