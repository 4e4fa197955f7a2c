import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qchan import fixtures as fx
from qchan import numkit
from qchan import samplers as sm
from qchan.chanrep import SignedKrausSet, apply_channel, choi_distance, kraus_to_choi
from qchan.dilation import (DilationSpec, check_density, ensure_unitary, extract_kraus,
                            joint_completeness_check, propagate, reduced_spectra)
from qchan.errors import DimensionError, InvalidStateError, NotUnitaryError
from qchan.numkit import SpectralDecomposition

seeds = st.integers(0, 2**32 - 1)


def pure_spec(v):
    return numkit.hermitian_eig(fx.projector(v))


def test_bell_stage1_system():
    u1 = np.kron(fx.H, fx.I2)
    k = extract_kraus(DilationSpec(u1, (2, 2), pure_spec(fx.ket("0")), "system"))
    assert np.allclose(k.positive_ops[0], fx.H)
    assert np.allclose(k.positive_ops[1], 0)
    assert len(k.positive_ops) == 2 and not k.negative_ops


def test_bell_stage2_environment():
    plus = (fx.ket("0") + fx.ket("1")) / np.sqrt(2)
    k = extract_kraus(DilationSpec(fx.CNOT, (2, 2), pure_spec(plus), "environment"))
    expected = SignedKrausSet.from_ops([(fx.I2 + fx.X) / 2, (fx.I2 - fx.X) / 2])
    assert choi_distance(k, expected) < 1e-12
    # the spectator basis of |+> is {|+>, |->} up to phases, so the operators match directly
    assert np.allclose(k.positive_ops[0], (fx.I2 + fx.X) / 2)


def test_w_stage2_system_s0_coefficients():
    u = fx.W_U_CORRECTED
    state = fx.W_STAGE2_INPUT_PRINTED / np.linalg.norm(fx.W_STAGE2_INPUT_PRINTED)
    _, env = reduced_spectra(fx.projector(state), (4, 2))
    k = extract_kraus(DilationSpec(-1j * u.conj().T, (4, 2), env, "system"))
    listed = fx.W_KRAUS[(1, "system")][0]
    assert np.count_nonzero(np.abs(listed) > 0) == 12
    assert np.max(np.abs(k.positive_ops[0] - listed)) < 5e-3


@settings(max_examples=30)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_extraction_matches_loop_oracle_for_pure_spectator(seed, dims):
    rng = np.random.default_rng(seed)
    d_s, d_e = dims
    u = sm.random_unitary(rng, d_s * d_e)
    spec = numkit.hermitian_eig(sm.random_pure(rng, d_e))
    k = extract_kraus(DilationSpec(u, dims, spec, "system"))
    ket = spec.eigenvectors[:, 0]
    ref = oracles.extract_pure(u, d_s, d_e, ket, spec.eigenvectors)
    for a, b in zip(k.positive_ops, ref):
        assert np.allclose(a, b, atol=1e-12)


@settings(max_examples=60)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_both_sides_complete(seed, dims):
    rng = np.random.default_rng(seed)
    u = sm.random_unitary(rng, dims[0] * dims[1])
    sys_k = extract_kraus(DilationSpec.from_state(u, dims, sm.random_density(rng, dims[1])))
    env_k = extract_kraus(DilationSpec.from_state(u, dims, sm.random_density(rng, dims[0]),
                                                  "environment"))
    j = joint_completeness_check(sys_k, env_k)
    assert max(j.sys_residual, j.env_residual, j.product_residual) < 1e-9
    assert j.both_or_neither


@settings(max_examples=40)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_consistency_with_reduced_dynamics(seed, dims):
    rng = np.random.default_rng(seed)
    u = sm.random_unitary(rng, dims[0] * dims[1])
    rho_s, rho_e = sm.random_density(rng, dims[0]), sm.random_pure(rng, dims[1])
    k = extract_kraus(DilationSpec.from_state(u, dims, rho_e))
    joint = u @ np.kron(rho_s, rho_e) @ u.conj().T
    assert np.linalg.norm(apply_channel(k, rho_s)
                          - numkit.partial_trace(joint, dims, "A")) < 1e-10


@given(seeds)
def test_choi_invariant_under_gauge_for_pure_spectator(seed):
    rng = np.random.default_rng(seed)
    u = sm.random_unitary(rng, 6)
    spec = numkit.hermitian_eig(sm.random_pure(rng, 3))
    v = spec.eigenvectors * np.exp(2j * np.pi * rng.random(3))
    v[:, 1:] = v[:, 1:] @ sm.random_unitary(rng, 2)
    a = extract_kraus(DilationSpec(u, (2, 3), spec))
    b = extract_kraus(DilationSpec(u, (2, 3), SpectralDecomposition(spec.eigenvalues, v)))
    assert choi_distance(a, b) < 1e-12


def test_mixed_spectator_weighted_ket_depends_on_eigenvector_phases():
    # with two nonzero weights the relative phase of the eigenvectors enters the ket
    u = fx.W_U_CORRECTED
    rho_e = np.diag([0.7, 0.3]).astype(complex)
    spec = numkit.hermitian_eig(rho_e)
    flipped = SpectralDecomposition(spec.eigenvalues, spec.eigenvectors * [1, -1])
    a = extract_kraus(DilationSpec(u, (4, 2), spec))
    b = extract_kraus(DilationSpec(u, (4, 2), flipped))
    assert choi_distance(a, b) > 1e-3
    # both remain complete
    for k in (a, b):
        assert np.allclose(sum(op.conj().T @ op for op in k.positive_ops), np.eye(4))


def test_zero_operators_kept():
    k = extract_kraus(DilationSpec(np.eye(8), (4, 2), pure_spec(fx.ket("0"))))
    assert len(k.positive_ops) == 2
    assert np.linalg.norm(k.positive_ops[1]) < 1e-12


def test_spec_validation():
    spec = pure_spec(fx.ket("0"))
    with pytest.raises(NotUnitaryError):
        DilationSpec(2 * np.eye(4), (2, 2), spec)
    with pytest.raises(DimensionError):
        DilationSpec(np.eye(6), (2, 2), spec)
    with pytest.raises(DimensionError):
        DilationSpec(np.eye(6), (2, 3), spec)
    with pytest.raises(ValueError):
        DilationSpec(np.eye(4), (2, 2), spec, side="bath")
    bad = SpectralDecomposition(np.array([0.7, 0.2]), np.eye(2))
    with pytest.raises(InvalidStateError):
        DilationSpec(np.eye(4), (2, 2), bad)
    neg = SpectralDecomposition(np.array([1.1, -0.1]), np.eye(2))
    with pytest.raises(InvalidStateError):
        DilationSpec(np.eye(4), (2, 2), neg)


def test_ensure_unitary_repair_logs(caplog):
    u, warns = ensure_unitary(1.1 * fx.H, repair=True, name="H")
    assert np.allclose(u, fx.H) and warns and "nearest unitary" in warns[0]
    assert any("nearest unitary" in r.message for r in caplog.records)
    u, warns = ensure_unitary(fx.H)
    assert warns == []


def test_propagate_examples():
    u1 = np.kron(fx.H, fx.I2)
    p = propagate(u1, fx.projector(fx.ket("00")), (2, 2))
    plus0 = np.kron((fx.ket("0") + fx.ket("1")) / np.sqrt(2), fx.ket("0"))
    assert np.allclose(p.next_joint, fx.projector(plus0))
    assert np.allclose(p.reduced_system.eigenvalues, [1, 0])
    rho = sm.random_density(np.random.default_rng(1), 4)
    assert np.allclose(propagate(np.eye(4), rho, (2, 2)).next_joint, rho)


def test_propagate_w_environment_spectrum():
    u1 = 1j * fx.W_U_CORRECTED @ fx.W_U_CORRECTED
    p = propagate(u1, fx.projector(fx.W_INITIAL), (4, 2))
    # exact values; the rounded stage-2 state gives 0.7791 / 0.2209
    assert np.allclose(p.reduced_environment.eigenvalues, [7 / 9, 2 / 9])
    assert np.isclose(np.trace(p.next_joint), 1)


def test_propagate_errors():
    with pytest.raises(NotUnitaryError):
        propagate(2 * np.eye(4), np.eye(4) / 4, (2, 2))
    with pytest.raises(InvalidStateError):
        propagate(np.eye(4), np.diag([1.5, -0.5, 0, 0]), (2, 2))
    with pytest.raises(DimensionError):
        propagate(np.eye(4), np.eye(6) / 6, (2, 3))


def test_check_density():
    with pytest.raises(InvalidStateError):
        check_density(np.eye(2))
    with pytest.raises(DimensionError):
        check_density(np.ones((2, 3)))


def test_joint_completeness_examples():
    u1 = np.kron(fx.H, fx.I2)
    sys_k = extract_kraus(DilationSpec(u1, (2, 2), pure_spec(fx.ket("0"))))
    env_k = extract_kraus(DilationSpec(u1, (2, 2), pure_spec(fx.ket("0")), "environment"))
    j = joint_completeness_check(sys_k, env_k)
    assert max(j.product_residual, j.sys_residual, j.env_residual) < 1e-12
    scaled = SignedKrausSet.from_ops([0.9 * op for op in sys_k.positive_ops])
    j = joint_completeness_check(scaled, env_k)
    assert j.sys_residual > 0.1 and j.product_residual > 0.1 and j.env_residual < 1e-12
    assert j.both_or_neither
    with pytest.raises(ValueError):
        joint_completeness_check(SignedKrausSet.from_ops([fx.I2], [fx.I2]), env_k)


def test_ghz_stage3_joint_completeness():
    u3 = np.kron(fx.I2, fx.CNOT)
    phi0 = (fx.ket("000") + fx.ket("110")) / np.sqrt(2)
    s, e = reduced_spectra(fx.projector(phi0), (4, 2))
    sys_k = extract_kraus(DilationSpec(u3, (4, 2), e, "system"))
    env_k = extract_kraus(DilationSpec(u3, (4, 2), s, "environment"))
    j = joint_completeness_check(sys_k, env_k)
    assert max(j.product_residual, j.sys_residual, j.env_residual) < 1e-12
    assert np.allclose(kraus_to_choi(env_k).matrix,
                       kraus_to_choi(SignedKrausSet.from_ops(fx.GHZ_KRAUS[(2, "environment")])).matrix)
