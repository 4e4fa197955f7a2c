import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qchan import fixtures as fx
from qchan import numkit
from qchan.errors import DimensionError, NotHermitianError, RankDeficientError


def rand_c(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


seeds = st.integers(0, 2**32 - 1)


def test_vec_row_major():
    assert np.array_equal(numkit.vec([[0, 1], [0, 0]]), [0, 1, 0, 0])
    m = np.arange(6).reshape(2, 3)
    v = numkit.vec(m)
    for i in range(2):
        for j in range(3):
            assert v[i * 3 + j] == m[i, j]


def test_vec_bell_and_unvec_output():
    bell = fx.projector(fx.BELL_STATE)
    assert np.allclose(numkit.vec(bell), fx.BELL_VEC, atol=1e-15)
    assert np.array_equal(numkit.unvec(fx.PT_OUTPUT_VEC, 4, 4), fx.PSEUDO_DENSITY)


def test_unvec_length_mismatch():
    with pytest.raises(DimensionError):
        numkit.unvec(np.zeros(5), 2, 2)


@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_vec_unvec_roundtrip(seed, r, c):
    m = rand_c(np.random.default_rng(seed), r, c)
    assert np.array_equal(numkit.unvec(numkit.vec(m), r, c), m)


def test_as_matrix_rejects_nan_and_bad_shapes():
    with pytest.raises(DimensionError):
        numkit.as_matrix([[np.nan]])
    with pytest.raises(DimensionError):
        numkit.as_matrix([1, 2, 3])
    with pytest.raises(DimensionError):
        numkit.as_matrix(np.zeros((0, 2)))


def test_kron_examples():
    assert np.array_equal(numkit.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(numkit.kron(fx.H, fx.I2), fx.BELL_U1)
    k = numkit.kron(np.diag([1, 0]), fx.X)
    assert np.array_equal(k[:2, :2], fx.X) and not k[2:, :].any()


def test_partial_trace_examples():
    bell = fx.projector(fx.BELL_STATE)
    assert np.allclose(numkit.partial_trace(bell, (2, 2), "A"), np.eye(2) / 2)
    assert np.allclose(numkit.partial_trace(bell, (2, 2), "B"), np.eye(2) / 2)
    with pytest.raises(DimensionError):
        numkit.partial_trace(np.eye(4), (2, 3))
    with pytest.raises(ValueError):
        numkit.partial_trace(np.eye(4), (2, 2), keep="C")


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_partial_trace_of_product(seed, da, db):
    rng = np.random.default_rng(seed)
    a, b = rand_c(rng, da, da), rand_c(rng, db, db)
    ab = np.kron(a, b)
    assert np.allclose(numkit.partial_trace(ab, (da, db), "A"), a * np.trace(b), atol=1e-12)
    assert np.allclose(numkit.partial_trace(ab, (da, db), "B"), b * np.trace(a), atol=1e-12)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_partial_trace_matches_loop_oracle(seed, da, db):
    m = rand_c(np.random.default_rng(seed), da * db, da * db)
    for keep in "AB":
        assert np.allclose(numkit.partial_trace(m, (da, db), keep),
                           oracles.partial_trace(m, da, db, keep), atol=1e-12)


def test_partial_transpose_bell():
    pt = numkit.partial_transpose(fx.projector(fx.BELL_STATE), (2, 2), "B")
    assert np.allclose(pt, fx.PSEUDO_DENSITY)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_partial_transpose_properties(seed, da, db):
    rng = np.random.default_rng(seed)
    m = rand_c(rng, da * db, da * db)
    pt = numkit.partial_transpose(m, (da, db), "B")
    assert np.allclose(pt, oracles.partial_transpose_b(m, da, db))
    assert np.array_equal(numkit.partial_transpose(pt, (da, db), "B"), m)
    assert np.isclose(np.trace(pt), np.trace(m))
    # transposing both factors is the full transpose
    assert np.allclose(numkit.partial_transpose(pt, (da, db), "A"), m.T)
    h = m + m.conj().T
    assert numkit.hermiticity_residual(numkit.partial_transpose(h, (da, db), "A")) < 1e-12


def test_partial_transpose_of_product_state_stays_psd():
    rng = np.random.default_rng(3)
    from qchan.samplers import random_density
    rho, sigma = random_density(rng, 2), random_density(rng, 3)
    pt = numkit.partial_transpose(np.kron(rho, sigma), (2, 3), "B")
    assert np.allclose(pt, np.kron(rho, sigma.T))
    assert numkit.hermitian_eig(pt).is_psd


def test_hermitian_eig_examples():
    d = numkit.hermitian_eig(np.eye(2))
    assert np.allclose(d.eigenvalues, [1, 1]) and d.is_psd
    d = numkit.hermitian_eig(fx.B_T)
    assert np.allclose(d.eigenvalues, [1, 1, 1, -1]) and not d.is_psd
    assert np.isclose(d.min_eigenvalue, -1)
    d = numkit.hermitian_eig(fx.PSEUDO_DENSITY)
    assert np.isclose(d.min_eigenvalue, -0.5)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        numkit.hermitian_eig([[0, 1], [0, 0]])
    with pytest.raises(DimensionError):
        numkit.hermitian_eig(np.zeros((2, 3)))


@settings(max_examples=50)
@given(seeds, st.integers(1, 16))
def test_hermitian_eig_reconstruction_and_gauge(seed, d):
    g = rand_c(np.random.default_rng(seed), d, d)
    h = g + g.conj().T
    dec = numkit.hermitian_eig(h)
    assert np.linalg.norm(dec.reconstruct() - h) < 1e-10
    assert np.all(np.diff(dec.eigenvalues) <= 0)
    v = dec.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
    for k in range(d):
        col = v[:, k]
        idx = int(np.argmax(np.abs(col)))
        top = np.abs(col[idx])
        first = int(np.flatnonzero(np.abs(col) >= top - 1e-12)[0])
        assert abs(col[first].imag) < 1e-14 and col[first].real >= 0


def test_gauge_is_deterministic_under_input_phase():
    h = np.array([[2, 1j], [-1j, 2]])
    v1 = numkit.hermitian_eig(h).eigenvectors
    v2 = numkit.fix_gauge(v1 * np.exp(0.7j))
    assert np.allclose(v1, v2)


def test_unitarity_check_examples():
    u = fx.CNOT @ np.kron(fx.H, fx.I2)
    assert numkit.unitarity_check(u).residual < 1e-12
    r = numkit.unitarity_check(0.9 * fx.H)
    assert not r.is_unitary
    # (0.81 - 1) on each diagonal entry
    assert np.isclose(r.residual, 0.19 * np.sqrt(2))


def test_w_unitary_as_printed_is_not_unitary():
    r = numkit.unitarity_check(fx.W_U_LITERAL)
    assert not r.is_unitary
    assert np.isclose(r.residual, 2 / np.sqrt(3))
    assert numkit.unitarity_check(fx.W_U_CORRECTED).residual < 1e-12


def test_nearest_unitary():
    assert np.allclose(numkit.nearest_unitary(1.1 * fx.H), fx.H)
    fixed = numkit.nearest_unitary(fx.W_U_LITERAL)
    assert numkit.unitarity_check(fixed).residual < 1e-12
    with pytest.raises(RankDeficientError):
        numkit.nearest_unitary(np.diag([1, 0]))


@given(seeds, st.integers(1, 6))
def test_nearest_unitary_idempotent(seed, d):
    from qchan.samplers import random_unitary
    u = random_unitary(np.random.default_rng(seed), d)
    assert np.allclose(numkit.nearest_unitary(u), u, atol=1e-12)
    assert numkit.unitarity_check(numkit.nearest_unitary(u)).residual < 1e-12
