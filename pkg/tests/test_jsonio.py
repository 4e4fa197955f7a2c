import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qchan import samplers as sm
from qchan.chanrep import ChoiMatrix, SignedKrausSet, Superoperator, to_choi, transpose_channel
from qchan.jsonio import (SchemaError, channel_from_json, channel_to_json, dumps, make_report,
                          matrix_from_json, matrix_to_json, state_from_json, state_to_json)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_matrix_roundtrip(seed, r, c):
    m = sm.ginibre(np.random.default_rng(seed), r, c)
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(m))))
    assert np.array_equal(back, m)


@pytest.mark.parametrize("obj", [
    [], {"rows": 1, "cols": 1}, {"rows": 0, "cols": 1, "data": []},
    {"rows": 1, "cols": 1, "data": [[1]]}, {"rows": 1, "cols": 1, "data": [["a", 0]]},
    {"rows": 1, "cols": 2, "data": [[1, 0]]}, {"rows": True, "cols": 1, "data": [[1, 0]]},
    {"rows": 1, "cols": 1, "data": [[float("nan"), 0]]}, {"rows": 1, "cols": 1, "data": "x"},
])
def test_matrix_schema_errors(obj):
    with pytest.raises(SchemaError):
        matrix_from_json(obj)


def test_channel_roundtrip_all_kinds():
    k = transpose_channel(2)
    for ch in (k, to_choi(k), Superoperator(2, 2, np.eye(4))):
        back = channel_from_json(channel_to_json(ch))
        assert type(back) is type(ch)
        assert np.allclose(to_choi(back).matrix, to_choi(ch).matrix)
    back = channel_from_json(channel_to_json(k))
    assert len(back.negative_ops) == 1


def test_choi_matrix_alias():
    obj = {"kind": "choi", "dim_in": 2, "dim_out": 2, "matrix": matrix_to_json(np.eye(4))}
    assert isinstance(channel_from_json(obj), ChoiMatrix)


@pytest.mark.parametrize("obj", [
    {"kind": "lindblad", "dim_in": 2, "dim_out": 2},
    {"kind": "kraus", "dim_in": 2, "dim_out": 2, "positive": []},
    {"kind": "kraus", "dim_in": 2, "dim_out": 2, "positive": [matrix_to_json(np.eye(3))]},
    {"kind": "kraus", "dim_in": 2, "dim_out": 2, "positive": "eye"},
    {"kind": "choi", "dim_in": 2, "dim_out": 2, "positive": [matrix_to_json(np.eye(3))]},
    {"kind": "choi", "dim_in": 2, "dim_out": 2,
     "positive": [matrix_to_json(np.eye(4))] * 2},
    {"kind": "kraus", "dim_in": -1, "dim_out": 2, "positive": [matrix_to_json(np.eye(2))]},
    {"dim_in": 2, "dim_out": 2},
])
def test_channel_schema_errors(obj):
    with pytest.raises(SchemaError):
        channel_from_json(obj)


def test_state_from_ket_and_dims():
    ket = matrix_to_json(np.array([[1], [0], [0], [1]]))
    ket["dims"] = [2, 2]
    rho, dims = state_from_json(ket)
    assert dims == (2, 2) and np.isclose(np.trace(rho), 1) and np.isclose(rho[0, 3], 0.5)
    rho2, _ = state_from_json(state_to_json(rho, dims))
    assert np.allclose(rho2, rho)
    for bad_dims in ([2, 3], [2], "2x2", [0, 4]):
        obj = dict(ket, dims=bad_dims)
        with pytest.raises(SchemaError):
            state_from_json(obj)
    with pytest.raises(SchemaError):
        state_from_json(matrix_to_json(np.zeros((2, 1))))
    with pytest.raises(SchemaError):
        state_from_json(matrix_to_json(np.zeros((2, 3))))


def test_report_is_strict_json():
    rep = make_report("x", {"verdict": 1e-9}, [{"v": np.float64(np.nan)}],
                      extra=SignedKrausSet.from_ops([np.eye(2)]), c=1 + 2j, n=np.int64(3),
                      flag=np.bool_(True), vec=np.arange(3.0), inf=float("-inf"))
    text = dumps(rep)
    back = json.loads(text)
    assert back["verdicts"][0]["v"] == "nan" and back["inf"] == "-inf"
    assert back["c"] == [1.0, 2.0] and back["n"] == 3 and back["flag"] is True
    assert back["vec"] == [0.0, 1.0, 2.0] and back["extra"]["kind"] == "kraus"
    assert "version" in back and back["paper_match"] == []
    assert not any(math.isnan(x) for x in back["vec"])
