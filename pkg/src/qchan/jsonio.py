"""JSON schemas for matrices, channels, states and reports.

Complex numbers are ``[re, im]`` pairs and matrices are stored row-major::

    {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [1, 0]]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np

from . import __version__
from .chanrep import ChoiMatrix, SignedKrausSet, Superoperator
from .errors import DimensionError, QChanError


class SchemaError(QChanError):
    """Input JSON does not follow the expected schema."""


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _positive_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SchemaError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    rows = _positive_int(_field(obj, "rows", where), f"{where}.rows")
    cols = _positive_int(_field(obj, "cols", where), f"{where}.cols")
    data = _field(obj, "data", where)
    if not isinstance(data, list):
        raise SchemaError(f"{where}.data: expected a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise SchemaError(f"{where}.data: has {len(data)} entries, expected rows*cols = "
                          f"{rows * cols}")
    out = np.empty(rows * cols, dtype=complex)
    for i, z in enumerate(data):
        if not isinstance(z, list) or len(z) != 2:
            raise SchemaError(f"{where}.data[{i}]: expected [re, im], got {z!r}")
        out[i] = complex(_number(z[0], f"{where}.data[{i}][0]"),
                         _number(z[1], f"{where}.data[{i}][1]"))
    return out.reshape(rows, cols)


Channel = Union[SignedKrausSet, ChoiMatrix, Superoperator]
CHANNEL_KINDS = ("kraus", "choi", "super")


def channel_to_json(ch: Channel) -> dict:
    if isinstance(ch, SignedKrausSet):
        return {"kind": "kraus", "dim_in": ch.dim_in, "dim_out": ch.dim_out,
                "positive": [matrix_to_json(op) for op in ch.positive_ops],
                "negative": [matrix_to_json(op) for op in ch.negative_ops]}
    kind = "choi" if isinstance(ch, ChoiMatrix) else "super"
    return {"kind": kind, "dim_in": ch.dim_in, "dim_out": ch.dim_out,
            "positive": [matrix_to_json(ch.matrix)], "negative": []}


def channel_from_json(obj, where: str = "channel") -> Channel:
    kind = _field(obj, "kind", where)
    if kind not in CHANNEL_KINDS:
        raise SchemaError(f"{where}.kind: expected one of {CHANNEL_KINDS}, got {kind!r}")
    d_in = _positive_int(_field(obj, "dim_in", where), f"{where}.dim_in")
    d_out = _positive_int(_field(obj, "dim_out", where), f"{where}.dim_out")
    pos = obj.get("positive", [])
    neg = obj.get("negative", [])
    for key, val in (("positive", pos), ("negative", neg)):
        if not isinstance(val, list):
            raise SchemaError(f"{where}.{key}: expected a list of matrices")
    pos = [matrix_from_json(m, f"{where}.positive[{i}]") for i, m in enumerate(pos)]
    neg = [matrix_from_json(m, f"{where}.negative[{i}]") for i, m in enumerate(neg)]
    try:
        if kind == "kraus":
            if not pos and not neg:
                raise SchemaError(f"{where}: a Kraus channel needs at least one operator")
            return SignedKrausSet(d_in, d_out, tuple(pos), tuple(neg))
        if "matrix" in obj and not pos:
            pos = [matrix_from_json(obj["matrix"], f"{where}.matrix")]
        if len(pos) != 1 or neg:
            raise SchemaError(f"{where}: a {kind} channel carries exactly one matrix in "
                              "'positive' (or 'matrix') and no 'negative' entries")
        cls = ChoiMatrix if kind == "choi" else Superoperator
        return cls(d_in, d_out, pos[0])
    except DimensionError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def state_from_json(obj, where: str = "state") -> tuple[np.ndarray, tuple | None]:
    """Density matrix and optional ``dims``; a single column is read as a ket."""
    m = matrix_from_json(obj, where)
    if m.shape[1] == 1:
        v = m[:, 0]
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise SchemaError(f"{where}: zero vector is not a state")
        m = np.outer(v, v.conj()) / nrm ** 2
    elif m.shape[0] != m.shape[1]:
        raise SchemaError(f"{where}: density matrix must be square, got {m.shape}")
    dims = obj.get("dims")
    if dims is not None:
        if not isinstance(dims, list) or len(dims) != 2:
            raise SchemaError(f"{where}.dims: expected [dS, dE]")
        dims = tuple(_positive_int(d, f"{where}.dims") for d in dims)
        if dims[0] * dims[1] != m.shape[0]:
            raise SchemaError(f"{where}.dims: {dims[0]}*{dims[1]} != matrix size {m.shape[0]}")
    return m, dims


def state_to_json(rho, dims=None) -> dict:
    out = matrix_to_json(rho)
    if dims is not None:
        out["dims"] = [int(d) for d in dims]
    return out


def load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def to_jsonable(x):
    """Recursively convert numpy values, matrices and channels to JSON-ready objects."""
    if isinstance(x, (SignedKrausSet, ChoiMatrix, Superoperator)):
        return channel_to_json(x)
    if isinstance(x, np.ndarray):
        if x.ndim == 2 or np.iscomplexobj(x):
            return matrix_to_json(x)
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def make_report(command: str, tolerances: dict, verdicts: list, paper_match: list | None = None,
                warnings: list | None = None, **extra) -> dict:
    report = {"command": command, "version": __version__, "tolerances": tolerances,
              "verdicts": verdicts, "paper_match": paper_match or [],
              "warnings": warnings or []}
    report.update(extra)
    return to_jsonable(report)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
