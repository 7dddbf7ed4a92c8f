"""JSON file formats.

Matrix:         {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
Dilation:       {"dim_sys": .., "dim_env": .., "unitary": Matrix, "env_state": Matrix}
Schur matrix:   {"n": n, "x": [[real, ...], ...]}
Decomposition:  {"terms": [{"p": real, "unitary": Matrix}, ...]}
Channel:        {"dim_in": .., "dim_out": .., "choi": Matrix}
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import ChannelChoi, Dilation, MixedUnitaryDecomposition
from .errors import ValidationError
from .schur import SchurMatrix


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {"rows": m.shape[0], "cols": m.shape[1],
            "data": [[float(z.real), float(z.imag)] for z in m.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        arr = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix: {exc}") from exc
    if rows < 1 or cols < 1 or arr.size != rows * cols:
        raise ValidationError(f"matrix data has {arr.size} entries, expected {rows}x{cols}")
    return arr.reshape(rows, cols)


def dilation_to_json(dil: Dilation) -> dict:
    return {"dim_sys": dil.dim_sys, "dim_env": dil.dim_env,
            "unitary": matrix_to_json(dil.U), "env_state": matrix_to_json(dil.omega_env)}


def dilation_from_json(obj, tol: float = 1e-9) -> Dilation:
    try:
        return Dilation(matrix_from_json(obj["unitary"]), matrix_from_json(obj["env_state"]),
                        int(obj["dim_sys"]), int(obj["dim_env"]), tol)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed dilation: missing {exc}") from exc


def schur_to_json(X: SchurMatrix) -> dict:
    return {"n": X.n, "x": X.X.tolist()}


def schur_from_json(obj, tol: float = 1e-9) -> SchurMatrix:
    try:
        x = np.array(obj["x"], dtype=float)
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed Schur matrix: {exc}") from exc
    if x.shape != (n, n):
        raise ValidationError(f"Schur matrix has shape {x.shape}, expected n={n}")
    return SchurMatrix(x, tol)


def decomposition_to_json(dec: MixedUnitaryDecomposition) -> dict:
    return {"terms": [{"p": float(p), "unitary": matrix_to_json(u)}
                      for p, u in zip(dec.probabilities, dec.unitaries)]}


def decomposition_from_json(obj, tol: float = 1e-9) -> MixedUnitaryDecomposition:
    try:
        terms = obj["terms"]
        return MixedUnitaryDecomposition([float(t["p"]) for t in terms],
                                         [matrix_from_json(t["unitary"]) for t in terms], tol)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed decomposition: {exc}") from exc


def channel_to_json(ch: ChannelChoi) -> dict:
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "choi": matrix_to_json(ch.choi)}


def channel_from_json(obj) -> ChannelChoi:
    try:
        return ChannelChoi(int(obj["dim_in"]), int(obj["dim_out"]), matrix_from_json(obj["choi"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed channel: {exc}") from exc


def load(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def dump(obj, path=None) -> str:
    text = json.dumps(obj, indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
