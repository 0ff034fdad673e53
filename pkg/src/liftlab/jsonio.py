"""JSON wire formats: matrices, graded vectors, operators, reports.

Numbers are serialized through Python's shortest round-trip float repr, so a
parse/serialize cycle is byte-identical; parsing rejects NaN and infinities.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import InputFormatError
from .graded import GradedVector, LiftedSpaceShape
from .hosts import ShiftedHostOperator
from .operators import BaseSpace, LiftingOperator

__all__ = [
    "dumps",
    "graded_from_obj",
    "graded_to_obj",
    "matrix_from_obj",
    "matrix_to_obj",
    "operator_from_obj",
    "operator_to_obj",
    "parse_matrix_text",
]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _check_finite(x: float, what: str):
    if not math.isfinite(x):
        raise InputFormatError(f"non-finite value in {what}")


def matrix_to_obj(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)],
    }


def matrix_from_obj(obj) -> np.ndarray:
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed matrix object: {exc}") from exc
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise InputFormatError("matrix data length does not match rows * cols")
    out = np.zeros(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InputFormatError("matrix entries must be [re, im] pairs")
        re, im = float(pair[0]), float(pair[1])
        _check_finite(re, "matrix entry")
        _check_finite(im, "matrix entry")
        out[k] = complex(re, im)
    return out.reshape(rows, cols)


def parse_matrix_text(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj)


def _vec_to_pairs(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def _pairs_to_vec(pairs, what: str) -> np.ndarray:
    out = np.zeros(len(pairs), dtype=np.complex128)
    for k, pair in enumerate(pairs):
        re, im = float(pair[0]), float(pair[1])
        _check_finite(re, what)
        _check_finite(im, what)
        out[k] = complex(re, im)
    return out


def graded_to_obj(v: GradedVector) -> dict:
    return {
        "fibers": {str(g): _vec_to_pairs(v.fibers[g]) for g in sorted(v.fibers)},
        "tails": [_vec_to_pairs(t) for t in v.tails],
    }


def graded_from_obj(shape: LiftedSpaceShape, obj) -> GradedVector:
    try:
        fibers = {
            int(g): _pairs_to_vec(block, "fiber block")
            for g, block in obj.get("fibers", {}).items()
        }
        tails = [_pairs_to_vec(t, "tail block") for t in obj.get("tails", [])]
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed graded vector: {exc}") from exc
    return GradedVector(shape, fibers, tails)


def _meta_to_obj(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, tuple):
            out[k] = list(v)
        elif isinstance(v, (np.floating, np.integer)):
            out[k] = v.item()
        else:
            out[k] = v
    return out


def _base_to_obj(base: BaseSpace | None) -> dict | None:
    if base is None:
        return None
    obj = {"type": base.kind, "tails": list(base.tail_indices)}
    if base.kind == "matrix":
        obj["matrix"] = matrix_to_obj(base.matrix)
    else:
        obj["a"] = float(base.host_a)
        obj["t0"] = matrix_to_obj(base.host_t0)
    if base.channel is not None:
        obj["channel"] = [int(base.channel[0]), int(base.channel[1])]
    return obj


def _base_from_obj(obj) -> BaseSpace | None:
    if obj is None:
        return None
    channel = tuple(obj["channel"]) if "channel" in obj else None
    if obj["type"] == "matrix":
        return BaseSpace(
            "matrix",
            matrix=matrix_from_obj(obj["matrix"]),
            channel=channel,
            tail_indices=tuple(obj["tails"]),
        )
    return BaseSpace(
        "host",
        host_a=float(obj["a"]),
        host_t0=matrix_from_obj(obj["t0"]),
        channel=channel,
        tail_indices=tuple(obj["tails"]),
    )


def operator_to_obj(op: LiftingOperator) -> dict:
    return {
        "format": "lifting-operator/1",
        "kind": op.kind,
        "shape": {"fiber_dim": op.shape.fiber_dim, "tails": list(op.shape.tails)},
        "action": {
            "F0": matrix_to_obj(op.f0),
            "C00": matrix_to_obj(op.c00),
            "CT0": matrix_to_obj(op.ct0),
            "MT": matrix_to_obj(op.mt),
        },
        "blocks": {name: matrix_to_obj(m) for name, m in op.blocks.items()},
        "base": _base_to_obj(op.base),
        "parent": operator_to_obj(op.parent) if op.parent is not None else None,
        "meta": _meta_to_obj(op.meta),
    }


def operator_from_obj(obj) -> LiftingOperator:
    try:
        if obj.get("format") != "lifting-operator/1":
            raise InputFormatError("unrecognized operator format tag")
        shape = LiftedSpaceShape(
            int(obj["shape"]["fiber_dim"]), tuple(obj["shape"]["tails"])
        )
        kind = obj["kind"]
        action = obj["action"]
        meta = dict(obj.get("meta", {}))
        if "isometric_channels" in meta:
            meta["isometric_channels"] = tuple(meta["isometric_channels"])
        parent = (
            operator_from_obj(obj["parent"]) if obj.get("parent") is not None else None
        )
        if kind == "SHIFTED_HOST_37":
            return ShiftedHostOperator(
                float(meta["a"]), matrix_from_obj(obj["blocks"]["T0"])
            )
        return LiftingOperator(
            kind=kind,
            shape=shape,
            f0=matrix_from_obj(action["F0"]),
            c00=matrix_from_obj(action["C00"]),
            ct0=matrix_from_obj(action["CT0"]),
            mt=matrix_from_obj(action["MT"]),
            blocks={
                name: matrix_from_obj(m) for name, m in obj.get("blocks", {}).items()
            },
            base=_base_from_obj(obj.get("base")),
            parent=parent,
            meta=meta,
        )
    except InputFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed operator object: {exc}") from exc
