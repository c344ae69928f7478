"""JSON spec files.

A spec file looks like::

    {"kind": "product", "S": [1, 2], "B": 1,
     "initials": [[[2, 0], [0, 1]], [[0.5, 0], [0, [0, 1]]]],
     "order": [1, 2], "norm": "both"}

A matrix literal is an array of rows whose entries are real numbers or
``[re, im]`` pairs.  A bare number or a bare ``[re, im]`` pair is a 1x1
matrix.
"""

from __future__ import annotations

import json
import numbers
from typing import Any

import numpy as np

from .errors import RecurrenceError
from .matrix import NormKind
from .stability import RecurrenceSpec

NORM_CHOICES = {
    "frobenius": (NormKind.FROBENIUS,),
    "operator": (NormKind.OPERATOR,),
    "both": (NormKind.FROBENIUS, NormKind.OPERATOR),
}
KNOWN_FIELDS = {"kind", "S", "B", "initials", "order", "norm"}


class SpecFileError(RecurrenceError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _is_real(x) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def _entry(x, path: str) -> complex:
    if _is_real(x):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(_is_real(v) for v in x):
        return complex(x[0], x[1])
    raise SpecFileError(path, f"expected a number or [re, im], got {json.dumps(x)}")


def parse_matrix(value: Any, path: str) -> np.ndarray:
    if _is_real(value) or (isinstance(value, list) and len(value) == 2 and all(_is_real(v) for v in value)):
        return np.array([[_entry(value, path)]], dtype=np.complex128)
    if not isinstance(value, list) or not value or not any(isinstance(r, list) for r in value):
        raise SpecFileError(path, f"expected a number, an [re, im] pair or an array of rows, got {json.dumps(value)}")
    rows = []
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise SpecFileError(f"{path}[{i}]", "expected a nonempty array of entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SpecFileError(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
        rows.append([_entry(x, f"{path}[{i}][{c}]") for c, x in enumerate(row)])
    arr = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise SpecFileError(path, "entries must be finite")
    return arr


def spec_from_dict(data: Any) -> tuple[RecurrenceSpec, tuple[NormKind, ...]]:
    """Validate a decoded spec file; returns the spec and its requested norms."""
    if not isinstance(data, dict):
        raise SpecFileError("", "top level must be a JSON object")
    unknown = set(data) - KNOWN_FIELDS
    if unknown:
        raise SpecFileError(sorted(unknown)[0], "unknown field")
    for key in ("kind", "S", "B", "initials"):
        if key not in data:
            raise SpecFileError(key, "missing required field")
    kind = data["kind"]
    if kind not in ("product", "kronecker"):
        raise SpecFileError("kind", f"must be 'product' or 'kronecker', got {json.dumps(kind)}")
    S = data["S"]
    if not isinstance(S, list) or not S:
        raise SpecFileError("S", "must be a nonempty array of positive integers")
    for i, x in enumerate(S):
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise SpecFileError(f"S[{i}]", f"must be a positive integer, got {json.dumps(x)}")
    if len(set(S)) != len(S):
        raise SpecFileError("S", "entries must be distinct")
    B = parse_matrix(data["B"], "B")
    initials = data["initials"]
    if not isinstance(initials, list):
        raise SpecFileError("initials", "must be an array of matrix literals")
    if len(initials) != max(S):
        raise SpecFileError("initials", f"needs max(S) = {max(S)} matrices, got {len(initials)}")
    mats = [parse_matrix(a, f"initials[{k}]") for k, a in enumerate(initials)]
    order = data.get("order")
    if order is not None:
        if not isinstance(order, list) or sorted(order) != sorted(S):
            raise SpecFileError("order", "must be a permutation of S")
    norm_choice = data.get("norm", "both")
    if norm_choice not in NORM_CHOICES:
        raise SpecFileError("norm", f"must be one of {sorted(NORM_CHOICES)}, got {json.dumps(norm_choice)}")
    try:
        spec = RecurrenceSpec(kind, S, B, mats, order)
    except RecurrenceError as exc:
        raise SpecFileError("B" if str(exc).startswith("B ") else "initials", str(exc)) from exc
    return spec, NORM_CHOICES[norm_choice]


def loads(text: str) -> tuple[RecurrenceSpec, tuple[NormKind, ...]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"line {exc.lineno} column {exc.colno}", f"malformed JSON: {exc.msg}") from exc
    return spec_from_dict(data)


def load(path) -> tuple[RecurrenceSpec, tuple[NormKind, ...]]:
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def _dump_entry(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def dump_matrix(X: np.ndarray) -> list:
    return [[_dump_entry(z) for z in row] for row in X]


def spec_to_dict(spec: RecurrenceSpec, norms=("frobenius", "operator")) -> dict:
    kinds = tuple(NormKind(n) for n in norms)
    norm_choice = next(name for name, v in NORM_CHOICES.items() if v == kinds)
    return {
        "kind": spec.kind.value,
        "S": list(spec.S),
        "B": dump_matrix(spec.B),
        "initials": [dump_matrix(a) for a in spec.initials],
        "order": list(spec.order),
        "norm": norm_choice,
    }


def dumps(spec: RecurrenceSpec, norms=("frobenius", "operator")) -> str:
    return json.dumps(spec_to_dict(spec, norms), indent=2)
