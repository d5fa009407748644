"""JSON file formats for algebras and extension data.

Algebra files:
    {"dim": n, "basis": [labels], "field": "Q" | {"sqrt": d},
     "constants": [{"i": i, "j": j, "k": k, "c": "p/q"}, ...]}
listing only the nonzero c_ijk with zero-based indices and scalar strings
in the exact-scalar text format.

Extension-spec files:
    {"n": n, "f": f, "a": [...], "X": [[4n^2 row-major entries], ...],
     "rho": [[2n entries], ...], "r": [[f x f rows]]}
"""

from __future__ import annotations

import json

from .algebra import StructTensor
from .heisenberg import ExtensionSpec
from .scalars import Scalar, ScalarParseError, is_squarefree


class FileFormatError(ValueError):
    """Input file does not match the documented format.

    context identifies the offending field for error messages.
    """

    def __init__(self, message: str, context: str = ""):
        super().__init__(message if not context else f"{context}: {message}")
        self.context = context


class DimensionCapError(FileFormatError):
    """Input dimension exceeds the configured resource cap."""


def _parse_scalar(text, context: str) -> Scalar:
    if not isinstance(text, str):
        raise FileFormatError(f"expected a scalar string, got {text!r}", context)
    try:
        return Scalar.parse(text)
    except ScalarParseError as exc:
        raise FileFormatError(str(exc), context) from None


def _field_tag(entries) -> object:
    for s in entries:
        if s.d is not None:
            return {"sqrt": s.d}
    return "Q"


def _check_field(value, entries, context: str) -> None:
    if value == "Q":
        for s in entries:
            if s.d is not None:
                raise FileFormatError(
                    f"field is Q but a sqrt({s.d}) scalar appears", context
                )
        return
    if isinstance(value, dict) and set(value) == {"sqrt"}:
        d = value["sqrt"]
        if not isinstance(d, int):
            raise FileFormatError("sqrt tag must be an integer", context)
        if d in (0, 1) or not is_squarefree(d):
            raise FileFormatError(
                f"sqrt tag must be squarefree and not 0 or 1, got {d}", context
            )
        for s in entries:
            if s.d is not None and s.d != d:
                raise FileFormatError(
                    f"scalar over sqrt({s.d}) in a sqrt({d}) file", context
                )
        return
    raise FileFormatError(f"bad field tag {value!r}", context)


def algebra_to_doc(t: StructTensor) -> dict:
    entries = []
    scalars = []
    for (i, j, k), value in sorted(t.constants_dict().items()):
        scalars.append(value)
        entries.append({"i": i, "j": j, "k": k, "c": str(value)})
    return {
        "dim": t.dim,
        "basis": list(t.basis_labels),
        "field": _field_tag(scalars),
        "constants": entries,
    }


def algebra_from_doc(doc, max_dim: int | None = None) -> StructTensor:
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be a JSON object")
    for key in ("dim", "basis", "field", "constants"):
        if key not in doc:
            raise FileFormatError("missing key", key)
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"dim must be a positive integer, got {dim!r}", "dim")
    if max_dim is not None and dim > max_dim:
        raise DimensionCapError(
            f"dim {dim} exceeds the configured cap {max_dim}", "dim"
        )
    basis = doc["basis"]
    if not isinstance(basis, list) or len(basis) != dim or not all(
        isinstance(x, str) for x in basis
    ):
        raise FileFormatError("basis must list dim label strings", "basis")
    if not isinstance(doc["constants"], list):
        raise FileFormatError("constants must be a list", "constants")
    constants = {}
    scalars = []
    for pos, item in enumerate(doc["constants"]):
        context = f"constants[{pos}]"
        if not isinstance(item, dict) or not {"i", "j", "k", "c"} <= set(item):
            raise FileFormatError("entry needs keys i, j, k, c", context)
        i, j, k = item["i"], item["j"], item["k"]
        for name, idx in (("i", i), ("j", j), ("k", k)):
            if not isinstance(idx, int) or not 0 <= idx < dim:
                raise FileFormatError(
                    f"index {name}={idx!r} outside 0..{dim - 1}", context
                )
        value = _parse_scalar(item["c"], context)
        if (i, j, k) in constants:
            raise FileFormatError(f"duplicate constant ({i},{j},{k})", context)
        constants[(i, j, k)] = value
        scalars.append(value)
    _check_field(doc["field"], scalars, "field")
    return StructTensor.from_constants(dim, constants, basis_labels=basis)


def extension_spec_to_doc(spec: ExtensionSpec) -> dict:
    return {
        "n": spec.n,
        "f": spec.f,
        "a": [str(v) for v in spec.a],
        "X": [[str(v) for row in m for v in row] for m in spec.X],
        "rho": [[str(v) for v in vec] for vec in spec.rho],
        "r": [[str(v) for v in row] for row in spec.r],
    }


def extension_spec_from_doc(doc) -> ExtensionSpec:
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be a JSON object")
    for key in ("n", "f", "a", "X", "rho", "r"):
        if key not in doc:
            raise FileFormatError("missing key", key)
    n, f = doc["n"], doc["f"]
    if not isinstance(n, int) or n < 1:
        raise FileFormatError(f"n must be a positive integer, got {n!r}", "n")
    if not isinstance(f, int) or f < 1:
        raise FileFormatError(f"f must be a positive integer, got {f!r}", "f")
    if len(doc["a"]) != f:
        raise FileFormatError(f"a must list f = {f} scalars", "a")
    a = [_parse_scalar(v, f"a[{i}]") for i, v in enumerate(doc["a"])]
    xs = []
    if len(doc["X"]) != f:
        raise FileFormatError(f"X must list f = {f} matrices", "X")
    for al, flat in enumerate(doc["X"]):
        context = f"X[{al}]"
        if isinstance(flat, list) and flat and isinstance(flat[0], list):
            flat = [v for row in flat for v in row]  # accept nested rows too
        if len(flat) != 4 * n * n:
            raise FileFormatError(
                f"expected {4 * n * n} row-major entries, got {len(flat)}", context
            )
        values = [_parse_scalar(v, context) for v in flat]
        xs.append(
            [values[row * 2 * n : (row + 1) * 2 * n] for row in range(2 * n)]
        )
    if len(doc["rho"]) != f:
        raise FileFormatError(f"rho must list f = {f} vectors", "rho")
    rho = []
    for al, vec in enumerate(doc["rho"]):
        context = f"rho[{al}]"
        if len(vec) != 2 * n:
            raise FileFormatError(f"expected {2 * n} entries", context)
        rho.append([_parse_scalar(v, context) for v in vec])
    if len(doc["r"]) != f or any(len(row) != f for row in doc["r"]):
        raise FileFormatError("r must be an f x f array", "r")
    r = [
        [_parse_scalar(v, f"r[{i}][{j}]") for j, v in enumerate(row)]
        for i, row in enumerate(doc["r"])
    ]
    return ExtensionSpec.make(n, f, a, xs, rho, r)


def load_json(path: str) -> object:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise FileFormatError(str(exc), path) from None
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            path,
        ) from None


def save_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=1, sort_keys=True)
        handle.write("\n")
