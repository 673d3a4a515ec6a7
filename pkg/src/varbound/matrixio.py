"""Matrix file I/O.

Format: a JSON object {"dim": d, "entries": [[re, im], ...]} with d*d pairs in
row-major order. The parser rejects non-Hermitian input beyond tolerance with a
diagnostic naming the worst entry.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import HermiticityError
from .linalg import HermitianOperator


def matrix_to_json_dict(op: HermitianOperator) -> dict:
    flat = op.matrix.reshape(-1)
    return {
        "dim": op.dim,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json_dict(obj, *, source: str = "<matrix>") -> HermitianOperator:
    if not isinstance(obj, dict):
        raise ValueError(f"{source}: expected a JSON object, got {type(obj).__name__}")
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
    except KeyError as exc:
        raise ValueError(f"{source}: missing required key {exc}") from exc
    if dim < 1:
        raise ValueError(f"{source}: dim must be >= 1, got {dim}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise ValueError(f"{source}: expected {dim * dim} [re, im] pairs, got {got}")
    flat = np.empty(dim * dim, dtype=complex)
    for k, pair in enumerate(entries):
        i, j = divmod(k, dim)
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise ValueError(
                f"{source}: entry {k} (row {i}, col {j}) must be a [re, im] pair, got {pair!r}"
            )
        flat[k] = complex(pair[0], pair[1])
    m = flat.reshape(dim, dim)
    try:
        return HermitianOperator(m)
    except HermiticityError as exc:
        raise HermiticityError(f"{source}: {exc}") from exc


def load_hermitian(path) -> HermitianOperator:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return matrix_from_json_dict(obj, source=str(path))


def atomic_write_text(path, text: str) -> None:
    """Write text to path without leaving partial files behind on error."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".varbound-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_hermitian(op: HermitianOperator, path) -> None:
    atomic_write_text(path, json.dumps(matrix_to_json_dict(op)) + "\n")
