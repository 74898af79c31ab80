"""Matrix and system file formats.

JSON matrix file::

    {"n": 2, "entries": [[3, 0], [2, 0], [-4, 0], [-3, 0]]}

entries are ``[re, im]`` pairs in row-major order. A system file adds
``"b"`` and ``"c"`` (lists of pairs), ``"d"`` (one pair) and ``"m"``
(integer delays in samples); ``b``/``c`` default to ones and ``d`` to 0.

Plain-text matrix files hold one row per line with comma-separated
Python-style complex tokens (``3``, ``-0.5+2j``, ``1e-3-4j``). Blank lines
and ``#`` comments are ignored.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .model import FdnSystem


class ParseError(ValueError):
    def __init__(self, msg: str, path: str = "<input>", line: int | None = None, col: int | None = None):
        self.path, self.line, self.col = path, line, col
        where = path if line is None else f"{path}:{line}:{col if col is not None else 1}"
        super().__init__(f"{where}: {msg}")


def _pair(v, what, path):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise ParseError(f"{what}: expected [re, im] pair, got {v!r}", path)


def _pairs(seq, what, path):
    if not isinstance(seq, list):
        raise ParseError(f"{what}: expected a list of [re, im] pairs", path)
    return np.array([_pair(v, f"{what}[{i}]", path) for i, v in enumerate(seq)], dtype=complex)


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(z) for z in np.ravel(v)]


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"n": int(A.shape[0]), "entries": encode_vector(A)}


def system_to_json(sys: FdnSystem) -> dict:
    out = matrix_to_json(sys.A)
    out.update(b=encode_vector(sys.b), c=encode_vector(sys.c), d=encode_complex(sys.d), m=[int(k) for k in sys.m])
    return out


def _load_json(text: str, path: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object", path, 1, 1)
    return obj


def matrix_from_json(obj: dict, path: str = "<input>") -> np.ndarray:
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}", path)
    entries = _pairs(obj.get("entries"), "entries", path)
    if entries.size != n * n:
        raise ParseError(f"matrix is not square: {entries.size} entries for n={n} (need {n * n})", path)
    return entries.reshape(n, n)


def parse_matrix_text(text: str, path: str = "<input>") -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        row = []
        col = 1
        for tok in line.split(","):
            stripped = tok.strip()
            start = col + (len(tok) - len(tok.lstrip()))
            try:
                row.append(complex(stripped.replace(" ", "")))
            except ValueError:
                raise ParseError(f"bad complex token {stripped!r}", path, lineno, start) from None
            col += len(tok) + 1
        rows.append((lineno, row))
    if not rows:
        raise ParseError("empty matrix file", path, 1, 1)
    n = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", path, lineno, 1)
    if len(rows) != n:
        raise ParseError(f"matrix is not square: {len(rows)} rows x {n} columns", path)
    return np.array([r for _, r in rows], dtype=complex)


def parse_matrix(text: str, path: str = "<input>") -> np.ndarray:
    if text.lstrip().startswith("{"):
        return matrix_from_json(_load_json(text, path), path)
    return parse_matrix_text(text, path)


def parse_system(text: str, path: str = "<input>") -> FdnSystem:
    obj = _load_json(text, path)
    A = matrix_from_json(obj, path)
    n = A.shape[0]
    m = obj.get("m")
    if not isinstance(m, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in m):
        raise ParseError("'m' must be a list of integer delays (samples)", path)
    if len(m) != n or any(k < 1 for k in m):
        raise ParseError(f"'m' must hold {n} positive delays, got {m}", path)
    b = _pairs(obj["b"], "b", path) if "b" in obj else None
    c = _pairs(obj["c"], "c", path) if "c" in obj else None
    for name, v in (("b", b), ("c", c)):
        if v is not None and v.size != n:
            raise ParseError(f"'{name}' must have {n} entries, got {v.size}", path)
    d = _pair(obj["d"], "d", path) if "d" in obj else 0.0
    return FdnSystem(A, m, b, c, d)


def read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text()
