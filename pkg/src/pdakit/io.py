"""PDA documents (JSON) and the plain whitespace grid format.

A document looks like::

    {
     "format_version": 1,
     "params": {"K": 4, "F": 4, "Z": 2, "S": 4, "g": 2},
     "lambda": 1,
     "phi": [4, 1, 2, 3],
     "grid": [
      "* * 3 1",
      ...
     ],
     "provenance": {"constructor": "g2", "args": {"q": 2}},
     "symbol_metadata": null
    }

``phi[s - 1]`` is the star row of symbol ``s``; ``symbol_metadata[s - 1]`` is
its original label.  Field order is fixed so that serialising a parsed
document reproduces the input byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import STAR, BasePda, PdaArray, PdaParams, verify_pda
from .errors import ParseError, VerificationError, VersionMismatch

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class PdaDocument:
    array: PdaArray
    params: PdaParams | None = None
    lam: int | None = None
    phi: tuple[int, ...] | None = None
    provenance: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_array(cls, array: PdaArray, base: BasePda | None = None,
                   provenance: dict | None = None) -> "PdaDocument":
        if base is not None:
            return cls(array=base.pda, params=base.params, lam=base.lam,
                       phi=tuple(base.phi[s] for s in range(1, base.S1 + 1)),
                       provenance=provenance or {})
        try:
            params = verify_pda(array)
        except VerificationError:
            params = None
        return cls(array=array, params=params, provenance=provenance or {})


def format_grid(array: PdaArray) -> str:
    """Whitespace-separated rows with ``*`` for stars."""
    return "".join(" ".join("*" if x == STAR else str(int(x)) for x in row) + "\n"
                   for row in array.grid)


def _parse_row(text: str, line: int) -> list[int]:
    row = []
    for tok in text.split():
        if tok == "*":
            row.append(STAR)
            continue
        if not tok.isdigit():
            raise ParseError(line, f"bad cell {tok!r}")
        if int(tok) <= 0:
            raise ParseError(line, f"symbol ids must be positive, got {tok!r}")
        row.append(int(tok))
    return row


def _rows_to_array(rows: list[tuple[int, list[int]]]) -> PdaArray:
    if not rows:
        raise ParseError(1, "no grid rows")
    width = len(rows[0][1])
    for line, row in rows:
        if len(row) != width:
            raise ParseError(line, f"row has {len(row)} cells, expected {width}")
    return PdaArray(np.array([r for _, r in rows], dtype=np.int64).reshape(len(rows), width))


def parse_grid(text: str) -> PdaArray:
    """Parse the plain grid format; blank lines and ``#`` comments are skipped."""
    rows = []
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            rows.append((i, _parse_row(s, i)))
    return _rows_to_array(rows)


def _label_to_json(x):
    if isinstance(x, (tuple, list, np.ndarray)):
        return [_label_to_json(v) for v in x]
    return int(x)


def _label_from_json(x):
    if isinstance(x, list):
        return tuple(_label_from_json(v) for v in x)
    return x


def serialize(doc: PdaDocument) -> str:
    a = doc.array
    p = doc.params
    params = None if p is None else {"K": p.K, "F": p.F, "Z": p.Z, "S": p.S, "g": p.regular_g}
    meta = None
    if a.labels is not None:
        meta = [_label_to_json(a.label(s)) for s in range(1, len(a.labels) + 1)]
    head = {
        "format_version": doc.format_version,
        "params": params,
        "lambda": doc.lam,
        "phi": list(doc.phi) if doc.phi is not None else None,
    }
    tail = {"provenance": doc.provenance, "symbol_metadata": meta}
    dump = lambda v: json.dumps(v, separators=(", ", ": "))
    lines = ["{"]
    lines += [f" {json.dumps(k)}: {dump(v)}," for k, v in head.items()]
    rows = [" " + json.dumps(r) for r in format_grid(a).splitlines()]
    lines.append(' "grid": [')
    lines += [f" {r}," for r in rows[:-1]] + [f" {rows[-1]}"] if rows else []
    lines.append(" ],")
    items = list(tail.items())
    for i, (k, v) in enumerate(items):
        lines.append(f" {json.dumps(k)}: {dump(v)}" + ("," if i < len(items) - 1 else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> PdaDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(raw, dict):
        raise ParseError(1, "document must be a JSON object")
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"format_version {version!r} is not supported (expected {FORMAT_VERSION})")

    lines = text.splitlines()
    grid_line = next((i for i, s in enumerate(lines, 1) if s.strip().startswith('"grid"')), 1)
    grid = raw.get("grid")
    if not isinstance(grid, list) or not all(isinstance(r, str) for r in grid):
        raise ParseError(grid_line, "grid must be a list of row strings")
    array = _rows_to_array([(grid_line + i + 1, _parse_row(r, grid_line + i + 1))
                            for i, r in enumerate(grid)])

    meta = raw.get("symbol_metadata")
    if meta is not None:
        array = array.with_labels([_label_from_json(x) for x in meta])

    p = raw.get("params")
    params = None
    if p is not None:
        try:
            params = PdaParams(K=p["K"], F=p["F"], Z=p["Z"], S=p["S"], regular_g=p.get("g"))
        except (KeyError, TypeError) as exc:
            raise ParseError(1, f"bad params block: {exc}") from exc
    phi = raw.get("phi")
    return PdaDocument(
        array=array,
        params=params,
        lam=raw.get("lambda"),
        phi=tuple(phi) if phi is not None else None,
        provenance=raw.get("provenance") or {},
        format_version=version,
    )


def loads(text: str) -> PdaDocument:
    """Parse either a JSON document or a plain grid."""
    if text.lstrip().startswith("{"):
        return parse(text)
    return PdaDocument(array=parse_grid(text))


def load(path) -> PdaDocument:
    return loads(Path(path).read_text())


def dump(doc: PdaDocument, path) -> None:
    Path(path).write_text(serialize(doc))
