"""JSON description language for matroids.

Examples::

    {"type": "uniform", "n": 3, "rank": 2}
    {"type": "partition", "blocks": [[0, 1], [2]], "caps": [1, 1]}
    {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
    {"type": "linear_gf2", "columns": ["10", "01", "11"]}
    {"type": "free", "n": 4}
    {"type": "dual", "of": {...}}
    {"type": "delete", "of": {...}, "edges": [0]}
    {"type": "contract", "of": {...}, "edges": [0]}
    {"type": "direct_sum", "parts": [{...}, {...}]}

Every node denotes a matroid on a dense ground ``[0, n)``.  ``delete`` and
``contract`` name edges of their ``of`` operand, and the survivors are
renumbered in order; ``direct_sum`` places its parts one after another.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import InputError
from .matroid import DirectSum, Free, Graphic, LinearGF2, Matroid, Partition, Uniform, compact, dual


def _fail(path: str, msg: str) -> InputError:
    return InputError(f"{path}: {msg}")


def _field(doc: dict, key: str, path: str) -> Any:
    if key not in doc:
        raise _fail(path, f"missing field {key!r}")
    return doc[key]


def _nat(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise _fail(path, f"expected a non-negative integer, got {value!r}")
    return value


def _nat_list(value: Any, path: str) -> list[int]:
    if not isinstance(value, list):
        raise _fail(path, f"expected a list, got {type(value).__name__}")
    return [_nat(v, f"{path}[{k}]") for k, v in enumerate(value)]


def parse(doc: Any, path: str = "$") -> Matroid:
    """Build a matroid from a decoded JSON document; errors name the JSON path."""
    if not isinstance(doc, dict):
        raise _fail(path, "expected an object")
    kind = _field(doc, "type", path)
    try:
        if kind == "uniform":
            return Uniform(_nat(_field(doc, "n", path), f"{path}.n"),
                           _nat(_field(doc, "rank", path), f"{path}.rank"))
        if kind == "free":
            return Free(_nat(_field(doc, "n", path), f"{path}.n"))
        if kind == "partition":
            blocks = _field(doc, "blocks", path)
            if not isinstance(blocks, list):
                raise _fail(f"{path}.blocks", "expected a list of blocks")
            blocks = [_nat_list(b, f"{path}.blocks[{k}]") for k, b in enumerate(blocks)]
            caps = doc.get("caps", 1)
            caps = _nat(caps, f"{path}.caps") if isinstance(caps, int) else _nat_list(caps, f"{path}.caps")
            return Partition(blocks, caps)
        if kind == "graphic":
            vertices = _nat(_field(doc, "vertices", path), f"{path}.vertices")
            edges = _field(doc, "edges", path)
            if not isinstance(edges, list):
                raise _fail(f"{path}.edges", "expected a list of vertex pairs")
            return Graphic(vertices, [_nat_list(e, f"{path}.edges[{k}]") for k, e in enumerate(edges)])
        if kind == "linear_gf2":
            cols = _field(doc, "columns", path)
            if not isinstance(cols, list):
                raise _fail(f"{path}.columns", "expected a list of bit strings")
            return LinearGF2(cols)
        if kind == "dual":
            return dual(parse(_field(doc, "of", path), f"{path}.of"))
        if kind in ("delete", "contract"):
            inner = parse(_field(doc, "of", path), f"{path}.of")
            edges = _nat_list(_field(doc, "edges", path), f"{path}.edges")
            minor = inner.delete(edges) if kind == "delete" else inner.contract(edges)
            return compact(minor)
        if kind == "direct_sum":
            parts = _field(doc, "parts", path)
            if not isinstance(parts, list):
                raise _fail(f"{path}.parts", "expected a list of matroids")
            return DirectSum([parse(p, f"{path}.parts[{k}]") for k, p in enumerate(parts)])
    except InputError as exc:
        if str(exc).startswith("$"):
            raise
        raise _fail(path, str(exc)) from None
    raise _fail(f"{path}.type", f"unknown matroid type {kind!r}")


def loads(text: str, source: str = "<string>") -> Matroid:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return parse(doc)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from None


def load(path: str | Path) -> Matroid:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{p}: cannot read ({exc.strerror})") from None
    return loads(text, str(p))


def load_arg(arg: str) -> Matroid:
    """A file path, or an inline JSON object when the argument starts with ``{``."""
    if arg.lstrip().startswith("{"):
        return loads(arg, "<inline>")
    return load(arg)
