"""Re-check documents emitted by the command line tool.

Each document carries a ``command`` field.  Certificates are checked
directly against the matroids (independence, spanning, wave witnesses);
plain values such as ranks and oracle answers are recomputed.
"""

from __future__ import annotations

from typing import Any, Callable, Sequence

from .errors import InputError
from .exchange import IntersectionCertificate
from .matroid import Matroid
from .solver import counter_wave_problems, feasibility
from .waves import WaveCertificate, cond, is_wave, largest_wave


def _set(doc: dict, key: str) -> frozenset[int]:
    value = doc.get(key)
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InputError(f"certificate field {key!r} must be a list of edge ids")
    return frozenset(value)


def _within(m: Matroid, s: frozenset[int], what: str) -> list[str]:
    outside = sorted(s - m.ground_set)
    return [f"{what} has edges outside the ground set: {outside}"] if outside else []


def _wave_cert(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    cert = WaveCertificate(_set(doc, "wave"), _set(doc, "witness"), bool(doc.get("trivial")))
    bad = _within(m, cert.wave_set, "wave")
    if bad:
        return bad
    bad = cert.validate(m, n)
    if not bad and largest_wave(m, n).wave_set != cert.wave_set:
        bad.append("wave is valid but not the largest one")
    return bad


def _counter(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    w = _set(doc, "counter_wave")
    return _within(m, w, "counter wave") or counter_wave_problems(m, n, w)


def _status(doc: dict) -> str:
    status = doc.get("status")
    if status not in ("found", "violated"):
        raise InputError(f"unknown status {status!r}")
    return status


def _ind_span(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    if _status(doc) == "violated":
        return _counter(m, n, doc)
    b = _set(doc, "payload")
    bad = _within(m, b, "payload")
    if bad:
        return bad
    if not m.is_independent(b):
        bad.append("payload is dependent in M")
    if not n.is_independent(b) or not n.spans(b):
        bad.append("payload is not a base of N")
    return bad


def _common_base(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    if _status(doc) == "violated":
        side = doc.get("side", "M,N")
        a, b = (m, n) if side == "M,N" else (n, m)
        return _counter(a, b, doc)
    base = _set(doc, "payload")
    bad = _within(m, base, "payload")
    if bad:
        return bad
    for name, mat in (("M", m), ("N", n)):
        if not mat.is_independent(base) or not mat.spans(base):
            bad.append(f"payload is not a base of {name}")
    return bad


def _intersect(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    c = doc.get("certificate")
    if not isinstance(c, dict):
        return ["missing certificate"]
    cert = IntersectionCertificate(_set(c, "common_independent"), _set(c, "part_M"), _set(c, "part_N"))
    bad = cert.validate(m, n)
    if "payload" in doc and _set(doc, "payload") != cert.common_independent:
        bad.append("payload differs from the certified set")
    return bad


def _cond(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    lw = doc.get("largest_wave")
    if not isinstance(lw, dict):
        return ["missing largest_wave"]
    bad = _wave_cert(m, n, lw)
    if doc.get("holds"):
        w = _set(lw, "wave")
        j = _set(doc, "n_side_base")
        mw, nw = m.restrict(w), n.contract_onto(w)
        if not j <= w or not mw.is_independent(j) or not nw.is_independent(j) or not nw.spans(j):
            bad.append("n_side_base is not a base of N.W independent in M|W")
    else:
        bad += _counter(m, n, doc)
    return bad


def _key_lemma(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    e = doc.get("edge")
    if doc.get("status") == "precondition_failed":
        w = _set(doc, "wave")
        cert = is_wave(m, n, w)
        if cert is None:
            return ["reported wave is not a wave"]
        if cert.trivial and cond(m, n).holds:
            return ["reported wave is trivial and cond holds, so cond+ was not violated"]
        return []
    i = _set(doc, "payload")
    bad = _within(m, i, "payload")
    if bad:
        return bad
    if e not in n.span(i):
        bad.append(f"edge {e} is not spanned in N")
    if not feasibility(m, n, i).nice:
        bad.append("payload is not nice feasible")
    return bad


def _largest(m: Matroid, n: Matroid, doc: dict) -> list[str]:
    return _wave_cert(m, n, doc)


def _rank(m: Matroid, doc: dict) -> list[str]:
    s = _set(doc, "set")
    bad = _within(m, s, "set")
    if not bad and m.rank(s) != doc.get("rank"):
        bad.append(f"rank is {m.rank(s)}, document says {doc.get('rank')}")
    return bad


def _circuit(m: Matroid, doc: dict) -> list[str]:
    from .circuits import is_circuit

    c = _set(doc, "circuit")
    bad = _within(m, c, "circuit")
    if bad:
        return bad
    if doc.get("edge") not in c:
        bad.append("circuit does not contain the edge")
    if not is_circuit(m, c):
        bad.append("set is not a circuit")
    if not c - {doc.get("edge")} <= _set(doc, "set"):
        bad.append("circuit leaves the independent set")
    return bad


_PAIR: dict[str, Callable[[Matroid, Matroid, dict], list[str]]] = {
    "intersect": _intersect,
    "ind-span": _ind_span,
    "common-base": _common_base,
    "cond": _cond,
    "largest-wave": _largest,
    "key-lemma": _key_lemma,
}
_SINGLE: dict[str, Callable[[Matroid, dict], list[str]]] = {
    "rank": _rank,
    "circuit": _circuit,
}

VERIFIABLE = frozenset(_PAIR) | frozenset(_SINGLE)


def verify_document(doc: Any, matroids: Sequence[Matroid]) -> list[str]:
    """Problems with ``doc`` as an answer on ``matroids``; empty means valid."""
    if not isinstance(doc, dict):
        raise InputError("certificate must be a JSON object")
    command = doc.get("command")
    if command in _PAIR:
        if len(matroids) != 2:
            raise InputError(f"{command} certificates are checked against two matroids")
        return _PAIR[command](matroids[0], matroids[1], doc)
    if command in _SINGLE:
        if len(matroids) != 1:
            raise InputError(f"{command} certificates are checked against one matroid")
        return _SINGLE[command](matroids[0], doc)
    raise InputError(f"no verifier for command {command!r}")


__all__ = ["VERIFIABLE", "verify_document"]
