"""Finite-window simulation of the countable construction.

An infinite matroid on edges ``0, 1, 2, ...`` is presented by its
restrictions to ``[0, n)``.  :func:`run_prefix` runs the edge-by-edge
recursion on one window; :func:`stabilization_report` compares the
decisions made on a fixed prefix as the window grows.  Nothing here claims
that decisions must stabilise; agreement is measured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InputError
from .matroid import DirectSum, Free, Graphic, Matroid, Uniform
from .solver import RunTrace, claim_instrumentation, feasibility, key_lemma_run, nice_extension
from .waves import cond


@dataclass(frozen=True)
class StreamFamily:
    name: str
    truncate: Callable[[int], Matroid] = field(repr=False, compare=False)


def _triangle_sum(n: int) -> Matroid:
    parts: list[Matroid] = [Uniform(3, 2) for _ in range(n // 3)]
    if n % 3:
        parts.append(Free(n % 3))
    return DirectSum(parts)


def ladder_edges(n: int) -> list[tuple[int, int]]:
    """First ``n`` edges of the infinite ladder: rung 0, then for each step
    the two rails and the next rung.  Vertex ``2i`` / ``2i+1`` are the two
    ends of rung ``i``."""
    edges = [(0, 1)]
    i = 0
    while len(edges) < n:
        edges += [(2 * i, 2 * i + 2), (2 * i + 1, 2 * i + 3), (2 * i + 2, 2 * i + 3)]
        i += 1
    return edges[:n]


def _ladder(n: int) -> Matroid:
    edges = ladder_edges(n)
    vertices = max((max(e) for e in edges), default=-1) + 1
    return Graphic(max(vertices, 1), edges)


def builtin_family(name: str, **params) -> StreamFamily:
    """``triangle_sum``, ``ladder_graphic``, ``free``, or ``uniform_k``
    (``uniform`` with ``k=...`` also works)."""
    if name == "triangle_sum":
        return StreamFamily(name, _triangle_sum)
    if name == "ladder_graphic":
        return StreamFamily(name, _ladder)
    if name == "free":
        return StreamFamily(name, Free)
    k = params.get("k")
    if name.startswith("uniform_"):
        try:
            k = int(name.split("_", 1)[1])
        except ValueError:
            raise InputError(f"bad uniform family name {name!r}") from None
    if name.startswith("uniform") and k is not None:
        if k < 0:
            raise InputError("uniform family rank must be non-negative")
        return StreamFamily(f"uniform_{k}", lambda n, k=k: Uniform(n, min(k, n)))
    raise InputError(f"unknown stream family {name!r}")


@dataclass(frozen=True)
class PrefixRun:
    window: int
    targets: int
    independent: frozenset[int] | None
    cond_holds: bool
    cond_plus_holds: bool
    largest_wave: frozenset[int]
    counter_wave: frozenset[int] | None
    start: frozenset[int]
    invoked: tuple[bool, ...]
    traces: tuple[RunTrace, ...]
    violations: tuple[str, ...]

    def decisions(self) -> tuple[bool | None, ...]:
        """Per target edge: is it kept in I?  ``None`` when the window failed cond."""
        if self.independent is None:
            return (None,) * self.targets
        return tuple(k in self.independent for k in range(self.targets))

    def to_json(self, with_traces: bool = False) -> dict:
        doc = {
            "window": self.window,
            "targets": self.targets,
            "independent": None if self.independent is None else sorted(self.independent),
            "cond": self.cond_holds,
            "cond_plus": self.cond_plus_holds,
            "largest_wave": sorted(self.largest_wave),
            "counter_wave": None if self.counter_wave is None else sorted(self.counter_wave),
            "start": sorted(self.start),
            "invoked": list(self.invoked),
            "violations": list(self.violations),
        }
        if with_traces:
            doc["traces"] = [t.to_json() for t in self.traces]
        return doc


def _span_monotone(trace: RunTrace, n: Matroid) -> bool:
    spans = [n.span(s.independent) for s in trace.steps]
    return all(a <= b for a, b in zip(spans, spans[1:]))


def run_prefix(
    fm: StreamFamily,
    fn: StreamFamily,
    window: int,
    targets: int,
    *,
    order: Sequence[int] | None = None,
) -> PrefixRun:
    """Edge-by-edge recursion on the window ``[0, window)``.

    Starts from a nice extension of the truncated pair (empty when cond+
    already holds) and calls the key lemma on the current quotient for each
    target edge that is not yet N-spanned.
    """
    if not 0 <= targets <= window:
        raise InputError(f"targets must lie in 0..{window}, got {targets}")
    m, n = fm.truncate(window), fn.truncate(window)
    report = cond(m, n)
    wave = report.largest_wave.wave_set
    plus = report.holds and report.largest_wave.trivial
    if not report.holds:
        return PrefixRun(window, targets, None, False, False, wave, report.counter_wave,
                         frozenset(), (False,) * targets, (), ())
    acc = start = nice_extension(m, n)
    invoked = []
    traces = []
    violations: list[str] = []
    for k in range(targets):
        if k in n.span(acc):
            invoked.append(False)
            continue
        invoked.append(True)
        mq, nq = m.contract(acc), n.contract(acc)
        part, trace = key_lemma_run(mq, nq, k, order=order)
        traces.append(trace)
        violations += [f"edge {k}: {v}" for v in claim_instrumentation(trace, mq, nq)]
        if not _span_monotone(trace, nq):
            violations.append(f"edge {k}: span_N not monotone along the run")
        acc = acc | part
    if not m.is_independent(acc):
        violations.append("result is dependent in M")
    if not n.spans(acc, range(targets)):
        violations.append("result does not N-span the target prefix")
    if not feasibility(m, n, acc).nice:
        violations.append("result is not nice feasible on the window")
    return PrefixRun(window, targets, acc, True, plus, wave, None, start,
                     tuple(invoked), tuple(traces), tuple(violations))


@dataclass(frozen=True)
class StabilizationReport:
    family_m: str
    family_n: str
    windows: tuple[int, ...]
    targets: int
    runs: tuple[PrefixRun, ...]
    prefix_agreement: dict[tuple[int, int], int]

    @property
    def full_agreement(self) -> bool:
        return all(k == self.targets for k in self.prefix_agreement.values())

    @property
    def violations(self) -> list[str]:
        return [f"window {r.window}: {v}" for r in self.runs for v in r.violations]

    def verdicts(self) -> list[str]:
        """``stable`` for prefix length ``k`` if every window pair agrees on it."""
        worst = min(self.prefix_agreement.values(), default=self.targets)
        return ["stable" if k <= worst else "unstable" for k in range(1, self.targets + 1)]

    def to_json(self) -> dict:
        return {
            "family_m": self.family_m,
            "family_n": self.family_n,
            "windows": list(self.windows),
            "targets": self.targets,
            "runs": [r.to_json() for r in self.runs],
            "prefix_agreement": [
                {"windows": [a, b], "agree_up_to": k}
                for (a, b), k in sorted(self.prefix_agreement.items())
            ],
            "verdicts": self.verdicts(),
            "full_agreement": self.full_agreement,
            "violations": self.violations,
        }


def _agreement(a: PrefixRun, b: PrefixRun) -> int:
    da, db = a.decisions(), b.decisions()
    k = 0
    while k < len(da) and da[k] == db[k]:
        k += 1
    return k


def stabilization_report(
    fm: StreamFamily, fn: StreamFamily, windows: Sequence[int], targets: int
) -> StabilizationReport:
    ws = tuple(windows)
    if not ws or any(a >= b for a, b in zip(ws, ws[1:])):
        raise InputError("windows must be a nonempty increasing list")
    if targets > ws[0]:
        raise InputError(f"targets ({targets}) exceeds the smallest window ({ws[0]})")
    runs = tuple(run_prefix(fm, fn, w, targets) for w in ws)
    agreement = {
        (a.window, b.window): _agreement(a, b)
        for idx, a in enumerate(runs)
        for b in runs[idx + 1:]
    }
    return StabilizationReport(fm.name, fn.name, ws, targets, runs, agreement)


DEFAULT_WINDOWS = (4, 8, 16, 32)

__all__ = [
    "DEFAULT_WINDOWS",
    "PrefixRun",
    "StabilizationReport",
    "StreamFamily",
    "builtin_family",
    "ladder_edges",
    "run_prefix",
    "stabilization_report",
]
