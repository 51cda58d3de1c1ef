"""Feasible sets, the key-lemma construction, and the top-level solvers.

A common independent ``I`` is *feasible* when ``cond(M/I, N/I)`` holds and
*nice* when ``cond+(M/I, N/I)`` holds.  The key-lemma loop grows nice
feasible sets one augmenting path at a time, always starting the path at
the least possible edge, until a prescribed edge is N-spanned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .bits import from_mask
from .errors import InputError, PreconditionError, TheoryViolation
from .exchange import (
    AugmentingPath,
    IntersectionCertificate,
    augment,
    build_exchange_digraph,
    edmonds_max_common,
    find_augmenting_path,
)
from .matroid import Matroid, same_ground
from .waves import CondReport, cond, is_wave, largest_wave

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeasibleReport:
    set: frozenset[int]
    feasible: bool
    nice: bool
    quotient_cond: CondReport | None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "set": sorted(self.set),
            "feasible": self.feasible,
            "nice": self.nice,
            "quotient_cond": None if self.quotient_cond is None else self.quotient_cond.to_json(),
            "reason": self.reason,
        }


def feasibility(m: Matroid, n: Matroid, i) -> FeasibleReport:
    same_ground(m, n)
    imask = m.mask_of(i)
    iset = from_mask(imask)
    if not m.indep_mask(imask):
        return FeasibleReport(iset, False, False, None, "dependent in M")
    if not n.indep_mask(imask):
        return FeasibleReport(iset, False, False, None, "dependent in N")
    report = cond(m.contract(imask), n.contract(imask))
    if not report.holds:
        return FeasibleReport(iset, False, False, report, "cond fails on the quotient")
    nice = report.largest_wave.trivial
    return FeasibleReport(iset, True, nice, report, "" if nice else "largest quotient wave is nontrivial")


def _require_nice(m: Matroid, n: Matroid, i, what: str) -> None:
    report = feasibility(m, n, i)
    if not report.nice:
        wave = report.quotient_cond.largest_wave.wave_set if report.quotient_cond else None
        raise PreconditionError(f"{what} needs a nice feasible set: {report.reason}", wave)


def nice_extension(m: Matroid, n: Matroid, *, check: bool = False) -> frozenset[int]:
    """A common base of ``M|W`` and ``N.W`` for the largest wave ``W``.

    Needs ``cond(M, N)``.  On finite matroids such a base always exists; if
    the search comes up short a :class:`TheoryViolation` is raised.
    """
    report = cond(m, n)
    if not report.holds:
        raise PreconditionError("nice_extension needs cond(M, N)", report.counter_wave)
    w = report.largest_wave.wave_set
    mw, nw = m.restrict(w), n.contract_onto(w)
    base = edmonds_max_common(mw, nw, audit=False).common_independent
    if not (len(base) == mw.full_rank == nw.full_rank):
        raise TheoryViolation("common-base existence assertion failed")
    if check and not feasibility(m, n, base).nice:
        raise TheoryViolation(f"nice extension {sorted(base)} is not nice feasible")
    return base


def aug_nice_extend(
    m: Matroid,
    n: Matroid,
    i,
    path: AugmentingPath,
    *,
    check_pre: bool = True,
    check_post: bool = False,
) -> frozenset[int]:
    """Augment nice feasible ``I`` along ``path``, then add a nice extension
    of the quotient by ``I △ P``."""
    if check_pre:
        _require_nice(m, n, i, "aug_nice_extend")
    j = augment(m, n, i, path)
    jmask = m.mask_of(j)
    ext = nice_extension(m.contract(jmask), n.contract(jmask))
    out = j | ext
    if check_post and not feasibility(m, n, out).nice:
        raise TheoryViolation(f"extension {sorted(out)} of I △ P is not nice feasible")
    return out


# -- key lemma ------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    independent: frozenset[int]
    path: AugmentingPath | None
    extension: frozenset[int]
    reach_sets: dict[int, frozenset[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "independent": sorted(self.independent),
            "path": None if self.path is None else list(self.path.edges),
            "extension": sorted(self.extension),
            "reach_sets": {str(x): sorted(r) for x, r in sorted(self.reach_sets.items())},
        }


@dataclass(frozen=True)
class RunTrace:
    target: int
    steps: tuple[TraceStep, ...]

    @property
    def result(self) -> frozenset[int]:
        return self.steps[-1].independent

    @property
    def augmentations(self) -> int:
        return sum(1 for s in self.steps if s.path is not None)

    def to_json(self) -> dict:
        return {"target": self.target, "steps": [s.to_json() for s in self.steps]}


def _stuck_sources(d) -> dict[int, frozenset[int]]:
    """Reach sets of N-unspanned edges that cannot reach an M-unspanned edge."""
    out = {}
    sinks = d.sinks
    for x in sorted(d.sources):
        reach = d.reachable_from([x])
        if not reach & sinks:
            out[x] = reach
    return out


def key_lemma_run(
    m: Matroid,
    n: Matroid,
    e: int,
    *,
    order: Sequence[int] | None = None,
    check: bool = True,
) -> tuple[frozenset[int], RunTrace]:
    """Grow nice feasible sets from ∅ until ``e`` is N-spanned.

    Each step takes the augmenting path with the least possible first edge
    and extends ``I △ P`` to a nice feasible set.  ``check`` verifies cond+
    up front and that the N-span strictly grows at every step.
    """
    same_ground(m, n)
    m.check_edge(e)
    if check:
        report = cond(m, n)
        if not (report.holds and report.largest_wave.trivial):
            raise PreconditionError(
                "key_lemma needs cond+(M, N)", report.counter_wave or report.largest_wave.wave_set
            )
    i: frozenset[int] = frozenset()
    steps: list[TraceStep] = []
    limit = m.ground_size
    while True:
        nspan = n.span(i)
        if e in nspan:
            steps.append(TraceStep(i, None, frozenset()))
            break
        d = build_exchange_digraph(m, n, i)
        reach = _stuck_sources(d)
        path = find_augmenting_path(m, n, i, order, digraph=d)
        if path is None:
            # no augmenting path: I is an M-independent N-base
            if not n.spans(i):
                raise TheoryViolation(f"no augmenting path, yet {sorted(i)} does not span N")
            steps.append(TraceStep(i, None, frozenset(), reach))
            break
        if len(steps) >= limit:
            raise TheoryViolation(f"key lemma exceeded {limit} augmentations")
        nxt = aug_nice_extend(m, n, i, path, check_pre=False)
        toggled = i ^ path.as_set()
        steps.append(TraceStep(i, path, nxt - toggled, reach))
        if check and not nspan < n.span(nxt):
            raise TheoryViolation("span_N did not strictly grow across an augmentation")
        log.debug("key lemma step: %s via %s -> %s", sorted(i), path.edges, sorted(nxt))
        i = nxt
    return i, RunTrace(e, tuple(steps))


def key_lemma(m: Matroid, n: Matroid, e: int, *, order: Sequence[int] | None = None) -> frozenset[int]:
    return key_lemma_run(m, n, e, order=order)[0]


def claim_instrumentation(trace: RunTrace, m: Matroid, n: Matroid) -> list[str]:
    """Check the reach-set stabilisation facts between consecutive steps.

    For each step ``k`` with a path and each tracked ``x`` (N-unspanned, no
    augmenting path from it) with reach set ``R = E(x, k)``:

    * the path avoids ``R``;
    * ``I_k ∩ R = I_{k+1} ∩ R``;
    * M-circuits of edges in ``R - I_k`` are unchanged and stay inside ``R``;
    * arcs of ``D_k`` inside ``R`` are arcs of ``D_{k+1}``;
    * ``R ⊆ E(x, k+1)``.

    Recorded reach sets must also match a recomputation.  Returns messages;
    an empty list means no violation.
    """
    out: list[str] = []
    steps = trace.steps
    for k, step in enumerate(steps):
        i = step.independent
        try:
            d = build_exchange_digraph(m, n, i)
        except InputError as exc:
            out.append(f"step {k}: {exc}")
            continue
        actual = _stuck_sources(d)
        if step.reach_sets and step.reach_sets != actual:
            out.append(f"step {k}: recorded reach sets differ from recomputation")
        if step.path is None or k + 1 >= len(steps):
            continue
        nxt = steps[k + 1].independent
        toggled = i ^ step.path.as_set()
        if nxt - step.extension != toggled or not step.extension <= nxt:
            out.append(f"step {k}: I_(k+1) is not (I_k △ P_k) plus the recorded extension")
        try:
            d_next = build_exchange_digraph(m, n, nxt)
        except InputError as exc:
            out.append(f"step {k + 1}: {exc}")
            continue
        pset = step.path.as_set()
        for x, reach in actual.items():
            tag = f"step {k}, x={x}"
            if pset & reach:
                out.append(f"{tag}: path meets E(x,k) at {sorted(pset & reach)}")
            if i & reach != nxt & reach:
                out.append(f"{tag}: I ∩ E(x,k) changed")
            nimask = m.mask_of(nxt)
            imask = m.mask_of(i)
            for f in sorted(reach - i):
                if f in nxt:
                    continue
                before = from_mask(m.circuit_mask(f, imask)) if f in d.m_span else None
                after = None
                if f in d_next.m_span:
                    after = from_mask(m.circuit_mask(f, nimask))
                if before is None or before != after or not before <= reach:
                    out.append(f"{tag}: M-circuit of {f} changed or left E(x,k)")
            for arc in d.induced(reach):
                if arc not in d_next.arcs:
                    out.append(f"{tag}: arc {arc[0]} -> {arc[1]} lost")
            if not reach <= d_next.reachable_from([x]):
                out.append(f"{tag}: E(x,k) not contained in E(x,k+1)")
    return out


# -- solvers --------------------------------------------------------------

@dataclass(frozen=True)
class SolveOutcome:
    status: str
    payload: frozenset[int] | None = None
    counter_wave: frozenset[int] | None = None
    certificate: IntersectionCertificate | None = None
    side: str | None = None
    traces: tuple[RunTrace, ...] = ()

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self, with_traces: bool = False) -> dict:
        doc: dict = {"status": self.status}
        if self.payload is not None:
            doc["payload"] = sorted(self.payload)
        if self.counter_wave is not None:
            doc["counter_wave"] = sorted(self.counter_wave)
        if self.side is not None:
            doc["side"] = self.side
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json()
        if with_traces:
            doc["traces"] = [t.to_json() for t in self.traces]
        return doc


def counter_wave_problems(m: Matroid, n: Matroid, w) -> list[str]:
    """A violated outcome must name a wave with no base of ``N.W`` independent in ``M|W``."""
    if is_wave(m, n, w) is None:
        return [f"{sorted(w)} is not a wave"]
    mw, nw = m.restrict(w), n.contract_onto(w)
    if len(edmonds_max_common(mw, nw, audit=False).common_independent) == nw.full_rank:
        return [f"wave {sorted(w)} has an N.W base independent in M|W"]
    return []


def _violated(m: Matroid, n: Matroid, report: CondReport, side: str | None = None) -> SolveOutcome:
    bad = counter_wave_problems(m, n, report.counter_wave)
    if bad:
        raise TheoryViolation("; ".join(bad))
    return SolveOutcome("violated", counter_wave=report.counter_wave, side=side)


def span_all(
    m: Matroid, n: Matroid, targets: Sequence[int], *, order: Sequence[int] | None = None
) -> tuple[frozenset[int], list[RunTrace]]:
    """Run key lemma on successive quotients until every target is N-spanned.

    ``(M, N)`` must satisfy cond+.  The union stays nice feasible.
    """
    acc: frozenset[int] = frozenset()
    traces = []
    for e in targets:
        if e in n.span(acc):
            continue
        amask = m.mask_of(acc)
        part, trace = key_lemma_run(m.contract(amask), n.contract(amask), e, order=order, check=False)
        traces.append(trace)
        acc = acc | part
    return acc, traces


def ind_span_solve(m: Matroid, n: Matroid, *, order: Sequence[int] | None = None) -> SolveOutcome:
    """A base of N independent in M, or the wave that rules one out."""
    same_ground(m, n)
    report = cond(m, n)
    if not report.holds:
        return _violated(m, n, report)
    w = report.largest_wave.wave_set
    wmask = m.mask_of(w)
    mq, nq = m.contract(wmask), n.delete(wmask)
    rest = sorted(mq.ground_set, key=_order_key(order))
    acc, traces = span_all(mq, nq, rest, order=order)
    result = report.n_side_base | acc
    if not m.is_independent(result) or not n.spans(result):
        raise TheoryViolation(f"{sorted(result)} is not an M-independent base of N")
    return SolveOutcome("found", payload=result, traces=tuple(traces))


def _order_key(order: Sequence[int] | None):
    if order is None:
        return lambda e: e
    rank = {e: k for k, e in enumerate(order)}
    return lambda e: (rank.get(e, len(rank)), e)


def intersect_solve(m: Matroid, n: Matroid, *, order: Sequence[int] | None = None) -> SolveOutcome:
    """Intersection certificate: the largest wave on the M side, an
    M-independent base of ``N - W`` in ``M / W`` on the N side."""
    same_ground(m, n)
    wave = largest_wave(m, n)
    wmask = m.mask_of(wave.wave_set)
    inner = ind_span_solve(m.contract(wmask), n.delete(wmask), order=order)
    if not inner.found:
        raise TheoryViolation("cond fails after quotienting by the largest wave")
    cert = IntersectionCertificate(
        wave.witness | inner.payload, wave.wave_set, m.ground_set - wave.wave_set
    )
    bad = cert.validate(m, n)
    if bad:
        raise TheoryViolation("intersection certificate invalid: " + "; ".join(bad))
    best = edmonds_max_common(m, n, audit=False)
    if len(best.common_independent) != len(cert.common_independent):
        raise TheoryViolation("certificate size disagrees with the Edmonds maximum")
    return SolveOutcome("found", payload=cert.common_independent, certificate=cert, traces=inner.traces)


def common_base_solve(m: Matroid, n: Matroid) -> SolveOutcome:
    same_ground(m, n)
    forward = cond(m, n)
    if not forward.holds:
        return _violated(m, n, forward, side="M,N")
    backward = cond(n, m)
    if not backward.holds:
        return _violated(n, m, backward, side="N,M")
    base = edmonds_max_common(m, n).common_independent
    if not (len(base) == m.full_rank == n.full_rank):
        raise TheoryViolation("both conds hold but no common base was found")
    return SolveOutcome("found", payload=base)


def dual_transfer_check(m: Matroid, n: Matroid) -> bool:
    """Both ``(M, N)`` and ``(M*, N*)`` yield valid intersection certificates."""
    for a, b in ((m, n), (m.dual(), n.dual())):
        out = intersect_solve(a, b)
        if out.certificate is None or out.certificate.validate(a, b):
            return False
    return True


__all__ = [
    "FeasibleReport",
    "RunTrace",
    "SolveOutcome",
    "TraceStep",
    "aug_nice_extend",
    "claim_instrumentation",
    "common_base_solve",
    "counter_wave_problems",
    "dual_transfer_check",
    "feasibility",
    "ind_span_solve",
    "intersect_solve",
    "key_lemma",
    "key_lemma_run",
    "nice_extension",
    "span_all",
]
