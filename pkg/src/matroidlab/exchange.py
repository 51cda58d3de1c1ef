"""Exchange digraph D(I), augmenting paths, and the finite intersection loop.

Arcs for a common independent ``I``:

* ``e -> f`` (``e`` in I, ``f`` outside) when ``f`` is N-spanned by ``I`` and
  ``e`` lies on the N-circuit of ``f``;
* ``f -> e`` when ``f`` is M-spanned by ``I`` and ``e`` lies on its M-circuit.

Paths run from N-unspanned edges (sources) to M-unspanned edges (sinks).
"""

from __future__ import annotations

import logging
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .bits import from_mask, iter_bits
from .errors import InputError, TheoryViolation
from .matroid import Matroid, same_ground

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExchangeDigraph:
    ground: frozenset[int]
    independent_set: frozenset[int]
    arcs: frozenset[tuple[int, int]]
    witness: Mapping[tuple[int, int], frozenset[int]]
    n_span: frozenset[int]
    m_span: frozenset[int]
    succ: Mapping[int, tuple[int, ...]] = field(repr=False, compare=False)

    @property
    def sources(self) -> frozenset[int]:
        return self.ground - self.n_span

    @property
    def sinks(self) -> frozenset[int]:
        return self.ground - self.m_span

    def successors(self, e: int) -> tuple[int, ...]:
        return self.succ.get(e, ())

    def reachable_from(self, starts: Iterable[int]) -> frozenset[int]:
        seen = set(starts)
        queue = deque(sorted(seen))
        while queue:
            v = queue.popleft()
            for w in self.successors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return frozenset(seen)

    def reaching(self, targets: Iterable[int]) -> frozenset[int]:
        """Vertices with a directed path into ``targets`` (targets included)."""
        pred: dict[int, list[int]] = {}
        for a, b in self.arcs:
            pred.setdefault(b, []).append(a)
        seen = set(targets)
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for u in pred.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return frozenset(seen)

    def induced(self, vertices: Iterable[int]) -> frozenset[tuple[int, int]]:
        vs = set(vertices)
        return frozenset((a, b) for a, b in self.arcs if a in vs and b in vs)

    def to_dot(self, name: str = "D") -> str:
        lines = [f"digraph {name} {{"]
        for e in sorted(self.ground):
            attrs = []
            if e in self.independent_set:
                attrs.append("shape=box")
            source, sink = e in self.sources, e in self.sinks
            if source or sink:
                attrs.append('color="%s"' % ("purple" if source and sink else "blue" if source else "red"))
            lines.append(f"  {e}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
        for a, b in sorted(self.arcs):
            lines.append(f"  {a} -> {b};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class AugmentingPath:
    edges: tuple[int, ...]

    @property
    def first(self) -> int:
        return self.edges[0]

    @property
    def last(self) -> int:
        return self.edges[-1]

    def as_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class IntersectionCertificate:
    """Common independent set plus a bipartition proving it maximum."""

    common_independent: frozenset[int]
    part_m: frozenset[int]
    part_n: frozenset[int]

    def validate(self, m: Matroid, n: Matroid) -> list[str]:
        problems = []
        ground = m.ground_set
        if self.part_m | self.part_n != ground or self.part_m & self.part_n:
            problems.append("parts do not partition the ground set")
            return problems
        i = self.common_independent
        if not i <= ground:
            problems.append("independent set leaves the ground set")
            return problems
        if not m.is_independent(i):
            problems.append("set is dependent in M")
        if not n.is_independent(i):
            problems.append("set is dependent in N")
        if not m.spans(i & self.part_m, self.part_m):
            problems.append("I ∩ part_M does not span part_M in M")
        if not n.spans(i & self.part_n, self.part_n):
            problems.append("I ∩ part_N does not span part_N in N")
        return problems

    def to_json(self) -> dict:
        return {
            "common_independent": sorted(self.common_independent),
            "part_M": sorted(self.part_m),
            "part_N": sorted(self.part_n),
        }


def _common_independent_mask(m: Matroid, n: Matroid, i: Iterable[int]) -> int:
    same_ground(m, n)
    mask = m.mask_of(i)
    if not m.indep_mask(mask):
        raise InputError(f"{sorted(from_mask(mask))} is dependent in M")
    if not n.indep_mask(mask):
        raise InputError(f"{sorted(from_mask(mask))} is dependent in N")
    return mask


def build_exchange_digraph(m: Matroid, n: Matroid, i: Iterable[int]) -> ExchangeDigraph:
    imask = _common_independent_mask(m, n, i)
    nspan = n.span_mask(imask)
    mspan = m.span_mask(imask)
    arcs: list[tuple[int, int]] = []
    witness: dict[tuple[int, int], frozenset[int]] = {}
    for f in iter_bits(m.ground & ~imask):
        if (nspan >> f) & 1:
            circ = n.circuit_mask(f, imask)
            cset = from_mask(circ)
            for e in iter_bits(circ & ~(1 << f)):
                arcs.append((e, f))
                witness[(e, f)] = cset
        if (mspan >> f) & 1:
            circ = m.circuit_mask(f, imask)
            cset = from_mask(circ)
            for e in iter_bits(circ & ~(1 << f)):
                arcs.append((f, e))
                witness[(f, e)] = cset
    succ: dict[int, list[int]] = {}
    for a, b in arcs:
        succ.setdefault(a, []).append(b)
    return ExchangeDigraph(
        ground=m.ground_set,
        independent_set=from_mask(imask),
        arcs=frozenset(arcs),
        witness=witness,
        n_span=from_mask(nspan),
        m_span=from_mask(mspan),
        succ={k: tuple(sorted(v)) for k, v in succ.items()},
    )


def _order_key(order: Sequence[int] | None):
    if order is None:
        return lambda e: e
    rank = {e: k for k, e in enumerate(order)}
    return lambda e: (rank.get(e, len(rank)), e)


def find_augmenting_path(
    m: Matroid,
    n: Matroid,
    i: Iterable[int],
    source_order: Sequence[int] | None = None,
    digraph: ExchangeDigraph | None = None,
) -> AugmentingPath | None:
    """Shortest augmenting path from the least source (under ``source_order``)
    that reaches a sink.  Neighbours are expanded in increasing index order."""
    d = digraph if digraph is not None else build_exchange_digraph(m, n, i)
    sinks = d.sinks
    for s in sorted(d.sources, key=_order_key(source_order)):
        parent = {s: None}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if v in sinks:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return AugmentingPath(tuple(reversed(path)))
            for w in d.successors(v):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
    return None


def path_problems(d: ExchangeDigraph, path: AugmentingPath) -> list[str]:
    """Everything wrong with ``path`` as an augmenting path in ``d``."""
    xs = path.edges
    problems = []
    if len(xs) % 2 != 1:
        return ["path has even length"]
    if len(set(xs)) != len(xs):
        return ["path repeats an edge"]
    if not set(xs) <= d.ground:
        return ["path leaves the ground set"]
    for k, x in enumerate(xs):
        if (k % 2 == 1) != (x in d.independent_set):
            problems.append(f"position {k} (edge {x}) has the wrong side of I")
    if xs[0] not in d.sources:
        problems.append(f"first edge {xs[0]} is spanned in N")
    if xs[-1] not in d.sinks:
        problems.append(f"last edge {xs[-1]} is spanned in M")
    for k in range(len(xs) - 1):
        if (xs[k], xs[k + 1]) not in d.arcs:
            problems.append(f"missing arc {xs[k]} -> {xs[k + 1]}")
    for k in range(len(xs)):
        for l in range(k + 2, len(xs)):
            if (xs[k], xs[l]) in d.arcs:
                problems.append(f"jumping arc {xs[k]} -> {xs[l]}")
    return problems


def augmentation_problems(
    m: Matroid,
    n: Matroid,
    before: ExchangeDigraph,
    path: AugmentingPath,
    after: ExchangeDigraph | None = None,
) -> list[str]:
    """Check the post-augmentation facts for ``I △ P``.

    Size grows by one; the result is common independent; the N-span equals
    that of ``I + x0`` and the M-span that of ``I + x_last``; and every arc
    ``e -> f`` whose tail ``e`` and out-neighbours avoid ``P`` survives.
    """
    i = before.independent_set
    pset = path.as_set()
    j = i ^ pset
    problems = []
    if len(j) != len(i) + 1:
        problems.append(f"|I △ P| = {len(j)}, expected {len(i) + 1}")
    if not (m.is_independent(j) and n.is_independent(j)):
        problems.append("I △ P is not common independent")
        return problems
    if n.span(j) != n.span(i | {path.first}):
        problems.append("span_N(I △ P) differs from span_N(I + x0)")
    if m.span(j) != m.span(i | {path.last}):
        problems.append("span_M(I △ P) differs from span_M(I + x_last)")
    if after is None:
        after = build_exchange_digraph(m, n, j)
    for e, f in before.arcs:
        if e in pset or any(w in pset for w in before.successors(e)):
            continue
        if (e, f) not in after.arcs:
            problems.append(f"arc {e} -> {f} vanished although P avoids {e} and its out-neighbours")
    return problems


@dataclass
class AuditStats:
    """Counts audited augmentations; ``force`` audits even ``audit=False`` calls."""

    augmentations: int = 0
    violations: int = 0
    force: bool = False

    def reset(self) -> None:
        self.augmentations = self.violations = 0


audit_stats = AuditStats()


@contextmanager
def audit_everything():
    """Audit every augmentation inside the block and yield the counters."""
    saved = (audit_stats.force, audit_stats.augmentations, audit_stats.violations)
    audit_stats.force = True
    audit_stats.reset()
    try:
        yield audit_stats
    finally:
        audit_stats.force = saved[0]


def augment(
    m: Matroid,
    n: Matroid,
    i: Iterable[int],
    path: AugmentingPath,
    *,
    digraph: ExchangeDigraph | None = None,
    audit: bool = True,
) -> frozenset[int]:
    """Return ``I △ P``.  Invalid paths raise :class:`InputError`; with
    ``audit`` on, a failed post-condition raises :class:`TheoryViolation`."""
    d = digraph if digraph is not None else build_exchange_digraph(m, n, i)
    bad = path_problems(d, path)
    if bad:
        raise InputError("invalid augmenting path: " + "; ".join(bad))
    j = d.independent_set ^ path.as_set()
    if audit or audit_stats.force:
        audit_stats.augmentations += 1
        bad = augmentation_problems(m, n, d, path)
        if bad:
            audit_stats.violations += 1
            raise TheoryViolation("augmentation audit failed: " + "; ".join(bad))
    return j


@dataclass(frozen=True)
class AugmentationRecord:
    before: frozenset[int]
    path: AugmentingPath
    after: frozenset[int]
    n_span: frozenset[int]
    m_span: frozenset[int]


def edmonds_max_common(
    m: Matroid,
    n: Matroid,
    *,
    source_order: Sequence[int] | None = None,
    trace: list[AugmentationRecord] | None = None,
    audit: bool = True,
) -> IntersectionCertificate:
    """Maximum common independent set with its bipartition certificate."""
    same_ground(m, n)
    i: frozenset[int] = frozenset()
    while True:
        d = build_exchange_digraph(m, n, i)
        path = find_augmenting_path(m, n, i, source_order, digraph=d)
        if path is None:
            break
        j = augment(m, n, i, path, digraph=d, audit=audit)
        if trace is not None:
            trace.append(AugmentationRecord(i, path, j, n.span(j), m.span(j)))
        log.debug("augment %s by %s -> %s", sorted(i), path.edges, sorted(j))
        i = j
    part_m = d.reachable_from(d.sources)
    return IntersectionCertificate(i, part_m, d.ground - part_m)


def max_common_size(m: Matroid, n: Matroid) -> int:
    return len(edmonds_max_common(m, n, audit=False).common_independent)


def coreachable_sinks(d: ExchangeDigraph) -> frozenset[int]:
    """Edges from which some M-unspanned edge can be reached."""
    return d.reaching(d.sinks)


__all__ = [
    "AuditStats",
    "AugmentationRecord",
    "AugmentingPath",
    "ExchangeDigraph",
    "IntersectionCertificate",
    "audit_everything",
    "audit_stats",
    "augment",
    "augmentation_problems",
    "build_exchange_digraph",
    "coreachable_sinks",
    "edmonds_max_common",
    "find_augmenting_path",
    "max_common_size",
    "path_problems",
]
