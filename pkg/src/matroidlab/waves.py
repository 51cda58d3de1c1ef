"""Waves, the largest wave, and the cond / cond+ predicates.

A set ``W`` is an (M, N)-wave when some base of ``M|W`` stays independent in
``N.W`` (N with everything outside ``W`` contracted).  Sets of M-loops are
waves witnessed by the empty set; those are the trivial waves.

Two routes compute the largest wave:

``"exchange"`` (default)
    Take a maximum common independent ``I`` and its exchange digraph.  The
    largest wave is every edge that cannot reach an M-unspanned edge, and
    ``I`` restricted to it is a witness.  Waves are exactly the sets that
    minimise ``r_M(X) + r_N(E - X)`` among their own subsets, so the largest
    wave is the largest global minimiser of that function, which is the
    complement of the sink-coreachable set.  Polynomial.

``"accumulate"``
    Start from the M-loops and keep merging any nonempty wave of the
    quotient pair ``(M / W, N - W)`` found by subset search.  Exponential;
    guarded by ``bound``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .bits import from_mask, iter_bits
from .errors import CapacityError, InputError, PreconditionError, TheoryViolation
from .exchange import build_exchange_digraph, coreachable_sinks, edmonds_max_common
from .matroid import Matroid, same_ground

log = logging.getLogger(__name__)

DEFAULT_WAVE_BOUND = 16


@dataclass(frozen=True)
class WaveCertificate:
    wave_set: frozenset[int]
    witness: frozenset[int]
    trivial: bool

    def validate(self, m: Matroid, n: Matroid) -> list[str]:
        problems = []
        w = self.wave_set
        if not self.witness <= w:
            return ["witness is not inside the wave"]
        mw = m.restrict(w)
        if not mw.is_independent(self.witness) or not mw.spans(self.witness):
            problems.append("witness is not a base of M restricted to the wave")
        if not n.contract_onto(w).is_independent(self.witness):
            problems.append("witness is dependent in N contracted onto the wave")
        all_loops = w <= m.loops()
        if self.trivial != all_loops:
            problems.append(f"trivial flag is {self.trivial} but all-loops is {all_loops}")
        if self.trivial and self.witness:
            problems.append("trivial wave with a nonempty witness")
        return problems

    def to_json(self) -> dict:
        return {
            "wave": sorted(self.wave_set),
            "witness": sorted(self.witness),
            "trivial": self.trivial,
        }


@dataclass(frozen=True)
class CondReport:
    holds: bool
    largest_wave: WaveCertificate
    counter_wave: frozenset[int] | None = None
    n_side_base: frozenset[int] | None = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "largest_wave": self.largest_wave.to_json(),
            "counter_wave": None if self.counter_wave is None else sorted(self.counter_wave),
            "n_side_base": None if self.n_side_base is None else sorted(self.n_side_base),
        }


def _wave_pair(m: Matroid, n: Matroid, wmask: int) -> tuple[Matroid, Matroid]:
    return m.restrict(wmask), n.contract_onto(wmask)


def _is_trivial(m: Matroid, wmask: int) -> bool:
    return all(not m.indep_mask(1 << e) for e in iter_bits(wmask))


def is_wave(m: Matroid, n: Matroid, w: Iterable[int]) -> WaveCertificate | None:
    same_ground(m, n)
    wmask = m.mask_of(w)
    mw, nw = _wave_pair(m, n, wmask)
    cert = edmonds_max_common(mw, nw, audit=False)
    if len(cert.common_independent) != mw.full_rank:
        return None
    return WaveCertificate(from_mask(wmask), cert.common_independent, _is_trivial(m, wmask))


def _largest_by_exchange(m: Matroid, n: Matroid) -> WaveCertificate:
    cert = edmonds_max_common(m, n, audit=False)
    d = build_exchange_digraph(m, n, cert.common_independent)
    wave = d.ground - coreachable_sinks(d)
    wmask = m.mask_of(wave)
    return WaveCertificate(wave, cert.common_independent & wave, _is_trivial(m, wmask))


def find_nonempty_wave(m: Matroid, n: Matroid) -> frozenset[int] | None:
    """First nonempty wave in size-then-lex order; loops short-circuit."""
    for e in iter_bits(m.ground):
        if not m.indep_mask(1 << e):
            return frozenset((e,))
    elems = list(iter_bits(m.ground))
    for k in range(1, len(elems) + 1):
        for combo in combinations(elems, k):
            if is_wave(m, n, combo) is not None:
                return frozenset(combo)
    return None


def _largest_by_accumulation(m: Matroid, n: Matroid) -> WaveCertificate:
    wmask = m.loops_mask()
    while True:
        found = find_nonempty_wave(m.contract(wmask), n.delete(wmask))
        if found is None:
            break
        log.debug("accumulate wave %s onto %s", sorted(found), sorted(from_mask(wmask)))
        wmask |= m.mask_of(found)
    cert = is_wave(m, n, from_mask(wmask))
    if cert is None:
        raise TheoryViolation(f"accumulated set {sorted(from_mask(wmask))} is not a wave")
    return cert


def largest_wave(
    m: Matroid,
    n: Matroid,
    *,
    method: str = "exchange",
    bound: int = DEFAULT_WAVE_BOUND,
    validate: bool = False,
) -> WaveCertificate:
    """The ⊆-largest (M, N)-wave with a witness.

    ``validate=True`` compares against the definition-level union of all
    waves (ground size at most ``bound``) and falls back to it on mismatch.
    """
    same_ground(m, n)
    if method == "exchange":
        cert = _largest_by_exchange(m, n)
    elif method == "accumulate":
        if m.ground_size > bound:
            raise CapacityError(
                f"largest_wave by accumulation is limited to {bound} edges, got {m.ground_size}", bound
            )
        cert = _largest_by_accumulation(m, n)
    else:
        raise InputError(f"unknown largest-wave method {method!r}")
    if validate:
        from .testkit import brute_wave_union

        union = brute_wave_union(m, n, bound=bound)
        if union != cert.wave_set:
            log.warning("largest_wave(%s) gave %s, oracle gave %s; using oracle",
                        method, sorted(cert.wave_set), sorted(union))
            rebuilt = is_wave(m, n, union)
            if rebuilt is None:
                raise TheoryViolation("union of all waves is not a wave")
            cert = rebuilt
    return cert


def cond(m: Matroid, n: Matroid, **wave_options) -> CondReport:
    """Does the largest wave admit a base of ``N.W`` independent in ``M|W``?"""
    wave = largest_wave(m, n, **wave_options)
    mw, nw = _wave_pair(m, n, m.mask_of(wave.wave_set))
    best = edmonds_max_common(mw, nw, audit=False).common_independent
    if len(best) == nw.full_rank:
        return CondReport(True, wave, None, best)
    return CondReport(False, wave, wave.wave_set, None)


def cond_plus(m: Matroid, n: Matroid, **wave_options) -> bool:
    report = cond(m, n, **wave_options)
    return report.holds and report.largest_wave.trivial


def one_more_edge_base(
    m: Matroid, n: Matroid, e: int, *, check: bool = True, **wave_options
) -> tuple[frozenset[int], frozenset[int]]:
    """Largest wave ``W`` of ``(M/e, N/e)`` and a common base of
    ``(M/e)|W`` and ``(N/e).W``; under cond+ of ``(M, N)`` one must exist."""
    m.check_edge(e)
    if check:
        report = cond(m, n, **wave_options)
        if not (report.holds and report.largest_wave.trivial):
            raise PreconditionError(
                "one_more_edge_base needs cond+ of the pair",
                report.counter_wave or report.largest_wave.wave_set,
            )
    me, ne = m.contract([e]), n.contract([e])
    wave = largest_wave(me, ne, **wave_options)
    mw, nw = _wave_pair(me, ne, me.mask_of(wave.wave_set))
    base = edmonds_max_common(mw, nw, audit=False).common_independent
    if not (len(base) == mw.full_rank == nw.full_rank):
        raise TheoryViolation(
            f"no common base of (M/{e})|W and (N/{e}).W for W={sorted(wave.wave_set)}"
        )
    return wave.wave_set, base


__all__ = [
    "CondReport",
    "DEFAULT_WAVE_BOUND",
    "WaveCertificate",
    "cond",
    "cond_plus",
    "find_nonempty_wave",
    "is_wave",
    "largest_wave",
    "one_more_edge_base",
]
