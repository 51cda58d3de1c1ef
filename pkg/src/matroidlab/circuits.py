"""Circuit-level operations: circuit tests, strong elimination, and the
fundamental-circuit lookup used when a whole circuit lies in a span."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .bits import from_mask, iter_bits, popcount
from .errors import InputError, TheoryViolation
from .matroid import Matroid


def is_circuit_mask(m: Matroid, mask: int) -> bool:
    if not mask or m.indep_mask(mask):
        return False
    return all(m.indep_mask(mask & ~(1 << x)) for x in iter_bits(mask))


def is_circuit(m: Matroid, edges: Iterable[int]) -> bool:
    return is_circuit_mask(m, m.mask_of(edges))


def strong_circuit_eliminate(
    m: Matroid, c1: Iterable[int], c2: Iterable[int], keep: int, remove: int
) -> frozenset[int]:
    """Circuit ``C3`` with ``keep in C3 ⊆ (c1 ∪ c2) - remove``.

    Search is brute force over subsets of ``(c1 ∪ c2) - remove`` that contain
    ``keep``, smallest first and lexicographic within a size, so the answer is
    deterministic.
    """
    a, b = m.mask_of(c1), m.mask_of(c2)
    m.check_edge(keep)
    m.check_edge(remove)
    if not is_circuit_mask(m, a) or not is_circuit_mask(m, b):
        raise InputError("strong elimination needs two circuits")
    kbit, rbit = 1 << keep, 1 << remove
    if not (a & kbit) or (b & kbit):
        raise InputError(f"keep edge {keep} must lie in c1 but not in c2")
    if not (a & b & rbit):
        raise InputError(f"remove edge {remove} must lie in both circuits")
    pool = [x for x in iter_bits((a | b) & ~rbit & ~kbit)]
    for k in range(len(pool) + 1):
        for combo in combinations(pool, k):
            cand = kbit
            for x in combo:
                cand |= 1 << x
            if is_circuit_mask(m, cand):
                return from_mask(cand)
    raise TheoryViolation(
        f"strong circuit elimination found no circuit through {keep} in {sorted(from_mask(a | b))} - {remove}"
    )


def _simple_find_by_induction(m: Matroid, indep: int, circ: int, e: int) -> int:
    """Induction on ``|C - I|``: pick the smallest ``g`` outside ``I``; either
    it works, or eliminate ``g`` between ``C`` and ``C(g, I)`` keeping ``e``."""
    ebit = 1 << e
    while True:
        outside = circ & ~indep
        g = next(iter_bits(outside))
        if popcount(outside) == 1:
            return g
        fund = m.circuit_mask(g, indep)
        if fund & ebit:
            return g
        circ = m.mask_of(strong_circuit_eliminate(m, from_mask(circ), from_mask(fund), e, g))


def circuit_simple_find(m: Matroid, indep: Iterable[int], circ: Iterable[int], e: int) -> int:
    """Smallest ``f`` in ``circ - indep`` whose fundamental circuit against
    ``indep`` passes through ``e``.

    Preconditions: ``indep`` independent, ``circ`` a circuit inside
    ``span(indep)``, and ``e`` in both.
    """
    imask, cmask = m.mask_of(indep), m.mask_of(circ)
    m.check_edge(e)
    if not m.indep_mask(imask):
        raise InputError("circuit_simple_find needs an independent set")
    if not is_circuit_mask(m, cmask):
        raise InputError(f"{sorted(from_mask(cmask))} is not a circuit")
    if cmask & ~m.span_mask(imask):
        raise InputError("the circuit is not contained in the span of the independent set")
    ebit = 1 << e
    if not (imask & cmask & ebit):
        raise InputError(f"edge {e} must lie in both the circuit and the independent set")
    found = _simple_find_by_induction(m, imask, cmask, e)
    for f in iter_bits(cmask & ~imask):
        if m.circuit_mask(f, imask) & ebit:
            if not m.circuit_mask(found, imask) & ebit:
                raise TheoryViolation(f"induction returned {found}, whose circuit misses {e}")
            return f
    raise TheoryViolation(f"no edge of the circuit outside I has {e} in its fundamental circuit")
