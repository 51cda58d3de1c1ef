"""Edge sets as Python int bitmasks.

Public functions take and return ``frozenset[int]``; the hot paths work on
masks so that memo keys are cheap and set algebra is a single operation.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def to_mask(edges: Iterable[int]) -> int:
    mask = 0
    for e in edges:
        mask |= 1 << e
    return mask


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def subsets_by_size(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, smallest first, lexicographic within a size."""
    from itertools import combinations

    elems = list(iter_bits(mask))
    for k in range(len(elems) + 1):
        for combo in combinations(elems, k):
            sub = 0
            for e in combo:
                sub |= 1 << e
            yield sub


def all_submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in no particular order (fast enumeration)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
