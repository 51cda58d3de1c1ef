"""Brute-force oracles, fixture catalog, and seeded instance generators.

Everything here works by subset enumeration and never calls the exchange
digraph or wave machinery, so it can referee those modules.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .bits import all_submasks, from_mask, iter_bits, popcount
from .errors import CapacityError
from .matroid import (
    DirectSum,
    Free,
    Graphic,
    LinearGF2,
    Matroid,
    Partition,
    Uniform,
    compact,
    dual,
    same_ground,
)

AXIOM_BOUND = 8
ORACLE_BOUND = 9


def _guard(m: Matroid, bound: int, what: str) -> None:
    if m.ground_size > bound:
        raise CapacityError(f"{what} enumerates subsets and is limited to {bound} edges, got {m.ground_size}", bound)


# -- axiom checking -------------------------------------------------------

def check_axioms(m: Matroid, bound: int = AXIOM_BOUND, limit: int = 20) -> list[str]:
    """Exhaustively test the independence axioms and weak circuit elimination.

    Returns at most ``limit`` violation messages; empty means all hold.
    """
    _guard(m, bound, "check_axioms")
    out: list[str] = []

    def report(msg: str) -> bool:
        out.append(msg)
        return len(out) >= limit

    subs = list(all_submasks(m.ground))
    indep = {s: m.indep_mask(s) for s in subs}
    if not indep[0]:
        report("the empty set is dependent")
    for s in subs:
        if not indep[s]:
            continue
        for e in iter_bits(s):
            if not indep[s & ~(1 << e)]:
                if report(f"downward closure: {sorted(from_mask(s))} independent but "
                          f"{sorted(from_mask(s & ~(1 << e)))} dependent"):
                    return out
    by_size: dict[int, list[int]] = {}
    for s in subs:
        if indep[s]:
            by_size.setdefault(popcount(s), []).append(s)
    for k, smalls in by_size.items():
        for i in smalls:
            for j in by_size.get(k + 1, ()):
                if not any(indep[i | (1 << e)] for e in iter_bits(j & ~i)):
                    if report(f"exchange: no e in {sorted(from_mask(j))} - {sorted(from_mask(i))} "
                              f"extends {sorted(from_mask(i))}"):
                        return out
    circuits = [s for s in subs if s and not indep[s]
                and all(indep[s & ~(1 << e)] for e in iter_bits(s))]
    for a_idx, c1 in enumerate(circuits):
        for c2 in circuits[a_idx + 1:]:
            for f in iter_bits(c1 & c2):
                if indep[(c1 | c2) & ~(1 << f)]:
                    if report(f"circuit elimination: {sorted(from_mask(c1))}, {sorted(from_mask(c2))} "
                              f"minus {f} is independent"):
                        return out
    return out


def same_oracle(a: Matroid, b: Matroid, bound: int = 12) -> list[frozenset[int]]:
    """Subsets on which two oracles on the same ground disagree."""
    same_ground(a, b)
    _guard(a, bound, "same_oracle")
    return [from_mask(s) for s in all_submasks(a.ground) if a.indep_mask(s) != b.indep_mask(s)]


class Mutated(Matroid):
    """Wrap ``inner`` and flip its independence answer on chosen subsets."""

    kind = "mutated"

    def __init__(self, inner: Matroid, flips: Iterable[Iterable[int]]):
        super().__init__(inner.universe, inner.ground)
        self.inner = inner
        self.flips = frozenset(inner.mask_of(f) for f in flips)

    def _indep(self, mask: int) -> bool:
        ans = self.inner.indep_mask(mask)
        return (not ans) if mask in self.flips else ans

    def __repr__(self) -> str:
        return f"Mutated({self.inner!r}, {[sorted(from_mask(f)) for f in self.flips]})"


# -- brute-force oracles --------------------------------------------------

def brute_max_common(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> int:
    same_ground(m, n)
    _guard(m, bound, "brute_max_common")
    return max(popcount(s) for s in all_submasks(m.ground) if m.indep_mask(s) and n.indep_mask(s))


def _bases_of(m: Matroid, wmask: int) -> Iterator[int]:
    for b in all_submasks(wmask):
        if m.indep_mask(b) and all(not m.indep_mask(b | (1 << e)) for e in iter_bits(wmask & ~b)):
            yield b


def brute_is_wave(m: Matroid, n: Matroid, wmask: int) -> int | None:
    """A witness mask if ``wmask`` is a wave, else ``None``."""
    nw = n.contract_onto(wmask)
    for b in _bases_of(m, wmask):
        if nw.indep_mask(b):
            return b
    return None


def brute_waves(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> list[int]:
    same_ground(m, n)
    _guard(m, bound, "brute_waves")
    return [w for w in all_submasks(m.ground) if brute_is_wave(m, n, w) is not None]


def brute_wave_union(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> frozenset[int]:
    union = 0
    for w in brute_waves(m, n, bound):
        union |= w
    return from_mask(union)


def brute_cond(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> bool:
    """cond(M, N) straight from its definition: every wave has a base of
    ``N.W`` that is independent in ``M|W``."""
    for w in brute_waves(m, n, bound):
        nw = n.contract_onto(w)
        if not any(m.indep_mask(b) for b in _bases_of(nw, w)):
            return False
    return True


def brute_exists_ind_span(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> bool:
    same_ground(m, n)
    _guard(m, bound, "brute_exists_ind_span")
    full = n.full_rank
    return any(m.indep_mask(s) and n.rank_mask(s) == full for s in all_submasks(m.ground))


def brute_ind_span_sets(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> list[frozenset[int]]:
    same_ground(m, n)
    _guard(m, bound, "brute_ind_span_sets")
    return [from_mask(b) for b in _bases_of(n, m.ground) if m.indep_mask(b)]


def brute_exists_common_base(m: Matroid, n: Matroid, bound: int = ORACLE_BOUND) -> bool:
    same_ground(m, n)
    _guard(m, bound, "brute_exists_common_base")
    return any(n.indep_mask(b) and popcount(b) == n.full_rank for b in _bases_of(m, m.ground))


# -- fixtures -------------------------------------------------------------

U12 = lambda: Uniform(2, 1)  # noqa: E731
U23 = lambda: Uniform(3, 2)  # noqa: E731
FREE1 = lambda: Free(1)  # noqa: E731
FREE2 = lambda: Free(2)  # noqa: E731
LOOP1 = lambda: Uniform(1, 0)  # noqa: E731


def bip_m() -> Matroid:
    return Partition([[0, 1], [2]], 1)


def bip_n() -> Matroid:
    return Partition([[0], [1, 2]], 1)


def triangle() -> Matroid:
    return Graphic(3, [(0, 1), (1, 2), (0, 2)])


def fixture_catalog() -> dict[str, tuple[Matroid, Matroid]]:
    """Named pairs on a common dense ground set."""
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    fano_cols = ["001", "010", "011", "100", "101", "110", "111"]
    return {
        "BIP": (bip_m(), bip_n()),
        "U12/FREE2": (U12(), FREE2()),
        "FREE2/U12": (FREE2(), U12()),
        "LOOP1/LOOP1": (LOOP1(), LOOP1()),
        "LOOP1/FREE1": (LOOP1(), FREE1()),
        "FREE1/FREE1": (FREE1(), FREE1()),
        "FREE2/FREE2": (FREE2(), FREE2()),
        "U23/U23": (U23(), U23()),
        "U33/U33": (Uniform(3, 3), Uniform(3, 3)),
        "triangle/U23": (triangle(), U23()),
        "triangle/U13": (triangle(), Uniform(3, 1)),
        "K4/K4*": (Graphic(4, k4), dual(Graphic(4, k4))),
        "K4/U64": (Graphic(4, k4), Uniform(6, 4)),
        "fano/U73": (LinearGF2(fano_cols), Uniform(7, 3)),
        "fano/fano*": (LinearGF2(fano_cols), dual(LinearGF2(fano_cols))),
        "parallel/U31": (Graphic(2, [(0, 1), (0, 1), (0, 1)]), Uniform(3, 1)),
        "loopy-graph/free": (Graphic(2, [(0, 0), (0, 1), (1, 1), (0, 1)]), Free(4)),
        "partition/graphic": (Partition([[0, 1, 2], [3, 4]], [2, 1]),
                              Graphic(3, [(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)])),
        "sum/sum": (DirectSum([U23(), U12()]), DirectSum([U12(), U23()])),
        "U24/U24*": (Uniform(4, 2), dual(Uniform(4, 2))),
        "U14/U34": (Uniform(4, 1), Uniform(4, 3)),
        "empty": (Free(0), Free(0)),
    }


# -- random generators ----------------------------------------------------

def random_uniform(rng: random.Random, n: int) -> Matroid:
    if n >= 2 and rng.random() < 0.8:
        return Uniform(n, rng.randint(1, n - 1))
    return Uniform(n, rng.randint(0, n))


def random_partition(rng: random.Random, n: int) -> Matroid:
    k = rng.randint(1, max(1, n))
    blocks: list[list[int]] = [[] for _ in range(k)]
    for e in range(n):
        blocks[rng.randrange(k)].append(e)
    blocks = [b for b in blocks if b] or [[]]
    caps = [rng.randint(0 if rng.random() < 0.1 else min(1, len(b)), len(b)) for b in blocks]
    return Partition(blocks, caps)


def random_graphic(rng: random.Random, n: int) -> Matroid:
    v = rng.randint(1, max(2, n))
    return Graphic(v, [(rng.randrange(v), rng.randrange(v)) for _ in range(n)])


def random_linear(rng: random.Random, n: int) -> Matroid:
    rows = rng.randint(1, max(1, n))
    return LinearGF2(["".join(rng.choice("01") for _ in range(rows)) for _ in range(n)])


BASE_BUILDERS: tuple[Callable[[random.Random, int], Matroid], ...] = (
    random_uniform,
    random_partition,
    random_graphic,
    random_linear,
)


def random_base(rng: random.Random, n: int) -> Matroid:
    return rng.choice(BASE_BUILDERS)(rng, n)


def random_chain(rng: random.Random, n: int, max_depth: int = 3) -> Matroid:
    """Random combinator chain of depth at most ``max_depth`` with dense
    ground ``[0, n)``."""
    depth = rng.randint(0, max_depth)
    ops: list[tuple[str, int]] = []
    size = n
    for _ in range(depth):
        op = rng.choice(("dual", "delete", "contract", "direct_sum"))
        if op == "direct_sum" and size == 0:
            op = "dual"
        k = 0
        if op in ("delete", "contract"):
            k = rng.randint(1, 2)
            size += k
        elif op == "direct_sum":
            k = rng.randint(1, size)
            size -= k
        ops.append((op, k))
    m = random_base(rng, size)
    for op, k in reversed(ops):
        if op == "dual":
            m = dual(m)
        elif op in ("delete", "contract"):
            chosen = rng.sample(sorted(m.ground_set), k)
            m = compact(m.delete(chosen) if op == "delete" else m.contract(chosen))
        else:
            other = random_base(rng, k)
            m = DirectSum([m, other] if rng.random() < 0.5 else [other, m])
    return compact(m)


def random_pair(rng: random.Random, n: int, max_depth: int = 3) -> tuple[Matroid, Matroid]:
    return random_chain(rng, n, max_depth), random_chain(rng, n, max_depth)


@dataclass(frozen=True)
class Instance:
    name: str
    m: Matroid
    n: Matroid


def random_corpus(seed: int, count: int, max_size: int = ORACLE_BOUND, min_size: int = 0) -> list[Instance]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        # skew toward the larger end, where the interesting instances live
        lo = max(min_size, (min_size + max_size) // 2)
        size = rng.randint(min_size, max_size) if rng.random() < 0.4 else rng.randint(lo, max_size)
        m, n = random_pair(rng, size)
        out.append(Instance(f"random-{seed}-{k}", m, n))
    return out


def catalog_corpus() -> list[Instance]:
    return [Instance(name, m, n) for name, (m, n) in fixture_catalog().items()]


def random_mutation(rng: random.Random, m: Matroid) -> Mutated:
    """Flip the independence answer of one random subset."""
    elems = sorted(m.ground_set)
    subset = [e for e in elems if rng.random() < 0.5]
    return Mutated(m, [subset])


__all__ = [
    "AXIOM_BOUND",
    "Instance",
    "Mutated",
    "ORACLE_BOUND",
    "brute_cond",
    "brute_exists_common_base",
    "brute_exists_ind_span",
    "brute_ind_span_sets",
    "brute_is_wave",
    "brute_max_common",
    "brute_wave_union",
    "brute_waves",
    "catalog_corpus",
    "check_axioms",
    "fixture_catalog",
    "random_base",
    "random_chain",
    "random_corpus",
    "random_mutation",
    "random_pair",
    "same_oracle",
]
