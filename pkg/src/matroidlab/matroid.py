"""Immutable matroid independence oracles on finite ground sets.

Every matroid lives in an index space ``[0, universe)`` and owns a ground
set inside it.  Base constructions have the dense ground ``[0, n)``.  Minors
keep the parent's edge ids, so ``M / X`` and ``N / X`` still share a ground
set and quotient results lift back to the parent without relabelling.
:func:`compact` produces a dense copy when one is needed.

Combinators are lazy: a query against ``dual(contract(M, C))`` is rewritten
into rank queries against ``M``; nothing materialises a family of sets.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .bits import from_mask, iter_bits, popcount
from .errors import InputError, PreconditionError


class Matroid:
    """Independence oracle.  Subclasses override ``_indep`` or ``_rank``."""

    kind = "matroid"

    def __init__(self, universe: int, ground: int):
        self.universe = universe
        self.ground = ground
        # Keyed by bitmask.  Plain dict writes are atomic under the GIL, and
        # two threads racing on the same key store the same answer.
        self._indep_memo: dict[int, bool] = {}
        self._rank_memo: dict[int, int] = {}
        self._full_rank: int | None = None

    # -- mask level -----------------------------------------------------

    def _indep(self, mask: int) -> bool:
        return self.rank_mask(mask) == popcount(mask)

    def _rank(self, mask: int) -> int:
        return popcount(self.base_mask(mask))

    def indep_mask(self, mask: int) -> bool:
        ans = self._indep_memo.get(mask)
        if ans is None:
            ans = self._indep_memo[mask] = self._indep(mask)
        return ans

    def rank_mask(self, mask: int) -> int:
        ans = self._rank_memo.get(mask)
        if ans is None:
            ans = self._rank_memo[mask] = self._rank(mask)
        return ans

    def base_mask(self, mask: int) -> int:
        """Greedy base of ``mask`` taking edges in increasing index order."""
        base = 0
        for e in iter_bits(mask):
            cand = base | (1 << e)
            if self.indep_mask(cand):
                base = cand
        return base

    def span_mask(self, mask: int) -> int:
        base = self.base_mask(mask)
        out = mask
        for e in iter_bits(self.ground & ~mask):
            if not self.indep_mask(base | (1 << e)):
                out |= 1 << e
        return out

    def circuit_mask(self, e: int, indep: int) -> int:
        """Fundamental circuit of ``e`` against independent ``indep`` (masks)."""
        bit = 1 << e
        if not self.indep_mask(indep):
            raise PreconditionError("fundamental circuit needs an independent set")
        if indep & bit:
            raise PreconditionError(f"edge {e} already lies in the independent set")
        if self.indep_mask(indep | bit):
            raise PreconditionError(f"no circuit: edge {e} is not spanned")
        circ = bit
        for g in iter_bits(indep):
            if self.indep_mask((indep & ~(1 << g)) | bit):
                circ |= 1 << g
        return circ

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank_mask(self.ground)
        return self._full_rank

    # -- validation -----------------------------------------------------

    def mask_of(self, edges: Iterable[int]) -> int:
        """Convert an edge collection to a mask, rejecting foreign edges."""
        mask = 0
        for e in edges:
            if isinstance(e, bool) or not isinstance(e, int):
                raise InputError(f"edge ids must be integers, got {e!r}")
            if e < 0 or not (self.ground >> e) & 1:
                raise InputError(f"edge {e} is not in the ground set of {self!r}")
            mask |= 1 << e
        return mask

    def check_edge(self, e: int) -> int:
        self.mask_of((e,))
        return e

    # -- public queries -------------------------------------------------

    @property
    def ground_set(self) -> frozenset[int]:
        return from_mask(self.ground)

    @property
    def ground_size(self) -> int:
        return popcount(self.ground)

    def is_independent(self, edges: Iterable[int]) -> bool:
        return self.indep_mask(self.mask_of(edges))

    def rank(self, edges: Iterable[int] | None = None) -> int:
        if edges is None:
            return self.full_rank
        return self.rank_mask(self.mask_of(edges))

    def span(self, edges: Iterable[int]) -> frozenset[int]:
        return from_mask(self.span_mask(self.mask_of(edges)))

    def spans(self, edges: Iterable[int], target: Iterable[int] | None = None) -> bool:
        """True if ``edges`` spans ``target`` (default: the whole ground set)."""
        tmask = self.ground if target is None else self.mask_of(target)
        return tmask & ~self.span_mask(self.mask_of(edges)) == 0

    def base(self, edges: Iterable[int] | None = None) -> frozenset[int]:
        mask = self.ground if edges is None else self.mask_of(edges)
        return from_mask(self.base_mask(mask))

    def fundamental_circuit(self, e: int, indep: Iterable[int]) -> frozenset[int]:
        """The unique circuit inside ``indep + e`` through ``e``."""
        self.check_edge(e)
        return from_mask(self.circuit_mask(e, self.mask_of(indep)))

    def loops(self) -> frozenset[int]:
        return frozenset(e for e in iter_bits(self.ground) if not self.indep_mask(1 << e))

    def loops_mask(self) -> int:
        out = 0
        for e in iter_bits(self.ground):
            if not self.indep_mask(1 << e):
                out |= 1 << e
        return out

    # -- minors ---------------------------------------------------------

    def delete(self, edges: Iterable[int] | int) -> Matroid:
        return delete(self, edges)

    def contract(self, edges: Iterable[int] | int) -> Matroid:
        return contract(self, edges)

    def restrict(self, edges: Iterable[int] | int) -> Matroid:
        """``M`` restricted to ``edges``: delete everything else."""
        mask = edges if isinstance(edges, int) else self.mask_of(edges)
        return delete(self, self.ground & ~mask)

    def contract_onto(self, edges: Iterable[int] | int) -> Matroid:
        """``M.X``: contract everything outside ``edges``."""
        mask = edges if isinstance(edges, int) else self.mask_of(edges)
        return contract(self, self.ground & ~mask)

    def dual(self) -> Matroid:
        return dual(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.kind} |E|={self.ground_size}>"


def _dense(n: int) -> int:
    return (1 << n) - 1


class Uniform(Matroid):
    kind = "uniform"

    def __init__(self, n: int, r: int):
        if n < 0 or not 0 <= r <= n:
            raise InputError(f"uniform matroid needs 0 <= rank <= n, got n={n} rank={r}")
        super().__init__(n, _dense(n))
        self.n = n
        self.r = r

    def _indep(self, mask: int) -> bool:
        return popcount(mask) <= self.r

    def _rank(self, mask: int) -> int:
        return min(popcount(mask), self.r)

    def __repr__(self) -> str:
        return f"Uniform({self.n}, {self.r})"


class Free(Uniform):
    kind = "free"

    def __init__(self, n: int):
        super().__init__(n, n)

    def __repr__(self) -> str:
        return f"Free({self.n})"


class Partition(Matroid):
    """Partition matroid: at most ``caps[i]`` edges from block ``i``."""

    kind = "partition"

    def __init__(self, blocks: Sequence[Sequence[int]], caps: Sequence[int] | int):
        if isinstance(caps, int):
            caps = [caps] * len(blocks)
        if len(caps) != len(blocks):
            raise InputError("partition matroid needs one cap per block")
        seen: set[int] = set()
        for block in blocks:
            for e in block:
                if not isinstance(e, int) or e < 0:
                    raise InputError(f"bad edge id {e!r} in partition block")
                if e in seen:
                    raise InputError(f"edge {e} appears in two partition blocks")
                seen.add(e)
        n = len(seen)
        if seen != set(range(n)):
            raise InputError("partition blocks must cover 0..n-1 exactly")
        if any(c < 0 for c in caps):
            raise InputError("partition caps must be non-negative")
        super().__init__(n, _dense(n))
        self.blocks = tuple(tuple(sorted(b)) for b in blocks)
        self.caps = tuple(caps)
        self._block_masks = [sum(1 << e for e in b) for b in self.blocks]

    def _indep(self, mask: int) -> bool:
        return all(popcount(mask & b) <= c for b, c in zip(self._block_masks, self.caps))

    def _rank(self, mask: int) -> int:
        return sum(min(popcount(mask & b), c) for b, c in zip(self._block_masks, self.caps))

    def __repr__(self) -> str:
        return f"Partition({[list(b) for b in self.blocks]}, {list(self.caps)})"


class Graphic(Matroid):
    """Cycle matroid of a multigraph; edge ``i`` joins ``edges[i]``."""

    kind = "graphic"

    def __init__(self, vertices: int, edges: Sequence[Sequence[int]]):
        ends = []
        for i, pair in enumerate(edges):
            if len(pair) != 2:
                raise InputError(f"graphic edge {i} must have two endpoints")
            u, v = pair
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise InputError(f"graphic edge {i} has an endpoint outside 0..{vertices - 1}")
            ends.append((u, v))
        super().__init__(len(ends), _dense(len(ends)))
        self.vertices = vertices
        self.edges = tuple(ends)

    def _rank(self, mask: int) -> int:
        parent = list(range(self.vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        r = 0
        for i in iter_bits(mask):
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                r += 1
        return r

    def __repr__(self) -> str:
        return f"Graphic({self.vertices}, {[list(e) for e in self.edges]})"


class LinearGF2(Matroid):
    """Column matroid of a 0/1 matrix over GF(2); columns given as bit strings."""

    kind = "linear_gf2"

    def __init__(self, columns: Sequence[str]):
        cols = []
        width = None
        for i, col in enumerate(columns):
            if not isinstance(col, str) or not col or set(col) - {"0", "1"}:
                raise InputError(f"column {i} must be a non-empty string of 0/1")
            if width is None:
                width = len(col)
            elif len(col) != width:
                raise InputError(f"column {i} has length {len(col)}, expected {width}")
            cols.append(int(col, 2))
        super().__init__(len(cols), _dense(len(cols)))
        self.columns = tuple(columns)
        self._cols = cols

    def _rank(self, mask: int) -> int:
        # xor basis indexed by leading bit
        basis: dict[int, int] = {}
        for i in iter_bits(mask):
            v = self._cols[i]
            while v:
                top = v.bit_length() - 1
                if top in basis:
                    v ^= basis[top]
                else:
                    basis[top] = v
                    break
        return len(basis)

    def __repr__(self) -> str:
        return f"LinearGF2({list(self.columns)})"


class Relabeled(Matroid):
    """Dense copy of ``inner``: new edge ``i`` is the ``i``-th ground edge of inner."""

    kind = "relabeled"

    def __init__(self, inner: Matroid):
        self.inner = inner
        self.old_ids = tuple(iter_bits(inner.ground))
        super().__init__(len(self.old_ids), _dense(len(self.old_ids)))

    def to_inner(self, mask: int) -> int:
        out = 0
        old = self.old_ids
        for i in iter_bits(mask):
            out |= 1 << old[i]
        return out

    def _indep(self, mask: int) -> bool:
        return self.inner.indep_mask(self.to_inner(mask))

    def _rank(self, mask: int) -> int:
        return self.inner.rank_mask(self.to_inner(mask))

    def __repr__(self) -> str:
        return f"Relabeled({self.inner!r})"


def compact(m: Matroid) -> Matroid:
    """Return ``m`` if its ground is already ``[0, n)``, else a dense relabelling."""
    if m.ground == _dense(m.ground_size):
        return m
    return Relabeled(m)


class DirectSum(Matroid):
    """Direct sum; part ``k`` occupies the next ``|E(part k)|`` edge ids."""

    kind = "direct_sum"

    def __init__(self, parts: Sequence[Matroid]):
        self.parts = tuple(compact(p) for p in parts)
        offsets = []
        off = 0
        for p in self.parts:
            offsets.append(off)
            off += p.ground_size
        self.offsets = tuple(offsets)
        super().__init__(off, _dense(off))

    def _split(self, mask: int):
        for p, off in zip(self.parts, self.offsets):
            yield p, (mask >> off) & p.ground

    def _indep(self, mask: int) -> bool:
        return all(p.indep_mask(sub) for p, sub in self._split(mask))

    def _rank(self, mask: int) -> int:
        return sum(p.rank_mask(sub) for p, sub in self._split(mask))

    def __repr__(self) -> str:
        return f"DirectSum({list(self.parts)})"


class Dual(Matroid):
    """``S`` is independent in the dual iff ``E - S`` spans ``M``."""

    kind = "dual"

    def __init__(self, inner: Matroid):
        super().__init__(inner.universe, inner.ground)
        self.inner = inner

    def _indep(self, mask: int) -> bool:
        return self.inner.rank_mask(self.ground & ~mask) == self.inner.full_rank

    def _rank(self, mask: int) -> int:
        inner = self.inner
        return popcount(mask) - inner.full_rank + inner.rank_mask(self.ground & ~mask)

    def __repr__(self) -> str:
        return f"Dual({self.inner!r})"


class Delete(Matroid):
    kind = "delete"

    def __init__(self, inner: Matroid, removed: int):
        super().__init__(inner.universe, inner.ground & ~removed)
        self.inner = inner
        self.removed = removed

    def _indep(self, mask: int) -> bool:
        return self.inner.indep_mask(mask)

    def _rank(self, mask: int) -> int:
        return self.inner.rank_mask(mask)

    def __repr__(self) -> str:
        return f"Delete({self.inner!r}, {sorted(from_mask(self.removed))})"


class Contract(Matroid):
    """``S`` is independent in ``M / C`` iff ``S`` plus a base of ``C`` is."""

    kind = "contract"

    def __init__(self, inner: Matroid, contracted: int):
        super().__init__(inner.universe, inner.ground & ~contracted)
        self.inner = inner
        self.contracted = contracted
        self._cbase = inner.base_mask(contracted)
        self._crank = popcount(self._cbase)

    def _indep(self, mask: int) -> bool:
        return self.inner.indep_mask(mask | self._cbase)

    def _rank(self, mask: int) -> int:
        return self.inner.rank_mask(mask | self._cbase) - self._crank

    def __repr__(self) -> str:
        return f"Contract({self.inner!r}, {sorted(from_mask(self.contracted))})"


def _as_mask(m: Matroid, edges: Iterable[int] | int) -> int:
    if isinstance(edges, int) and not isinstance(edges, bool):
        if edges & ~m.ground:
            raise InputError(f"edges {sorted(from_mask(edges & ~m.ground))} are not in the ground set")
        return edges
    return m.mask_of(edges)


def delete(m: Matroid, edges: Iterable[int] | int) -> Matroid:
    """``M - X``.  Nested deletions collapse into one layer."""
    mask = _as_mask(m, edges)
    if not mask:
        return m
    if isinstance(m, Delete):
        return Delete(m.inner, m.removed | mask)
    return Delete(m, mask)


def contract(m: Matroid, edges: Iterable[int] | int) -> Matroid:
    """``M / X``.  Nested contractions collapse into one layer."""
    mask = _as_mask(m, edges)
    if not mask:
        return m
    if isinstance(m, Contract):
        return Contract(m.inner, m.contracted | mask)
    return Contract(m, mask)


def dual(m: Matroid) -> Matroid:
    if isinstance(m, Dual):
        return m.inner
    return Dual(m)


def restrict(m: Matroid, edges: Iterable[int] | int) -> Matroid:
    return m.restrict(edges)


def contract_onto(m: Matroid, edges: Iterable[int] | int) -> Matroid:
    return m.contract_onto(edges)


def same_ground(m: Matroid, n: Matroid) -> None:
    if m.ground != n.ground:
        raise InputError(
            f"matroids have different ground sets: {sorted(m.ground_set)} vs {sorted(n.ground_set)}"
        )
