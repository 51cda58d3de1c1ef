from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from matroidlab import (
    DirectSum,
    Free,
    Graphic,
    InputError,
    LinearGF2,
    Partition,
    PreconditionError,
    Uniform,
    compact,
    dual,
)
from matroidlab.bits import all_submasks, from_mask, popcount, subsets_by_size
from matroidlab.testkit import bip_m, check_axioms, random_chain, same_oracle

U12 = Uniform(2, 1)
U23 = Uniform(3, 2)
LOOP1 = Uniform(1, 0)


# -- examples ---------------------------------------------------------------

def test_independence_examples():
    assert U23.is_independent({0, 1})
    assert not U23.is_independent({0, 1, 2})
    assert not LOOP1.is_independent({0})
    assert LOOP1.is_independent(())


def test_rank_examples():
    assert U23.rank({0, 1, 2}) == 2
    assert dual(U23).rank({0, 1, 2}) == 1
    assert bip_m().rank({0, 1}) == 1


def test_span_examples():
    assert U12.span({0}) == {0, 1}
    assert LOOP1.span(()) == {0}
    assert U23.span({0}) == {0}


def test_fundamental_circuit_examples():
    assert U23.fundamental_circuit(2, {0, 1}) == {0, 1, 2}
    assert U12.fundamental_circuit(1, {0}) == {0, 1}
    assert bip_m().fundamental_circuit(1, {0}) == {0, 1}


def test_fundamental_circuit_errors():
    with pytest.raises(PreconditionError):
        U23.fundamental_circuit(2, {0})  # not spanned
    with pytest.raises(PreconditionError):
        U12.fundamental_circuit(0, {0, 1})  # dependent
    with pytest.raises(InputError):
        U23.fundamental_circuit(5, {0, 1})


def test_loops_examples():
    assert LOOP1.loops() == {0}
    assert U23.loops() == frozenset()
    assert U12.contract({0}).loops() == {1}


def test_out_of_range_edge_is_input_error():
    with pytest.raises(InputError):
        U23.is_independent({3})
    with pytest.raises(InputError):
        U23.delete({0}).rank({0})


def test_constructor_validation():
    with pytest.raises(InputError):
        Uniform(2, 3)
    with pytest.raises(InputError):
        Partition([[0], [0, 1]], 1)
    with pytest.raises(InputError):
        Graphic(2, [(0, 2)])
    with pytest.raises(InputError):
        LinearGF2(["10", "1"])


def test_graphic_and_linear():
    tri = Graphic(3, [(0, 1), (1, 2), (0, 2)])
    assert same_oracle(tri, U23) == []
    selfloop = Graphic(1, [(0, 0)])
    assert selfloop.loops() == {0}
    fano = LinearGF2(["001", "010", "011", "100", "101", "110", "111"])
    assert fano.full_rank == 3
    assert not fano.is_independent({0, 1, 2})  # 001 + 010 = 011
    assert fano.is_independent({0, 1, 3})


def test_minors_keep_edge_ids():
    m = Uniform(4, 2).delete({1})
    assert m.ground_set == {0, 2, 3}
    assert m.is_independent({0, 3})
    c = compact(m)
    assert c.ground_set == {0, 1, 2}


def test_direct_sum_layout():
    s = DirectSum([U12, Free(2)])
    assert s.ground_size == 4
    assert s.full_rank == 3
    assert not s.is_independent({0, 1})
    assert s.is_independent({0, 2, 3})


def test_double_dual_is_identity():
    assert dual(dual(U23)) is U23


def test_subset_order_is_size_then_lex():
    order = [sorted(from_mask(s)) for s in subsets_by_size(0b111)]
    assert order == [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]


# -- properties -------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)
sizes = st.integers(min_value=0, max_value=7)


@given(seeds, sizes)
def test_chains_satisfy_axioms(seed, n):
    m = random_chain(random.Random(seed), n)
    assert check_axioms(m) == []


@given(seeds, sizes)
def test_dual_rank_identity(seed, n):
    m = random_chain(random.Random(seed), n)
    d = dual(m)
    full = m.ground
    for s in all_submasks(full):
        assert d.rank_mask(s) == popcount(s) - m.full_rank + m.rank_mask(full & ~s)
    assert same_oracle(dual(d), m) == []


@given(seeds, st.integers(min_value=2, max_value=7))
def test_delete_contract_commute(seed, n):
    rng = random.Random(seed)
    m = random_chain(rng, n)
    edges = sorted(m.ground_set)
    c = set(rng.sample(edges, rng.randint(0, n // 2)))
    d = set(rng.sample([e for e in edges if e not in c], rng.randint(0, (n - len(c)) // 2)))
    assert same_oracle(m.contract(c).delete(d), m.delete(d).contract(c)) == []


@given(seeds, sizes)
def test_span_is_a_closure(seed, n):
    rng = random.Random(seed)
    m = random_chain(rng, n)
    s = {e for e in m.ground_set if rng.random() < 0.4}
    t = s | {e for e in m.ground_set if rng.random() < 0.4}
    span_s = m.span(s)
    assert s <= span_s
    assert span_s <= m.span(t)
    assert m.span(span_s) == span_s
    assert m.rank(span_s) == m.rank(s)


@given(seeds, sizes)
def test_base_is_maximal_independent(seed, n):
    m = random_chain(random.Random(seed), n)
    b = m.base()
    assert m.is_independent(b) and len(b) == m.full_rank and m.spans(b)
