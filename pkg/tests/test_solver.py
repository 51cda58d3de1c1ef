from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from matroidlab import (
    AugmentingPath,
    Free,
    PreconditionError,
    Uniform,
    aug_nice_extend,
    claim_instrumentation,
    common_base_solve,
    cond,
    cond_plus,
    dual_transfer_check,
    edmonds_max_common,
    feasibility,
    find_augmenting_path,
    ind_span_solve,
    intersect_solve,
    key_lemma,
    key_lemma_run,
    nice_extension,
)
from matroidlab.testkit import (
    bip_m,
    bip_n,
    brute_exists_common_base,
    brute_exists_ind_span,
    random_pair,
)

U12, U23, FREE1, FREE2, LOOP1 = Uniform(2, 1), Uniform(3, 2), Free(1), Free(2), Uniform(1, 0)
BIP = (bip_m(), bip_n())
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_feasibility_examples():
    r = feasibility(FREE2, FREE2, {0})
    assert r.feasible and not r.nice
    assert not feasibility(U12, FREE2, ()).feasible
    r = feasibility(FREE2, U12, ())
    assert r.feasible and r.nice
    r = feasibility(U12, U12, {0, 1})
    assert not r.feasible and r.reason == "dependent in M"


def test_nice_extension_examples():
    assert nice_extension(FREE2, FREE2) == {0, 1}
    assert nice_extension(FREE2, U12) == frozenset()
    assert nice_extension(LOOP1, LOOP1) == frozenset()
    with pytest.raises(PreconditionError):
        nice_extension(U12, FREE2)


def test_aug_nice_extend_examples():
    with pytest.raises(PreconditionError):
        aug_nice_extend(FREE2, FREE2, (), AugmentingPath((0,)))
    assert aug_nice_extend(FREE2, U12, (), AugmentingPath((0,)), check_post=True) == {0}


def test_key_lemma_examples():
    assert key_lemma(FREE2, U12, 0) == {0}
    # FREE1 pairs have a nontrivial largest wave, so cond+ fails
    with pytest.raises(PreconditionError) as info:
        key_lemma(FREE1, FREE1, 0)
    assert info.value.wave == {0}
    i, _ = key_lemma_run(Uniform(3, 3), Uniform(3, 3), 2, check=False)
    assert 2 in i


def test_ind_span_examples():
    out = ind_span_solve(FREE2, U12)
    assert out.found and out.payload == {0}
    out = ind_span_solve(U12, FREE2)
    assert out.status == "violated" and out.counter_wave == {0, 1}
    out = ind_span_solve(U23, U23)
    assert out.found and len(out.payload) == 2


def test_intersect_examples():
    out = intersect_solve(*BIP)
    assert out.payload == {0, 2} and out.certificate.validate(*BIP) == []
    out = intersect_solve(U12, FREE2)
    assert out.payload == {0}
    assert out.certificate.part_m == {0, 1} and out.certificate.part_n == frozenset()
    out = intersect_solve(LOOP1, LOOP1)
    assert out.payload == frozenset() and out.certificate.part_m == {0}


def test_common_base_examples():
    assert common_base_solve(U23, U23).payload == {0, 1}
    assert common_base_solve(*BIP).payload == {0, 2}
    out = common_base_solve(U12, FREE2)
    assert out.status == "violated" and out.side == "M,N"


def test_dual_transfer_examples():
    assert dual_transfer_check(U23, U23)
    assert dual_transfer_check(U12, FREE2)
    assert dual_transfer_check(LOOP1, LOOP1)


def test_single_step_trace_is_clean():
    m = Free(2)
    _, trace = key_lemma_run(m, Uniform(2, 0), 0)
    assert len(trace.steps) == 1 and claim_instrumentation(trace, m, Uniform(2, 0)) == []


@given(seeds, st.integers(min_value=0, max_value=7))
def test_solvers_agree_with_cond_and_brute_force(seed, size):
    m, n = random_pair(random.Random(seed), size)
    out = ind_span_solve(m, n)
    assert out.found == brute_exists_ind_span(m, n) == cond(m, n).holds
    both = cond(m, n).holds and cond(n, m).holds
    assert common_base_solve(m, n).found == brute_exists_common_base(m, n) == both


@given(seeds, st.integers(min_value=0, max_value=7))
def test_intersect_certificate(seed, size):
    m, n = random_pair(random.Random(seed), size)
    out = intersect_solve(m, n)
    assert out.certificate.validate(m, n) == []
    assert len(out.payload) == len(edmonds_max_common(m, n).common_independent)
    assert dual_transfer_check(m, n)


@given(seeds, st.integers(min_value=1, max_value=7))
def test_extensions_are_nice(seed, size):
    rng = random.Random(seed)
    m, n = random_pair(rng, size)
    if not cond(m, n).holds:
        return
    b = nice_extension(m, n)
    assert feasibility(m, n, b).nice
    p = find_augmenting_path(m, n, b)
    if p is not None:
        assert feasibility(m, n, aug_nice_extend(m, n, b, p)).nice


@given(seeds, st.integers(min_value=1, max_value=7))
def test_key_lemma_runs(seed, size):
    rng = random.Random(seed)
    m, n = random_pair(rng, size)
    if not cond_plus(m, n):
        return
    e = rng.choice(sorted(m.ground_set))
    i, trace = key_lemma_run(m, n, e)
    assert e in n.span(i) and feasibility(m, n, i).nice
    assert trace.augmentations <= m.ground_size
    assert claim_instrumentation(trace, m, n) == []


@given(seeds, st.integers(min_value=1, max_value=7))
def test_feasible_sets_compose(seed, size):
    rng = random.Random(seed)
    m, n = random_pair(rng, size)
    top = edmonds_max_common(m, n).common_independent
    i0 = frozenset(x for x in top if rng.random() < 0.5)
    mq, nq = m.contract(i0), n.contract(i0)
    if not cond(mq, nq).holds:
        return
    i1 = nice_extension(mq, nq)
    assert feasibility(mq, nq, i1).feasible
    if feasibility(m, n, i0).feasible:
        assert feasibility(m, n, i0 | i1).feasible


def _trace_with_path(seed_base: int):
    rng = random.Random(seed_base)
    while True:
        m, n = random_pair(rng, rng.randint(3, 7))
        if not cond_plus(m, n):
            continue
        for e in sorted(m.ground_set):
            _, trace = key_lemma_run(m, n, e)
            if trace.augmentations:
                return m, n, trace, rng


@pytest.mark.parametrize("seed", range(5))
def test_trace_mutation_is_caught(seed):
    m, n, trace, rng = _trace_with_path(seed)
    k = next(k for k, s in enumerate(trace.steps) if s.path is not None)
    nxt = trace.steps[k + 1]
    x = rng.choice(sorted(m.ground_set))
    mutated = dataclasses.replace(nxt, independent=nxt.independent ^ {x})
    steps = trace.steps[: k + 1] + (mutated,) + trace.steps[k + 2:]
    assert claim_instrumentation(dataclasses.replace(trace, steps=steps), m, n)
