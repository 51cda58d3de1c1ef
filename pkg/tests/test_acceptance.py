"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Corpora are seeded, so every run sees the same instances.
"""

from __future__ import annotations

import dataclasses
import json
import os
import random
import subprocess
import sys
import time

import pytest

from matroidlab import (
    claim_instrumentation,
    common_base_solve,
    cond,
    edmonds_max_common,
    feasibility,
    find_augmenting_path,
    ind_span_solve,
    is_wave,
    key_lemma_run,
    largest_wave,
    nice_extension,
    aug_nice_extend,
)
from matroidlab.bits import from_mask, popcount
from matroidlab.cli import main as cli_main
from matroidlab.exchange import AugmentationRecord, audit_everything, audit_stats
from matroidlab.stream import builtin_family, stabilization_report
from matroidlab.testkit import (
    brute_exists_common_base,
    brute_exists_ind_span,
    brute_max_common,
    brute_wave_union,
    brute_waves,
    catalog_corpus,
    check_axioms,
    fixture_catalog,
    random_chain,
    random_corpus,
    random_mutation,
    same_oracle,
)

CORPUS_SEED = 1729
CORPUS = catalog_corpus() + random_corpus(CORPUS_SEED, 500, max_size=9)


@pytest.fixture(scope="module", autouse=True)
def audit_all_augmentations():
    # every augmentation in this module is audited; a failed audit raises
    with audit_everything() as stats:
        yield stats


@pytest.fixture
def report(capsys):
    def say(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")

    return say


def test_c01_edmonds_matches_brute_force(report):
    start = time.perf_counter()
    bad = []
    for inst in CORPUS:
        cert = edmonds_max_common(inst.m, inst.n)
        if len(cert.common_independent) != brute_max_common(inst.m, inst.n):
            bad.append(f"{inst.name}: size")
        if cert.validate(inst.m, inst.n):
            bad.append(f"{inst.name}: certificate")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(1, ok, f"{len(CORPUS)} pairs, {len(bad)} mismatches, {elapsed:.1f}s (limit 60s)")
    assert ok, bad[:5]


def test_c02_ind_span_equivalence(report):
    bad, found = [], 0
    for inst in CORPUS:
        out = ind_span_solve(inst.m, inst.n)
        brute = brute_exists_ind_span(inst.m, inst.n)
        holds = cond(inst.m, inst.n).holds
        found += out.found
        if not out.found == brute == holds:
            bad.append(f"{inst.name}: solve={out.found} brute={brute} cond={holds}")
    ok = not bad
    report(2, ok, f"{len(CORPUS)} pairs ({found} found), {len(bad)} disagreements")
    assert ok, bad[:5]


def test_c03_common_base_equivalence(report):
    bad, found = [], 0
    for inst in CORPUS:
        out = common_base_solve(inst.m, inst.n)
        brute = brute_exists_common_base(inst.m, inst.n)
        both = cond(inst.m, inst.n).holds and cond(inst.n, inst.m).holds
        found += out.found
        if not out.found == brute == both:
            bad.append(f"{inst.name}: solve={out.found} brute={brute} conds={both}")
    ok = not bad
    report(3, ok, f"{len(CORPUS)} pairs ({found} found), {len(bad)} disagreements")
    assert ok, bad[:5]


def _union_closed(waves: list[int], rng: random.Random, size: int) -> bool:
    known = set(waves)
    if size <= 7:
        pairs = ((a, b) for a in waves for b in waves)
    else:
        pairs = ((rng.choice(waves), rng.choice(waves)) for _ in range(200))
    return all((a | b) in known for a, b in pairs)


def test_c04_wave_laws(report):
    start = time.perf_counter()
    rng = random.Random(CORPUS_SEED)
    bad = []
    for inst in CORPUS:
        m, n = inst.m, inst.n
        union = brute_wave_union(m, n)
        for method in ("exchange", "accumulate"):
            w = largest_wave(m, n, method=method)
            if w.wave_set != union or w.validate(m, n):
                bad.append(f"{inst.name}: {method} gave {sorted(w.wave_set)}, union {sorted(union)}")
        waves = brute_waves(m, n)
        if not _union_closed(waves, rng, m.ground_size):
            bad.append(f"{inst.name}: union of two waves is not a wave")
        a, b = rng.choice(waves), rng.choice(waves)
        if is_wave(m, n, from_mask(a | b)) is None:
            bad.append(f"{inst.name}: is_wave rejects a union of waves")
        if largest_wave(m.contract(union), n.delete(union)).wave_set:
            bad.append(f"{inst.name}: quotient by the largest wave has a nonempty wave")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    report(4, ok, f"{len(CORPUS)} pairs, both methods, {len(bad)} violations, {elapsed:.1f}s (limit 120s)")
    assert ok, bad[:5]


def test_c05_augmentation_audit(report, audit_all_augmentations):
    # explicit workload on top of whatever the other criteria already audited
    before = audit_stats.augmentations
    records = 0
    for inst in CORPUS:
        trace: list[AugmentationRecord] = []
        edmonds_max_common(inst.m, inst.n, trace=trace)
        records += len(trace)
        ind_span_solve(inst.m, inst.n)
    stats = audit_all_augmentations
    ok = stats.violations == 0 and stats.augmentations >= before + records > 0
    report(5, ok, f"{stats.augmentations} augmentations audited in this module, {stats.violations} violations")
    assert ok


def test_c06_extensions_are_nice(report):
    bad, checked = [], 0
    for inst in CORPUS:
        m, n = inst.m, inst.n
        if not cond(m, n).holds:
            continue
        b = nice_extension(m, n)
        checked += 1
        if not feasibility(m, n, b).nice:
            bad.append(f"{inst.name}: nice_extension {sorted(b)}")
        p = find_augmenting_path(m, n, b)
        if p is not None:
            out = aug_nice_extend(m, n, b, p)
            checked += 1
            if not feasibility(m, n, out).nice:
                bad.append(f"{inst.name}: aug_nice_extend {sorted(out)}")
    ok = not bad and checked > 0
    report(6, ok, f"{checked} extensions checked, {len(bad)} not nice")
    assert ok, bad[:5]


def _mutate(trace, rng: random.Random):
    """Corrupt one step: toggle an edge of ``I_(k+1)`` or push a reach-set edge into ``P_k``."""
    ks = [k for k, s in enumerate(trace.steps) if s.path is not None]
    k = rng.choice(ks)
    step = trace.steps[k]
    reach = sorted(set().union(*step.reach_sets.values())) if step.reach_sets else []
    steps = list(trace.steps)
    if reach and rng.random() < 0.5:
        x = rng.choice(reach)
        path = dataclasses.replace(step.path, edges=step.path.edges + (x,))
        steps[k] = dataclasses.replace(step, path=path)
    else:
        nxt = steps[k + 1]
        x = rng.choice(sorted(nxt.independent | step.path.as_set()))
        steps[k + 1] = dataclasses.replace(nxt, independent=nxt.independent ^ {x})
    return dataclasses.replace(trace, steps=tuple(steps))


def test_c07_key_lemma_engine(report):
    rng = random.Random(CORPUS_SEED)
    bad, runs, pairs, mutants, caught = [], 0, 0, 0, 0
    for inst in CORPUS:
        m, n = inst.m, inst.n
        r = cond(m, n)
        if not (r.holds and r.largest_wave.trivial):
            continue
        pairs += 1
        for e in sorted(m.ground_set):
            i, trace = key_lemma_run(m, n, e)
            runs += 1
            if e not in n.span(i) or not feasibility(m, n, i).nice:
                bad.append(f"{inst.name}, e={e}: result {sorted(i)}")
            if trace.augmentations > m.ground_size:
                bad.append(f"{inst.name}, e={e}: {trace.augmentations} iterations")
            problems = claim_instrumentation(trace, m, n)
            if problems:
                bad.append(f"{inst.name}, e={e}: {problems[0]}")
            if trace.augmentations and mutants < 40:
                mutants += 1
                caught += bool(claim_instrumentation(_mutate(trace, rng), m, n))
    ok = not bad and runs > 0 and mutants > 0 and caught == mutants
    report(7, ok, f"{pairs} cond+ pairs, {runs} runs, {len(bad)} violations, "
                  f"{caught}/{mutants} trace mutations caught")
    assert ok, bad[:5]


def test_c08_axiom_checker(report):
    start = time.perf_counter()
    bad = []
    for name, (m, n) in fixture_catalog().items():
        if check_axioms(m) or check_axioms(n):
            bad.append(name)
    rng = random.Random(CORPUS_SEED)
    chains = 0
    for _ in range(200):
        m = random_chain(rng, rng.randint(0, 8), max_depth=3)
        chains += 1
        if check_axioms(m):
            bad.append(repr(m))
    detected = 0
    for k in range(20):
        seed, size = 9000 + k, 3 + k % 6
        m = random_chain(random.Random(seed), size)
        mutant = random_mutation(random.Random(k), m)
        reference = random_chain(random.Random(seed), size)  # rebuilt from scratch
        detected += bool(check_axioms(mutant) or same_oracle(mutant, reference))
    elapsed = time.perf_counter() - start
    ok = not bad and detected == 20 and elapsed < 60
    report(8, ok, f"{len(fixture_catalog())} fixture pairs + {chains} chains, {len(bad)} failing; "
                  f"{detected}/20 mutations detected; {elapsed:.1f}s (limit 60s)")
    assert ok, bad[:5]


def test_c09_stream_stabilization(report):
    start = time.perf_counter()
    tri = builtin_family("triangle_sum")
    full = all(stabilization_report(tri, tri, [3, 6, 9, 12], t).full_agreement for t in range(4))
    ladder = stabilization_report(builtin_family("ladder_graphic"), builtin_family("uniform_3"),
                                  [4, 7, 10], 4)
    doc = ladder.to_json()
    elapsed = time.perf_counter() - start
    ok = full and not ladder.violations and "prefix_agreement" in doc and elapsed < 30
    agree = {tuple(p["windows"]): p["agree_up_to"] for p in doc["prefix_agreement"]}
    report(9, ok, f"triangle_sum full agreement={full}; ladder/uniform_3 violations="
                  f"{len(ladder.violations)}, agreement {agree}; {elapsed:.1f}s (limit 30s)")
    assert ok


CLI_DOCS = {
    "bipM": {"type": "partition", "blocks": [[0, 1], [2]], "caps": 1},
    "bipN": {"type": "partition", "blocks": [[0], [1, 2]], "caps": 1},
    "u12": {"type": "uniform", "n": 2, "rank": 1},
    "free2": {"type": "free", "n": 2},
    "tri": {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]},
    "u23": {"type": "uniform", "n": 3, "rank": 2},
    "fano": {"type": "linear_gf2", "columns": ["001", "010", "011", "100", "101", "110", "111"]},
    "u73": {"type": "uniform", "n": 7, "rank": 3},
    "chain": {"type": "dual", "of": {"type": "contract", "edges": [0], "of": {
        "type": "direct_sum", "parts": [{"type": "uniform", "n": 3, "rank": 2}, {"type": "free", "n": 2}]}}},
    "part4": {"type": "partition", "blocks": [[0, 1], [2, 3]], "caps": [1, 2]},
}
CLI_PAIRS = [("bipM", "bipN"), ("u12", "free2"), ("free2", "u12"), ("tri", "u23"),
             ("fano", "u73"), ("chain", "part4"), ("part4", "chain")]
PAIR_COMMANDS = [["intersect"], ["ind-span"], ["common-base"], ["cond"], ["largest-wave"],
                 ["largest-wave", "--method", "accumulate"], ["ind-span", "--seed", "3", "--trace"],
                 ["key-lemma", "--edge", "0"], ["key-lemma", "--edge", "1", "--trace", "--dot"],
                 ["oracle", "max-common"]]


def _invocations(files):
    for a, b in CLI_PAIRS:
        for cmd in PAIR_COMMANDS:
            head, flags = cmd[0], cmd[1:]
            if head == "oracle":
                yield [head, flags[0], files[a], files[b]]
            else:
                yield [head, files[a], files[b], *flags]
    for name in CLI_DOCS:
        yield ["rank", files[name]]
        yield ["check-axioms", files[name]]
    yield ["circuit", files["u23"], "--edge", "2", "--set", "0,1"]
    yield ["stream-demo", "--windows", "3,6,9,12", "--targets", "3"]


def _subprocess(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    return subprocess.run([sys.executable, "-m", "matroidlab", *argv], capture_output=True, env=env)


def test_c10_cli_determinism_and_verify(report, tmp_path, capsys):
    files = {}
    for name, doc in CLI_DOCS.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        files[name] = str(p)
    bad, runs, verified = [], 0, 0
    for k, argv in enumerate(_invocations(files)):
        codes, outs = [], []
        for _ in range(2):
            codes.append(cli_main(argv))
            outs.append(capsys.readouterr().out)
        runs += 1
        if outs[0] != outs[1] or codes[0] != codes[1]:
            bad.append(f"nondeterministic: {argv}")
        if not outs[0]:
            continue
        cert = tmp_path / f"cert{k}.json"
        cert.write_text(outs[0])
        code = cli_main([*argv, "--verify", str(cert)])
        result = json.loads(capsys.readouterr().out)
        verified += 1
        if code != 0 or not result["valid"]:
            bad.append(f"verify failed: {argv}: {result['problems']}")
    # across processes with different hash seeds
    for argv in (["intersect", files["chain"], files["part4"]],
                 ["stream-demo", "--family-m", "ladder_graphic", "--family-n", "uniform_3",
                  "--windows", "4,7", "--targets", "3"]):
        a, b = _subprocess(argv, 1), _subprocess(argv, 2)
        runs += 1
        if a.stdout != b.stdout or a.returncode != b.returncode or not a.stdout:
            bad.append(f"differs across processes: {argv}")
    ok = not bad
    report(10, ok, f"{runs} invocations byte-identical on repeat, {verified} documents verified, "
                   f"{len(bad)} problems")
    assert ok, bad[:5]


def test_corpus_is_not_degenerate():
    sizes = [inst.m.ground_size for inst in CORPUS]
    ranks = [inst.m.full_rank for inst in CORPUS]
    assert max(sizes) == 9 and sum(r > 0 for r in ranks) > len(CORPUS) // 2
    assert sum(popcount(inst.m.ground) >= 7 for inst in CORPUS) > 100
