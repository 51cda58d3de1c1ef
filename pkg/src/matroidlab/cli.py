"""Command line front end: ``matroidlab <command> [inputs] [flags]``.

Matroid inputs are DSL files or inline JSON objects.  Results go to standard
output as JSON with sorted keys.  Exit codes: 0 found or holds, 2 violated or
fails, 3 capacity exceeded, 1 bad input, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from . import testkit
from .dsl import load_arg
from .errors import CapacityError, InputError, PreconditionError, TheoryViolation
from .exchange import build_exchange_digraph
from .matroid import Matroid, same_ground
from .solver import common_base_solve, ind_span_solve, intersect_solve, key_lemma_run
from .stream import DEFAULT_WINDOWS, builtin_family, stabilization_report
from .verify import VERIFIABLE, verify_document
from .waves import DEFAULT_WAVE_BOUND, cond, largest_wave

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_CAPACITY, EXIT_INTERNAL = 0, 1, 2, 3, 4

ORACLE_BOUND = testkit.ORACLE_BOUND
ARITY = {
    "check-axioms": 1,
    "rank": 1,
    "circuit": 1,
    "intersect": 2,
    "largest-wave": 2,
    "cond": 2,
    "ind-span": 2,
    "common-base": 2,
    "key-lemma": 2,
    "stream-demo": 0,
    "oracle": 2,
}
ORACLES = ("max-common", "wave-union", "ind-span", "common-base", "cond")


def _edge_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matroidlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(ARITY))
    p.add_argument("inputs", nargs="*", help="matroid DSL files or inline JSON (oracle: NAME M N)")
    p.add_argument("--seed", type=int, help="shuffle the edge order used for tie-breaks")
    p.add_argument("--bound", type=int, help="size limit for exhaustive searches")
    p.add_argument("--allow-exponential", action="store_true",
                   help="acknowledge a --bound above the default")
    p.add_argument("--trace", action="store_true", help="include run traces")
    p.add_argument("--dot", action="store_true", help="with --trace, include exchange digraphs as DOT")
    p.add_argument("--verify", metavar="CERT", help="check a previously emitted document instead of solving")
    p.add_argument("--edge", type=int)
    p.add_argument("--set", dest="edges", type=_edge_list, default=None)
    p.add_argument("--method", choices=("exchange", "accumulate"), default="exchange")
    p.add_argument("--family-m", default="triangle_sum")
    p.add_argument("--family-n", default="triangle_sum")
    p.add_argument("--windows", type=_edge_list, default=list(DEFAULT_WINDOWS))
    p.add_argument("--targets", type=int, default=3)
    return p


def _bound(args: argparse.Namespace, default: int) -> int:
    if args.bound is None:
        return default
    if args.bound < 0:
        raise InputError("--bound must be non-negative")
    if args.bound > default and not args.allow_exponential:
        raise InputError(
            f"--bound {args.bound} exceeds the default {default}; runtime is exponential, "
            "pass --allow-exponential to confirm"
        )
    return args.bound


def _order(args: argparse.Namespace, m: Matroid) -> list[int] | None:
    if args.seed is None:
        return None
    order = sorted(m.ground_set)
    random.Random(args.seed).shuffle(order)
    return order


def _need_edge(args: argparse.Namespace) -> int:
    if args.edge is None:
        raise InputError(f"{args.command} needs --edge")
    return args.edge


def _dots(m: Matroid, n: Matroid, sets) -> list[str]:
    return [build_exchange_digraph(m, n, s).to_dot(f"D{k}") for k, s in enumerate(sets)]


def _solve_doc(args, m, n, outcome, extra_sets=None) -> tuple[dict, int]:
    doc = outcome.to_json(with_traces=args.trace)
    if args.trace and args.dot and outcome.payload is not None:
        doc["dot"] = _dots(m, n, extra_sets or [outcome.payload])
    return doc, EXIT_OK if outcome.found else EXIT_FAIL


def _oracle(args: argparse.Namespace, m: Matroid, n: Matroid) -> tuple[dict, int]:
    bound = _bound(args, ORACLE_BOUND)
    name = args.oracle
    if name == "max-common":
        return {"value": testkit.brute_max_common(m, n, bound)}, EXIT_OK
    if name == "wave-union":
        return {"value": sorted(testkit.brute_wave_union(m, n, bound))}, EXIT_OK
    if name == "ind-span":
        sets = testkit.brute_ind_span_sets(m, n, bound)
        return {"value": bool(sets), "sets": [sorted(s) for s in sets]}, EXIT_OK if sets else EXIT_FAIL
    if name == "common-base":
        ok = testkit.brute_exists_common_base(m, n, bound)
        return {"value": ok}, EXIT_OK if ok else EXIT_FAIL
    ok = testkit.brute_cond(m, n, bound)
    return {"value": ok}, EXIT_OK if ok else EXIT_FAIL


def compute(args: argparse.Namespace, ms: Sequence[Matroid]) -> tuple[dict, int]:
    """The JSON document and exit code for one command."""
    doc, code = _compute(args, ms)
    doc["command"] = args.command
    if args.seed is not None:
        doc["seed"] = args.seed
    return doc, code


def _compute(args: argparse.Namespace, ms: Sequence[Matroid]) -> tuple[dict, int]:
    cmd = args.command
    if cmd == "check-axioms":
        (m,) = ms
        problems = testkit.check_axioms(m, bound=_bound(args, ORACLE_BOUND))
        return {"ground_size": m.ground_size, "ok": not problems, "violations": problems}, \
            EXIT_OK if not problems else EXIT_FAIL
    if cmd == "rank":
        (m,) = ms
        s = sorted(m.ground_set) if args.edges is None else args.edges
        return {"set": sorted(m.ground_set & set(s)) if args.edges is None else sorted(set(s)),
                "rank": m.rank(s)}, EXIT_OK
    if cmd == "circuit":
        (m,) = ms
        e = _need_edge(args)
        indep = args.edges or []
        return {"edge": e, "set": sorted(set(indep)),
                "circuit": sorted(m.fundamental_circuit(e, indep))}, EXIT_OK
    if cmd == "stream-demo":
        report = stabilization_report(
            builtin_family(args.family_m), builtin_family(args.family_n), args.windows, args.targets
        )
        doc = report.to_json()
        if args.trace:
            doc["runs"] = [r.to_json(with_traces=True) for r in report.runs]
        return doc, EXIT_OK if not report.violations else EXIT_FAIL

    m, n = ms
    same_ground(m, n)
    if cmd == "oracle":
        doc, code = _oracle(args, m, n)
        doc["oracle"] = args.oracle
        return doc, code
    if cmd == "intersect":
        return _solve_doc(args, m, n, intersect_solve(m, n, order=_order(args, m)))
    if cmd == "ind-span":
        return _solve_doc(args, m, n, ind_span_solve(m, n, order=_order(args, m)))
    if cmd == "common-base":
        return _solve_doc(args, m, n, common_base_solve(m, n))
    if cmd == "largest-wave":
        cert = largest_wave(m, n, method=args.method, bound=_bound(args, DEFAULT_WAVE_BOUND))
        return {"method": args.method, **cert.to_json()}, EXIT_OK
    if cmd == "cond":
        report = cond(m, n)
        return report.to_json(), EXIT_OK if report.holds else EXIT_FAIL
    if cmd == "key-lemma":
        e = _need_edge(args)
        try:
            i, trace = key_lemma_run(m, n, e, order=_order(args, m))
        except PreconditionError as exc:
            wave = sorted(exc.wave) if exc.wave is not None else None
            return {"edge": e, "status": "precondition_failed", "wave": wave, "reason": str(exc)}, EXIT_INPUT
        doc: dict[str, Any] = {
            "edge": e,
            "status": "found",
            "payload": sorted(i),
            "iterations": trace.augmentations,
        }
        if args.trace:
            doc["trace"] = trace.to_json()
            if args.dot:
                doc["dot"] = _dots(m, n, [s.independent for s in trace.steps])
        return doc, EXIT_OK
    raise InputError(f"unknown command {cmd!r}")


def _load_inputs(args: argparse.Namespace) -> list[Matroid]:
    inputs = list(args.inputs)
    args.oracle = None
    if args.command == "oracle":
        if not inputs or inputs[0] not in ORACLES:
            raise InputError(f"oracle needs one of {', '.join(ORACLES)}")
        args.oracle = inputs.pop(0)
    want = ARITY[args.command]
    if len(inputs) != want:
        raise InputError(f"{args.command} takes {want} matroid input(s), got {len(inputs)}")
    return [load_arg(x) for x in inputs]


def _verify(args: argparse.Namespace, ms: Sequence[Matroid]) -> tuple[dict, int]:
    try:
        with open(args.verify, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{args.verify}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.verify}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("command") != args.command:
        raise InputError(f"{args.verify} is not a {args.command} document")
    if args.command in VERIFIABLE:
        problems = verify_document(doc, ms)
    else:
        # plain values: recompute and compare
        fresh, _ = compute(args, ms)
        problems = [] if fresh == doc else ["recomputed document differs"]
    out = {"command": args.command, "verified": args.verify, "valid": not problems, "problems": problems}
    return out, EXIT_OK if not problems else EXIT_FAIL


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.dot and not args.trace:
            raise InputError("--dot only applies together with --trace")
        ms = _load_inputs(args)
        if args.verify:
            doc, code = _verify(args, ms)
        else:
            doc, code = compute(args, ms)
    except CapacityError as exc:
        print(f"matroidlab: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InputError as exc:
        print(f"matroidlab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TheoryViolation as exc:
        print(f"matroidlab: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
