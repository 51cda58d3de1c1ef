"""Finite laboratory for matroid intersection via waves and augmenting paths."""

from .circuits import circuit_simple_find, is_circuit, strong_circuit_eliminate
from .errors import CapacityError, InputError, MatroidError, PreconditionError, TheoryViolation
from .exchange import (
    AugmentingPath,
    ExchangeDigraph,
    IntersectionCertificate,
    augment,
    build_exchange_digraph,
    edmonds_max_common,
    find_augmenting_path,
)
from .matroid import (
    Contract,
    Delete,
    DirectSum,
    Dual,
    Free,
    Graphic,
    LinearGF2,
    Matroid,
    Partition,
    Uniform,
    compact,
    contract,
    delete,
    dual,
)
from .solver import (
    FeasibleReport,
    RunTrace,
    SolveOutcome,
    aug_nice_extend,
    claim_instrumentation,
    common_base_solve,
    dual_transfer_check,
    feasibility,
    ind_span_solve,
    intersect_solve,
    key_lemma,
    key_lemma_run,
    nice_extension,
)
from .dsl import load, loads, parse
from .stream import builtin_family, run_prefix, stabilization_report
from .verify import verify_document
from .waves import CondReport, WaveCertificate, cond, cond_plus, is_wave, largest_wave, one_more_edge_base

__version__ = "0.1.0"

__all__ = [
    "aug_nice_extend",
    "augment",
    "AugmentingPath",
    "build_exchange_digraph",
    "builtin_family",
    "CapacityError",
    "circuit_simple_find",
    "claim_instrumentation",
    "common_base_solve",
    "compact",
    "cond",
    "cond_plus",
    "CondReport",
    "Contract",
    "contract",
    "Delete",
    "delete",
    "DirectSum",
    "Dual",
    "dual",
    "dual_transfer_check",
    "edmonds_max_common",
    "ExchangeDigraph",
    "feasibility",
    "FeasibleReport",
    "find_augmenting_path",
    "Free",
    "Graphic",
    "ind_span_solve",
    "InputError",
    "intersect_solve",
    "IntersectionCertificate",
    "is_circuit",
    "is_wave",
    "key_lemma",
    "key_lemma_run",
    "largest_wave",
    "LinearGF2",
    "load",
    "loads",
    "Matroid",
    "MatroidError",
    "nice_extension",
    "one_more_edge_base",
    "parse",
    "Partition",
    "PreconditionError",
    "run_prefix",
    "RunTrace",
    "SolveOutcome",
    "stabilization_report",
    "strong_circuit_eliminate",
    "TheoryViolation",
    "Uniform",
    "verify_document",
    "WaveCertificate",
]
