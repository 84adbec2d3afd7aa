"""Command-line entry point.

Reasoning mode reads a framework file and runs one task; ``gen`` mode
writes a random instance.  Answers go to stdout only: acceptance tasks
print YES/NO (plus a witness line for credulous tasks), enumeration tasks
print one assumption set per line in canonical order, with the empty set as
an empty line and NONE meaning that no extension exists at all.  Exit
status: 0 success, 1 usage error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import oracle
from .benchgen import GenParams, gen_framework
from .framework import Framework, ParseError, parse_framework, serialize_framework
from .plus import credulous_adm_plus, credulous_com_plus, enumerate_plus
from .preferred import (
    RunStats,
    canonical_family,
    enumerate_preferred,
    skeptical_preferred,
)

__all__ = ["main", "run_task"]

TASKS = ("DS-PRF", "EE-PRF", "DC-ADM+", "DC-COM+", "EE-ADM+", "EE-COM+", "SE-COM+", "GR+")
QUERY_TASKS = ("DS-PRF", "DC-ADM+", "DC-COM+")
COM_TASKS = ("DC-COM+", "EE-COM+", "SE-COM+", "GR+")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise UsageError(message)


def _fmt(fw: Framework, aset) -> str:
    return " ".join(sorted(fw.name_of(a) for a in aset))


def _engine_order_key(fw: Framework, aset) -> int:
    # position of the set in the engine's out-before-in, ascending-id walk
    m = len(fw.asm_ids)
    slot = {a: i for i, a in enumerate(fw.asm_ids)}
    return sum(1 << (m - 1 - slot[a]) for a in aset)


def _require_aba(fw: Framework) -> None:
    if not fw.prefs.is_empty:
        raise InputError("task requires a preference-free framework")


def _oracle_task(fw: Framework, task: str, query: Optional[int], stats: RunStats) -> list[str]:
    if len(fw.asm_ids) > oracle.SIZE_GUARD:
        raise InputError(
            f"oracle mode refuses frameworks with more than {oracle.SIZE_GUARD} assumptions"
        )
    if task == "DS-PRF":
        _require_aba(fw)
        family = oracle.oracle_extensions(fw, "prf")
        verdict = all(oracle.oracle_derives(fw, query, ext) for ext in family)
        stats.result = "YES" if verdict else "NO"
        return [stats.result]
    if task == "EE-PRF":
        _require_aba(fw)
        family = oracle.oracle_extensions(fw, "prf")
        stats.result = family
        return [_fmt(fw, s) for s in family]
    if task in ("DC-ADM+", "DC-COM+"):
        sem = "adm+" if task == "DC-ADM+" else "com+"
        hits = [
            ext
            for ext in oracle.oracle_extensions(fw, sem)
            if oracle.oracle_derives(fw, query, ext)
        ]
        if not hits:
            stats.result = "NO"
            return ["NO"]
        witness = min(hits, key=lambda s: _engine_order_key(fw, s))
        stats.result = "YES"
        stats.witness = witness
        return ["YES", _fmt(fw, witness)]
    if task in ("EE-ADM+", "EE-COM+"):
        family = oracle.oracle_extensions(fw, "adm+" if task == "EE-ADM+" else "com+")
        stats.result = family
        return [_fmt(fw, s) for s in family]
    if task == "SE-COM+":
        family = oracle.oracle_extensions(fw, "com+")
        if not family:
            stats.result = None
            return ["NONE"]
        witness = min(family, key=lambda s: _engine_order_key(fw, s))
        stats.result = witness
        return [_fmt(fw, witness)]
    if task == "GR+":
        family = oracle.oracle_extensions(fw, "com+")
        if not family:
            stats.result = None
            return ["NONE"]
        common = frozenset.intersection(*family)
        stats.result = common
        return [_fmt(fw, common)]
    raise AssertionError(task)


def _main_task(
    fw: Framework, task: str, query: Optional[int], mode: str, stats: RunStats
) -> list[str]:
    if task == "DS-PRF":
        _require_aba(fw)
        verdict = skeptical_preferred(fw, query, stats=stats)
        return ["YES" if verdict else "NO"]
    if task == "EE-PRF":
        _require_aba(fw)
        return [_fmt(fw, s) for s in enumerate_preferred(fw, stats=stats)]
    if task == "DC-ADM+":
        verdict, st = credulous_adm_plus(fw, query)
        _merge(stats, st)
        return ["YES", _fmt(fw, st.witness)] if verdict else ["NO"]
    if task == "DC-COM+":
        verdict, st = credulous_com_plus(fw, query, mode)
        _merge(stats, st)
        return ["YES", _fmt(fw, st.witness)] if verdict else ["NO"]
    if task == "EE-ADM+":
        return [_fmt(fw, s) for s in enumerate_plus(fw, "adm", stats=stats)]
    if task == "EE-COM+":
        return [_fmt(fw, s) for s in enumerate_plus(fw, "com", mode, stats=stats)]
    if task == "SE-COM+":
        model = enumerate_plus(fw, "find-com", mode, stats=stats)
        return [_fmt(fw, model.in_set)] if model is not None else ["NONE"]
    if task == "GR+":
        common = enumerate_plus(fw, "grounded", mode, stats=stats)
        return [_fmt(fw, common)] if common is not None else ["NONE"]
    raise AssertionError(task)


def _merge(stats: RunStats, other: RunStats) -> None:
    stats.candidates = other.candidates
    stats.engine_calls = other.engine_calls
    stats.result = other.result
    stats.witness = other.witness


def _stats_payload(fw: Framework, task: str, stats: RunStats) -> dict:
    def enc(value):
        if isinstance(value, (list, tuple)):
            return [enc(v) for v in value]
        if isinstance(value, frozenset):
            return sorted(fw.name_of(a) for a in value)
        return value

    payload = {
        "task": task,
        "candidates": stats.candidates,
        "engine_calls": stats.engine_calls,
        "result": enc(stats.result),
    }
    if stats.witness is not None:
        payload["witness"] = enc(stats.witness)
    return payload


def run_task(args: argparse.Namespace) -> str:
    """Execute one reasoning task; returns what should go to stdout."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    try:
        fw = parse_framework(text)
    except ParseError as exc:
        raise InputError(f"parse failure in {args.file}:\n{exc}") from exc
    query = None
    if args.task in QUERY_TASKS:
        if args.query is None:
            raise UsageError(f"task {args.task} requires --query")
        if args.query not in fw.name_to_id:
            raise InputError(f"unknown query name {args.query!r}")
        query = fw.id_of(args.query)
    elif args.query is not None:
        raise UsageError(f"task {args.task} takes no --query")
    if args.abstraction is not None and args.task not in COM_TASKS:
        raise UsageError("--abstraction applies only to COM+ tasks")
    mode = args.abstraction or "strong"
    stats = RunStats()
    if args.oracle:
        lines = _oracle_task(fw, args.task, query, stats)
    else:
        lines = _main_task(fw, args.task, query, mode, stats)
    if args.stats_json:
        with open(args.stats_json, "w", encoding="utf-8") as fh:
            json.dump(_stats_payload(fw, args.task, stats), fh, sort_keys=True)
            fh.write("\n")
    return "".join(line + "\n" for line in lines)


def _build_solver_parser() -> _Parser:
    p = _Parser(prog="abasolve", description="Assumption-based argumentation reasoner")
    p.add_argument("--file", required=True, help="framework file")
    p.add_argument("--task", required=True, choices=TASKS)
    p.add_argument("--query", help="query sentence name (acceptance tasks)")
    p.add_argument("--abstraction", choices=("weak", "strong"), default=None,
                   help="candidate abstraction for COM+ tasks (default strong)")
    p.add_argument("--oracle", action="store_true",
                   help="answer via exhaustive enumeration (small inputs only)")
    p.add_argument("--stats-json", help="write run statistics to this path")
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for interface symmetry; reasoning is deterministic")
    return p


def _build_gen_parser() -> _Parser:
    p = _Parser(prog="abasolve gen", description="Random framework generator")
    p.add_argument("--n", type=int, required=True, help="number of sentences")
    p.add_argument("--ratio", type=float, required=True, help="assumption share")
    p.add_argument("--rules-max", type=int, default=20, help="max rules per head")
    p.add_argument("--body-max", type=int, default=20, help="max body length")
    p.add_argument("--pref-prob", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    return p


def _run_gen(args: argparse.Namespace) -> str:
    params = GenParams(
        n_sentences=args.n,
        asm_ratio=args.ratio,
        rules_per_head_max=args.rules_max,
        body_len_max=args.body_max,
        pref_prob=args.pref_prob,
        seed=args.seed,
    )
    try:
        fw = gen_framework(params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = serialize_framework(fw)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return ""
    return text


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "gen":
            out = _run_gen(_build_gen_parser().parse_args(argv[1:]))
        else:
            out = run_task(_build_solver_parser().parse_args(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
