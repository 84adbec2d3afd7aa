"""Preference-free reasoning under preferred semantics.

Skeptical acceptance and preferred-set enumeration both run the same
maximize-then-verify loop on the candidate engine: draw a complete set,
block it and its subsets, grow it through floored re-solves until no
proper superset survives, then act on the maximal set found.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .derivation import closure
from .engine import Condition, Exclusion, add_exclusion, new_session, solve
from .framework import Framework

__all__ = [
    "RunStats",
    "canonical_family",
    "check_complete",
    "skeptical_preferred",
    "enumerate_preferred",
]


@dataclass
class RunStats:
    """Counters for one reasoning run: candidates are outer-loop models,
    engine_calls counts every solve invocation."""

    candidates: int = 0
    engine_calls: int = 0
    result: object = None
    witness: Optional[frozenset[int]] = None


def canonical_family(fw: Framework, sets: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    """Family order used everywhere: by size, then by sorted member names."""
    return sorted(
        sets, key=lambda s: (len(s), tuple(sorted(fw.name_of(x) for x in s)))
    )


def _require_aba(fw: Framework) -> None:
    if not fw.prefs.is_empty:
        raise ValueError("task defined for preference-free frameworks only")


def _check_sentence(fw: Framework, s: int) -> None:
    if not (0 <= s < fw.n_sentences):
        raise ValueError(f"unknown sentence id {s}")


def check_complete(fw: Framework, aset: Iterable[int]) -> bool:
    """Complete-set test: the set is conflict-free, no member is attacked by
    the closure of the assumptions it leaves undefeated, and every
    non-member is."""
    _require_aba(fw)
    A = frozenset(aset)
    th = closure(fw, A)
    if any(fw.contrary[a] in th for a in A):
        return False
    defeated = {x for x in fw.assumptions if fw.contrary[x] in th}
    v = closure(fw, fw.assumptions - defeated)
    if any(fw.contrary[a] in v for a in A):
        return False
    return all(fw.contrary[x] in v for x in fw.assumptions - A)


def skeptical_preferred(
    fw: Framework, s: int, stats: Optional[RunStats] = None
) -> bool:
    """Is ``s`` derivable from every subset-maximal complete assumption set?

    Counterexample search: find a complete set not deriving ``s``, maximize
    it among the non-deriving complete sets, then ask (without the query
    constraint) whether any complete proper superset remains.  If none does,
    the maximal set is preferred and refutes skeptical acceptance.
    """
    _require_aba(fw)
    _check_sentence(fw, s)
    stats = stats if stats is not None else RunStats()
    sess = new_session(fw, [Condition.complete_fixpoint()])
    query = (Condition.forbid_derives(s),)
    try:
        while True:
            model = solve(sess, extra=query)
            if model is None:
                stats.result = "YES"
                return True
            stats.candidates += 1
            add_exclusion(sess, Exclusion.subset_of(model.in_set))
            while True:
                bigger = solve(sess, floor=model.in_set, extra=query)
                if bigger is None:
                    break
                model = bigger
                add_exclusion(sess, Exclusion.subset_of(model.in_set))
            if solve(sess, floor=model.in_set) is None:
                stats.result = "NO"
                stats.witness = model.in_set
                return False
    finally:
        stats.engine_calls = sess.solve_count


def enumerate_preferred(
    fw: Framework, stats: Optional[RunStats] = None
) -> list[frozenset[int]]:
    """All subset-maximal complete assumption sets, in canonical order."""
    _require_aba(fw)
    stats = stats if stats is not None else RunStats()
    sess = new_session(fw, [Condition.complete_fixpoint()])
    found: list[frozenset[int]] = []
    while True:
        model = solve(sess)
        if model is None:
            break
        stats.candidates += 1
        add_exclusion(sess, Exclusion.subset_of(model.in_set))
        while True:
            bigger = solve(sess, floor=model.in_set)
            if bigger is None:
                break
            model = bigger
            add_exclusion(sess, Exclusion.subset_of(model.in_set))
        found.append(model.in_set)
    stats.engine_calls = sess.solve_count
    family = canonical_family(fw, found)
    stats.result = family
    return family
