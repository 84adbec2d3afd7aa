"""Deterministic fixed-point computations over a framework.

Forward closures, preference-filtered closures, triggered-rule reachability
and the attack predicates built from them.  All functions are pure; sets go
in and out as frozensets of sentence ids.

These are the reference implementations: straightforward, counter-based,
linear in total rule size.  The search engine uses the vectorized kernel
for the same computations; the test suite holds the two (and the
brute-force oracle) to agreement.
"""

from __future__ import annotations

from collections import deque
from enum import Enum
from typing import Iterable

from .framework import Framework

__all__ = [
    "AttackKind",
    "closure",
    "pref_closure",
    "triggered_reach",
    "attacks_singleton_plus",
    "undefeated_set",
    "set_attacks_plus",
]


class AttackKind(Enum):
    NONE = "none"
    NORMAL = "normal"
    REVERSE = "reverse"
    BOTH = "both"


def _rule_index(fw: Framework):
    """Per-sentence list of rule ids whose body contains the sentence (cached)."""
    idx = fw.__dict__.get("_rules_by_body")
    if idx is None:
        idx = [[] for _ in range(fw.n_sentences)]
        for r in fw.rules:
            for b in r.body:
                idx[b].append(r.id)
        fw.__dict__["_rules_by_body"] = idx
    return idx


def closure(fw: Framework, xs: Iterable[int]) -> frozenset[int]:
    """Least sentence set containing ``xs`` and closed under rule application.

    Counter-based forward chaining: each rule keeps a remaining-body counter,
    a worklist carries newly derived sentences.
    """
    by_body = _rule_index(fw)
    remaining = [len(r.body) for r in fw.rules]
    derived = set(xs)
    work = deque(derived)
    for r in fw.rules:  # rules with empty bodies fire unconditionally
        if remaining[r.id] == 0 and r.head not in derived:
            derived.add(r.head)
            work.append(r.head)
    while work:
        s = work.popleft()
        for rid in by_body[s]:
            remaining[rid] -= 1
            if remaining[rid] == 0:
                h = fw.rules[rid].head
                if h not in derived:
                    derived.add(h)
                    work.append(h)
    return frozenset(derived)


def pref_closure(fw: Framework, aset: Iterable[int], target: int) -> frozenset[int]:
    """Closure of the members of ``aset`` not strictly less preferred than ``target``."""
    if target not in fw.assumptions:
        raise ValueError(f"{fw.name_of(target)} is not an assumption")
    strict = fw.prefs.strict
    return closure(fw, (a for a in aset if not strict(a, target)))


def triggered_reach(fw: Framework, xs: Iterable[int]) -> frozenset[tuple[int, int]]:
    """Pairs (z, s): sentence s reachable from assumption z over the edges
    body-element -> head of rules whose body lies in the closure of ``xs``.

    Every source reaches itself.  Breadth-first traversal per source.
    """
    sources = frozenset(xs)
    closed = closure(fw, sources)
    edges: dict[int, list[int]] = {}
    for r in fw.rules:
        if r.body <= closed:
            for b in r.body:
                edges.setdefault(b, []).append(r.head)
    pairs: set[tuple[int, int]] = set()
    for z in sources:
        seen = {z}
        queue = deque([z])
        while queue:
            u = queue.popleft()
            for v in edges.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        pairs.update((z, s) for s in seen)
    return frozenset(pairs)


def attacks_singleton_plus(
    fw: Framework, aset: Iterable[int], target: int
) -> AttackKind:
    """How the assumption set attacks the single assumption ``target``.

    Normal: the target's contrary is derivable from the attackers that are
    not strictly below the target.  Reverse: the target alone derives the
    contrary of some attacker the target is strictly below.
    """
    if target not in fw.assumptions:
        raise ValueError(f"{fw.name_of(target)} is not an assumption")
    aset = frozenset(aset)
    normal = fw.contrary[target] in pref_closure(fw, aset, target)
    strict = fw.prefs.strict
    from_target = closure(fw, [target])
    reverse = any(strict(target, x) and fw.contrary[x] in from_target for x in aset)
    if normal and reverse:
        return AttackKind.BOTH
    if normal:
        return AttackKind.NORMAL
    if reverse:
        return AttackKind.REVERSE
    return AttackKind.NONE


def undefeated_set(fw: Framework, aset: Iterable[int]) -> frozenset[int]:
    """Assumptions not individually attacked by ``aset``."""
    aset = frozenset(aset)
    return frozenset(
        u
        for u in fw.assumptions
        if attacks_singleton_plus(fw, aset, u) is AttackKind.NONE
    )


def set_attacks_plus(
    fw: Framework, aset: Iterable[int], bset: Iterable[int]
) -> bool:
    """Set-level attack from ``aset`` to ``bset``.

    Normal: some member of B has its contrary in the B-member-filtered
    closure of A.  Reverse: B derives the contrary of some member a of A by
    a derivation in which some member of B strictly below a participates;
    participation is witnessed through the triggered-rule reach relation.
    """
    A, B = frozenset(aset), frozenset(bset)
    for b in B:
        if fw.contrary[b] in pref_closure(fw, A, b):
            return True
    if not A or not B:
        return False
    closure_B = closure(fw, B)
    candidates = [a for a in A if fw.contrary[a] in closure_B]
    if not candidates:
        return False
    reach = triggered_reach(fw, B)
    strict = fw.prefs.strict
    return any(
        strict(b, a) and (b, fw.contrary[a]) in reach
        for a in candidates
        for b in B
    )
