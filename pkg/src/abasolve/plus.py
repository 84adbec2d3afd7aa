"""Preference-aware reasoning: admissibility, completeness, and their
credulous-acceptance and enumeration loops.

The candidate abstraction draws conflict-free sets (deriving the query, for
acceptance) together with the assumptions they leave individually
unattacked.  Verification asks two kinds of question, both bounded subset
searches over a suspect pool:

* admissibility: no subset of the unattacked pool attacks the candidate
  without being attacked back;
* per-target defense: no assumption set attacks the target without being
  attacked back (an undefeated non-member that is *defended* disproves
  completeness).

The strong abstraction additionally requires every unattacked non-member to
be attacked by the unattacked set itself, which is sound for complete sets
and cuts the candidate space hard.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Optional, Union

import numpy as np

from .engine import Condition, Exclusion, Model, add_exclusion, new_session, solve
from .framework import Framework
from .kernel import FrameworkKernel, kernel
from .preferred import RunStats, canonical_family

__all__ = [
    "AbstractionMode",
    "RunStats",
    "is_admissible_plus",
    "defends_target_plus",
    "prune_holds",
    "credulous_adm_plus",
    "credulous_com_plus",
    "enumerate_plus",
]


class AbstractionMode(str, Enum):
    WEAK = "weak"
    STRONG = "strong"


def _mode(mode: Union[str, AbstractionMode]) -> AbstractionMode:
    return AbstractionMode(mode)


def _slots(kern: FrameworkKernel, sids: Iterable[int]) -> np.ndarray:
    arr = np.zeros(kern.m, dtype=bool)
    for s in sids:
        slot = kern.slot_of[s]
        if slot < 0:
            raise ValueError(f"{kern.fw.name_of(s)} is not an assumption")
        arr[slot] = True
    return arr


def _sids(kern: FrameworkKernel, slots: np.ndarray) -> frozenset[int]:
    return frozenset(int(s) for s in kern.asm_ids[slots])


def _exists_uncountered_attacker(
    kern: FrameworkKernel, a_arr: np.ndarray, pool: np.ndarray, target: np.ndarray
) -> bool:
    """Is there a B within ``pool`` that attacks ``target`` while A does not
    attack B?  Attack on the target grows with B, counter-attack by A grows
    with B too, so both directions prune subtrees exactly."""

    def rec(inb: np.ndarray, rest: list[int]) -> bool:
        if kern.attacks(a_arr, inb):
            return False  # every superset of inb is counter-attacked
        cand = inb.copy()
        cand[rest] = True
        if not kern.attacks(cand, target):
            return False  # even the largest remaining candidate is harmless
        if not kern.attacks(a_arr, cand):
            return True  # cand itself is an uncountered attacker
        f, *more = rest
        with_f = inb.copy()
        with_f[f] = True
        return rec(with_f, more) or rec(inb, more)

    return rec(np.zeros(kern.m, dtype=bool), list(np.nonzero(pool)[0]))


def is_admissible_plus(
    fw: Framework, aset: Iterable[int], undefeated: Iterable[int]
) -> bool:
    """Does the conflict-free set defend itself?  ``undefeated`` must be the
    set of assumptions it does not individually attack (checked)."""
    kern = kernel(fw)
    a_arr = _slots(kern, aset)
    u_arr = _slots(kern, undefeated)
    if not np.array_equal(u_arr, kern.undefeated(a_arr)):
        raise ValueError("undefeated set is inconsistent with the candidate set")
    return not _exists_uncountered_attacker(kern, a_arr, u_arr, a_arr)


def defends_target_plus(
    fw: Framework, aset: Iterable[int], undefeated: Iterable[int], u: int
) -> bool:
    """Does the candidate set attack every attacker of ``u``?  The suspect
    pool is all assumptions; attackers containing an individually attacked
    assumption are counter-attacked immediately, so the pools coincide with
    the undefeated set in effect."""
    kern = kernel(fw)
    a_arr = _slots(kern, aset)
    u_arr = _slots(kern, undefeated)
    slot = kern.slot_of[u]
    if slot < 0 or not u_arr[slot]:
        raise ValueError(f"{fw.name_of(u)} is not in the undefeated set")
    target = np.zeros(kern.m, dtype=bool)
    target[slot] = True
    pool = np.ones(kern.m, dtype=bool)
    return not _exists_uncountered_attacker(kern, a_arr, pool, target)


def prune_holds(fw: Framework, aset: Iterable[int], undefeated: Iterable[int]) -> bool:
    """Strong-abstraction condition: every undefeated non-member is attacked
    by the undefeated set (normally through its preference-filtered closure,
    or reversely through a singleton derivation)."""
    kern = kernel(fw)
    return kern.prune_ok(_slots(kern, aset), _slots(kern, undefeated))


def _check_sentence(fw: Framework, s: int) -> None:
    if not (0 <= s < fw.n_sentences):
        raise ValueError(f"unknown sentence id {s}")


def credulous_adm_plus(fw: Framework, s: int) -> tuple[bool, RunStats]:
    """Credulous acceptance: is ``s`` derivable from some self-defending set?"""
    _check_sentence(fw, s)
    stats = RunStats()
    sess = new_session(
        fw,
        [
            Condition.conflict_free(),
            Condition.require_derives(s),
            Condition.compute_undefeated(),
        ],
    )
    while True:
        model = solve(sess)
        if model is None:
            stats.engine_calls = sess.solve_count
            stats.result = "NO"
            return False, stats
        stats.candidates += 1
        if is_admissible_plus(fw, model.in_set, model.undefeated):
            stats.engine_calls = sess.solve_count
            stats.result = "YES"
            stats.witness = model.in_set
            return True, stats
        add_exclusion(sess, Exclusion.exactly(model.in_set))


def _is_complete_candidate(fw: Framework, model: Model) -> bool:
    if not is_admissible_plus(fw, model.in_set, model.undefeated):
        return False
    # an undefeated non-member that the candidate defends belongs inside
    # every complete superset, so the candidate itself is not complete
    for u in sorted(model.undefeated - model.in_set):
        if defends_target_plus(fw, model.in_set, model.undefeated, u):
            return False
    return True


def _com_base(s: Optional[int], mode: AbstractionMode) -> list[Condition]:
    base = [Condition.conflict_free(), Condition.compute_undefeated()]
    if s is not None:
        base.insert(1, Condition.require_derives(s))
    if mode is AbstractionMode.STRONG:
        base.append(Condition.prune())
    return base


def credulous_com_plus(
    fw: Framework, s: int, mode: Union[str, AbstractionMode] = AbstractionMode.STRONG
) -> tuple[bool, RunStats]:
    """Credulous acceptance under complete semantics; the answer does not
    depend on the abstraction mode, only the candidate count does."""
    _check_sentence(fw, s)
    mode = _mode(mode)
    stats = RunStats()
    sess = new_session(fw, _com_base(s, mode))
    while True:
        model = solve(sess)
        if model is None:
            stats.engine_calls = sess.solve_count
            stats.result = "NO"
            return False, stats
        stats.candidates += 1
        if _is_complete_candidate(fw, model):
            stats.engine_calls = sess.solve_count
            stats.result = "YES"
            stats.witness = model.in_set
            return True, stats
        add_exclusion(sess, Exclusion.exactly(model.in_set))


def enumerate_plus(
    fw: Framework,
    sem: str,
    mode: Union[str, AbstractionMode] = AbstractionMode.STRONG,
    stats: Optional[RunStats] = None,
) -> Union[list[frozenset[int]], Model, frozenset[int], None]:
    """Enumeration and search variants over the preference-aware semantics.

    sem="adm"      -> all self-defending sets (canonical order)
    sem="com"      -> all complete sets (canonical order)
    sem="find-com" -> first complete set found, as a Model, or None
    sem="grounded" -> intersection of all complete sets, or None when the
                      complete family is empty
    """
    if sem not in ("adm", "com", "find-com", "grounded"):
        raise ValueError(f"unknown semantics {sem!r}")
    mode = _mode(mode)
    stats = stats if stats is not None else RunStats()
    if sem == "adm":
        base = [Condition.conflict_free(), Condition.compute_undefeated()]
    else:
        base = _com_base(None, mode)
    sess = new_session(fw, base)
    accept = (
        (lambda m: is_admissible_plus(fw, m.in_set, m.undefeated))
        if sem == "adm"
        else (lambda m: _is_complete_candidate(fw, m))
    )
    found: list[Model] = []
    while True:
        model = solve(sess)
        if model is None:
            break
        stats.candidates += 1
        if accept(model):
            if sem == "find-com":
                stats.engine_calls = sess.solve_count
                stats.result = model.in_set
                return model
            found.append(model)
        add_exclusion(sess, Exclusion.exactly(model.in_set))
    stats.engine_calls = sess.solve_count
    if sem == "find-com":
        stats.result = None
        return None
    if sem == "grounded":
        if not found:
            stats.result = None
            return None
        common = frozenset.intersection(*(m.in_set for m in found))
        stats.result = common
        return common
    family = canonical_family(fw, [m.in_set for m in found])
    stats.result = family
    return family
