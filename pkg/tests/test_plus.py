import random

import numpy as np
import pytest

from abasolve import (
    check_complete,
    closure,
    credulous_adm_plus,
    credulous_com_plus,
    defends_target_plus,
    enumerate_plus,
    is_admissible_plus,
    oracle_derives,
    oracle_extensions,
    prune_holds,
    undefeated_set,
)
from abasolve.kernel import kernel
from abasolve.plus import _exists_uncountered_attacker

from conftest import names
from test_derivation import small_frameworks


def test_is_admissible_examples(ex1):
    ids = ex1.ids
    assert is_admissible_plus(ex1, ids(["c"]), ids(["b", "c"]))
    assert not is_admissible_plus(ex1, ids(["a"]), ids(["a", "c"]))
    assert is_admissible_plus(ex1, frozenset(), ids(["a", "b", "c"]))


def test_is_admissible_defensive_check(ex1):
    with pytest.raises(ValueError, match="inconsistent"):
        is_admissible_plus(ex1, ex1.ids(["c"]), ex1.ids(["a", "b", "c"]))


def test_defends_target_examples(ex1):
    ids, b, c = ex1.ids, ex1.id_of("b"), ex1.id_of("c")
    assert defends_target_plus(ex1, ids(["c"]), ids(["b", "c"]), b)
    assert defends_target_plus(ex1, frozenset(), ids(["a", "b", "c"]), c)
    assert not defends_target_plus(ex1, frozenset(), ids(["a", "b", "c"]), b)
    with pytest.raises(ValueError, match="not in the undefeated"):
        defends_target_plus(ex1, ids(["c"]), ids(["b", "c"]), ex1.id_of("a"))


def test_prune_examples(ex1):
    ids = ex1.ids
    assert prune_holds(ex1, ids(["b", "c"]), ids(["b", "c"]))
    assert not prune_holds(ex1, ids(["c"]), ids(["b", "c"]))
    assert not prune_holds(ex1, frozenset(), ids(["a", "b", "c"]))


def test_credulous_adm_examples(ex1):
    yes, stats = credulous_adm_plus(ex1, ex1.id_of("c"))
    assert yes and names(ex1, stats.witness) == ("c",)
    assert credulous_adm_plus(ex1, ex1.id_of("a"))[0] is False
    assert credulous_adm_plus(ex1, ex1.id_of("x"))[0] is False


def test_credulous_com_examples(ex1):
    for mode in ("weak", "strong"):
        yes, stats = credulous_com_plus(ex1, ex1.id_of("b"), mode)
        assert yes and names(ex1, stats.witness) == ("b", "c")
        assert credulous_com_plus(ex1, ex1.id_of("a"), mode)[0] is False
        assert credulous_com_plus(ex1, ex1.id_of("y"), mode)[0] is False


def test_enumerate_examples(ex1):
    assert names(ex1, enumerate_plus(ex1, "adm")) == [(), ("c",), ("b", "c")]
    assert names(ex1, enumerate_plus(ex1, "com", "strong")) == [("b", "c")]
    assert names(ex1, enumerate_plus(ex1, "grounded", "strong")) == ("b", "c")
    model = enumerate_plus(ex1, "find-com", "strong")
    assert names(ex1, model.in_set) == ("b", "c")
    with pytest.raises(ValueError, match="unknown semantics"):
        enumerate_plus(ex1, "stable")


def test_families_match_oracle_both_modes():
    for fw in small_frameworks(35, seed=61):
        adm = oracle_extensions(fw, "adm+")
        com = oracle_extensions(fw, "com+")
        assert enumerate_plus(fw, "adm") == adm
        for mode in ("weak", "strong"):
            assert enumerate_plus(fw, "com", mode) == com
            found = enumerate_plus(fw, "find-com", mode)
            if com:
                assert found is not None and found.in_set in com
            else:
                assert found is None
            grounded = enumerate_plus(fw, "grounded", mode)
            if com:
                assert grounded == frozenset.intersection(*com)
            else:
                assert grounded is None


def test_credulous_matches_oracle():
    rng = random.Random(62)
    for fw in small_frameworks(30, seed=62):
        adm = oracle_extensions(fw, "adm+")
        com = oracle_extensions(fw, "com+")
        for _ in range(4):
            s = rng.randrange(fw.n_sentences)
            want_adm = any(oracle_derives(fw, s, ext) for ext in adm)
            want_com = any(oracle_derives(fw, s, ext) for ext in com)
            assert credulous_adm_plus(fw, s)[0] == want_adm
            for mode in ("weak", "strong"):
                assert credulous_com_plus(fw, s, mode)[0] == want_com


def test_mode_independence_and_candidate_dominance():
    rng = random.Random(63)
    for fw in small_frameworks(30, seed=63):
        s = rng.randrange(fw.n_sentences)
        v_weak, st_weak = credulous_com_plus(fw, s, "weak")
        v_strong, st_strong = credulous_com_plus(fw, s, "strong")
        assert v_weak == v_strong
        assert st_strong.candidates <= st_weak.candidates
        if v_weak:
            assert st_weak.witness == st_strong.witness


def test_prune_soundness_on_oracle_complete_sets():
    for fw in small_frameworks(30, seed=64):
        for ext in oracle_extensions(fw, "com+"):
            assert prune_holds(fw, ext, undefeated_set(fw, ext))


def test_empty_preference_collapse():
    rng = random.Random(65)
    for fw in small_frameworks(25, seed=65, pref_probs=(0.0,)):
        com_plus = enumerate_plus(fw, "com", "strong")
        asm = sorted(fw.assumptions)
        brute = []
        for i in range(1 << len(asm)):
            a = frozenset(asm[j] for j in range(len(asm)) if (i >> j) & 1)
            if check_complete(fw, a):
                brute.append(a)
        assert set(com_plus) == set(brute)
        # credulous acceptance under admissible matches complete-based credulous
        for _ in range(3):
            s = rng.randrange(fw.n_sentences)
            want = any(s in closure(fw, a) for a in brute)
            assert credulous_adm_plus(fw, s)[0] == want


def test_conflict_free_sets_are_self_undefeated():
    rng = random.Random(66)
    for fw in small_frameworks(25, seed=66):
        asm = sorted(fw.assumptions)
        for _ in range(6):
            a = frozenset(x for x in asm if rng.random() < 0.4)
            th = closure(fw, a)
            if any(fw.contrary[x] in th for x in a):
                continue  # not conflict-free
            assert a <= undefeated_set(fw, a)


def test_suspect_pool_equality():
    # restricting the defends-target suspect pool to the undefeated set gives
    # the same verdicts as the full-assumption pool
    rng = random.Random(67)
    for fw in small_frameworks(20, seed=67):
        kern = kernel(fw)
        asm = sorted(fw.assumptions)
        for _ in range(4):
            a = frozenset(x for x in asm if rng.random() < 0.35)
            th = closure(fw, a)
            if any(fw.contrary[x] in th for x in a):
                continue
            u = undefeated_set(fw, a)
            a_arr = np.array([x in a for x in asm], dtype=bool)
            u_arr = np.array([x in u for x in asm], dtype=bool)
            for t in sorted(u):
                target = np.zeros(len(asm), dtype=bool)
                target[asm.index(t)] = True
                full_pool = _exists_uncountered_attacker(
                    kern, a_arr, np.ones(len(asm), dtype=bool), target
                )
                u_pool = _exists_uncountered_attacker(kern, a_arr, u_arr, target)
                assert full_pool == u_pool


def test_stats_shape(ex1):
    verdict, stats = credulous_com_plus(ex1, ex1.id_of("b"), "strong")
    assert verdict is True
    assert stats.result == "YES"
    assert 1 <= stats.candidates <= stats.engine_calls
