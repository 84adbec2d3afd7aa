"""Brute-force reference semantics for differential testing.

Everything here is computed from explicit derivation trees: a sentence is
derivable from an assumption set exactly when some tree with that root has
its leaves inside the set.  Attacks, conflict-freeness, defense and the
extension families follow the definitions directly, by exhaustive subset
enumeration.  The only thing shared with the main reasoning path is the
Framework type itself.

Sizes are guarded: exhaustive enumeration is quadratic in the number of
subsets, so frameworks beyond ``SIZE_GUARD`` assumptions are rejected.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .framework import Framework

__all__ = [
    "SIZE_GUARD",
    "oracle_leafsets",
    "oracle_derives",
    "oracle_attacks_plus",
    "oracle_extensions",
]

SIZE_GUARD = 16


def _leafset_families(fw: Framework) -> dict[int, frozenset[frozenset[int]]]:
    """All exact leaf sets of finite derivation trees, per root sentence.

    Computed as a least fixed point: an assumption is its own singleton leaf
    set, and a rule combines one leaf set per body sentence into a leaf set
    of its head.  Trees may repeat sentences along a path (sometimes a leaf
    is reachable only through such a repetition), so the recursion is run to
    a fixpoint over the finite lattice of assumption-set families rather
    than cut off per path.
    """
    cache = fw.__dict__.get("_oracle_leafsets")
    if cache is not None:
        return cache
    slot = {a: i for i, a in enumerate(fw.asm_ids)}
    fams: list[set[int]] = [set() for _ in range(fw.n_sentences)]
    for a in fw.asm_ids:
        fams[a].add(1 << slot[a])
    changed = True
    while changed:
        changed = False
        for r in fw.rules:
            body_fams = [fams[b] for b in r.body]
            if any(not f for f in body_fams):
                continue
            head_fam = fams[r.head]
            before = len(head_fam)
            for combo in product(*body_fams):
                mask = 0
                for part in combo:
                    mask |= part
                head_fam.add(mask)
            if len(head_fam) != before:
                changed = True
    def unmask(mask: int) -> frozenset[int]:
        return frozenset(
            fw.asm_ids[i] for i in range(len(fw.asm_ids)) if (mask >> i) & 1
        )
    cache = {s: frozenset(unmask(m) for m in fams[s]) for s in range(fw.n_sentences)}
    fw.__dict__["_oracle_leafsets"] = cache
    return cache


def oracle_leafsets(
    fw: Framework, s: int, pool: Iterable[int]
) -> frozenset[frozenset[int]]:
    """All X within ``pool`` that are the exact leaf set of some tree deriving s."""
    pool = frozenset(pool)
    return frozenset(x for x in _leafset_families(fw)[s] if x <= pool)


def oracle_derives(fw: Framework, s: int, aset: Iterable[int]) -> bool:
    """Is ``s`` derivable from ``aset`` (some derivation tree fits inside it)."""
    return bool(oracle_leafsets(fw, s, aset))


def oracle_attacks_plus(
    fw: Framework, aset: Iterable[int], bset: Iterable[int]
) -> bool:
    """Definition-level attack: normal via a leaf set none of whose members is
    strictly below the attacked assumption, reverse via a leaf set containing
    a member strictly below the attacked one."""
    A, B = frozenset(aset), frozenset(bset)
    strict = fw.prefs.strict
    fam = _leafset_families(fw)
    for b in B:
        for leaves in fam[fw.contrary[b]]:
            if leaves <= A and not any(strict(x, b) for x in leaves):
                return True
    for a in A:
        for leaves in fam[fw.contrary[a]]:
            if leaves <= B and any(strict(x, a) for x in leaves):
                return True
    return False


def _plain_attacks(fw: Framework, aset: frozenset[int], bset: frozenset[int]) -> bool:
    # preference-blind attack: some member's contrary derivable from the attacker
    fam = _leafset_families(fw)
    return any(any(leaves <= aset for leaves in fam[fw.contrary[b]]) for b in bset)


def oracle_extensions(fw: Framework, sem: str) -> list[frozenset[int]]:
    """Exhaustive extension family under ``sem`` in
    {"adm", "com", "prf", "adm+", "com+"}.

    The plain variants ignore the preference relation; the "+" variants use
    the preference-aware attack.  Defense and completeness are checked by
    quantifying over all subsets, straight from the definitions.
    """
    m = len(fw.asm_ids)
    if m > SIZE_GUARD:
        raise ValueError(
            f"size guard exceeded: {m} assumptions > {SIZE_GUARD}; "
            "exhaustive enumeration refused"
        )
    if sem not in ("adm", "com", "prf", "adm+", "com+"):
        raise ValueError(f"unknown semantics {sem!r}")
    asm = list(fw.asm_ids)
    subsets = [
        frozenset(asm[j] for j in range(m) if (i >> (m - 1 - j)) & 1)
        for i in range(1 << m)
    ]
    att = (
        oracle_attacks_plus if sem.endswith("+") else _plain_attacks
    )
    attacks = {
        (x, y): att(fw, subsets[x], subsets[y])
        for x in range(len(subsets))
        for y in range(len(subsets))
    }
    index = {s: i for i, s in enumerate(subsets)}

    def conflict_free(i: int) -> bool:
        return not attacks[(i, i)]

    def defends(i: int, j: int) -> bool:
        return all(
            attacks[(i, k)] for k in range(len(subsets)) if attacks[(k, j)]
        )

    admissible = [
        i for i in range(len(subsets)) if conflict_free(i) and defends(i, i)
    ]
    if sem in ("adm", "adm+"):
        chosen = admissible
    elif sem in ("com", "com+"):
        chosen = [
            i
            for i in admissible
            if all(
                subsets[j] <= subsets[i]
                for j in range(len(subsets))
                if defends(i, j)
            )
        ]
    else:  # prf: subset-maximal admissible
        adm_sets = [subsets[i] for i in admissible]
        chosen = [
            index[s]
            for s in adm_sets
            if not any(s < other for other in adm_sets)
        ]
    family = [subsets[i] for i in chosen]
    return sorted(family, key=lambda s: (len(s), tuple(sorted(fw.name_of(x) for x in s))))
