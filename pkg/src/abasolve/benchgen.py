"""Deterministic random-instance generator.

Instances follow the classic recipe for this problem family: a fixed share
of the sentences become assumptions with uniformly drawn contraries, every
other sentence receives between one and ``rules_per_head_max`` rules with
uniformly drawn distinct bodies, and preferences come from a random
permutation of the assumptions: each earlier element is declared preferred
over each later one independently with probability ``pref_prob``, so the
declared pairs are acyclic and all strict.

The random source is the stdlib Mersenne Twister (``random.Random``), which
reproduces identically across platforms for a fixed seed.  Draw order:
sentence shuffle, then one contrary per assumption (in shuffled order),
then per non-assumption (in shuffled order) the rule count followed by each
rule's body length and body sample, then the preference permutation shuffle
followed by one uniform draw per ordered assumption pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .framework import Framework, Rule, pref_close, validate

__all__ = ["GenParams", "gen_framework"]


@dataclass(frozen=True)
class GenParams:
    n_sentences: int
    asm_ratio: float
    rules_per_head_max: int = 20
    body_len_max: int = 20
    pref_prob: float = 0.0
    seed: int = 0

    @property
    def n_assumptions(self) -> int:
        return int(round(self.n_sentences * self.asm_ratio))

    def check(self) -> None:
        if self.n_sentences < 2:
            raise ValueError("need at least two sentences")
        if not 0.0 < self.asm_ratio < 1.0:
            raise ValueError("asm_ratio must lie strictly between 0 and 1")
        if self.rules_per_head_max < 1 or self.body_len_max < 1:
            raise ValueError("per-head rule count and body length maxima must be >= 1")
        if not 0.0 <= self.pref_prob <= 1.0:
            raise ValueError("pref_prob must lie in [0, 1]")
        if self.n_assumptions < 1:
            raise ValueError("parameters yield no assumptions")
        if self.n_assumptions >= self.n_sentences:
            raise ValueError("parameters leave no non-assumption sentences")


def gen_framework(params: GenParams) -> Framework:
    """Generate a framework; identical params and seed give identical output."""
    params.check()
    rng = random.Random(params.seed)
    n = params.n_sentences
    names = [f"s{i}" for i in range(n)]
    shuffled = names[:]
    rng.shuffle(shuffled)
    m = params.n_assumptions
    asm_names = shuffled[:m]
    non_asm = shuffled[m:]

    contrary_by_name = {a: rng.choice(names) for a in asm_names}

    rules: list[Rule] = []
    name_to_id = {name: i for i, name in enumerate(names)}
    max_body = min(params.body_len_max, n)
    for head in non_asm:
        head_id = name_to_id[head]
        for _ in range(rng.randint(1, params.rules_per_head_max)):
            blen = rng.randint(1, max_body)
            body = frozenset(name_to_id[b] for b in rng.sample(names, blen))
            rules.append(Rule(len(rules), head_id, body))

    perm = asm_names[:]
    rng.shuffle(perm)
    pairs = [
        (name_to_id[perm[i]], name_to_id[perm[j]])
        for i in range(m)
        for j in range(i + 1, m)
        if rng.random() < params.pref_prob
    ]

    asm_ids = frozenset(name_to_id[a] for a in asm_names)
    fw = Framework(
        names=tuple(names),
        rules=tuple(rules),
        assumptions=asm_ids,
        contrary={name_to_id[a]: name_to_id[c] for a, c in contrary_by_name.items()},
        prefs=pref_close(pairs, asm_ids),
    )
    problems = validate(fw)
    if problems:  # cannot happen by construction; guard against regressions
        raise AssertionError("generated framework fails validation: " + "; ".join(problems))
    return fw
