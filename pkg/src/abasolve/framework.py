"""Core data model: frameworks, rules, preferences, parsing and serialization.

A framework couples a rule system over named sentences with a distinguished
set of assumptions, a total contrary mapping on the assumptions, and a
preference preorder over the assumptions.  Names are interned to dense
integer ids at construction time; everything downstream works on index sets.

File format (UTF-8 text, one statement per line, ``#`` starts a comment):

    a <name>            declare an assumption
    c <asm> <sent>      contrary of <asm> is <sent>
    r <head> <b1> ... <bk>   rule with k >= 0 body sentences
    p <x> <y>           preference: y is at most as preferred as x

Sentences are declared implicitly by appearing in ``c``, ``r`` or ``p``
statements.  ``serialize_framework`` emits the same format deterministically.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "Sentence",
    "Rule",
    "PrefRelation",
    "Framework",
    "ParseError",
    "DuplicateRuleWarning",
    "parse_framework",
    "serialize_framework",
    "pref_close",
    "contrary_of",
    "validate",
]

_NAME_RE = re.compile(r"^[^\s#]+$")


class Sentence(NamedTuple):
    id: int
    name: str


@dataclass(frozen=True)
class Rule:
    id: int
    head: int
    body: frozenset[int]


class ParseError(ValueError):
    """Raised on malformed framework input; collects all diagnostics."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


class DuplicateRuleWarning(UserWarning):
    pass


class PrefRelation:
    """Transitively closed preorder over assumption ids, with its strict part.

    ``leq(x, y)`` holds when x is at most as preferred as y.  The strict part
    is derived: ``strict(x, y)`` iff ``leq(x, y)`` and not ``leq(y, x)``.
    """

    def __init__(self, asm_ids: Iterable[int], leq_matrix: np.ndarray):
        self.asm_ids: tuple[int, ...] = tuple(sorted(asm_ids))
        self._slot = {a: i for i, a in enumerate(self.asm_ids)}
        m = len(self.asm_ids)
        if leq_matrix.shape != (m, m):
            raise ValueError("leq matrix shape does not match assumption count")
        self.leq_matrix = leq_matrix.astype(bool)
        self.strict_matrix = self.leq_matrix & ~self.leq_matrix.T
        self.leq_matrix.setflags(write=False)
        self.strict_matrix.setflags(write=False)

    @classmethod
    def empty(cls, asm_ids: Iterable[int]) -> "PrefRelation":
        ids = tuple(sorted(asm_ids))
        return cls(ids, np.zeros((len(ids), len(ids)), dtype=bool))

    @property
    def is_empty(self) -> bool:
        return not self.leq_matrix.any()

    def leq(self, x: int, y: int) -> bool:
        return bool(self.leq_matrix[self._slot[x], self._slot[y]])

    def strict(self, x: int, y: int) -> bool:
        return bool(self.strict_matrix[self._slot[x], self._slot[y]])

    def leq_pairs(self) -> Iterator[tuple[int, int]]:
        """All (x, y) id pairs with x at most as preferred as y."""
        for i, j in np.argwhere(self.leq_matrix):
            yield self.asm_ids[i], self.asm_ids[j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrefRelation):
            return NotImplemented
        return self.asm_ids == other.asm_ids and bool(
            (self.leq_matrix == other.leq_matrix).all()
        )

    def __hash__(self):  # identity hashing; relations are immutable values
        return id(self)


def pref_close(
    pairs: Iterable[tuple[int, int]], assumptions: Iterable[int]
) -> PrefRelation:
    """Close declared (stronger, weaker) pairs into a PrefRelation.

    A declared pair (x, y) states that y is at most as preferred as x.
    The result is the transitive closure of the declared pairs.
    """
    asm_ids = tuple(sorted(set(assumptions)))
    slot = {a: i for i, a in enumerate(asm_ids)}
    m = len(asm_ids)
    leq = np.zeros((m, m), dtype=bool)
    for stronger, weaker in pairs:
        if stronger not in slot or weaker not in slot:
            raise ValueError(
                f"preference pair ({stronger}, {weaker}) mentions a non-assumption"
            )
        leq[slot[weaker], slot[stronger]] = True
    # Floyd-Warshall over the boolean matrix; m is the assumption count.
    for k in range(m):
        via = leq[:, k]
        if via.any():
            leq[via] |= leq[k]
    return PrefRelation(asm_ids, leq)


@dataclass(eq=False)
class Framework:
    """Validated framework; treat as immutable once constructed."""

    names: tuple[str, ...]
    rules: tuple[Rule, ...]
    assumptions: frozenset[int]
    contrary: dict[int, int]
    prefs: PrefRelation
    name_to_id: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.name_to_id:
            self.name_to_id = {n: i for i, n in enumerate(self.names)}
        self.asm_ids: tuple[int, ...] = tuple(sorted(self.assumptions))

    @property
    def n_sentences(self) -> int:
        return len(self.names)

    def sentence(self, name: str) -> Sentence:
        return Sentence(self.name_to_id[name], name)

    def id_of(self, name: str) -> int:
        return self.name_to_id[name]

    def name_of(self, sid: int) -> str:
        return self.names[sid]

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.name_to_id[n] for n in names)

    def name_set(self, sids: Iterable[int]) -> frozenset[str]:
        return frozenset(self.names[s] for s in sids)

    def is_assumption(self, sid: int) -> bool:
        return sid in self.assumptions


def contrary_of(fw: Framework, a: int) -> Sentence:
    """The unique contrary of assumption ``a``."""
    if a not in fw.assumptions:
        raise ValueError(f"{fw.names[a] if 0 <= a < len(fw.names) else a!r} is not an assumption")
    c = fw.contrary[a]
    return Sentence(c, fw.names[c])


def validate(fw: Framework) -> list[str]:
    """Check all framework invariants; returns a list of violations (empty = ok)."""
    out: list[str] = []
    if len(set(fw.names)) != len(fw.names):
        out.append("sentence names are not unique")
    for n in fw.names:
        if not _NAME_RE.match(n):
            out.append(f"invalid sentence name {n!r}")
    heads = {r.head for r in fw.rules}
    for a in sorted(fw.assumptions):
        if a in heads:
            out.append(f"assumption {fw.names[a]} occurs as a rule head (framework not flat)")
        if a not in fw.contrary:
            out.append(f"assumption {fw.names[a]} has no contrary")
    for a in fw.contrary:
        if a not in fw.assumptions:
            out.append(f"contrary declared for non-assumption {fw.names[a]}")
    for r in fw.rules:
        if not (0 <= r.head < len(fw.names)):
            out.append(f"rule {r.id} head id out of range")
        for b in r.body:
            if not (0 <= b < len(fw.names)):
                out.append(f"rule {r.id} body id out of range")
    if set(fw.prefs.asm_ids) != fw.assumptions:
        out.append("preference relation is not over exactly the assumptions")
    return out


def _statements(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line.split()


def parse_framework(text: str) -> Framework:
    """Parse framework-file content into a validated Framework.

    All diagnostics carry line numbers; every detected problem is reported,
    not just the first.  Duplicate rules are dropped with a warning.
    """
    errors: list[str] = []
    names: list[str] = []
    name_to_id: dict[str, int] = {}

    def intern(tok: str) -> int:
        sid = name_to_id.get(tok)
        if sid is None:
            sid = len(names)
            name_to_id[tok] = sid
            names.append(tok)
        return sid

    stmts = []
    for lineno, toks in _statements(text):
        kind = toks[0]
        arity_ok = (
            (kind == "a" and len(toks) == 2)
            or (kind == "c" and len(toks) == 3)
            or (kind == "r" and len(toks) >= 2)
            or (kind == "p" and len(toks) == 3)
        )
        if kind not in ("a", "c", "r", "p"):
            errors.append(f"line {lineno}: unknown statement {kind!r}")
            continue
        if not arity_ok:
            errors.append(f"line {lineno}: malformed {kind!r} statement")
            continue
        bad_name = False
        for tok in toks[1:]:
            if not _NAME_RE.match(tok):
                errors.append(f"line {lineno}: invalid name {tok!r}")
                bad_name = True
        if bad_name:
            continue
        for tok in toks[1:]:
            intern(tok)
        stmts.append((lineno, toks))

    assumptions: dict[int, int] = {}  # id -> declaring line
    for lineno, toks in stmts:
        if toks[0] != "a":
            continue
        sid = name_to_id[toks[1]]
        if sid in assumptions:
            errors.append(f"line {lineno}: duplicate assumption declaration {toks[1]!r}")
        else:
            assumptions[sid] = lineno

    contrary: dict[int, int] = {}
    rules: list[Rule] = []
    rule_lines: list[int] = []
    seen_rules: dict[tuple[int, frozenset[int]], int] = {}
    pref_pairs: list[tuple[int, int]] = []
    seen_prefs: set[tuple[int, int]] = set()
    for lineno, toks in stmts:
        kind = toks[0]
        if kind == "c":
            a, x = name_to_id[toks[1]], name_to_id[toks[2]]
            if a not in assumptions:
                errors.append(f"line {lineno}: contrary declared for undeclared assumption {toks[1]!r}")
            elif a in contrary:
                errors.append(f"line {lineno}: duplicate contrary declaration for {toks[1]!r}")
            else:
                contrary[a] = x
        elif kind == "r":
            head = name_to_id[toks[1]]
            body = frozenset(name_to_id[t] for t in toks[2:])
            key = (head, body)
            if key in seen_rules:
                warnings.warn(
                    f"line {lineno}: duplicate rule for {toks[1]!r} "
                    f"(first seen on line {seen_rules[key]}); deduplicated",
                    DuplicateRuleWarning,
                    stacklevel=2,
                )
            else:
                seen_rules[key] = lineno
                rules.append(Rule(len(rules), head, body))
                rule_lines.append(lineno)
        elif kind == "p":
            x, y = name_to_id[toks[1]], name_to_id[toks[2]]
            for tok, sid in ((toks[1], x), (toks[2], y)):
                if sid not in assumptions:
                    errors.append(f"line {lineno}: preference over non-assumption {tok!r}")
            if (x, y) in seen_prefs:
                errors.append(f"line {lineno}: duplicate preference declaration {toks[1]} {toks[2]}")
            seen_prefs.add((x, y))
            pref_pairs.append((x, y))

    for rid, rule in enumerate(rules):
        if rule.head in assumptions:
            errors.append(
                f"line {rule_lines[rid]}: assumption {names[rule.head]!r} used as rule head "
                "(framework not flat)"
            )
    for sid, lineno in sorted(assumptions.items(), key=lambda kv: kv[1]):
        if sid not in contrary:
            errors.append(f"line {lineno}: assumption {names[sid]!r} has no contrary")
    if errors:
        raise ParseError(errors)

    prefs = pref_close(pref_pairs, assumptions.keys())
    fw = Framework(
        names=tuple(names),
        rules=tuple(rules),
        assumptions=frozenset(assumptions),
        contrary=contrary,
        prefs=prefs,
    )
    violations = validate(fw)
    if violations:
        raise ParseError(violations)
    return fw


def serialize_framework(fw: Framework) -> str:
    """Emit the canonical text form: a, c, r, p blocks, each sorted by name."""
    lines: list[str] = []
    for a in sorted(fw.assumptions, key=fw.name_of):
        lines.append(f"a {fw.names[a]}")
    for a in sorted(fw.contrary, key=fw.name_of):
        lines.append(f"c {fw.names[a]} {fw.names[fw.contrary[a]]}")
    rule_keys = sorted(
        (fw.names[r.head], sorted(fw.names[b] for b in r.body)) for r in fw.rules
    )
    for head, body in rule_keys:
        lines.append(" ".join(["r", head, *body]))
    pairs = sorted((fw.names[s], fw.names[w]) for w, s in fw.prefs.leq_pairs())
    for stronger, weaker in pairs:
        lines.append(f"p {stronger} {weaker}")
    return "\n".join(lines) + ("\n" if lines else "")
