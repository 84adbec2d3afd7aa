"""Incremental candidate-model search over assumption in/out assignments.

A Session holds a framework, a fixed set of base conditions and a growing
store of blocking exclusions.  ``solve`` returns the first complete
assignment, in a fixed deterministic order, that satisfies the base
conditions, any per-call extra conditions, a per-call floor (forced-in
assumptions) and every stored exclusion; or None when no such assignment
exists.

Search is a depth-first binary branch over assumptions in ascending id
order, trying "out" before "in", so the first model found is always the
least one in that order.  Partial assignments are propagated: violations
that hold for every completion prune the subtree, and literals forced in
every valid completion are assigned immediately.  Leaf evaluation is exact,
so propagation only affects speed, never the model set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .framework import Framework
from .kernel import FrameworkKernel, kernel

__all__ = [
    "Condition",
    "Exclusion",
    "Model",
    "Session",
    "new_session",
    "add_exclusion",
    "solve",
]

_KINDS = (
    "conflict-free",
    "require-derives",
    "forbid-derives",
    "complete-fixpoint",
    "compute-undefeated",
    "prune",
)
_PAYLOAD_KINDS = ("require-derives", "forbid-derives")


@dataclass(frozen=True)
class Condition:
    kind: str
    sentence: Optional[int] = None

    @classmethod
    def conflict_free(cls) -> "Condition":
        return cls("conflict-free")

    @classmethod
    def require_derives(cls, s: int) -> "Condition":
        return cls("require-derives", s)

    @classmethod
    def forbid_derives(cls, s: int) -> "Condition":
        return cls("forbid-derives", s)

    @classmethod
    def complete_fixpoint(cls) -> "Condition":
        return cls("complete-fixpoint")

    @classmethod
    def compute_undefeated(cls) -> "Condition":
        return cls("compute-undefeated")

    @classmethod
    def prune(cls) -> "Condition":
        return cls("prune")


@dataclass(frozen=True)
class Exclusion:
    kind: str  # "subset-of" | "exactly"
    witness: frozenset[int]

    @classmethod
    def subset_of(cls, witness: Iterable[int]) -> "Exclusion":
        return cls("subset-of", frozenset(witness))

    @classmethod
    def exactly(cls, witness: Iterable[int]) -> "Exclusion":
        return cls("exactly", frozenset(witness))


@dataclass(frozen=True)
class Model:
    in_set: frozenset[int]
    closure: frozenset[int]
    undefeated: Optional[frozenset[int]] = None


@dataclass(frozen=True)
class _Flags:
    cf: bool
    complete: bool
    undef: bool
    prune: bool
    require: tuple[int, ...]
    forbid: tuple[int, ...]


@dataclass
class _Cursor:
    sig: tuple
    walker: Iterator
    last_mask: Optional[int]
    last_model: Optional[Model]


class _Learned:
    """Conflict clauses generalizing search failures; sound for every
    assignment under the session's base conditions, so they persist for the
    session's lifetime and only ever prune non-solutions.

    A nogood is a slot mask that must not be fully in (a self-attack
    support).  A defeat clause (a, xs) says: when slot a is in, the final
    set must derive one of the sentences in xs (the contraries of an
    attacker support of a); otherwise a's contrary stays derivable from the
    undefeated region."""

    def __init__(self):
        self.nogoods: list[int] = []
        self.seen: set = set()
        self.cl_a: list[int] = []
        self.cl_xs: list[np.ndarray] = []
        self.always_out: int = 0
        self._flat: Optional[np.ndarray] = None
        self._offsets: Optional[np.ndarray] = None
        self._a_arr: Optional[np.ndarray] = None

    def add_nogood(self, mask: int) -> None:
        if ("n", mask) not in self.seen:
            self.seen.add(("n", mask))
            self.nogoods.append(mask)

    def add_defeat_clause(self, a_slot: int, xs: np.ndarray) -> None:
        if len(xs) == 0:
            # no attacker support can ever be defeated: a can never be in
            self.always_out |= 1 << a_slot
            return
        key = ("d", a_slot, xs.tobytes())
        if key not in self.seen:
            self.seen.add(key)
            self.cl_a.append(a_slot)
            self.cl_xs.append(xs)
            self._flat = None

    def compiled(self):
        if self._flat is None and self.cl_a:
            self._flat = np.concatenate(self.cl_xs)
            lens = np.fromiter((len(x) for x in self.cl_xs), dtype=np.int64)
            self._offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
            self._a_arr = np.array(self.cl_a, dtype=np.int64)
        return self._flat, self._offsets, self._a_arr


@dataclass
class Session:
    """Single-owner incremental search context; exclusions only grow."""

    fw: Framework
    base: tuple[Condition, ...]
    kern: FrameworkKernel = field(repr=False)
    exclusions: list[Exclusion] = field(default_factory=list)
    solve_count: int = 0
    _exact: set[int] = field(default_factory=set, repr=False)
    _subsets: list[int] = field(default_factory=list, repr=False)
    _cursor: Optional[_Cursor] = field(default=None, repr=False)
    _learned: _Learned = field(default_factory=_Learned, repr=False)


def _check_conditions(fw: Framework, conds: Iterable[Condition]) -> None:
    for c in conds:
        if c.kind not in _KINDS:
            raise ValueError(f"unknown condition kind {c.kind!r}")
        if c.kind in _PAYLOAD_KINDS:
            if c.sentence is None or not (0 <= c.sentence < fw.n_sentences):
                raise ValueError(f"condition {c.kind} needs a valid sentence id")
        elif c.sentence is not None:
            raise ValueError(f"condition {c.kind} takes no sentence")


def _flags(conds: tuple[Condition, ...]) -> _Flags:
    kinds = {c.kind for c in conds}
    return _Flags(
        cf="conflict-free" in kinds or "complete-fixpoint" in kinds,
        complete="complete-fixpoint" in kinds,
        undef="compute-undefeated" in kinds,
        prune="prune" in kinds,
        require=tuple(sorted(c.sentence for c in conds if c.kind == "require-derives")),
        forbid=tuple(sorted(c.sentence for c in conds if c.kind == "forbid-derives")),
    )


def new_session(fw: Framework, base: Iterable[Condition]) -> Session:
    """Fresh session; contradictory base conditions are rejected eagerly."""
    base = tuple(base)
    _check_conditions(fw, base)
    fl = _flags(base)
    clash = set(fl.require) & set(fl.forbid)
    if clash:
        names = ", ".join(fw.name_of(s) for s in sorted(clash))
        raise ValueError(f"require-derives and forbid-derives of the same sentence: {names}")
    return Session(fw=fw, base=base, kern=kernel(fw))


def _slot_mask(kern: FrameworkKernel, sids: Iterable[int]) -> int:
    mask = 0
    for s in sids:
        slot = kern.slot_of[s]
        if slot < 0:
            raise ValueError(f"{kern.fw.name_of(s)} is not an assumption")
        mask |= 1 << int(slot)
    return mask


def _mask_arr(mask: int, m: int) -> np.ndarray:
    if m == 0:
        return np.zeros(0, dtype=bool)
    raw = mask.to_bytes((m + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little", count=m)
    return bits.astype(bool)


def _arr_mask(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _slotbits(slots: np.ndarray) -> int:
    mask = 0
    for s in slots:
        mask |= 1 << int(s)
    return mask


def add_exclusion(sess: Session, exc: Exclusion) -> None:
    """Persistently block a past candidate (and, for subset-of, its subsets)."""
    mask = _slot_mask(sess.kern, exc.witness)
    sess.exclusions.append(exc)
    if exc.kind == "exactly":
        sess._exact.add(mask)
    elif exc.kind == "subset-of":
        sess._subsets.append(mask)
    else:
        raise ValueError(f"unknown exclusion kind {exc.kind!r}")


class _WalkState:
    """Per-walk memo of closures and undefeated sets, keyed by slot mask.

    Out-branches keep the in-mask and in-branches keep the in-or-free mask,
    so consecutive nodes hit these caches constantly."""

    def __init__(self, kern):
        self.kern = kern
        self.th: dict[int, np.ndarray] = {}
        self.und: dict[int, np.ndarray] = {}
        self.v: dict[int, np.ndarray] = {}

    def _trim(self, cache: dict) -> None:
        if len(cache) > 200_000:
            cache.clear()

    def closure_of(self, mask: int) -> np.ndarray:
        th = self.th.get(mask)
        if th is None:
            self._trim(self.th)
            th = self.kern.close_cols(self.kern.slots_to_sent(_mask_arr(mask, self.kern.m)))
            self.th[mask] = th
        return th

    def undef_of(self, mask: int) -> np.ndarray:
        u = self.und.get(mask)
        if u is None:
            self._trim(self.und)
            u = self.kern.undefeated(_mask_arr(mask, self.kern.m))
            self.und[mask] = u
        return u

    def defense_closure(self, defeated_mask: int) -> np.ndarray:
        """Closure of the assumptions outside the defeated set."""
        v = self.v.get(defeated_mask)
        if v is None:
            self._trim(self.v)
            arr = _mask_arr(defeated_mask, self.kern.m)
            v = self.kern.close_cols(self.kern.slots_to_sent(~arr))
            self.v[defeated_mask] = v
        return v


def _propagate(sess: Session, fl: _Flags, st: _WalkState, inm: int, outm: int, full: int):
    """Force implied literals to fixpoint; None when no completion can satisfy
    the conditions.  Returns the extended (inm, outm) and the closure of the
    in-set.  All checks are two-sided bounds that coincide with the exact
    conditions once the assignment is complete.  Pruned conflicts are
    generalized into learned clauses on the session."""
    kern = sess.kern
    learned = sess._learned
    m = kern.m
    while True:
        free = full & ~inm & ~outm
        infm = inm | free
        in_arr = _mask_arr(inm, m)
        th_in = st.closure_of(inm)
        forced_in = 0
        forced_out = 0
        if fl.complete:
            if learned.always_out & inm:
                return None
            forced_out |= learned.always_out & free
        if fl.cf:
            for g in learned.nogoods:
                r = g & ~inm
                if r == 0:
                    return None
                if r & outm:
                    continue
                if r & (r - 1) == 0 and r & free:
                    forced_out |= r
        attacked_by_in = th_in[kern.contrary_sid] if m else np.zeros(0, bool)
        if fl.cf:
            hit = attacked_by_in & in_arr
            if hit.any():
                a = int(np.flatnonzero(hit)[0])
                support = kern.support(in_arr, int(kern.contrary_sid[a]))
                learned.add_nogood(_slotbits(support) | (1 << a))
                return None
            forced_out |= _arr_mask(attacked_by_in) & free
        th_inf = None
        if fl.require or fl.complete:
            th_inf = st.closure_of(infm)
        for s in fl.require:
            if not th_inf[s]:
                return None
        for s in fl.forbid:
            if th_in[s]:
                return None
        if fl.complete:
            flat, offsets, a_arr = learned.compiled()
            if flat is not None:
                possible = np.add.reduceat(th_inf[flat].view(np.int8), offsets) > 0
                for a in a_arr[~possible]:
                    bit = 1 << int(a)
                    if bit & inm:
                        return None
                    forced_out |= bit & free
            out_arr = _mask_arr(outm, m)
            # The defeated set grows with the in-set, so the closure of the
            # undefeated region is bracketed by the two assignment extremes.
            v_hi = st.defense_closure(_arr_mask(attacked_by_in))
            d_hi = th_inf[kern.contrary_sid]
            v_lo = st.defense_closure(_arr_mask(d_hi))
            att_lo = v_lo[kern.contrary_sid]
            att_hi = v_hi[kern.contrary_sid]
            hit = att_lo & in_arr
            if hit.any():
                a = int(np.flatnonzero(hit)[0])
                support = kern.support(~d_hi, int(kern.contrary_sid[a]))
                learned.add_defeat_clause(a, kern.contrary_sid[support])
                return None
            if (~att_hi & out_arr).any():
                return None
            forced_out |= _arr_mask(att_lo) & free
            forced_in |= _arr_mask(~att_hi) & free
        if fl.prune:
            out_arr = _mask_arr(outm, m)
            # Assumptions certainly undefeated (even by the largest possible
            # in-set) yet certainly unattacked by the undefeated set cannot
            # stay out.
            u_hi = st.undef_of(inm)
            u_lo = st.undef_of(infm)
            attacked = ~st.undef_of(_arr_mask(u_hi))
            bad = u_lo & ~attacked
            if (bad & out_arr).any():
                return None
            forced_in |= _arr_mask(bad) & free
        for w in sess._subsets:
            wc = full & ~w
            if inm & wc:
                continue
            rem = free & wc
            if rem == 0:
                return None
            if rem & (rem - 1) == 0:
                forced_in |= rem
        if forced_in & forced_out:
            return None
        if not (forced_in | forced_out):
            return inm, outm, th_in
        inm |= forced_in
        outm |= forced_out


def _walk(sess: Session, fl: _Flags, floor_mask: int) -> Iterator[tuple[int, Model]]:
    kern = sess.kern
    m = kern.m
    full = (1 << m) - 1
    st = _WalkState(kern)
    stack = [(floor_mask, 0)]
    while stack:
        inm, outm = stack.pop()
        res = _propagate(sess, fl, st, inm, outm, full)
        if res is None:
            continue
        inm, outm, th_in = res
        free = full & ~inm & ~outm
        if free:
            low = free & -free
            stack.append((inm | low, outm))  # popped second: in-branch
            stack.append((inm, outm | low))  # popped first: out-branch
            continue
        if inm in sess._exact:
            continue
        in_arr = _mask_arr(inm, m)
        und_arr = None
        if fl.undef or fl.prune:
            und_arr = st.undef_of(inm)
            if fl.prune and not kern.prune_ok(in_arr, und_arr):
                continue
        model = Model(
            in_set=frozenset(int(s) for s in kern.asm_ids[in_arr]),
            closure=frozenset(int(s) for s in np.nonzero(th_in)[0]),
            undefeated=(
                frozenset(int(s) for s in kern.asm_ids[und_arr]) if fl.undef else None
            ),
        )
        yield inm, model


def _is_excluded(sess: Session, mask: int) -> bool:
    if mask in sess._exact:
        return True
    return any(mask & ~w == 0 for w in sess._subsets)


def solve(
    sess: Session,
    floor: Iterable[int] = frozenset(),
    extra: Iterable[Condition] = (),
) -> Optional[Model]:
    """Next/first model under base+extra conditions, floor and exclusions.

    Deterministic: for a fixed session history and identical arguments the
    result is identical.  A cursor resumes the previous walk when the last
    returned model has since been excluded; otherwise that model is still
    the first valid assignment and is returned again.
    """
    sess.solve_count += 1
    extra = tuple(extra)
    _check_conditions(sess.fw, extra)
    fl = _flags(sess.base + extra)
    floor_mask = _slot_mask(sess.kern, floor)
    if set(fl.require) & set(fl.forbid):
        return None  # contradictory by construction; nothing can satisfy both
    sig = (floor_mask, extra)
    cur = sess._cursor
    if cur is not None and cur.sig == sig and cur.last_mask is not None:
        if not _is_excluded(sess, cur.last_mask):
            return cur.last_model
        walker = cur.walker
    else:
        walker = _walk(sess, fl, floor_mask)
    try:
        mask, model = next(walker)
    except StopIteration:
        sess._cursor = None
        return None
    sess._cursor = _Cursor(sig=sig, walker=walker, last_mask=mask, last_model=model)
    return model
