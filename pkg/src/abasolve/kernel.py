"""Vectorized fixed-point machinery shared by the search engine and checks.

Sentence sets are boolean vectors of length L (number of sentences),
assumption sets boolean vectors of length m (number of assumptions, in
ascending sentence-id order, the "slot" order).  Rule bodies live in one
scipy CSR incidence matrix, so a round of forward chaining is one sparse
matmul; batched columns evaluate many closures at once.

The individually-attacked predicate is the workhorse of everything
preference-aware (undefeated sets, the strong-abstraction pruning, the
normal half of set attacks), so ``undefeated`` memoizes per base set.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .framework import Framework

__all__ = ["FrameworkKernel", "kernel"]

# Batch width cap keeps the per-round count matrix small on big frameworks.
_MAX_BATCH = 512
_REACH_CACHE_LIMIT = 256


class FrameworkKernel:
    def __init__(self, fw: Framework):
        self.fw = fw
        L = fw.n_sentences
        R = len(fw.rules)
        self.L, self.R = L, R
        rows, cols = [], []
        blen = np.zeros(R, dtype=np.int32)
        head = np.zeros(R, dtype=np.int64)
        for r in fw.rules:
            head[r.id] = r.head
            blen[r.id] = len(r.body)
            for b in r.body:
                rows.append(r.id)
                cols.append(b)
        self.inc = sp.csr_matrix(
            (np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(R, L)
        )
        self.blen = blen
        self.head = head

        self.asm_ids = np.array(fw.asm_ids, dtype=np.int64)
        self.m = len(self.asm_ids)
        self.slot_of = np.full(L, -1, dtype=np.int64)
        self.slot_of[self.asm_ids] = np.arange(self.m)
        self.contrary_sid = np.array(
            [fw.contrary[a] for a in fw.asm_ids], dtype=np.int64
        )
        # strict[i, j]: assumption in slot i is strictly less preferred than slot j
        self.strict = np.asarray(fw.prefs.strict_matrix, dtype=bool)
        self.asm_vec = np.zeros(L, dtype=bool)
        self.asm_vec[self.asm_ids] = True
        self._singletons: np.ndarray | None = None
        self._rev_strict: np.ndarray | None = None
        self._und_cache: dict[bytes, np.ndarray] = {}
        self._reach_cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
        self._py_rules: tuple[list[list[int]], list[list[int]]] | None = None

    # -- closures ---------------------------------------------------------

    def close_cols(self, init: np.ndarray) -> np.ndarray:
        """Forward closure of each column of ``init`` (L x B bool)."""
        if init.ndim == 1:
            return self.close_cols(init[:, None])[:, 0]
        L, B = init.shape
        if B == 0:
            return init.copy()
        if B > _MAX_BATCH:
            parts = [
                self.close_cols(init[:, i : i + _MAX_BATCH])
                for i in range(0, B, _MAX_BATCH)
            ]
            return np.concatenate(parts, axis=1)
        S = init.copy()
        if self.R == 0:
            return S
        counts = np.zeros((self.R, B), dtype=np.int32)
        fired = np.zeros((self.R, B), dtype=bool)
        frontier = S
        while True:
            counts += self.inc.dot(frontier.view(np.int8))
            ready = (counts == self.blen[:, None]) & ~fired
            if not ready.any():
                return S
            fired |= ready
            rows, bcols = np.nonzero(ready)
            new = np.zeros_like(S)
            new[self.head[rows], bcols] = True
            frontier = new & ~S
            S |= new
            if not frontier.any():
                return S

    def close_ids(self, sids: Iterable[int]) -> np.ndarray:
        init = np.zeros(self.L, dtype=bool)
        for s in sids:
            init[s] = True
        return self.close_cols(init)

    def slots_to_sent(self, slots: np.ndarray) -> np.ndarray:
        v = np.zeros(self.L, dtype=bool)
        v[self.asm_ids[slots]] = True
        return v

    # -- preference-filtered closures --------------------------------------

    def pref_close_targets(self, base: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """Closure of {a in base : a not strictly below t}, one column per target t.

        ``base`` is a slot vector, ``targets`` an array of slot indices.
        Returns an L x len(targets) boolean matrix.
        """
        if len(targets) == 0:
            return np.zeros((self.L, 0), dtype=bool)
        keep = base[:, None] & ~self.strict[:, targets]  # m x T
        init = np.zeros((self.L, len(targets)), dtype=bool)
        init[self.asm_ids] = keep
        return self.close_cols(init)

    # -- cached singleton data ---------------------------------------------

    def singletons(self) -> np.ndarray:
        """L x m matrix; column t is the closure of the single assumption t."""
        if self._singletons is None:
            init = np.zeros((self.L, self.m), dtype=bool)
            init[self.asm_ids, np.arange(self.m)] = True
            self._singletons = self.close_cols(init)
            self._singletons.setflags(write=False)
        return self._singletons

    def rev_strict(self) -> np.ndarray:
        """rev[t, x]: t is strictly below x and {t} alone derives x's contrary."""
        if self._rev_strict is None:
            rev = self.singletons()[self.contrary_sid, :].T & self.strict
            rev.setflags(write=False)
            self._rev_strict = rev
        return self._rev_strict

    # -- attack predicates ---------------------------------------------------

    def undefeated(self, base: np.ndarray) -> np.ndarray:
        """Slot vector of assumptions not individually attacked by ``base``.

        Memoized per base set.  Only targets whose contrary lies in the
        unfiltered closure can be normally attacked; among those, targets
        whose preference filter removes nothing share that closure, and the
        rest are batched per distinct filtered base.
        """
        key = np.packbits(base).tobytes()
        hit = self._und_cache.get(key)
        if hit is not None:
            return hit
        closure_b = self.close_cols(self.slots_to_sent(base))
        normal = np.zeros(self.m, dtype=bool)
        cand = np.flatnonzero(closure_b[self.contrary_sid])
        if len(cand):
            filt = base[:, None] & ~self.strict[:, cand]  # m x C
            unfiltered = ~((filt != base[:, None]).any(axis=0))
            normal[cand[unfiltered]] = True
            rest = cand[~unfiltered]
            if len(rest):
                cols, inv = np.unique(filt[:, ~unfiltered].T, axis=0, return_inverse=True)
                init = np.zeros((self.L, cols.shape[0]), dtype=bool)
                init[self.asm_ids] = cols.T
                closed = self.close_cols(init)
                normal[rest] = closed[self.contrary_sid[rest], inv]
        reverse = self.rev_strict() @ base if self.m else np.zeros(0, dtype=bool)
        result = ~(normal | reverse)
        result.setflags(write=False)
        self._und_cache[key] = result
        return result

    def _closure_and_reach(self, bset: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        key = np.packbits(bset).tobytes()
        hit = self._reach_cache.get(key)
        if hit is not None:
            return hit
        closure_b = self.close_cols(self.slots_to_sent(bset))
        reach = self.reach(bset, closure_b)
        if len(self._reach_cache) >= _REACH_CACHE_LIMIT:
            self._reach_cache.clear()
        self._reach_cache[key] = (closure_b, reach)
        return closure_b, reach

    def attacks(self, aset: np.ndarray, bset: np.ndarray) -> bool:
        """Does slot set A attack slot set B under the preference semantics.

        The normal direction (and single-assumption reversals) reduce to the
        individually-attacked vector of A; what remains is the reverse attack
        witnessed by a below-preference member of B reaching a contrary of A
        through rules triggered by B.
        """
        if (~self.undefeated(aset) & bset).any():
            return True
        a_slots = np.flatnonzero(aset)
        if len(a_slots) == 0 or not bset.any():
            return False
        closure_b, reach = self._closure_and_reach(bset)
        hit = a_slots[closure_b[self.contrary_sid[a_slots]]]
        if len(hit) == 0:
            return False
        b_slots = np.flatnonzero(bset)
        below = self.strict[np.ix_(b_slots, hit)]
        reached = reach[np.ix_(b_slots, self.contrary_sid[hit])]
        return bool((below & reached).any())

    def reach(self, xset: np.ndarray, closure_x: np.ndarray | None = None) -> np.ndarray:
        """m x L reachability: reach[z, s] iff sentence s is reachable from
        assumption slot z over body->head edges of rules triggered by X."""
        if closure_x is None:
            closure_x = self.close_cols(self.slots_to_sent(xset))
        if self.R:
            trig = self.inc.dot(closure_x.view(np.int8)) == self.blen
        else:
            trig = np.zeros(0, dtype=bool)
        reach = np.zeros((self.m, self.L), dtype=bool)
        src = np.flatnonzero(xset)
        reach[src, self.asm_ids[src]] = True
        if not trig.any() or len(src) == 0:
            return reach
        inc_t = self.inc[trig]
        head_t = self.head[trig]
        frontier = reach
        while True:
            hits = inc_t.dot(frontier.T.view(np.int8)) > 0  # trig-rules x m
            new = np.zeros_like(reach)
            rrows, zcols = np.nonzero(hits)
            new[zcols, head_t[rrows]] = True
            frontier = new & ~reach
            if not frontier.any():
                return reach
            reach |= frontier

    def prune_ok(self, aset: np.ndarray, uset: np.ndarray) -> bool:
        """Every undefeated assumption outside A is attacked by the undefeated
        set itself (the individually-attacked predicate with base U)."""
        outside = uset & ~aset
        if not outside.any():
            return True
        return not (outside & self.undefeated(uset)).any()

    def support(self, seed_slots: np.ndarray, target: int) -> np.ndarray:
        """Slot indices of the assumptions leafing one derivation of ``target``
        from the given assumption set; deterministic (first firing wins)."""
        if self._py_rules is None:
            by_sent: list[list[int]] = [[] for _ in range(self.L)]
            bodies: list[list[int]] = []
            for r in self.fw.rules:
                bodies.append(list(r.body))
                for b in r.body:
                    by_sent[b].append(r.id)
            self._py_rules = (by_sent, bodies)
        by_sent, bodies = self._py_rules
        heads = self.head
        remaining = [len(b) for b in bodies]
        seeds = [int(s) for s in self.asm_ids[seed_slots]]
        derived = set(seeds)
        parent: dict[int, int] = {}
        work = list(seeds)
        for rid, rem in enumerate(remaining):
            if rem == 0:
                h = int(heads[rid])
                if h not in derived:
                    derived.add(h)
                    parent[h] = rid
                    work.append(h)
        while work:
            s = work.pop()
            for rid in by_sent[s]:
                remaining[rid] -= 1
                if remaining[rid] == 0:
                    h = int(heads[rid])
                    if h not in derived:
                        derived.add(h)
                        parent[h] = rid
                        work.append(h)
        if target not in derived:
            raise AssertionError("support requested for an underivable sentence")
        used: set[int] = set()
        seen: set[int] = set()
        stack = [target]
        seed_set = set(seeds)
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.add(s)
            if s in seed_set and s not in parent:
                used.add(s)
                continue
            stack.extend(bodies[parent[s]])
        return np.sort(self.slot_of[np.array(sorted(used), dtype=np.int64)])


def kernel(fw: Framework) -> FrameworkKernel:
    """Cached kernel for a framework (built on first use)."""
    k = fw.__dict__.get("_kernel")
    if k is None:
        k = FrameworkKernel(fw)
        fw.__dict__["_kernel"] = k
    return k
