"""The tag-tracing r-adding walk.

Between full products the walk only keeps ``Y`` (the last computed element)
and the ordinal of the pending product ``m`` in M_l.  Each step reads the
index of ``Y*m`` from the tag row of ``m``, then moves to the cell of
``m*m_i``.  The product ``Y*m`` is formed once the pending key reaches
length ``l`` or a distinguished run completes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FullProductRequired, ParameterError
from .group import DlpInstance
from .table import TableMl, build_table
from .tags import TagParams, tag_value_from_masks
from .walk import (
    RunReport,
    check_delta,
    collision_search,
    default_max_points,
    is_distinguished,
    start_state,
    update_run,
)


@dataclass
class ModifiedWalkState:
    Y: int
    alpha: int
    beta: int
    cell: int = 0
    pending_len: int = 0
    run_len: int = 0
    armed: bool = True
    steps: int = 0
    mults: int = 0
    tag_ops: int = 0
    walk_id: int = 0
    last_index: int = 0
    dense_offset: int = 0  # only tracked by the dense strategy


class ModifiedWalk:
    kind = "modified"

    def __init__(self, instance: DlpInstance, table: TableMl, strategy: str | None = None):
        self.instance = instance
        self.field = instance.field
        self.q = instance.params.q
        self.table = table
        self.index = table.index
        self.p = TagParams(table.t, table.r, instance.params.eta)
        self.l = table.l
        self.strategy = strategy or table.strategy
        if self.strategy == "dense" and not self.index.dense_enabled:
            raise ParameterError("dense strategy unavailable for this table")

    @property
    def multipliers(self):
        return self.table.multipliers

    def start(self, seed: int, walk_id: int = 0) -> ModifiedWalkState:
        s = start_state(self.instance, seed, walk_id)
        return ModifiedWalkState(s.Y, s.alpha, s.beta, walk_id=walk_id)

    def next_cell(self, state: ModifiedWalkState, i: int) -> int:
        index = self.index
        if self.strategy == "transition":
            return index.find_transition(state.cell, i)
        if index.key_length(state.cell) >= self.l:
            raise FullProductRequired("pending product is already of length l")
        if self.strategy == "dense":
            state.dense_offset = index.dense_step(state.dense_offset, i)
            return int(index.dense[state.dense_offset])
        key = tuple(sorted(index.key(state.cell) + (i,)))
        ordinal, comparisons = index.find_binary(key)
        self.table.binary_lookups += 1
        self.table.binary_comparisons += comparisons
        return ordinal

    def tag_step(self, state: ModifiedWalkState) -> ModifiedWalkState:
        if state.pending_len >= self.l:
            raise FullProductRequired("flush before stepping past l pending multipliers")
        masks = self.table.cells[state.cell].tag_masks
        i = 1 + tag_value_from_masks(state.Y, masks) % self.p.r
        state.cell = self.next_cell(state, i)
        state.pending_len += 1
        state.steps += 1
        state.tag_ops += 1
        state.last_index = i
        update_run(state, i)
        return state

    def flush(self, state: ModifiedWalkState) -> ModifiedWalkState:
        if state.pending_len < 1:
            raise ParameterError("nothing pending to flush")
        cell = self.table.cells[state.cell]
        state.Y = self.field.mul(state.Y, cell.element)
        state.alpha = (state.alpha + cell.alpha) % self.q
        state.beta = (state.beta + cell.beta) % self.q
        state.cell = 0
        state.dense_offset = 0
        state.pending_len = 0
        state.mults += 1
        return state

    def finish(self, state: ModifiedWalkState) -> ModifiedWalkState:
        """Flush any pending product so ``state.Y`` is current."""
        if state.pending_len:
            self.flush(state)
        return state

    def run(self, state: ModifiedWalkState, max_steps: int, delta: int | None = None) -> bool:
        """Advance up to ``max_steps`` tag steps, flushing every ``l`` steps.

        Returns True when stopped at a distinguished point (already flushed).
        Steps that end short of a flush leave the product pending.
        """
        if self.strategy != "transition":
            return self._run_generic(state, max_steps, delta)
        cells = self.table.cells
        trans = self.index.transition_view
        dom = self.index.domain
        mul = self.field.mul
        r, l, q = self.p.r, self.l, self.q
        Y, alpha, beta = state.Y, state.alpha, state.beta
        c, pending = state.cell, state.pending_len
        run, armed = state.run_len, state.armed
        masks = cells[c].tag_masks
        n = flushes = 0
        hit = False
        k = state.last_index - 1
        while n < max_steps:
            v = 0
            j = 0
            for w in masks:
                v |= ((Y & w).bit_count() & 1) << j
                j += 1
            k = v % r
            c = trans[k * dom + c]
            pending += 1
            n += 1
            if k:
                run = 0
                armed = True
            elif armed:
                run += 1
                if run == delta:
                    run = 0
                    armed = False
                    hit = True
            if pending == l or hit:
                cell = cells[c]
                Y = mul(Y, cell.element)
                alpha += cell.alpha
                beta += cell.beta
                c = 0
                pending = 0
                flushes += 1
                if hit:
                    break
            masks = cells[c].tag_masks
        state.Y, state.alpha, state.beta = Y, alpha % q, beta % q
        state.cell, state.pending_len = c, pending
        state.run_len, state.armed = run, armed
        state.steps += n
        state.tag_ops += n
        state.mults += flushes
        if n:
            state.last_index = k + 1
        return hit

    def _run_generic(self, state, max_steps, delta):
        for _ in range(max_steps):
            self.tag_step(state)
            hit = delta is not None and is_distinguished(state, delta)
            if hit or state.pending_len == self.l:
                self.flush(state)
            if hit:
                return True
        return False


def make_table(instance: DlpInstance, multipliers, l: int, t: int | None = None,
               strategy: str = "transition", materialize: str = "auto") -> TableMl:
    p = TagParams.for_r(len(multipliers), instance.params.eta, t)
    return build_table(multipliers, l, p.t, instance.field, instance.params.q, strategy, materialize)


def solve_dlp_modified(instance: DlpInstance, r: int = 4, l: int = 10, delta: int = 2,
                       max_points: int | None = None, seed: int = 0, t: int | None = None,
                       strategy: str = "transition", materialize: str = "auto") -> RunReport:
    q = instance.params.q
    check_delta(r, delta, q)
    if max_points is None:
        max_points = default_max_points(r, delta, q)
    report = RunReport("modified", r, delta, seed, l=l, tag_ops=0)

    def make_walk(multipliers):
        table = make_table(instance, multipliers, l, t, strategy, materialize)
        return ModifiedWalk(instance, table)

    return collision_search(instance, report, make_walk, delta, max_points, seed)

