"""The precomputed product table M_l and its three lookup strategies.

Cells are the multisets of multiplier indices of size at most ``l``, written
as non-decreasing keys and ordered by length, then lexicographically; the
empty key (identity) has ordinal 0.  The combinatorial index (keys, parents,
transition vector, dense vector) depends only on ``(r, l)`` and is built once
with numpy and shared.  Cell payloads (product, exponents, tag row) depend on
the multipliers and are built eagerly or on first access.
"""

from __future__ import annotations

import functools
import logging
import time
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, FullProductRequired, KeyNotFound, ParameterError, SizingError
from .gf2 import GF2Field
from .tags import TagProjector, masks_to_row

log = logging.getLogger(__name__)

STRATEGIES = ("binary", "dense", "transition")
DENSE_MAX_ENTRIES = 1 << 26
DEFAULT_BUDGET = 3 << 29  # 1.5 GiB
EAGER_AUTO_MAX_CELLS = 1 << 16


def cell_count(r: int, l: int) -> int:
    return comb(l + r, r)


def transition_domain(r: int, l: int) -> int:
    """Number of keys shorter than ``l``."""
    return comb(l + r - 1, r)


def _check_key(key, r: int, l: int) -> tuple:
    key = tuple(key)
    if len(key) > l:
        raise ParameterError(f"key {key} longer than l={l}")
    prev = 1
    for v in key:
        if not prev <= v <= r:
            raise ParameterError(f"key {key} is not a non-decreasing sequence over 1..{r}")
        prev = v
    return key


def rank(key: Sequence[int], r: int, l: int) -> int:
    """Ordinal of a canonical key (length first, then lexicographic)."""
    key = _check_key(key, r, l)
    k = len(key)
    if not k:
        return 0
    o = comb(k - 1 + r, r)
    lo = 1
    for pos, v in enumerate(key):
        rem = k - pos - 1
        for u in range(lo, v):
            o += comb(r - u + rem, rem)
        lo = v
    return o


def unrank(ordinal: int, r: int, l: int) -> tuple[int, ...]:
    if not 0 <= ordinal < cell_count(r, l):
        raise ParameterError(f"ordinal {ordinal} outside [0, C({l}+{r}, {r}))")
    k = 0
    while comb(k + r, r) <= ordinal:
        k += 1
    o = ordinal - (comb(k - 1 + r, r) if k else 0)
    key = []
    lo = 1
    for pos in range(k):
        rem = k - pos - 1
        u = lo
        while True:
            block = comb(r - u + rem, rem)
            if o < block:
                break
            o -= block
            u += 1
        key.append(u)
        lo = u
    return tuple(key)


class TableIndex:
    """Multiplier-independent structure of M_l for fixed ``(r, l)``."""

    def __init__(self, r: int, l: int, budget: int = DEFAULT_BUDGET):
        if r < 2 or l < 1:
            raise ParameterError("need r >= 2 and l >= 1")
        if r > 255:
            raise ParameterError("r > 255 is not supported")
        self.r, self.l = r, l
        self.size = size = cell_count(r, l)
        self.domain = domain = transition_domain(r, l)
        self.dense_len = (l + 1) ** r
        self.dense_enabled = self.dense_len <= DENSE_MAX_ENTRIES
        need = self.memory_estimate()
        if need > budget:
            raise SizingError(
                f"M_l index for r={r}, l={l} has C({l + r},{r}) = {size} cells "
                f"and needs ~{need / 2**20:.0f} MiB (budget {budget / 2**20:.0f} MiB)"
            )
        t0 = time.perf_counter()
        self._build_rows()
        self._build_transitions()
        if self.dense_enabled:
            self._build_dense()
        else:
            self.dense = self.offsets = None
        self.build_seconds = time.perf_counter() - t0
        # plain-int views for the walk's hot loop
        self.transition_view = memoryview(self.transition)
        log.debug("built M_l index r=%d l=%d: %d cells in %.2fs", r, l, size, self.build_seconds)

    def memory_estimate(self, strategy: str | None = None) -> int:
        """Bytes for the key list (binary), dense vector or transition vector."""
        r, l = self.r, self.l
        binary = self.size * (l + 6)
        transition = self.domain * 4 * (r + 1)
        dense = self.dense_len * 4 + self.size * 8
        if strategy == "binary":
            return binary
        if strategy == "transition":
            return transition
        if strategy == "dense":
            return dense
        return binary + transition + (dense if self.dense_enabled else 0)

    def _build_rows(self):
        r, l, size = self.r, self.l, self.size
        keys = np.zeros((size, l), dtype=np.uint8)
        lengths = np.zeros(size, dtype=np.uint8)
        parent = np.full(size, -1, dtype=np.int32)
        last = np.zeros(size, dtype=np.uint8)
        first_child = np.zeros(self.domain, dtype=np.int32)
        row_start = [0, 1]
        for k in range(1, l + 1):
            parents = np.arange(row_start[k - 1], row_start[k], dtype=np.int64)
            lo = np.maximum(last[parents].astype(np.int64), 1)
            nchild = r - lo + 1
            start = row_start[k]
            total = int(nchild.sum())
            before = np.cumsum(nchild) - nchild
            first_child[parents] = start + before
            rep = np.repeat(parents, nchild)
            j = np.repeat(lo - before, nchild) + np.arange(total)
            rows = slice(start, start + total)
            keys[rows] = keys[rep]
            keys[rows, k - 1] = j
            lengths[rows] = k
            parent[rows] = rep
            last[rows] = j
            row_start.append(start + total)
        assert row_start[-1] == size
        self.keys, self.lengths, self.parent, self.last = keys, lengths, parent, last
        self.first_child = first_child
        self.row_start = row_start

    def _build_transitions(self):
        r, l, dom = self.r, self.l, self.domain
        fc, last, parent = self.first_child, self.last.astype(np.int64), self.parent
        trans = np.empty(r * dom, dtype=np.int32)
        for i in range(1, r + 1):
            trans[(i - 1) * dom] = fc[0] + i - 1
        for k in range(1, l):
            cs = np.arange(self.row_start[k], self.row_start[k + 1], dtype=np.int64)
            ps = parent[cs].astype(np.int64)
            lc = last[cs]
            fcs = fc[cs].astype(np.int64)
            for i in range(1, r + 1):
                base = (i - 1) * dom
                up = trans[base + ps].astype(np.int64)
                # key + (i,) when i >= last, else insert i below the last entry
                val = np.where(i >= lc, fcs + (i - lc), fc[up] + (lc - last[up]))
                trans[base + cs] = val
        self.transition = trans

    def _build_dense(self):
        r, l = self.r, self.l
        powers = np.array([0] + [(l + 1) ** (r - i) for i in range(1, r + 1)], dtype=np.int64)
        offsets = np.zeros(self.size, dtype=np.int64)
        for k in range(1, l + 1):
            rows = slice(self.row_start[k], self.row_start[k + 1])
            offsets[rows] = offsets[self.parent[rows]] + powers[self.last[rows]]
        dense = np.full(self.dense_len, -1, dtype=np.int32)
        dense[offsets] = np.arange(self.size, dtype=np.int32)
        self.powers = [int(p) for p in powers]
        self.offsets, self.dense = offsets, dense

    # per-ordinal accessors

    def key(self, ordinal: int) -> tuple[int, ...]:
        n = int(self.lengths[ordinal])
        return tuple(self.keys[ordinal, :n].tolist())

    def key_length(self, ordinal: int) -> int:
        return int(self.lengths[ordinal])

    def find_binary(self, key: Sequence[int]) -> tuple[int, int]:
        """Binary search over the ordered key list.

        Returns ``(ordinal, comparisons)``.  Each probe is a vector comparison
        that reads every coordinate of the query, so it costs ``len(key)``
        integer comparisons (at least one).
        """
        target = (len(key), tuple(key))
        per_probe = max(1, len(key))
        keys, lengths = self.keys, self.lengths
        lo, hi = 0, self.size
        comparisons = 0
        while lo < hi:
            mid = (lo + hi) // 2
            n = int(lengths[mid])
            probe = (n, tuple(keys[mid, :n].tolist()))
            comparisons += per_probe
            if probe < target:
                lo = mid + 1
            else:
                hi = mid
        if lo == self.size or self.key(lo) != target[1]:
            raise KeyNotFound(f"key {tuple(key)} not in M_l")
        return lo, comparisons

    def find_dense(self, exponents: Sequence[int]) -> int:
        if not self.dense_enabled:
            raise ConfigurationError(
                f"dense vector needs (l+1)^r = {self.dense_len} entries, above {DENSE_MAX_ENTRIES}"
            )
        if len(exponents) != self.r or sum(exponents) > self.l or min(exponents) < 0:
            raise ParameterError(f"exponent vector must have {self.r} non-negative entries summing to <= {self.l}")
        s = sum(a * self.powers[i] for i, a in enumerate(exponents, 1))
        return int(self.dense[s])

    def dense_step(self, s: int, i: int) -> int:
        """Offset after multiplying by ``m_i``; ``V[s]`` is the new ordinal."""
        return s + self.powers[i]

    def find_transition(self, ordinal: int, i: int) -> int:
        if int(self.lengths[ordinal]) >= self.l:
            raise FullProductRequired(f"cell {ordinal} already holds {self.l} multipliers")
        if not 1 <= i <= self.r:
            raise ParameterError(f"multiplier index {i} outside 1..{self.r}")
        return self.transition_view[(i - 1) * self.domain + ordinal]


@functools.lru_cache(maxsize=2)
def table_index(r: int, l: int) -> TableIndex:
    return TableIndex(r, l)


def exponent_vector(key: Sequence[int], r: int) -> list[int]:
    counts = [0] * r
    for i in key:
        counts[i - 1] += 1
    return counts


@dataclass(frozen=True, slots=True)
class Cell:
    ordinal: int
    key: tuple
    element: int
    alpha: int
    beta: int
    tag_masks: tuple  # transposed tag row, see tags.tag_value_from_masks
    eta: int

    @property
    def tag_row(self):
        """``(tau(m), tau(x m), ..., tau(x^(eta-1) m))``."""
        return masks_to_row(self.tag_masks, self.eta)


class _CellStore(dict):
    def __init__(self, table: "TableMl"):
        super().__init__()
        self._table = table
        self._depth = 0

    def __missing__(self, ordinal):
        table = self._table
        if not 0 <= ordinal < table.size:
            raise KeyNotFound(f"ordinal {ordinal} outside the table")
        self._depth += 1
        t0 = time.perf_counter() if self._depth == 1 else 0.0
        try:
            cell = table._make_cell(ordinal)
        finally:
            self._depth -= 1
        if not self._depth:
            table.materialize_seconds += time.perf_counter() - t0
        self[ordinal] = cell
        return cell


class TableMl:
    """M_l for a fixed multiplier list."""

    def __init__(self, index: TableIndex, multipliers, field: GF2Field, q: int, t: int,
                 strategy: str = "transition", materialize: str = "auto"):
        if strategy not in STRATEGIES:
            raise ConfigurationError(f"unknown lookup strategy {strategy!r}")
        if strategy == "dense" and not index.dense_enabled:
            raise ConfigurationError(
                f"dense strategy unavailable for r={index.r}, l={index.l}: "
                f"(l+1)^r = {index.dense_len} entries"
            )
        if len(multipliers) != index.r:
            raise ParameterError("multiplier count differs from the index's r")
        self.index = index
        self.r, self.l, self.size = index.r, index.l, index.size
        self.multipliers = list(multipliers)
        self.field, self.q, self.t, self.eta = field, q, t, field.eta
        self.strategy = strategy
        self.projector = TagProjector(field, t)
        self.materialize_seconds = 0.0
        self.binary_lookups = 0
        self.binary_comparisons = 0
        self.cells = _CellStore(self)
        if materialize == "auto":
            materialize = "eager" if self.size <= EAGER_AUTO_MAX_CELLS else "lazy"
        if materialize not in ("eager", "lazy"):
            raise ConfigurationError(f"unknown materialization {materialize!r}")
        self.materialize = materialize
        t0 = time.perf_counter()
        if materialize == "eager":
            cells = self.cells
            for o in range(self.size):
                cells[o]
        self.build_seconds = index.build_seconds + time.perf_counter() - t0

    def _make_cell(self, o: int) -> Cell:
        index = self.index
        if o == 0:
            element, alpha, beta = 1, 0, 0
        else:
            parent = self.cells[int(index.parent[o])]
            m = self.multipliers[int(index.last[o]) - 1]
            element = self.field.mul(parent.element, m.element)
            alpha = (parent.alpha + m.alpha) % self.q
            beta = (parent.beta + m.beta) % self.q
        return Cell(o, index.key(o), element, alpha, beta, self.projector.masks(element), self.eta)

    def cell(self, ordinal: int) -> Cell:
        return self.cells[ordinal]

    def key(self, ordinal: int) -> tuple[int, ...]:
        return self.index.key(ordinal)


_CELL_OVERHEAD = 480  # measured CPython cost of one cell with small ints


def payload_bytes(cells: int, eta: int, t: int, q: int) -> int:
    """Eager payload estimate: object overhead plus element, tag row and two exponents per cell."""
    return cells * (_CELL_OVERHEAD + (eta + eta * t + 2 * q.bit_length()) // 8)


def build_table(multipliers, l: int, t: int, field: GF2Field, q: int, strategy: str = "transition",
                materialize: str = "auto", budget: int = DEFAULT_BUDGET) -> TableMl:
    r = len(multipliers)
    if l < 1:
        raise ParameterError("l must be >= 1")
    size = cell_count(r, l)
    if materialize == "eager" or (materialize == "auto" and size <= EAGER_AUTO_MAX_CELLS):
        need = payload_bytes(size, field.eta, t, q)
        if need > budget:
            raise SizingError(
                f"M_l payload for C({l + r},{r}) = {size} cells needs ~{need / 2**20:.0f} MiB "
                f"(budget {budget / 2**20:.0f} MiB)"
            )
    if budget == DEFAULT_BUDGET:
        index = table_index(r, l)
    else:
        index = TableIndex(r, l, budget)
    return TableMl(index, multipliers, field, q, t, strategy, materialize)


def lookup_binary(table: TableMl, key: Sequence[int]) -> Cell:
    ordinal, comparisons = table.index.find_binary(key)
    table.binary_lookups += 1
    table.binary_comparisons += comparisons
    return table.cells[ordinal]


def lookup_dense(table: TableMl, exponents: Sequence[int]) -> int:
    return table.index.find_dense(exponents)


def lookup_transition(table: TableMl, ordinal: int, i: int) -> int:
    return table.index.find_transition(ordinal, i)


def table_info_row(r: int, l: int, eta: int = 19, t: int | None = None, q: int = (1 << 19) - 1) -> dict:
    """Sizes and per-strategy memory estimates; builds the index to time it."""
    from .tags import TagParams

    tp = TagParams.for_r(r, eta, t)
    index = table_index(r, l)
    return {
        "r": r,
        "l": l,
        "cells": index.size,
        "transition_entries": r * index.domain,
        "dense_entries": index.dense_len,
        "dense_enabled": int(index.dense_enabled),
        "binary_bytes": index.memory_estimate("binary"),
        "dense_bytes": index.memory_estimate("dense"),
        "transition_bytes": index.memory_estimate("transition"),
        "payload_bytes": payload_bytes(index.size, eta, tp.t, q),
        "build_seconds": f"{index.build_seconds:.3f}",
    }
