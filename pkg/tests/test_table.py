import random
from itertools import combinations_with_replacement
from math import comb

import pytest

from tagwalk.errors import ConfigurationError, FullProductRequired, KeyNotFound, ParameterError, SizingError
from tagwalk.modified import make_table
from tagwalk.table import (
    TableIndex,
    build_table,
    cell_count,
    exponent_vector,
    lookup_binary,
    lookup_dense,
    lookup_transition,
    rank,
    table_index,
    table_info_row,
    unrank,
)
from tagwalk.tags import TagParams, tag_row_direct
from tagwalk.walk import make_multipliers


def canonical_keys(r, l):
    """Reference enumeration: length first, then lexicographic."""
    out = []
    for k in range(l + 1):
        out.extend(combinations_with_replacement(range(1, r + 1), k))
    return out


def test_cell_counts():
    assert cell_count(4, 10) == comb(14, 4) == 1001
    assert cell_count(16, 10) == comb(26, 16) == 5311735
    assert len([k for k in canonical_keys(4, 2) if len(k) == 2]) == 10


def test_rank_round_trip_exhaustive():
    keys = canonical_keys(4, 10)
    assert len(keys) == 1001
    for o, key in enumerate(keys):
        assert rank(key, 4, 10) == o
        assert unrank(o, 4, 10) == key
    assert rank((), 4, 10) == 0
    assert rank((1,), 4, 10) == 1


def test_rank_rejects_non_canonical():
    with pytest.raises(ParameterError):
        rank((2, 1), 4, 10)
    with pytest.raises(ParameterError):
        rank((5,), 4, 10)
    with pytest.raises(ParameterError):
        rank((1,) * 11, 4, 10)
    with pytest.raises(ParameterError):
        unrank(1001, 4, 10)


def test_index_matches_reference_order():
    idx = table_index(4, 10)
    keys = canonical_keys(4, 10)
    for o, key in enumerate(keys):
        assert idx.key(o) == key
        assert idx.find_binary(key)[0] == o
        assert idx.find_dense(exponent_vector(key, 4)) == o
        if len(key) < 10:
            for i in range(1, 5):
                assert idx.find_transition(o, i) == rank(tuple(sorted(key + (i,))), 4, 10)
        else:
            with pytest.raises(FullProductRequired):
                idx.find_transition(o, 1)
    with pytest.raises(KeyNotFound):
        idx.find_binary((1,) * 11)


def test_dense_offsets_examples():
    idx = table_index(4, 10)
    s1 = idx.dense_step(0, 1)
    assert s1 == 11**3 == 1331
    assert idx.dense[s1] == rank((1,), 4, 10)
    s12 = idx.dense_step(s1, 2)
    assert s12 == 1331 + 121
    assert idx.dense[s12] == rank((1, 2), 4, 10)
    assert idx.find_transition(0, 3) == rank((3,), 4, 10)
    assert idx.find_transition(rank((1, 2), 4, 10), 1) == rank((1, 1, 2), 4, 10)


def test_r16_index():
    idx = table_index(16, 10)
    assert idx.size == 5311735
    assert len(idx.transition) == 16 * comb(25, 16) == 16 * 2042975
    assert not idx.dense_enabled
    with pytest.raises(ConfigurationError):
        idx.find_dense([0] * 16)
    rng = random.Random(0)
    total = 0
    n = 2000
    for _ in range(n):
        o = rng.randrange(idx.size)
        key = idx.key(o)
        assert rank(key, 16, 10) == o
        found, comparisons = idx.find_binary(key)
        assert found == o
        total += comparisons
        if len(key) < 10:
            i = rng.randint(1, 16)
            assert idx.find_transition(o, i) == rank(tuple(sorted(key + (i,))), 16, 10)


def test_sizing_error_names_the_count():
    with pytest.raises(SizingError, match="5311735"):
        TableIndex(16, 10, budget=1 << 20)


def test_cells_are_consistent(instance19):
    mults = make_multipliers(instance19, 4, seed=1)
    table = make_table(instance19, mults, 10)
    assert table.materialize == "eager"
    field, g, h, q = instance19.field, instance19.params.g, instance19.h, instance19.params.q
    p = TagParams(table.t, 4, 19)
    rng = random.Random(2)
    for o in rng.sample(range(1001), 60) + [0]:
        cell = table.cells[o]
        elem, a, b = 1, 0, 0
        for i in cell.key:
            m = mults[i - 1]
            elem = field.mul(elem, m.element)
            a, b = a + m.alpha, b + m.beta
        assert cell.element == elem
        assert (cell.alpha, cell.beta) == (a % q, b % q)
        assert cell.element == field.mul(field.pow(g, cell.alpha), field.pow(h, cell.beta))
        assert cell.tag_row == tag_row_direct(cell.element, field, p)
    assert table.cells[0].element == 1


def test_lookup_helpers(instance19):
    mults = make_multipliers(instance19, 4, seed=1)
    table = build_table(mults, 10, 2, instance19.field, instance19.params.q, strategy="dense")
    assert lookup_binary(table, ()).element == 1
    assert table.binary_lookups == 1
    assert lookup_dense(table, [1, 1, 0, 0]) == rank((1, 2), 4, 10)
    assert lookup_transition(table, 0, 3) == rank((3,), 4, 10)
    with pytest.raises(KeyNotFound):
        table.cells[5000]


def test_lazy_table_builds_on_demand(instance19):
    mults = make_multipliers(instance19, 16, seed=1)
    table = make_table(instance19, mults, 10)
    assert table.materialize == "lazy"
    assert len(table.cells) == 0
    o = rank((3, 3, 7, 16), 16, 10)
    cell = table.cells[o]
    assert cell.key == (3, 3, 7, 16)
    assert len(table.cells) == 5  # every prefix was built too, identity included
    assert table.materialize_seconds > 0


def test_bad_strategy_and_budget(instance19):
    mults = make_multipliers(instance19, 16, seed=1)
    with pytest.raises(ConfigurationError):
        build_table(mults, 10, 4, instance19.field, instance19.params.q, strategy="dense")
    with pytest.raises(ConfigurationError):
        build_table(mults[:4], 10, 2, instance19.field, instance19.params.q, strategy="hash")
    with pytest.raises(SizingError):
        build_table(mults, 10, 4, instance19.field, instance19.params.q, materialize="eager")


def test_table_info_row():
    row = table_info_row(4, 10)
    assert row["cells"] == 1001
    assert row["transition_entries"] == 4 * comb(13, 4)
    assert row["dense_enabled"] == 1
