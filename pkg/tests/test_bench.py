import pytest

from tagwalk.bench import (
    REFERENCE_RHO,
    BenchReport,
    compare_moduli,
    cost_ratio,
    expected_mults,
    reports_csv,
    run_bench,
    solve_cost,
)
from tagwalk.errors import ParameterError


def test_cost_arithmetic():
    assert solve_cost(121.37, REFERENCE_RHO[20]) == pytest.approx(124.40, abs=0.005)
    assert solve_cost(20.68, REFERENCE_RHO[4]) == pytest.approx(27.73, abs=0.005)
    assert cost_ratio((121.37, 1.025), (20.68, 1.341)) == pytest.approx(4.49, abs=0.005)


@pytest.mark.parametrize("n", [1000, 1234])
def test_counters(instance19, n):
    o = run_bench(instance19, "original", 20, n)
    assert o.mults == o.iterations == n and o.tag_ops == 0
    m = run_bench(instance19, "modified", 4, n, l=10)
    assert m.iterations == m.tag_ops == n
    assert m.mults == expected_mults("modified", n, 10)
    b = run_bench(instance19, "modified", 4, n, l=10, strategy="binary")
    assert b.lookups == n and b.mults == m.mults


def test_lazy_bench_counts(instance19):
    m = run_bench(instance19, "modified", 16, 2000, l=10)
    assert m.mults == 200 and m.tag_ops == 2000


def test_bit_work_model():
    orig = BenchReport("original", 4, None, 10, 0.0, 10, 0, 0, "sparse", 1023)
    mod = BenchReport("modified", 4, 10, 10, 0.0, 1, 10, 10, "sparse", 1023)
    eta, t, l = 1023, 2, 10
    assert orig.bit_work(t) == l * eta**2
    assert mod.bit_work(t) == l * t * eta + eta**2


def test_rejects_bad_input(instance19):
    with pytest.raises(ParameterError):
        run_bench(instance19, "original", 4, 0)
    with pytest.raises(ParameterError):
        run_bench(instance19, "sideways", 4, 10)


def test_csv_row(instance19):
    text = reports_csv([run_bench(instance19, "original", 20, 10)])
    header, row = text.splitlines()
    assert header.startswith("walk,r,l,iterations,wall_seconds,mults,tag_ops,lookups,poly_kind")
    assert row.startswith("original,20,,10,")


def test_compare_shape():
    comp = compare_moduli(eta=31, iterations=300)
    rows = comp.rows()
    assert [(r["r"], r["poly_kind"]) for r in rows] == [(4, "sparse"), (16, "sparse"), (4, "arbitrary"), (16, "arbitrary")]
    assert isinstance(comp.ordering_holds, bool)
    assert comp.to_csv().count("\n") == 5
