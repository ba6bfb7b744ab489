"""Instrumented iteration benchmarks for the two walks.

A benchmark runs a fixed number of steps with no distinguished points and
no collision search.  Counters (field multiplications, tag evaluations,
table lookups) are the record; wall time is informational.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import asdict, dataclass

from .errors import ParameterError
from .group import DlpInstance, make_instance, make_params
from .modified import ModifiedWalk, make_table
from .tags import TagParams
from .walk import OriginalWalk, make_multipliers

log = logging.getLogger(__name__)

# average rho length in units of sqrt(pi q / 2), by r (published averages)
REFERENCE_RHO = {
    4: 1.341, 5: 1.195, 6: 1.137, 7: 1.116, 8: 1.086, 9: 1.074, 10: 1.070, 11: 1.063,
    12: 1.050, 13: 1.057, 14: 1.057, 15: 1.052, 16: 1.038, 17: 1.037, 18: 1.034,
    19: 1.029, 20: 1.025,
}

BENCH_COLUMNS = (
    "walk", "r", "l", "iterations", "wall_seconds", "mults", "tag_ops", "lookups",
    "poly_kind", "eta", "rho", "solve_cost",
)


def solve_cost(seconds: float, rho: float) -> float:
    """Time scaled by the expected rho length: the cost of a full solve, up to a constant."""
    return seconds * rho


def cost_ratio(original: tuple[float, float], modified: tuple[float, float]) -> float:
    """Ratio of ``time x rho`` for two ``(time, rho)`` pairs."""
    return solve_cost(*original) / solve_cost(*modified)


@dataclass
class BenchReport:
    walk: str
    r: int
    l: int | None
    iterations: int
    wall_seconds: float
    mults: int
    tag_ops: int
    lookups: int
    poly_kind: str
    eta: int

    @property
    def rho(self) -> float | None:
        return REFERENCE_RHO.get(self.r)

    @property
    def solve_cost(self) -> float | None:
        rho = self.rho
        return None if rho is None else solve_cost(self.wall_seconds, rho)

    def bit_work(self, t: int) -> int:
        """Bit-operation model: ``eta^2`` per full product, ``t*eta`` per tag."""
        return self.mults * self.eta**2 + self.tag_ops * t * self.eta

    def as_row(self) -> dict:
        row = asdict(self)
        row["l"] = "" if self.l is None else self.l
        row["wall_seconds"] = f"{self.wall_seconds:.6f}"
        row["rho"] = "" if self.rho is None else self.rho
        row["solve_cost"] = "" if self.solve_cost is None else f"{self.solve_cost:.6f}"
        return {k: row[k] for k in BENCH_COLUMNS}


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        w.writerow(rep.as_row())
    return buf.getvalue()


def bench_original(instance: DlpInstance, r: int, iterations: int, seed: int = 0,
                   t: int | None = None) -> BenchReport:
    p = TagParams.for_r(r, instance.params.eta, t)
    walk = OriginalWalk(instance, make_multipliers(instance, r, seed), p)
    state = walk.start(seed)
    t0 = time.perf_counter()
    walk.run(state, iterations)
    wall = time.perf_counter() - t0
    return BenchReport("original", r, None, state.steps, wall, state.mults, 0, 0,
                       instance.params.f.kind, instance.params.eta)


def bench_modified(instance: DlpInstance, r: int, l: int, iterations: int, seed: int = 0,
                   t: int | None = None, strategy: str = "transition", materialize: str = "auto") -> BenchReport:
    """Modified-walk throughput, timed with every visited cell already built.

    When cells are built on demand, an untimed pass over the same
    (deterministic) walk builds them first.
    """
    table = make_table(instance, make_multipliers(instance, r, seed), l, t, strategy, materialize)
    walk = ModifiedWalk(instance, table)
    if table.materialize == "lazy":
        warm = walk.start(seed)
        walk.run(warm, iterations)
        walk.finish(warm)
    lookups0 = table.binary_lookups
    state = walk.start(seed)
    t0 = time.perf_counter()
    walk.run(state, iterations)
    walk.finish(state)
    wall = time.perf_counter() - t0
    if strategy == "binary":
        lookups = table.binary_lookups - lookups0
    else:
        lookups = state.steps  # one vector read per step
    return BenchReport("modified", r, l, state.steps, wall, state.mults, state.tag_ops, lookups,
                       instance.params.f.kind, instance.params.eta)


def run_bench(instance: DlpInstance, walk: str, r: int, iterations: int, l: int = 10, seed: int = 0,
              t: int | None = None, strategy: str = "transition") -> BenchReport:
    if iterations < 1:
        raise ParameterError("iterations must be >= 1")
    if walk == "original":
        return bench_original(instance, r, iterations, seed, t)
    if walk == "modified":
        return bench_modified(instance, r, l, iterations, seed, t, strategy)
    raise ParameterError(f"unknown walk {walk!r}")


COMPARE_COLUMNS = ("r", "l", "poly_kind", "iterations", "original_seconds", "modified_seconds", "ratio")


@dataclass
class Comparison:
    reports: list
    ratios: dict  # (poly_kind, r) -> original time / modified time, same r

    @property
    def ordering_holds(self) -> bool:
        """Whether tag tracing gains more under the arbitrary modulus than the sparse one, for every r."""
        rs = {r for _, r in self.ratios}
        return all(self.ratios[("arbitrary", r)] > self.ratios[("sparse", r)] for r in rs)

    def rows(self) -> list[dict]:
        out = []
        for orig, mod in zip(self.reports[::2], self.reports[1::2]):
            out.append({
                "r": mod.r, "l": mod.l, "poly_kind": mod.poly_kind, "iterations": mod.iterations,
                "original_seconds": f"{orig.wall_seconds:.6f}",
                "modified_seconds": f"{mod.wall_seconds:.6f}",
                "ratio": f"{self.ratios[(mod.poly_kind, mod.r)]:.4f}",
            })
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COMPARE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows())
        return buf.getvalue()


def compare_moduli(eta: int = 1023, rs=(4, 16), l: int = 10, iterations: int = 20000,
                   seed: int = 0) -> Comparison:
    """Original vs modified r-adding walk under a sparse and an arbitrary modulus of one degree.

    One row per ``(r, kind)``; both walks in a row use the same r, so the
    ratio is a plain time ratio.
    """
    reports = []
    ratios = {}
    for kind in ("sparse", "arbitrary"):
        params = make_params(eta, kind, seed=seed)
        instance = make_instance(params, seed=seed)
        for r in rs:
            orig = bench_original(instance, r, iterations, seed)
            mod = bench_modified(instance, r, l, iterations, seed)
            reports += [orig, mod]
            ratios[(kind, r)] = orig.wall_seconds / mod.wall_seconds
            log.info("%s modulus, r=%d: original/modified time %.3f", kind, r, ratios[(kind, r)])
    return Comparison(reports, ratios)


def expected_mults(walk: str, iterations: int, l: int | None = None) -> int:
    if walk == "original":
        return iterations
    return math.ceil(iterations / l)
