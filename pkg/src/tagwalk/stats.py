"""Rho-length experiments: first-collision lengths and their Rayleigh fit.

Lengths are reported in two scalings.  Summaries use units of
``sqrt(pi q / 2)`` (so a truly random map has mean 1); Q-Q and histogram data
use ``steps / sqrt(q)``, where the limit law has density ``x exp(-x^2/2)``.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParameterError, SizingError
from .group import GroupParams, make_instance
from .tags import TagParams
from .walk import SQRT_HALF_PI, make_multipliers, start_state

MEMORY_BUDGET = 1 << 30
_BYTES_PER_VISITED = 120  # rough CPython cost of one set entry holding a small int


@dataclass(frozen=True)
class RhoSample:
    steps: int
    r: int
    q: int
    seed: int


@dataclass(frozen=True)
class RhoSummary:
    r: int
    q: int
    n_trials: int
    mean_units: float
    sd_units: float


def first_collision_length(instance, r: int, seed: int, t: int | None = None,
                           budget: int = MEMORY_BUDGET) -> RhoSample:
    """Iterations of the r-adding walk until an element repeats (tail plus cycle)."""
    p = instance.params
    q = p.q
    if 4 * math.sqrt(q) * _BYTES_PER_VISITED > budget:
        raise SizingError(f"first-collision search at q={q} needs more than {budget} bytes")
    tp = TagParams.for_r(r, p.eta, t)
    mults = make_multipliers(instance, r, seed)
    elements = [m.element for m in mults]
    mul = instance.field.mul
    shift = tp.shift
    Y = start_state(instance, seed).Y
    seen = {Y}
    add = seen.add
    steps = 0
    while True:
        Y = mul(Y, elements[(Y >> shift) % r])
        steps += 1
        if Y in seen:
            return RhoSample(steps, r, q, seed)
        add(Y)


def trial(params: GroupParams, r: int, seed: int, t: int | None = None) -> RhoSample:
    """One trial: a fresh instance, multiplier set and start, all from ``seed``."""
    return first_collision_length(make_instance(params, seed=seed), r, seed, t)


def run_trials(params: GroupParams, r: int, trials: int, seed: int = 0, threads: int = 1,
               t: int | None = None) -> list[RhoSample]:
    """Trial ``k`` uses seed ``seed + k``; results come back in trial order."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    seeds = range(seed, seed + trials)
    if threads <= 1:
        return [trial(params, r, s, t) for s in seeds]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(lambda s: trial(params, r, s, t), seeds))


def summarize(samples: Sequence[RhoSample], q: int | None = None) -> RhoSummary:
    if len(samples) < 2:
        raise ParameterError("need at least two samples")
    q = q or samples[0].q
    unit = SQRT_HALF_PI * math.sqrt(q)
    xs = [s.steps / unit for s in samples]
    return RhoSummary(samples[0].r, q, len(xs), statistics.fmean(xs), statistics.stdev(xs))


def rayleigh_pdf(x: float) -> float:
    if x < 0:
        raise DomainError("Rayleigh density is defined for x >= 0")
    return x * math.exp(-x * x / 2)


def rayleigh_quantile(p: float) -> float:
    if not 0 <= p < 1:
        raise DomainError(f"quantile level {p} outside [0, 1)")
    return math.sqrt(-2 * math.log1p(-p))


def qq_points(samples: Sequence[RhoSample], q: int | None = None) -> list[tuple[float, float, float]]:
    """``(p, theoretical, empirical)`` with plotting positions ``(i - 0.5)/n``."""
    q = q or samples[0].q
    root = math.sqrt(q)
    steps = sorted(s.steps for s in samples)
    n = len(steps)
    out = []
    for i, s in enumerate(steps, 1):
        p = (i - 0.5) / n
        out.append((p, rayleigh_quantile(p), s / root))
    return out


def qq_correlation(points) -> float:
    th = np.array([pt[1] for pt in points])
    em = np.array([pt[2] for pt in points])
    return float(np.corrcoef(th, em)[0, 1])


def max_quantile_deviation(points) -> float:
    return max(abs(pt[2] - pt[1]) for pt in points)


@dataclass
class Histogram:
    edges: np.ndarray
    density: np.ndarray

    @property
    def area(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))

    @property
    def mode(self) -> float:
        """Midpoint of the tallest bin."""
        k = int(np.argmax(self.density))
        return float((self.edges[k] + self.edges[k + 1]) / 2)


def histogram(samples: Sequence[RhoSample], q: int | None = None, bins: int = 40) -> Histogram:
    if bins < 5:
        raise ParameterError("need at least 5 bins")
    q = q or samples[0].q
    xs = np.array([s.steps for s in samples], dtype=float) / math.sqrt(q)
    lo, hi = float(xs.min()), float(xs.max())
    if lo == hi:
        # all samples equal; spread one unit-wide range so the density is finite
        lo, hi = lo - 0.5, hi + 0.5
    density, edges = np.histogram(xs, bins=bins, range=(lo, hi), density=True)
    return Histogram(edges, density)


# CSV writers; every table starts with a single header line

def _csv(header: Iterable[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def samples_csv(samples: Sequence[RhoSample]) -> str:
    return _csv(("r", "q", "seed", "steps"), ((s.r, s.q, s.seed, s.steps) for s in samples))


def summary_csv(summaries: Sequence[RhoSummary]) -> str:
    return _csv(
        ("r", "q", "trials", "mean_units", "sd_units"),
        ((s.r, s.q, s.n_trials, f"{s.mean_units:.6f}", f"{s.sd_units:.6f}") for s in summaries),
    )


def qq_csv(points) -> str:
    return _csv(("p", "theoretical", "empirical"), ((f"{p:.8g}", f"{a:.8g}", f"{b:.8g}") for p, a, b in points))


def histogram_csv(h: Histogram) -> str:
    rows = ((f"{h.edges[k]:.8g}", f"{h.edges[k + 1]:.8g}", f"{h.density[k]:.8g}") for k in range(len(h.density)))
    return _csv(("bin_left", "bin_right", "density"), rows)
