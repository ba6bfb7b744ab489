"""The r-adding walk with distinguished path segments.

An element is distinguished when it is reached by the step that completes a
run of ``delta`` consecutive index-1 steps (the run must start after a non-1
index or at the walk start, and one run fires at most once).  Distinguished
points go into a table; two entries for the same element solve the DLP.
"""

from __future__ import annotations

import csv
import functools
import io
import logging
import math
import threading
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import DegenerateCollision, InternalInconsistencyError, ParameterError
from .gf2 import encode_hex
from .group import DlpInstance
from .rng import make_rng
from .tags import TagParams

log = logging.getLogger(__name__)

SQRT_HALF_PI = math.sqrt(math.pi / 2)  # expected rho length is SQRT_HALF_PI * sqrt(q)


def expected_segment_length(r: int, delta: int) -> float:
    """Mean number of iterations before the first distinguished path segment."""
    return r / (r - 1) * (r**delta - 1)


def default_max_points(r: int, delta: int, q: int) -> int:
    expected_points = SQRT_HALF_PI * math.sqrt(q) / expected_segment_length(r, delta)
    return max(64, 8 * math.ceil(expected_points))


@dataclass(frozen=True)
class Multiplier:
    element: int
    alpha: int
    beta: int
    index: int


def make_multipliers(instance: DlpInstance, r: int, seed: int) -> list[Multiplier]:
    """``m_i = g^alpha_i h^beta_i`` with exponents uniform in ``[1, q-1]``."""
    if r < 2:
        raise ParameterError("r must be >= 2")
    p = instance.params
    field = p.field
    rng = make_rng(seed, "multipliers", r)
    out = []
    while len(out) < r:
        a = rng.randrange(1, p.q)
        b = rng.randrange(1, p.q)
        m = field.mul(field.pow(p.g, a), field.pow(instance.h, b))
        if m != 1:
            out.append(Multiplier(m, a, b, len(out) + 1))
    return out


@dataclass
class WalkState:
    Y: int
    alpha: int
    beta: int
    run_len: int = 0
    armed: bool = True  # False after a run fired, until the next non-1 index
    steps: int = 0
    mults: int = 0
    walk_id: int = 0
    last_index: int = 0


def start_state(instance: DlpInstance, seed: int, walk_id: int = 0) -> WalkState:
    """Fresh start ``Y_0 = g^alpha_0``, ``beta_0 = 0``."""
    p = instance.params
    alpha0 = make_rng(seed, "start", walk_id).randrange(1, p.q)
    return WalkState(p.field.pow(p.g, alpha0), alpha0, 0, walk_id=walk_id)


def update_run(state, i: int) -> None:
    if i == 1:
        if state.armed:
            state.run_len += 1
    else:
        state.run_len = 0
        state.armed = True


def is_distinguished(state, delta: int) -> bool:
    """True exactly when the current run of index-1 steps reaches ``delta``."""
    if delta < 1:
        raise ParameterError("delta must be >= 1")
    if state.run_len == delta:
        state.run_len = 0
        state.armed = False
        return True
    return False


class OriginalWalk:
    """``F(Y) = Y * m_gamma(Y)`` over a fixed multiplier list."""

    kind = "original"

    def __init__(self, instance: DlpInstance, multipliers: Sequence[Multiplier], p: TagParams):
        if len(multipliers) != p.r:
            raise ParameterError("need exactly r multipliers")
        self.instance = instance
        self.field = instance.field
        self.q = instance.params.q
        self.multipliers = list(multipliers)
        self.p = p
        self._elements = [m.element for m in multipliers]
        self._alphas = [m.alpha for m in multipliers]
        self._betas = [m.beta for m in multipliers]

    def start(self, seed: int, walk_id: int = 0) -> WalkState:
        return start_state(self.instance, seed, walk_id)

    def step(self, state: WalkState) -> WalkState:
        i = 1 + (state.Y >> self.p.shift) % self.p.r
        m = self.multipliers[i - 1]
        state.Y = self.field.mul(state.Y, m.element)
        state.alpha = (state.alpha + m.alpha) % self.q
        state.beta = (state.beta + m.beta) % self.q
        state.steps += 1
        state.mults += 1
        state.last_index = i
        update_run(state, i)
        return state

    def run(self, state: WalkState, max_steps: int, delta: int | None = None) -> bool:
        """Advance up to ``max_steps``; stop early (returning True) at a distinguished point."""
        Y, alpha, beta = state.Y, state.alpha, state.beta
        run, armed = state.run_len, state.armed
        elements, alphas, betas = self._elements, self._alphas, self._betas
        mul = self.field.mul
        shift, r = self.p.shift, self.p.r
        n = 0
        hit = False
        k = state.last_index - 1
        while n < max_steps:
            k = (Y >> shift) % r
            Y = mul(Y, elements[k])
            alpha += alphas[k]
            beta += betas[k]
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
                    break
        q = self.q
        state.Y, state.alpha, state.beta = Y, alpha % q, beta % q
        state.run_len, state.armed = run, armed
        state.steps += n
        state.mults += n
        if n:
            state.last_index = k + 1
        return hit


@dataclass(frozen=True)
class DistinguishedPoint:
    y: int
    alpha: int
    beta: int
    walk_id: int = 0
    step: int = 0

    @property
    def y_hex(self) -> str:
        return encode_hex(self.y)


class DistinguishedStore:
    """Distinguished points keyed by element; inserts are serialized."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._points: dict[int, DistinguishedPoint] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._points)

    @property
    def full(self) -> bool:
        return len(self._points) >= self.capacity

    def insert(self, point: DistinguishedPoint) -> DistinguishedPoint | None:
        """Store ``point``; if its element is already present return the stored entry instead."""
        with self._lock:
            other = self._points.get(point.y)
            if other is None:
                if len(self._points) >= self.capacity:
                    raise OverflowError("distinguished point store is full")
                self._points[point.y] = point
            return other


def solve_collision(p1: DistinguishedPoint, p2: DistinguishedPoint, q: int,
                    instance: DlpInstance | None = None) -> int:
    """``x`` from ``g^a1 h^b1 = g^a2 h^b2``; checked against ``instance`` when given."""
    if p1.y != p2.y:
        raise ParameterError("points do not collide")
    db = (p2.beta - p1.beta) % q
    if not db:
        raise DegenerateCollision(f"beta values agree mod q ({p1.beta})")
    x = (p1.alpha - p2.alpha) * pow(db, -1, q) % q
    if instance is not None and not instance.check(x):
        raise InternalInconsistencyError(f"collision gave x={x} but g^x != h")
    return x


@dataclass
class RunReport:
    walk: str
    r: int
    delta: int
    seed: int
    steps: int = 0
    mults: int = 0
    dps: int = 0
    degenerate: int = 0
    x: int | None = None
    walks: int = 0
    restarts: int = 0
    l: int | None = None
    tag_ops: int | None = None
    lookups: int | None = None
    extra: dict = field(default_factory=dict, repr=False)

    COLUMNS = ("walk", "r", "delta", "seed", "steps", "mults", "dps", "degenerate", "x")
    MODIFIED_COLUMNS = COLUMNS + ("l", "tag_ops")

    def columns(self):
        return self.MODIFIED_COLUMNS if self.walk == "modified" else self.COLUMNS

    def as_row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in self.columns()}

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.as_row())
        return buf.getvalue()


@functools.lru_cache(maxsize=None)
def check_delta(r: int, delta: int, q: int) -> None:
    """Warn (once per setting) when segments are long against the expected rho length."""
    seg = expected_segment_length(r, delta)
    rho = SQRT_HALF_PI * math.sqrt(q)
    if 4 * seg > rho:
        log.warning(
            "delta=%d gives %.0f steps per distinguished segment, not small against the "
            "expected rho length %.0f", delta, seg, rho,
        )


def collision_search(instance: DlpInstance, report: RunReport, make_walk, delta: int,
                     max_points: int, seed: int, max_attempts: int = 64,
                     max_abandoned: int = 16) -> RunReport:
    """Shared driver for both walks.

    ``make_walk(multipliers)`` returns an object with ``start`` and ``run``.
    Walks from fresh starts run until a collision; a walk that goes
    ``10 x`` the expected segment length without a distinguished point has
    probably closed a cycle without one and is abandoned.  A degenerate
    collision, a full store or ``max_abandoned`` walks in a row without any
    distinguished point regenerate the multipliers from the next seed.
    """
    q = instance.params.q
    cap = max(64, math.ceil(10 * expected_segment_length(report.r, delta)))
    for attempt in range(max_attempts):
        multipliers = make_multipliers(instance, report.r, seed + attempt)
        walk = make_walk(multipliers)
        store = DistinguishedStore(max_points)
        walk_id = 0
        abandoned = 0
        regenerate = False
        while not regenerate:
            state = walk.start(seed + attempt, walk_id)
            report.walks += 1
            before = (state.steps, state.mults, getattr(state, "tag_ops", 0))
            found = False
            while walk.run(state, cap, delta):
                found = True
                report.dps += 1
                point = DistinguishedPoint(state.Y, state.alpha, state.beta, walk_id, state.steps)
                try:
                    other = store.insert(point)
                except OverflowError:
                    log.info("store full after %d points; regenerating multipliers", len(store))
                    regenerate = True
                    break
                if other is None:
                    continue
                try:
                    x = solve_collision(other, point, q, instance)
                except DegenerateCollision:
                    report.degenerate += 1
                    regenerate = True
                    break
                _account(report, state, before)
                report.x = x
                return report
            _account(report, state, before)
            walk_id += 1
            abandoned = 0 if found else abandoned + 1
            if not regenerate and abandoned >= max_abandoned:
                # these multipliers probably give cycles without distinguished points
                log.info("%d walks without a distinguished point; regenerating multipliers", abandoned)
                regenerate = True
        report.restarts += 1
    raise InternalInconsistencyError(f"no usable collision after {max_attempts} multiplier sets")


def _account(report: RunReport, state, before) -> None:
    report.steps += state.steps - before[0]
    report.mults += state.mults - before[1]
    if report.tag_ops is not None:
        report.tag_ops += getattr(state, "tag_ops", 0) - before[2]


def solve_dlp_original(instance: DlpInstance, r: int = 20, delta: int = 2, max_points: int | None = None,
                       seed: int = 0, t: int | None = None) -> RunReport:
    q = instance.params.q
    p = TagParams.for_r(r, instance.params.eta, t)
    check_delta(r, delta, q)
    if max_points is None:
        max_points = default_max_points(r, delta, q)
    report = RunReport("original", r, delta, seed)
    return collision_search(instance, report, lambda ms: OriginalWalk(instance, ms, p), delta, max_points, seed)


def segment_lengths(instance: DlpInstance, r: int, delta: int, walks: int, seed: int = 0,
                    t: int | None = None) -> list[int]:
    """Iterations until the first distinguished point, for ``walks`` fresh starts.

    All walks share one multiplier set; start ``k`` uses walk id ``k``.
    """
    p = TagParams.for_r(r, instance.params.eta, t)
    walk = OriginalWalk(instance, make_multipliers(instance, r, seed), p)
    limit = 1000 * math.ceil(expected_segment_length(r, delta))
    out = []
    for k in range(walks):
        state = walk.start(seed, k)
        if not walk.run(state, limit, delta):
            raise InternalInconsistencyError("no distinguished segment within 1000x its expected length")
        out.append(state.steps)
    return out
