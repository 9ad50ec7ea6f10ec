"""Moving planar points, their Delaunay triangulations, and flip events.

A pure braid enters as a :class:`StrandSystem`: one piecewise trajectory per
strand on the time interval ``[0, 1]`` with equal endpoints.  The triangulation
changes only at isolated times, each change being a single edge flip inside a
quadrilateral whose four corners pass through a common circle.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from . import kernels
from .errors import DegenerateConfiguration, InvalidStrandSystem, NonGenericBraid

log = logging.getLogger(__name__)

Point = tuple[float, float]
Edge = tuple[int, int]
Triangle = tuple[int, int, int]

CONTINUITY_TOL = 1e-12
MIN_GAP = 1e-9
INCIRCLE_REL_TOL = 1e-10
COLLINEAR_REL_TOL = 1e-14


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# -- trajectories ----------------------------------------------------------


@dataclass(frozen=True)
class LinearSegment:
    t0: float
    t1: float
    start: Point
    end: Point

    def position(self, t: float) -> Point:
        s = (t - self.t0) / (self.t1 - self.t0)
        return (self.start[0] + s * (self.end[0] - self.start[0]),
                self.start[1] + s * (self.end[1] - self.start[1]))

    def reversed(self) -> "LinearSegment":
        return LinearSegment(1.0 - self.t1, 1.0 - self.t0, self.end, self.start)


@dataclass(frozen=True)
class ArcSegment:
    """Circular arc, angle interpolated linearly in time (radians)."""

    t0: float
    t1: float
    center: Point
    radius: float
    angle0: float
    angle1: float

    def position(self, t: float) -> Point:
        s = (t - self.t0) / (self.t1 - self.t0)
        theta = self.angle0 + s * (self.angle1 - self.angle0)
        return (self.center[0] + self.radius * math.cos(theta),
                self.center[1] + self.radius * math.sin(theta))

    def reversed(self) -> "ArcSegment":
        return ArcSegment(1.0 - self.t1, 1.0 - self.t0, self.center, self.radius,
                          self.angle1, self.angle0)


Segment = Union[LinearSegment, ArcSegment]


@dataclass(frozen=True)
class Trajectory:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = self.segments
        if not segs:
            raise InvalidStrandSystem("trajectory has no segments")
        if abs(segs[0].t0) > CONTINUITY_TOL or abs(segs[-1].t1 - 1.0) > CONTINUITY_TOL:
            raise InvalidStrandSystem("trajectory must cover [0, 1]")
        for seg in segs:
            if not seg.t1 > seg.t0:
                raise InvalidStrandSystem(f"segment time range [{seg.t0}, {seg.t1}] is empty")
        for s0, s1 in zip(segs, segs[1:]):
            if abs(s0.t1 - s1.t0) > CONTINUITY_TOL:
                raise InvalidStrandSystem(f"time gap between segments at t={s0.t1}")
            p, q = s0.position(s0.t1), s1.position(s1.t0)
            if math.dist(p, q) > CONTINUITY_TOL:
                raise InvalidStrandSystem(f"trajectory jumps at t={s0.t1}: {p} -> {q}")

    @cached_property
    def _breaks(self) -> list[float]:
        return [seg.t1 for seg in self.segments[:-1]]

    def position(self, t: float) -> Point:
        k = bisect.bisect_right(self._breaks, t)
        return self.segments[k].position(t)

    def reversed(self) -> "Trajectory":
        return Trajectory(tuple(seg.reversed() for seg in reversed(self.segments)))


@dataclass(frozen=True)
class StrandSystem:
    """``n`` closed trajectories; the motion of a pure braid."""

    strands: tuple[Trajectory, ...]

    def __post_init__(self):
        for k, tr in enumerate(self.strands):
            p0, p1 = tr.position(0.0), tr.position(1.0)
            if math.dist(p0, p1) > CONTINUITY_TOL:
                raise InvalidStrandSystem(f"strand {k} is not closed: {p0} != {p1}")

    @property
    def n(self) -> int:
        return len(self.strands)

    @classmethod
    def static(cls, points: Iterable[Point]) -> "StrandSystem":
        return cls(tuple(Trajectory((LinearSegment(0.0, 1.0, tuple(p), tuple(p)),))
                         for p in points))

    def positions(self, t: float) -> list[Point]:
        return [tr.position(t) for tr in self.strands]

    def reversed(self) -> "StrandSystem":
        """The same motion run backwards in time."""
        return StrandSystem(tuple(tr.reversed() for tr in self.strands))


def position_at(s: StrandSystem, t: float) -> list[Point]:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time {t} outside [0, 1]")
    return s.positions(t)


def min_gap(points: Sequence[Point]) -> float:
    arr = np.asarray(points, dtype=float)
    if len(arr) < 2:
        return math.inf
    d = np.linalg.norm(arr[:, None, :] - arr[None, :, :], axis=-1)
    d[np.diag_indices(len(arr))] = np.inf
    return float(d.min())


# -- predicates ------------------------------------------------------------


def orient(p: Point, q: Point, r: Point) -> float:
    return kernels.orient2d(p[0], p[1], q[0], q[1], r[0], r[1])


def incircle(p: Point, q: Point, r: Point, s: Point) -> float:
    """Positive if ``s`` is inside the circumcircle of counterclockwise ``(p, q, r)``."""
    return kernels.incircle(p[0], p[1], q[0], q[1], r[0], r[1], s[0], s[1])


def incircle_tolerance(*pts: Point) -> float:
    scale = max(max(abs(x), abs(y)) for x, y in pts)
    return INCIRCLE_REL_TOL * scale ** 4


def is_cocircular(p: Point, q: Point, r: Point, s: Point) -> bool:
    return abs(incircle(p, q, r, s)) <= incircle_tolerance(p, q, r, s)


# -- triangulations --------------------------------------------------------


@dataclass(frozen=True)
class FlipEvent:
    """One flip: diagonal ``removed`` replaced by ``inserted`` inside ``quad``.

    With ``removed = (u, v)`` and opposite corners ``w < x``, the quad is
    ``a=(u,w), b=(w,v), c=(v,x), d=(x,u)`` and ``inserted = (w, x)``; so the
    triangles are ``(a,b,j), (c,d,j)`` before and ``(a,d,i), (b,c,i)`` after.
    """

    removed: Edge
    inserted: Edge
    quad: tuple[Edge, Edge, Edge, Edge]
    t_lo: float | None = field(default=None, compare=False)
    t_hi: float | None = field(default=None, compare=False)

    @classmethod
    def across(cls, removed: Edge, opposite: tuple[int, int],
               t_lo: float | None = None, t_hi: float | None = None) -> "FlipEvent":
        u, v = edge(*removed)
        w, x = sorted(opposite)
        quad = (edge(u, w), edge(w, v), edge(v, x), edge(x, u))
        return cls((u, v), (w, x), quad, t_lo, t_hi)

    @property
    def time(self) -> float | None:
        if self.t_lo is None or self.t_hi is None:
            return None
        return 0.5 * (self.t_lo + self.t_hi)

    @property
    def corners(self) -> tuple[int, int, int, int]:
        """``(u, w, v, x)`` in boundary order."""
        (u, v), (w, x) = self.removed, self.inserted
        return (u, w, v, x)

    @property
    def triangles_before(self) -> tuple[Triangle, Triangle]:
        (u, v), (w, x) = self.removed, self.inserted
        return tuple(sorted((u, v, w))), tuple(sorted((u, v, x)))

    @property
    def triangles_after(self) -> tuple[Triangle, Triangle]:
        (u, v), (w, x) = self.removed, self.inserted
        return tuple(sorted((u, w, x))), tuple(sorted((v, w, x)))

    def reversed(self) -> "FlipEvent":
        """The inverse flip (time-reversed bracket if any)."""
        t_lo = None if self.t_hi is None else 1.0 - self.t_hi
        t_hi = None if self.t_lo is None else 1.0 - self.t_lo
        return FlipEvent.across(self.inserted, self.removed, t_lo, t_hi)

    def shares_triangle_with(self, other: "FlipEvent") -> bool:
        mine = set(self.triangles_before) | set(self.triangles_after)
        theirs = set(other.triangles_before) | set(other.triangles_after)
        return bool(mine & theirs)


@dataclass(frozen=True)
class Triangulation:
    """Combinatorial triangulation; vertices are strand indices."""

    vertex_count: int
    triangles: frozenset[Triangle]

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return frozenset(edge(p, q) for t in self.triangles for p, q in itertools.combinations(t, 2))

    @cached_property
    def edge_order(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def _opposite(self) -> dict[Edge, tuple[int, ...]]:
        opp: dict[Edge, list[int]] = defaultdict(list)
        for a, b, c in self.triangles:
            opp[(a, b)].append(c)
            opp[(a, c)].append(b)
            opp[(b, c)].append(a)
        return {e: tuple(sorted(v)) for e, v in opp.items()}

    def opposite(self, e: Edge) -> tuple[int, ...]:
        return self._opposite[edge(*e)]

    @property
    def interior_edges(self) -> list[Edge]:
        return [e for e in self.edge_order if len(self._opposite[e]) == 2]

    @property
    def hull_edges(self) -> list[Edge]:
        return [e for e in self.edge_order if len(self._opposite[e]) == 1]

    @staticmethod
    def triangle_edges(t: Triangle) -> tuple[Edge, Edge, Edge]:
        a, b, c = t
        return (edge(a, b), edge(a, c), edge(b, c))

    def flip(self, e: Edge) -> tuple["Triangulation", FlipEvent]:
        e = edge(*e)
        opp = self._opposite.get(e, ())
        if len(opp) != 2:
            raise ValueError(f"edge {e} is not an interior edge")
        ev = FlipEvent.across(e, opp)
        if ev.inserted in self.edges:
            raise ValueError(f"flipping {e} would duplicate edge {ev.inserted}")
        tris = (self.triangles - set(ev.triangles_before)) | set(ev.triangles_after)
        return Triangulation(self.vertex_count, frozenset(tris)), ev

    def apply(self, ev: FlipEvent) -> "Triangulation":
        after, actual = self.flip(ev.removed)
        if actual != ev:
            raise ValueError(f"event {ev} does not match triangulation (got {actual})")
        return after


def delaunay(points: Sequence[Point]) -> Triangulation:
    """Delaunay triangulation by sweep triangulation plus Lawson flips.

    Raises DegenerateConfiguration when any interior edge closes a cocircular
    quadruple within tolerance, when all points are collinear, or when two
    points coincide.
    """
    pts = [(float(x), float(y)) for x, y in points]
    n = len(pts)
    if n < 3:
        raise DegenerateConfiguration(f"need at least 3 points, got {n}")
    order = sorted(range(n), key=pts.__getitem__)
    for k0, k1 in zip(order, order[1:]):
        if pts[k0] == pts[k1]:
            raise DegenerateConfiguration(f"duplicate points {k0} and {k1}")
    scale = max(max(abs(x), abs(y)) for x, y in pts) or 1.0
    col_tol = COLLINEAR_REL_TOL * scale * scale

    def ori(a, b, c):
        return orient(pts[a], pts[b], pts[c])

    k = 2
    while k < n and abs(ori(order[0], order[1], order[k])) <= col_tol:
        k += 1
    if k == n:
        raise DegenerateConfiguration("all points are collinear")
    chain, apex = order[:k], order[k]

    tris: set[Triangle] = set()
    for c0, c1 in zip(chain, chain[1:]):
        tris.add(tuple(sorted((c0, c1, apex))))
    if ori(chain[0], chain[1], apex) > 0:
        hull = chain + [apex]
    else:
        hull = [chain[0], apex] + chain[:0:-1]

    for p in order[k + 1:]:
        H = len(hull)
        vis = [ori(hull[m], hull[(m + 1) % H], p) < -col_tol for m in range(H)]
        if not any(vis):
            raise DegenerateConfiguration(f"point {p} lies on the current hull")
        m0 = next(m for m in range(H) if vis[m] and not vis[m - 1])
        hull = hull[m0:] + hull[:m0]
        vis = vis[m0:] + vis[:m0]
        run = 0
        while run < H and vis[run]:
            run += 1
        for m in range(run):
            tris.add(tuple(sorted((hull[m], hull[m + 1], p))))
        hull = [hull[0], p] + hull[run:]

    opp: dict[Edge, set[int]] = defaultdict(set)
    for a, b, c in tris:
        opp[(a, b)].add(c)
        opp[(a, c)].add(b)
        opp[(b, c)].add(a)

    def circle_value(e: Edge) -> tuple[float, float]:
        u, v = e
        w, x = opp[e]
        if ori(u, v, w) < 0:
            u, v = v, u
        val = incircle(pts[u], pts[v], pts[w], pts[x])
        return val, incircle_tolerance(pts[u], pts[v], pts[w], pts[x])

    stack = [e for e, o in opp.items() if len(o) == 2]
    while stack:
        e = stack.pop()
        if len(opp.get(e, ())) != 2:
            continue
        val, tol = circle_value(e)
        if val <= tol:
            continue
        u, v = e
        w, x = opp[e]
        tris.discard(tuple(sorted((u, v, w))))
        tris.discard(tuple(sorted((u, v, x))))
        del opp[e]
        for a, b, old, new in ((u, w, v, x), (w, v, u, x), (v, x, u, w), (x, u, v, w)):
            q = edge(a, b)
            opp[q].discard(old)
            opp[q].add(new)
            stack.append(q)
        opp[edge(w, x)] = {u, v}
        tris.add(tuple(sorted((u, w, x))))
        tris.add(tuple(sorted((v, w, x))))

    for e, o in opp.items():
        if len(o) == 2:
            val, tol = circle_value(e)
            if abs(val) <= tol:
                w, x = sorted(o)
                raise DegenerateConfiguration(
                    f"points {e[0]}, {e[1]}, {w}, {x} are cocircular (incircle {val:.3e})")
    return Triangulation(n, frozenset(tris))


def triangulation_at(s: StrandSystem, t: float) -> Triangulation:
    return delaunay(position_at(s, t))


# -- flip events -----------------------------------------------------------


def _split_change(before: Triangulation, after: Triangulation,
                  t_lo: float, t_hi: float) -> list[FlipEvent]:
    removed = before.edges - after.edges
    inserted = after.edges - before.edges
    if len(removed) != len(inserted):
        raise NonGenericBraid(
            f"convex hull changed in [{t_lo:.12g}, {t_hi:.12g}]: "
            f"removed {sorted(removed)}, inserted {sorted(inserted)}")
    events: list[FlipEvent] = []
    current = before
    for j in sorted(removed):
        try:
            nxt, ev = current.flip(j)
        except ValueError:
            raise NonGenericBraid(f"edge {j} vanished in [{t_lo:.12g}, {t_hi:.12g}] "
                                  "without a single flip") from None
        if ev.inserted not in inserted or any(ev.shares_triangle_with(o) for o in events):
            raise NonGenericBraid(
                f"{len(removed)} edges change within [{t_lo:.12g}, {t_hi:.12g}] "
                "and do not split into independent flips")
        events.append(FlipEvent.across(ev.removed, ev.inserted, t_lo, t_hi))
        current = nxt
    if current != after:
        raise NonGenericBraid(f"change in [{t_lo:.12g}, {t_hi:.12g}] is not a sequence of flips")
    return events


_JITTER = (0.5, 0.4, 0.6, 0.3, 0.7, 0.2, 0.8, 0.1, 0.9)


def _regular_triangulation(s: StrandSystem, t: float, lo: float, hi: float
                           ) -> tuple[float, Triangulation]:
    """Triangulate at ``t``, or at a nearby time in ``(lo, hi)`` if ``t`` is singular."""
    try:
        return t, triangulation_at(s, t)
    except DegenerateConfiguration as exc:
        err = exc
    for f in _JITTER:
        tt = lo + f * (hi - lo)
        if tt == t:
            continue
        try:
            return tt, triangulation_at(s, tt)
        except DegenerateConfiguration as exc:
            err = exc
    raise err


def _refine(s: StrandSystem, ta: float, Ta: Triangulation, tb: float, Tb: Triangulation,
            tol: float) -> list[FlipEvent]:
    if Ta == Tb:
        return []
    if tb - ta <= tol:
        return _split_change(Ta, Tb, ta, tb)
    mid = 0.5 * (ta + tb)
    try:
        tm, Tm = _regular_triangulation(s, mid, ta, tb)
    except DegenerateConfiguration:
        log.debug("bracket [%r, %r] is singular throughout; closing it early", ta, tb)
        return _split_change(Ta, Tb, ta, tb)
    return _refine(s, ta, Ta, tm, Tm, tol) + _refine(s, tm, Tm, tb, Tb, tol)


def extract_flip_sequence(s: StrandSystem, initial_samples: int = 512,
                          time_tolerance: float = 1e-9) -> list[FlipEvent]:
    """Sample-and-bisect detection of all flips of the Delaunay triangulation.

    Consecutive samples whose triangulations differ are bisected until the
    bracket is at most ``time_tolerance`` wide.  Events come back ordered by
    time; simultaneous flips on disjoint quads are ordered by removed edge.
    """
    if initial_samples < 1:
        raise ValueError("initial_samples must be positive")
    if time_tolerance <= 0:
        raise ValueError("time_tolerance must be positive")
    N = initial_samples
    half_step = 0.5 / N
    samples: list[tuple[float, Triangulation]] = []
    for k in range(N + 1):
        t = k / N
        pts = s.positions(t)
        gap = min_gap(pts)
        if gap <= MIN_GAP:
            raise InvalidStrandSystem(f"strands collide near t={t} (gap {gap:.3e})")
        if k == 0 or k == N:
            samples.append((t, delaunay(pts)))
        else:
            samples.append(_regular_triangulation(s, t, t - half_step, t + half_step))
    if samples[0][1] != samples[-1][1]:
        raise NonGenericBraid("triangulations at t=0 and t=1 differ")

    events: list[FlipEvent] = []
    for (ta, Ta), (tb, Tb) in zip(samples, samples[1:]):
        events.extend(_refine(s, ta, Ta, tb, Tb, time_tolerance))
    return events


def triangulation_sequence(start: Triangulation, events: Sequence[FlipEvent]) -> list[Triangulation]:
    """``start`` followed by the triangulation after each event."""
    seq = [start]
    for ev in events:
        seq.append(seq[-1].apply(ev))
    return seq
