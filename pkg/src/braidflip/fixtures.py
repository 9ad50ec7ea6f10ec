"""Built-in braids: five points, one circling the origin inside a triangle.

Strand 0 sits at the origin, strand 1 circles it at radius 1/3 starting at
angle 0, strands 2-4 sit at the cube roots of unity rotated so that strand 4
is at (1, 0).
"""

from __future__ import annotations

import math

from .kinetic import ArcSegment, LinearSegment, StrandSystem, Trajectory

SQRT3_2 = math.sqrt(3.0) / 2.0
STATIC_POINTS = ((0.0, 0.0), (-0.5, SQRT3_2), (-0.5, -SQRT3_2), (1.0, 0.0))


def _static(p) -> Trajectory:
    return Trajectory((LinearSegment(0.0, 1.0, p, p),))


def circling_braid(radius: float = 1.0 / 3.0, turns: int = 1, phase: float = 0.0) -> StrandSystem:
    """Strand 1 makes ``turns`` full turns around strand 0, starting at ``phase``."""
    mover = Trajectory((ArcSegment(0.0, 1.0, (0.0, 0.0), radius, phase,
                                   phase + 2.0 * math.pi * turns),))
    p0, p2, p3, p4 = STATIC_POINTS
    return StrandSystem((_static(p0), mover, _static(p2), _static(p3), _static(p4)))


def twin_braid(offset: float = 10.0) -> StrandSystem:
    """Two copies of the circling braid side by side (10 strands).

    Both copies flip at the same instants on disjoint quadrilaterals.
    """
    strands = []
    for dx in (0.0, offset):
        for tr in circling_braid().strands:
            strands.append(Trajectory(tuple(_shifted(seg, dx) for seg in tr.segments)))
    return StrandSystem(tuple(strands))


def _shifted(seg, dx: float):
    if isinstance(seg, LinearSegment):
        return LinearSegment(seg.t0, seg.t1, (seg.start[0] + dx, seg.start[1]), (seg.end[0] + dx, seg.end[1]))
    return ArcSegment(seg.t0, seg.t1, (seg.center[0] + dx, seg.center[1]), seg.radius, seg.angle0, seg.angle1)


def loop_braid() -> StrandSystem:
    return circling_braid()


def double_loop_braid() -> StrandSystem:
    return circling_braid(turns=2)


EXAMPLES = {
    "circling": loop_braid,
    "paper": loop_braid,
    "circling-doubled": double_loop_braid,
    "circling-r03": lambda: circling_braid(radius=0.3),
    "twin": twin_braid,
}
