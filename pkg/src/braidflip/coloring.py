"""Admissible edge colorings of a triangulation and their canonical basis."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from . import kernels
from .errors import InfiniteLabelSet
from .kinetic import Edge, FlipEvent, Triangulation
from .recoupling import PentagonTuple

Coloring = dict  # Edge -> label


@dataclass(frozen=True, eq=False)
class ColoringBasis:
    """Admissible colorings of ``triangulation``, sorted lexicographically.

    Each coloring is stored as its label vector in ``edge_order`` (edges
    sorted as index pairs).
    """

    triangulation: Triangulation
    labels: tuple
    colorings: tuple[tuple, ...]

    @property
    def edge_order(self) -> tuple[Edge, ...]:
        return self.triangulation.edge_order

    @property
    def dim(self) -> int:
        return len(self.colorings)

    def __len__(self) -> int:
        return len(self.colorings)

    def __eq__(self, other):
        if not isinstance(other, ColoringBasis):
            return NotImplemented
        return (self.triangulation == other.triangulation
                and self.colorings == other.colorings)

    def __hash__(self):
        return hash((self.triangulation, len(self.colorings)))

    @cached_property
    def index(self) -> dict[tuple, int]:
        return {vec: k for k, vec in enumerate(self.colorings)}

    def coloring(self, k: int) -> Coloring:
        return dict(zip(self.edge_order, self.colorings[k]))

    def vector(self, f: Mapping[Edge, object]) -> tuple:
        return tuple(f[e] for e in self.edge_order)

    def position(self, f: Mapping[Edge, object]) -> int:
        return self.index[self.vector(f)]


def is_admissible_coloring(g: Triangulation, f: Mapping[Edge, object], tup: PentagonTuple) -> bool:
    if set(f) != g.edges:
        return False
    return all(tup.admissible(*(f[e] for e in g.triangle_edges(t))) for t in g.triangles)


def enumerate_colorings(g: Triangulation, tup: PentagonTuple) -> ColoringBasis:
    """Backtracking over edges in canonical order, checking each triangle as it closes."""
    labels = tup.labels
    if labels is None:
        raise InfiniteLabelSet(f"{tup.name} has an infinite label set; propagate labels instead")
    labels = tuple(labels)
    L = len(labels)
    edges = g.edge_order
    pos = {e: k for k, e in enumerate(edges)}
    closing: list[list[tuple[int, int]]] = [[] for _ in edges]
    for t in g.triangles:
        e1, e2, e3 = sorted(pos[e] for e in g.triangle_edges(t))
        closing[e3].append((e1, e2))
    adm = bytearray(L ** 3)
    for x in range(L):
        for y in range(L):
            for z in range(L):
                adm[(x * L + y) * L + z] = tup.admissible(labels[x], labels[y], labels[z])
    vectors = kernels.enumerate_labelings(len(edges), closing, bytes(adm), L)
    if labels != tuple(range(L)):
        vectors = [tuple(labels[k] for k in v) for v in vectors]
    return ColoringBasis(g, labels, tuple(vectors))


def transfer_candidates(f: Mapping[Edge, object], ev: FlipEvent,
                        tup: PentagonTuple) -> list[tuple[Coloring, float]]:
    """Colorings after the flip that agree with ``f`` off the flipped diagonal.

    Returns ``(g, sixj(g(a), g(b), g(i), f(c), f(d), f(j)))`` for each ``g``
    with a nonzero coefficient.
    """
    a, b, c, d = (f[e] for e in ev.quad)
    j = f[ev.removed]
    out = []
    for i in tup.candidates(a, b, c, d, j):
        if not (tup.admissible(a, d, i) and tup.admissible(b, c, i)):
            continue
        coeff = tup.sixj(a, b, i, c, d, j)
        if coeff == 0.0:
            continue
        g = dict(f)
        del g[ev.removed]
        g[ev.inserted] = i
        out.append((g, coeff))
    return out
