"""Flip operators, their composition along a braid, and spectral analysis.

For a flip removing ``j`` and inserting ``i`` the operator sends the basis
coloring ``f`` of the old triangulation to

    sum_g  sixj(g(a), g(b), g(i), f(c), f(d), f(j)) * g

over colorings ``g`` of the new triangulation that agree with ``f`` on every
common edge.  Operators are composed in time order, earliest event acting
first on column vectors.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment

from .coloring import Coloring, ColoringBasis, enumerate_colorings, transfer_candidates
from .errors import BasisMismatch, PtolemyZeroDivision
from .kinetic import (
    Edge,
    FlipEvent,
    Point,
    StrandSystem,
    Triangulation,
    delaunay,
    extract_flip_sequence,
    triangulation_at,
    triangulation_sequence,
)
from .recoupling import PentagonTuple, PtolemyTuple

log = logging.getLogger(__name__)

COMPOSITION_ORDER = "time-ascending; earliest event acts first on column vectors"
ENTRY_ATOL = 1e-9
ENTRY_RTOL = 1e-7
SPECTRUM_TOL = 1e-6
PENTAGON_ATOL = 1e-8
COMMUTATIVITY_ATOL = 1e-9


@dataclass(eq=False)
class FlipOperator:
    event: FlipEvent
    source: ColoringBasis
    target: ColoringBasis
    matrix: sparse.csc_array  # |target| x |source|

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(eq=False)
class InvariantOperator:
    basis: ColoringBasis
    matrix: np.ndarray
    tuple_name: str
    event_count: int
    order: str = COMPOSITION_ORDER

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def flip_operator(ev: FlipEvent, before: ColoringBasis, after: ColoringBasis,
                  tup: PentagonTuple) -> FlipOperator:
    try:
        expected = before.triangulation.apply(ev)
    except ValueError as exc:
        raise BasisMismatch(str(exc)) from None
    if expected != after.triangulation:
        raise BasisMismatch(f"target basis is not built on the triangulation after {ev}")
    rows, cols, vals = [], [], []
    for col in range(before.dim):
        for g, coeff in transfer_candidates(before.coloring(col), ev, tup):
            rows.append(after.position(g))
            cols.append(col)
            vals.append(coeff)
    mat = sparse.csc_array((vals, (rows, cols)), shape=(after.dim, before.dim))
    return FlipOperator(ev, before, after, mat)


def compose(ops: Sequence[FlipOperator], basis: ColoringBasis | None = None,
            tuple_name: str = "") -> InvariantOperator:
    """Ordered product ``A(t_m) ... A(t_1)`` of flip operators.

    ``basis`` is required for an empty list (the identity) and otherwise must
    match the first source basis when given.
    """
    if not ops:
        if basis is None:
            raise ValueError("an empty composition needs an explicit basis")
        return InvariantOperator(basis, np.eye(basis.dim), tuple_name, 0)
    if basis is not None and basis != ops[0].source:
        raise BasisMismatch("given basis differs from the first source basis")
    for k, (prev, nxt) in enumerate(zip(ops, ops[1:])):
        if prev.target != nxt.source:
            raise BasisMismatch(f"operator {k + 1} does not start where operator {k} ends")
    if ops[-1].target != ops[0].source:
        raise BasisMismatch("last target basis differs from the first source basis")
    prod = ops[0].matrix
    for op in ops[1:]:
        prod = op.matrix @ prod
    return InvariantOperator(ops[0].source, sparse.csc_array(prod).toarray(), tuple_name, len(ops))


def chain_matrix(ops: Sequence[FlipOperator]) -> sparse.csc_array:
    """Sparse product of a chain that need not close up."""
    for k, (prev, nxt) in enumerate(zip(ops, ops[1:])):
        if prev.target != nxt.source:
            raise BasisMismatch(f"operator {k + 1} does not start where operator {k} ends")
    prod = ops[0].matrix
    for op in ops[1:]:
        prod = op.matrix @ prod
    return sparse.csc_array(prod)


def sparse_max_abs_diff(m1, m2) -> float:
    diff = sparse.csc_array(m1 - m2)
    return float(np.abs(diff.data).max(initial=0.0))


# -- analysis --------------------------------------------------------------


def _as_array(op) -> np.ndarray:
    m = op.matrix if isinstance(op, (InvariantOperator, FlipOperator)) else op
    if sparse.issparse(m):
        m = m.toarray()
    return np.asarray(m, dtype=float)


def eigen_multiplicity(op, lam: float, tol: float = 1e-8) -> int:
    """dim ker(A - lam*I): singular values below ``tol`` times the largest."""
    A = _as_array(op)
    M = A - lam * np.eye(A.shape[0])
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0:
        return 0
    if s[0] == 0.0:
        return A.shape[0]
    return int(np.count_nonzero(s < tol * s[0]))


def spectrum_summary(op, cluster_tol: float = SPECTRUM_TOL, kernel_tol: float = 1e-8) -> list[dict]:
    """Eigenvalue clusters: center, cluster size and (for real centers) kernel dimension."""
    A = _as_array(op)
    ev = np.linalg.eigvals(A)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    clusters: list[list[complex]] = []
    for z in ev:
        for cl in clusters:
            if abs(z - cl[0]) <= cluster_tol:
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        center = complex(np.mean(cl))
        entry = {"real": float(center.real), "imag": float(center.imag), "count": len(cl)}
        if abs(center.imag) <= cluster_tol:
            entry["kernel_dim"] = eigen_multiplicity(A, round(center.real, 9), kernel_tol)
        out.append(entry)
    return out


def spectra_match(A, B, tol: float = SPECTRUM_TOL) -> bool:
    """Eigenvalue multisets agree under an optimal one-to-one pairing."""
    ea = np.linalg.eigvals(_as_array(A))
    eb = np.linalg.eigvals(_as_array(B))
    if ea.shape != eb.shape:
        return False
    cost = np.abs(ea[:, None] - eb[None, :])
    r, c = linear_sum_assignment(cost)
    return bool(cost[r, c].max(initial=0.0) <= tol)


def allclose_mixed(A, B, atol: float = ENTRY_ATOL, rtol: float = ENTRY_RTOL) -> bool:
    A = _as_array(A)
    B = _as_array(B)
    return A.shape == B.shape and bool(np.all(np.abs(A - B) <= atol + rtol * np.abs(B)))


def reverse_defect(op: FlipOperator, tup: PentagonTuple) -> float:
    """max |R A - I| where R is the operator of the reverse flip."""
    back = flip_operator(op.event.reversed(), op.target, op.source, tup)
    return sparse_max_abs_diff(back.matrix @ op.matrix, sparse.eye_array(op.source.dim))


# -- braid pipeline ----------------------------------------------------------


class BasisCache:
    """One coloring basis per distinct triangulation."""

    def __init__(self, tup: PentagonTuple):
        self.tup = tup
        self._bases: dict[Triangulation, ColoringBasis] = {}

    def __call__(self, g: Triangulation) -> ColoringBasis:
        basis = self._bases.get(g)
        if basis is None:
            basis = self._bases[g] = enumerate_colorings(g, self.tup)
        return basis


def flip_operators(start: Triangulation, events: Sequence[FlipEvent], tup: PentagonTuple,
                   bases: BasisCache | None = None) -> list[FlipOperator]:
    bases = bases or BasisCache(tup)
    seq = triangulation_sequence(start, events)
    return [flip_operator(ev, bases(g0), bases(g1), tup)
            for ev, g0, g1 in zip(events, seq, seq[1:])]


@dataclass(eq=False)
class BraidInvariant:
    events: list[FlipEvent]
    triangulations: list[Triangulation]
    bases: list[ColoringBasis]
    operators: list[FlipOperator]
    invariant: InvariantOperator
    tuple_name: str
    settings: dict = field(default_factory=dict)

    @property
    def dims(self) -> list[int]:
        return [b.dim for b in self.bases]


def braid_invariant(system: StrandSystem, tup: PentagonTuple, initial_samples: int = 512,
                    time_tolerance: float = 1e-9, events: Sequence[FlipEvent] | None = None
                    ) -> BraidInvariant:
    """Events -> bases -> flip operators -> A(beta) for a finite-label tuple."""
    if events is None:
        events = extract_flip_sequence(system, initial_samples, time_tolerance)
    events = list(events)
    start = triangulation_at(system, 0.0)
    seq = triangulation_sequence(start, events)
    if seq[-1] != start:
        raise BasisMismatch("flip sequence does not return to the initial triangulation")
    cache = BasisCache(tup)
    bases = [cache(g) for g in seq]
    ops = [flip_operator(ev, b0, b1, tup) for ev, b0, b1 in zip(events, bases, bases[1:])]
    inv = compose(ops, basis=bases[0], tuple_name=tup.name)
    return BraidInvariant(events, seq, bases, ops, inv, tup.name,
                          {"initial_samples": initial_samples, "time_tolerance": time_tolerance})


# -- deterministic tuples ------------------------------------------------------


def euclidean_lengths(points: Sequence[Point], g: Triangulation) -> Coloring:
    return {e: math.dist(points[e[0]], points[e[1]]) for e in g.edge_order}


def ptolemy_propagate(initial: Mapping[Edge, float], events: Sequence[FlipEvent],
                      tup: PentagonTuple | None = None) -> Coloring:
    """Carry a real labeling through a flip sequence with a single-candidate tuple."""
    tup = tup or PtolemyTuple()
    f = dict(initial)
    for k, ev in enumerate(events):
        a, b, c, d = (f[e] for e in ev.quad)
        j = f[ev.removed]
        try:
            (i,) = tup.candidates(a, b, c, d, j)
        except PtolemyZeroDivision as exc:
            raise PtolemyZeroDivision(f"event {k} ({ev.removed} -> {ev.inserted}): {exc}",
                                      event_index=k) from None
        del f[ev.removed]
        f[ev.inserted] = i
    return f


def labelings_match(f: Mapping, g: Mapping, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    return set(f) == set(g) and all(
        math.isclose(f[e], g[e], rel_tol=rel_tol, abs_tol=abs_tol) for e in f)


# -- local relations ---------------------------------------------------------


def pentagon_cycle(g: Triangulation) -> list[FlipEvent]:
    """The five flips taking a triangulated convex pentagon around its flip cycle."""
    events = []
    current, last = g, None
    for _ in range(5):
        diag = current.interior_edges
        if len(diag) != 2 or len(current.hull_edges) != 5:
            raise ValueError("triangulation is not a triangulated pentagon")
        diag = [e for e in diag if e != last]
        current, ev = current.flip(diag[0])
        events.append(ev)
        last = ev.inserted
    if current != g:
        raise ValueError("pentagon flip cycle did not close")
    return events


def pentagon_routes(g: Triangulation) -> tuple[list[FlipEvent], list[FlipEvent]]:
    """Two flip paths between the same triangulations: two flips one way, three the other."""
    cyc = pentagon_cycle(g)
    forward = cyc[:2]
    backward = [cyc[4].reversed(), cyc[3].reversed(), cyc[2].reversed()]
    return forward, backward


def verify_pentagon_on_configuration(points: Sequence[Point], tup: PentagonTuple,
                                     atol: float = PENTAGON_ATOL,
                                     seed: Mapping[Edge, float] | None = None) -> bool:
    """Compare the 2-flip and 3-flip routes around the pentagon of triangulations.

    Finite-label tuples compare the composed matrices entrywise.  Infinite
    (deterministic) tuples transport ``seed`` -- Euclidean edge lengths by
    default -- along both routes and compare the final labelings.
    """
    if len(points) != 5:
        raise ValueError("need exactly 5 points")
    g = delaunay(points)
    if len(g.hull_edges) != 5:
        raise ValueError("points are not in convex position")
    forward, backward = pentagon_routes(g)
    if tup.labels is None:
        seed = dict(seed) if seed is not None else euclidean_lengths(points, g)
        return labelings_match(ptolemy_propagate(seed, forward, tup),
                               ptolemy_propagate(seed, backward, tup), rel_tol=atol)
    cache = BasisCache(tup)
    m1 = chain_matrix(flip_operators(g, forward, tup, cache))
    m2 = chain_matrix(flip_operators(g, backward, tup, cache))
    return sparse_max_abs_diff(m1, m2) <= atol


def disjoint_flip_pairs(g: Triangulation) -> list[tuple[FlipEvent, FlipEvent]]:
    """Pairs of flips of ``g`` whose quadrilaterals share no triangle."""
    flips = []
    for e in g.interior_edges:
        try:
            flips.append(g.flip(e)[1])
        except ValueError:
            continue
    return [(f1, f2) for k, f1 in enumerate(flips) for f2 in flips[k + 1:]
            if not f1.shares_triangle_with(f2) and f1.inserted != f2.inserted]


def verify_commutativity(ev1: FlipEvent, ev2: FlipEvent, base: Triangulation,
                         tup: PentagonTuple, atol: float = COMMUTATIVITY_ATOL,
                         bases: BasisCache | None = None) -> bool:
    """Both orders of two flips on disjoint quads give the same operator.

    Raises ValueError for distinct flips whose quads overlap.
    """
    if ev1 == ev2:
        return True
    if ev1.shares_triangle_with(ev2) or ev1.inserted == ev2.inserted:
        raise ValueError(f"flips {ev1.removed} and {ev2.removed} act on overlapping quads")
    cache = bases or BasisCache(tup)
    m12 = chain_matrix(flip_operators(base, [ev1, ev2], tup, cache))
    m21 = chain_matrix(flip_operators(base, [ev2, ev1], tup, cache))
    return sparse_max_abs_diff(m12, m21) <= atol


__all__ = [
    "BasisCache",
    "BraidInvariant",
    "FlipOperator",
    "InvariantOperator",
    "allclose_mixed",
    "braid_invariant",
    "chain_matrix",
    "compose",
    "disjoint_flip_pairs",
    "eigen_multiplicity",
    "euclidean_lengths",
    "flip_operator",
    "flip_operators",
    "labelings_match",
    "pentagon_cycle",
    "pentagon_routes",
    "ptolemy_propagate",
    "reverse_defect",
    "sparse_max_abs_diff",
    "spectra_match",
    "spectrum_summary",
    "verify_commutativity",
    "verify_pentagon_on_configuration",
]
