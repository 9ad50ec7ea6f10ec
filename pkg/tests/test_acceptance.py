"""Exit criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import functools
import math
import time

import numpy as np
import pytest

from braidflip.braid_operator import (
    BasisCache,
    allclose_mixed,
    braid_invariant,
    disjoint_flip_pairs,
    eigen_multiplicity,
    euclidean_lengths,
    flip_operator,
    pentagon_cycle,
    ptolemy_propagate,
    verify_commutativity,
    verify_pentagon_on_configuration,
)
from braidflip.coloring import enumerate_colorings
from braidflip.fixtures import circling_braid, double_loop_braid, loop_braid, twin_braid
from braidflip.identities import check_orthogonality, check_pentagon, check_pentagon_random
from braidflip.kinetic import (
    StrandSystem,
    delaunay,
    extract_flip_sequence,
    position_at,
    triangulation_at,
    triangulation_sequence,
)
from braidflip.recoupling import PerturbedTuple, ptolemy_tuple, recoupling_tuple, sixj

import oracles

acceptance = pytest.mark.acceptance


@pytest.fixture(scope="module")
def loop_r4():
    t0 = time.perf_counter()
    res = braid_invariant(loop_braid(), recoupling_tuple(4))
    return res, time.perf_counter() - t0


# -- 1 -------------------------------------------------------------------------

AC1 = "AC1 example braid at r=4: 6 events, 160 colorings, A != I, -1 with multiplicity 20"


@acceptance(AC1)
def test_ac1_six_events(loop_r4):
    res, _ = loop_r4
    assert len(res.events) == 6


@acceptance(AC1)
def test_ac1_dimension_160(loop_r4):
    res, _ = loop_r4
    assert res.dims == [160] * 7


@acceptance(AC1)
def test_ac1_not_identity(loop_r4):
    res, _ = loop_r4
    A = res.invariant.matrix
    dist = np.abs(A - np.eye(A.shape[0])).max()
    print(f"max|A - I| = {dist}")
    assert dist > 1e-3


@acceptance(AC1)
def test_ac1_multiplicity_20(loop_r4):
    res, elapsed = loop_r4
    mult = eigen_multiplicity(res.invariant, -1.0, 1e-8)
    print(f"multiplicity of -1: {mult}; pipeline {elapsed:.2f}s")
    assert mult == 20
    assert elapsed < 10.0


# -- 2 -------------------------------------------------------------------------

AC2 = "AC2 orthogonality, r=3..8, tol 1e-9"


@acceptance(AC2)
@pytest.mark.parametrize("r", range(3, 9))
def test_ac2_orthogonality(r):
    t0 = time.perf_counter()
    rep = check_orthogonality(recoupling_tuple(r), tol=1e-9)
    print(f"r={r}: max error {rep.max_error:.2e} over {rep.checked} tuples")
    assert rep.passed
    assert time.perf_counter() - t0 < 60.0


# -- 3 -------------------------------------------------------------------------

AC3 = "AC3 pentagon identity, exhaustive r=3..8 + 1e4 random r=7,8, tol 1e-8"


@acceptance(AC3)
@pytest.mark.parametrize("r", range(3, 9))
def test_ac3_pentagon_exhaustive(r):
    rep = check_pentagon(recoupling_tuple(r), tol=1e-8)
    print(f"r={r}: max error {rep.max_error:.2e}, {rep.nontrivial} nontrivial of {rep.checked}")
    assert rep.passed


@acceptance(AC3)
@pytest.mark.parametrize("r", [7, 8])
def test_ac3_pentagon_random(r):
    # through the scalar formula so the check does not share the precomputed table
    scalar = functools.lru_cache(maxsize=None)(functools.partial(sixj, p=r))
    rep = check_pentagon_random(recoupling_tuple(r), samples=10_000, seed=r, tol=1e-8,
                                sixj=lambda *x: scalar(*x))
    print(f"r={r}: {rep.checked} random tuples, max error {rep.max_error:.2e}")
    assert rep.checked >= 10_000
    assert rep.passed


# -- 4 -------------------------------------------------------------------------

AC4 = "AC4 geometric pentagon on 100 random convex configurations, r=3,4,5, with power check"


def _convex_configurations(count, seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        angles = np.sort(rng.uniform(0, 2 * np.pi, 5))
        radii = rng.uniform(0.7, 1.3, 5)
        pts = [(float(r * np.cos(a)), float(r * np.sin(a))) for r, a in zip(radii, angles)]
        try:
            g = delaunay(pts)
        except Exception:
            continue
        if len(g.hull_edges) == 5:
            out.append(pts)
    return out


CONFIGS = _convex_configurations(100)


@acceptance(AC4)
@pytest.mark.parametrize("r", [3, 4, 5])
def test_ac4_geometric_pentagon(r):
    tup = recoupling_tuple(r)
    ok = sum(verify_pentagon_on_configuration(pts, tup, atol=1e-8) for pts in CONFIGS)
    print(f"r={r}: {ok}/{len(CONFIGS)} configurations agree")
    assert ok == len(CONFIGS)


@acceptance(AC4)
@pytest.mark.parametrize("r", [3, 4, 5])
def test_ac4_perturbation_detected(r):
    bad = PerturbedTuple(recoupling_tuple(r), (1, 1, 0, 1, 1, 0), 1e-3)
    caught = sum(not verify_pentagon_on_configuration(pts, bad, atol=1e-8) for pts in CONFIGS)
    print(f"r={r}: perturbed tuple rejected on {caught}/{len(CONFIGS)}")
    assert caught == len(CONFIGS)


# -- 5 -------------------------------------------------------------------------

AC5 = "AC5 commutativity of disjoint flips on 7+ points, tol 1e-9"


@acceptance(AC5)
@pytest.mark.parametrize("n,r", [(7, 3), (7, 4), (8, 3), (9, 3)])
def test_ac5_random_configurations(n, r):
    rng = np.random.default_rng(100 + n)
    tup = recoupling_tuple(r)
    checked = 0
    for _ in range(3):
        g = delaunay([tuple(p) for p in rng.uniform(0, 1, (n, 2))])
        cache = BasisCache(tup)
        for e1, e2 in disjoint_flip_pairs(g)[:6]:
            assert verify_commutativity(e1, e2, g, tup, atol=1e-9, bases=cache)
            checked += 1
    print(f"n={n} r={r}: {checked} disjoint pairs commute")
    assert checked > 0


@acceptance(AC5)
def test_ac5_simultaneous_events_in_a_braid():
    s = twin_braid()
    evs = extract_flip_sequence(s)
    seq = triangulation_sequence(triangulation_at(s, 0.0), evs)
    tup = recoupling_tuple(4)
    cache = BasisCache(tup)
    pairs = [(k, k + 1) for k in range(len(evs) - 1) if abs(evs[k].time - evs[k + 1].time) <= 1e-9]
    assert len(pairs) == 6
    for k, l in pairs:
        assert verify_commutativity(evs[k], evs[l], seq[k], tup, atol=1e-9, bases=cache)


# -- 6 -------------------------------------------------------------------------

AC6 = "AC6 isotopy invariance and A(beta^2) = A(beta)^2"


@acceptance(AC6)
def test_ac6_isotopic_radius(loop_r4):
    res, _ = loop_r4
    other = braid_invariant(circling_braid(radius=0.3), recoupling_tuple(4))
    assert other.bases[0] == res.bases[0]
    A, B = res.invariant.matrix, other.invariant.matrix
    print(f"max entry difference {np.abs(A - B).max():.2e}")
    assert allclose_mixed(B, A, atol=1e-9, rtol=1e-7)


@acceptance(AC6)
def test_ac6_doubled_braid(loop_r4):
    res, _ = loop_r4
    doubled = braid_invariant(double_loop_braid(), recoupling_tuple(4))
    assert len(doubled.events) == 12
    A = res.invariant.matrix
    err = np.abs(doubled.invariant.matrix - A @ A).max()
    print(f"|A(beta^2) - A(beta)^2| = {err:.2e}")
    assert err <= 1e-8


# -- 7 -------------------------------------------------------------------------

AC7 = "AC7 zero-event braid gives the exact identity"


@acceptance(AC7)
@pytest.mark.parametrize("r", [3, 4, 5])
def test_ac7_trivial_braid(r):
    s = StrandSystem.static([(0, 0), (1, 0.2), (0.4, 1.1), (0.5, 0.4), (-0.6, 0.7)])
    res = braid_invariant(s, recoupling_tuple(r))
    assert res.events == []
    assert np.array_equal(res.invariant.matrix, np.eye(res.bases[0].dim))


# -- 8 -------------------------------------------------------------------------

AC8 = "AC8 Ptolemy tuple: flip/reverse to 1e-12, pentagon cycle to 1e-9"


@acceptance(AC8)
def test_ac8_flip_reverse():
    s = loop_braid()
    evs = extract_flip_sequence(s)
    seq = triangulation_sequence(triangulation_at(s, 0.0), evs)
    seed = euclidean_lengths(position_at(s, 0.0), seq[0])
    f = seed
    worst = 0.0
    for ev in evs:
        back = ptolemy_propagate(ptolemy_propagate(f, [ev]), [ev.reversed()])
        worst = max(worst, max(abs(back[e] - f[e]) / abs(f[e]) for e in f))
        f = ptolemy_propagate(f, [ev])
    print(f"worst relative defect {worst:.2e}")
    assert worst <= 1e-12


@acceptance(AC8)
def test_ac8_pentagon_cycle():
    worst = 0.0
    for pts in CONFIGS[:50]:
        g = delaunay(pts)
        seed = euclidean_lengths(pts, g)
        final = ptolemy_propagate(seed, pentagon_cycle(g), ptolemy_tuple())
        worst = max(worst, max(abs(final[e] - seed[e]) / seed[e] for e in seed))
    print(f"worst relative defect after 5 flips {worst:.2e}")
    assert worst <= 1e-9


# -- 9 -------------------------------------------------------------------------

AC9 = "AC9 coloring counts vs brute force; flip columns vs naive summation"


def _small_triangulations():
    shapes = [
        [(0, 0), (1, 0), (0.2, 0.9)],
        [(0, 0), (1, -0.9), (2, 0.1), (1, 1)],
        [(0, 0), (2, 0), (1, 1.7), (1.05, 0.55)],
        [(0, 0), (2, 0.1), (2.1, 2), (-0.1, 1.9), (1.1, 0.8)],
        [(1.0, 0.0), (0.35, 1.02), (-0.86, 0.66), (-0.93, -0.62), (0.27, -0.99)],
    ]
    out = set()
    for pts in shapes:
        g = delaunay(pts)
        frontier = [g]
        while frontier:  # close under flips: every triangulation of the point set
            h = frontier.pop()
            if h in out:
                continue
            out.add(h)
            for e in h.interior_edges:
                try:
                    frontier.append(h.flip(e)[0])
                except ValueError:
                    pass
    return sorted(out, key=lambda h: sorted(h.triangles))


@acceptance(AC9)
@pytest.mark.parametrize("r", [3, 4, 5])
def test_ac9_counts_brute_force(r):
    tup = recoupling_tuple(r)
    tris = _small_triangulations()
    for g in tris:
        assert len(g.edges) <= 8
        edges, brute = oracles.brute_colorings(g.triangles, r)
        basis = enumerate_colorings(g, tup)
        assert list(basis.edge_order) == edges
        assert list(basis.colorings) == brute
    print(f"r={r}: {len(tris)} triangulations agree")


@acceptance(AC9)
def test_ac9_first_event_columns():
    s = loop_braid()
    ev = extract_flip_sequence(s)[0]
    g0 = triangulation_at(s, 0.0)
    g1 = g0.apply(ev)
    tup = recoupling_tuple(4)
    op = flip_operator(ev, enumerate_colorings(g0, tup), enumerate_colorings(g1, tup), tup)
    ref = oracles.flip_matrix(g0.triangles, g1.triangles, 4)
    assert op.matrix.shape == (160, 160)
    err = np.abs(op.toarray() - ref).max()
    print(f"max column deviation {err:.2e}")
    assert err <= 1e-12
    assert math.isclose(abs(np.linalg.det(ref)), abs(np.linalg.det(op.toarray())), rel_tol=1e-9)
