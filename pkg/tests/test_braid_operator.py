
import numpy as np
import pytest
from scipy import sparse

from braidflip.braid_operator import (
    BasisCache,
    allclose_mixed,
    braid_invariant,
    compose,
    disjoint_flip_pairs,
    eigen_multiplicity,
    euclidean_lengths,
    flip_operator,
    flip_operators,
    labelings_match,
    pentagon_cycle,
    ptolemy_propagate,
    reverse_defect,
    spectra_match,
    spectrum_summary,
    verify_commutativity,
    verify_pentagon_on_configuration,
)
from braidflip.coloring import enumerate_colorings
from braidflip.errors import BasisMismatch, PtolemyZeroDivision
from braidflip.fixtures import loop_braid, twin_braid
from braidflip.kinetic import (
    StrandSystem,
    delaunay,
    extract_flip_sequence,
    position_at,
    triangulation_at,
    triangulation_sequence,
)
from braidflip.recoupling import PerturbedTuple, ptolemy_tuple, recoupling_tuple

import oracles

# Euclidean lengths of the example at t=0 carried once around the loop.
LOOP_PTOLEMY_FINAL = {
    (0, 1): 0.333333333333,
    (0, 2): 2.73205080757,
    (0, 3): 4.52487002474,
    (1, 2): 6.94253269328,
    (1, 3): 1.77920069434,
    (1, 4): 2.41897361077,
    (2, 3): 1.73205080757,
    (2, 4): 1.73205080757,
    (3, 4): 1.73205080757,
}


@pytest.fixture(scope="module")
def loop():
    s = loop_braid()
    evs = extract_flip_sequence(s)
    return s, evs, triangulation_sequence(triangulation_at(s, 0.0), evs)


@pytest.fixture(scope="module")
def loop_r4():
    return braid_invariant(loop_braid(), recoupling_tuple(4))


def test_zero_column_is_unit(loop):
    _, evs, seq = loop
    tup = recoupling_tuple(4)
    for ev, g0, g1 in zip(evs, seq, seq[1:]):
        op = flip_operator(ev, enumerate_colorings(g0, tup), enumerate_colorings(g1, tup), tup)
        col = op.toarray()[:, 0]
        assert col[0] == pytest.approx(1.0)
        assert np.count_nonzero(col) == 1


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_reverse_flip_is_inverse(loop, r):
    _, evs, seq = loop
    tup = recoupling_tuple(r)
    for op in flip_operators(seq[0], evs, tup):
        assert reverse_defect(op, tup) <= 1e-9


@pytest.mark.parametrize("r", [3, 4])
def test_columns_match_naive_summation(loop, r):
    _, evs, seq = loop
    tup = recoupling_tuple(r)
    for ev, g0, g1 in zip(evs, seq, seq[1:]):
        op = flip_operator(ev, enumerate_colorings(g0, tup), enumerate_colorings(g1, tup), tup)
        ref = oracles.flip_matrix(g0.triangles, g1.triangles, r)
        np.testing.assert_allclose(op.toarray(), ref, atol=1e-12)


def test_column_sparsity(loop_r4):
    for op in loop_r4.operators:
        per_col = np.diff(op.matrix.indptr)
        assert per_col.max() <= 3  # at most r-1 nonzeros


def test_compose_empty_is_identity():
    g = delaunay([(0, 0), (1, 0), (0, 1), (0.4, 0.3)])
    basis = enumerate_colorings(g, recoupling_tuple(4))
    inv = compose([], basis)
    assert np.array_equal(inv.matrix, np.eye(basis.dim))
    assert inv.event_count == 0
    with pytest.raises(ValueError):
        compose([])


def test_compose_flip_and_reverse(loop):
    _, evs, seq = loop
    tup = recoupling_tuple(5)
    cache = BasisCache(tup)
    ev = evs[2]
    fwd, back = flip_operators(seq[2], [ev, ev.reversed()], tup, cache)
    inv = compose([fwd, back])
    assert np.abs(inv.matrix - np.eye(inv.dim)).max() <= 1e-9


def test_compose_rejects_broken_chain(loop):
    _, evs, seq = loop
    tup = recoupling_tuple(3)
    ops = flip_operators(seq[0], evs, tup)
    with pytest.raises(BasisMismatch):
        compose([ops[0], ops[2]])
    with pytest.raises(BasisMismatch):
        compose(ops[:3])  # does not close up


def test_flip_operator_wrong_basis(loop):
    _, evs, seq = loop
    tup = recoupling_tuple(3)
    b0 = enumerate_colorings(seq[0], tup)
    with pytest.raises(BasisMismatch):
        flip_operator(evs[0], b0, b0, tup)


def test_eigen_multiplicity_examples():
    eye = np.eye(7)
    assert eigen_multiplicity(eye, 1.0) == 7
    assert eigen_multiplicity(eye, -1.0) == 0
    d = np.diag([1.0, -1.0, -1.0, 2.0])
    assert eigen_multiplicity(d, -1.0) == 2
    assert eigen_multiplicity(sparse.csc_array(d), 2.0) == 1
    # a Jordan block has geometric multiplicity 1
    assert eigen_multiplicity(np.array([[1.0, 1.0], [0.0, 1.0]]), 1.0) == 1


def test_spectrum_summary_clusters():
    out = spectrum_summary(np.diag([1.0, -1.0, -1.0]))
    counts = {round(c["real"]): c["count"] for c in out}
    assert counts == {1: 1, -1: 2}


def test_loop_operator_properties(loop_r4):
    A = loop_r4.invariant.matrix
    assert A.shape == (160, 160)
    assert np.abs(A - np.eye(160)).max() > 1e-3
    assert eigen_multiplicity(A, -1.0) + eigen_multiplicity(A, 1.0) == 160
    assert np.allclose(A @ A, np.eye(160), atol=1e-9)  # this loop squares to the identity


def test_phase_shift_conjugates(loop_r4):
    from braidflip.fixtures import circling_braid
    other = braid_invariant(circling_braid(phase=1.0), recoupling_tuple(4))
    assert spectra_match(loop_r4.invariant.matrix, other.invariant.matrix)


def test_allclose_mixed():
    A = np.array([[0.0, 1e6]])
    assert allclose_mixed(A + np.array([[5e-10, 0.05]]), A)
    assert not allclose_mixed(A + np.array([[2e-9, 0.0]]), A)
    assert not allclose_mixed(A + np.array([[0.0, 0.2]]), A)


def test_static_braid_identity():
    s = StrandSystem.static([(0, 0), (1, 0.1), (0.4, 1)])
    res = braid_invariant(s, recoupling_tuple(5))
    assert res.events == []
    assert np.array_equal(res.invariant.matrix, np.eye(res.bases[0].dim))


# -- Ptolemy transport -------------------------------------------------------


def test_ptolemy_loop_regression(loop):
    s, evs, seq = loop
    seed = euclidean_lengths(position_at(s, 0.0), seq[0])
    final = ptolemy_propagate(seed, evs)
    assert set(final) == set(LOOP_PTOLEMY_FINAL)
    for e, want in LOOP_PTOLEMY_FINAL.items():
        assert final[e] == pytest.approx(want, rel=1e-10)
    assert not labelings_match(final, seed)


def test_ptolemy_trivial_braid(loop):
    s, _, seq = loop
    seed = euclidean_lengths(position_at(s, 0.0), seq[0])
    assert ptolemy_propagate(seed, []) == seed


def test_ptolemy_flip_reverse(loop):
    s, evs, seq = loop
    seed = euclidean_lengths(position_at(s, 0.0), seq[0])
    back = ptolemy_propagate(ptolemy_propagate(seed, evs), [ev.reversed() for ev in reversed(evs)])
    for e in seed:
        assert back[e] == pytest.approx(seed[e], rel=1e-12)


def test_ptolemy_zero_division_index(loop):
    s, evs, seq = loop
    seed = euclidean_lengths(position_at(s, 0.0), seq[0])
    touched = set()
    target = None
    for k, ev in enumerate(evs):
        if k > 0 and ev.removed in seed and ev.removed not in touched:
            target = k
            break
        touched |= {ev.removed, ev.inserted, *ev.quad}
    assert target is not None
    seed[evs[target].removed] = 0.0
    with pytest.raises(PtolemyZeroDivision) as info:
        ptolemy_propagate(seed, evs)
    assert info.value.event_index == target


# -- local relations ---------------------------------------------------------


def convex_pentagon(rng):
    angles = np.sort(rng.uniform(0, 2 * np.pi, 5))
    radii = rng.uniform(0.8, 1.2, 5)
    pts = [(float(r * np.cos(a)), float(r * np.sin(a))) for r, a in zip(radii, angles)]
    g = delaunay(pts)
    return pts if len(g.hull_edges) == 5 else None


def test_pentagon_cycle_closes():
    rng = np.random.default_rng(1)
    pts = None
    while pts is None:
        pts = convex_pentagon(rng)
    g = delaunay(pts)
    cyc = pentagon_cycle(g)
    assert len(cyc) == 5
    assert triangulation_sequence(g, cyc)[-1] == g
    assert len(set(triangulation_sequence(g, cyc)[:-1])) == 5


@pytest.mark.parametrize("seed", range(5))
def test_geometric_pentagon(seed):
    pts = None
    rng = np.random.default_rng(seed)
    while pts is None:
        pts = convex_pentagon(rng)
    for r in (3, 4, 5):
        assert verify_pentagon_on_configuration(pts, recoupling_tuple(r))
    assert verify_pentagon_on_configuration(pts, ptolemy_tuple(), atol=1e-9)
    bad = PerturbedTuple(recoupling_tuple(4), (1, 1, 0, 1, 1, 0), 1e-3)
    assert not verify_pentagon_on_configuration(pts, bad)


def test_pentagon_rejects_non_convex():
    with pytest.raises(ValueError):
        verify_pentagon_on_configuration([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1.1)], recoupling_tuple(4))


def test_commutativity_seven_points():
    rng = np.random.default_rng(7)
    g = delaunay([tuple(p) for p in rng.uniform(0, 1, (7, 2))])
    pairs = disjoint_flip_pairs(g)
    assert pairs
    tup = recoupling_tuple(3)
    cache = BasisCache(tup)
    assert all(verify_commutativity(e1, e2, g, tup, bases=cache) for e1, e2 in pairs)


def test_commutativity_refuses_overlap():
    g = delaunay([(0, 0), (1, -0.9), (2, 0.1), (1, 1), (1.05, 0.2)])
    flips = [g.flip(e)[1] for e in g.interior_edges if len(g.opposite(e)) == 2]
    e1, e2 = next((a, b) for a in flips for b in flips if a != b and a.shares_triangle_with(b))
    with pytest.raises(ValueError):
        verify_commutativity(e1, e2, g, recoupling_tuple(3))
    assert verify_commutativity(e1, e1, g, recoupling_tuple(3))


def test_twin_braid_simultaneous_events_commute():
    s = twin_braid()
    evs = extract_flip_sequence(s)
    assert len(evs) == 12
    seq = triangulation_sequence(triangulation_at(s, 0.0), evs)
    tup = recoupling_tuple(3)
    cache = BasisCache(tup)
    for k in range(0, 12, 2):
        e1, e2 = evs[k], evs[k + 1]
        assert abs(e1.time - e2.time) <= 1e-9
        assert not e1.shares_triangle_with(e2)
        assert e1.removed < e2.removed
        assert verify_commutativity(e1, e2, seq[k], tup, bases=cache)
