import itertools

import pytest

from braidflip.identities import (
    check_orthogonality,
    check_pentagon,
    check_pentagon_random,
    pentagon_residual,
)
from braidflip.recoupling import PerturbedTuple, is_admissible, recoupling_tuple, sixj


def _naive_orthogonality(r):
    L = range(r - 1)
    worst = 0.0
    for a, b, c, d, j, k in itertools.product(L, repeat=6):
        total = sum(sixj(a, b, i, c, d, j, r) * sixj(d, a, k, b, c, i, r) for i in L)
        want = float(j == k and is_admissible(a, b, j, r) and is_admissible(c, d, j, r))
        worst = max(worst, abs(total - want))
    return worst


def _naive_pentagon(r):
    L = range(r - 1)
    worst = 0.0
    for a, b, c, d, e, i, j, k, l in itertools.product(L, repeat=9):
        lhs = sum(sixj(a, i, m, d, e, j, r) * sixj(b, c, l, d, m, i, r) * sixj(b, l, k, e, a, m, r)
                  for m in L)
        rhs = sixj(b, c, k, j, a, i, r) * sixj(k, c, l, d, e, j, r)
        worst = max(worst, abs(lhs - rhs))
    return worst


@pytest.mark.parametrize("r", [3, 4])
def test_orthogonality_against_loops(r):
    rep = check_orthogonality(recoupling_tuple(r))
    assert rep.passed
    assert _naive_orthogonality(r) <= 1e-12
    assert rep.max_error == pytest.approx(_naive_orthogonality(r), abs=1e-12)


@pytest.mark.parametrize("r", [3, 4])
def test_pentagon_against_loops(r):
    rep = check_pentagon(recoupling_tuple(r))
    assert rep.passed
    assert _naive_pentagon(r) <= 1e-12


def test_reports_count_nontrivial():
    rep = check_pentagon(recoupling_tuple(4))
    assert rep.checked == 3 ** 9
    assert 0 < rep.nontrivial < rep.checked
    assert rep.as_dict()["passed"] is True


@pytest.mark.parametrize("r", [3, 4, 5])
def test_perturbation_detected(r):
    bad = PerturbedTuple(recoupling_tuple(r), (1, 1, 0, 1, 1, 0), 1e-3)
    orth = check_orthogonality(bad)
    pent = check_pentagon(bad)
    assert not orth.passed and not pent.passed
    assert orth.max_error > 1e-4
    assert orth.worst is not None and set(orth.worst) == {"a", "b", "c", "d", "j", "k"}


def test_random_pentagon_uses_supported_tuples():
    tup = recoupling_tuple(7)
    scalar = lambda *x: sixj(*x, 7)  # noqa: E731
    rep = check_pentagon_random(tup, samples=500, seed=3, sixj=scalar)
    assert rep.checked == 500 and rep.passed
    assert rep.max_error > 0.0
    lhs, rhs = pentagon_residual(tup, sixj=scalar, **rep.worst)
    assert abs(lhs - rhs) == pytest.approx(rep.max_error, abs=1e-15)


def test_random_pentagon_deterministic():
    tup = recoupling_tuple(6)
    a = check_pentagon_random(tup, samples=200, seed=11)
    b = check_pentagon_random(tup, samples=200, seed=11)
    assert a.as_dict() == b.as_dict()


def test_random_pentagon_sees_perturbation():
    bad = PerturbedTuple(recoupling_tuple(4), (1, 1, 0, 1, 1, 0), 1e-3)
    assert not check_pentagon_random(bad, samples=2000, seed=0).passed
