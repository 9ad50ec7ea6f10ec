"""Orthogonality and pentagon checks for finite pentagon tuples.

Both checks run on the dense 6j table with ``numpy.einsum``.  The pentagon
identity can also be evaluated term by term on random label tuples, through
any scalar 6j function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .recoupling import PentagonTuple

ORTHOGONALITY_TOL = 1e-9
PENTAGON_TOL = 1e-8

ORTHOGONALITY_AXES = ("a", "b", "c", "d", "j", "k")
PENTAGON_AXES = ("a", "i", "d", "e", "j", "b", "c", "l", "k")


@dataclass
class IdentityReport:
    identity: str
    tuple_name: str
    tolerance: float
    checked: int
    nontrivial: int
    max_error: float
    worst: dict | None = None
    mode: str = "exhaustive"
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "tuple": self.tuple_name,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "nontrivial": self.nontrivial,
            "max_error": self.max_error,
            "passed": self.passed,
            "worst": self.worst,
        }


def _labelled(axes, index, labels):
    return {name: labels[k] for name, k in zip(axes, index)}


def check_orthogonality(tup: PentagonTuple, tol: float = ORTHOGONALITY_TOL) -> IdentityReport:
    """sum_i {a b i; c d j}{d a k; b c i} == [k == j and (a,b,j), (c,d,j) admissible]."""
    labels = tup.labels
    S = tup.table()
    L = len(labels)
    got = np.einsum("abicdj,dakbci->abcdjk", S, S)
    want = np.zeros_like(got)
    for a, b, c, d, j in itertools.product(range(L), repeat=5):
        la, lb, lc, ld, lj = (labels[x] for x in (a, b, c, d, j))
        if tup.admissible(la, lb, lj) and tup.admissible(lc, ld, lj):
            want[a, b, c, d, j, j] = 1.0
    err = np.abs(got - want)
    worst = np.unravel_index(int(np.argmax(err)), err.shape)
    return IdentityReport(
        identity="orthogonality",
        tuple_name=tup.name,
        tolerance=tol,
        checked=int(err.size),
        nontrivial=int(np.count_nonzero((np.abs(got) > 0) | (want > 0))),
        max_error=float(err.max()),
        worst=_labelled(ORTHOGONALITY_AXES, worst, labels),
    )


def _pentagon_slice(S: np.ndarray, a: int) -> tuple[np.ndarray, np.ndarray]:
    """Both sides for fixed ``a``; axes (i, d, e, j, b, c, l, k)."""
    Sa = S[a]                      # (i, m, d, e, j)
    Sa4 = S[:, :, :, :, a, :]      # (b, l, k, e, m) or (b, c, k, j, i)
    lhs = np.einsum("imdej,bcldmi,blkem->idejbclk", Sa, S, Sa4, optimize=True)
    rhs = np.einsum("bckji,kcldej->idejbclk", Sa4, S, optimize=True)
    return lhs, rhs


def check_pentagon(tup: PentagonTuple, tol: float = PENTAGON_TOL) -> IdentityReport:
    """Exhaustive check of

    sum_m {a i m; d e j}{b c l; d m i}{b l k; e a m} == {b c k; j a i}{k c l; d e j}

    over every 9-tuple of labels, one ``a`` slice at a time.
    """
    labels = tup.labels
    S = np.asarray(tup.table())
    L = len(labels)
    max_err, worst, nontrivial = -1.0, None, 0
    for a in range(L):
        lhs, rhs = _pentagon_slice(S, a)
        err = np.abs(lhs - rhs)
        nontrivial += int(np.count_nonzero((lhs != 0) | (rhs != 0)))
        k = int(np.argmax(err))
        if err.flat[k] > max_err:
            max_err = float(err.flat[k])
            worst = (a,) + tuple(int(x) for x in np.unravel_index(k, err.shape))
    return IdentityReport(
        identity="pentagon",
        tuple_name=tup.name,
        tolerance=tol,
        checked=L ** 9,
        nontrivial=nontrivial,
        max_error=max_err,
        worst=_labelled(PENTAGON_AXES, worst, labels),
    )


def pentagon_residual(tup: PentagonTuple, a, b, c, d, e, i, j, k, l, sixj=None) -> tuple[float, float]:
    """Both sides of the pentagon identity by direct summation.

    ``sixj`` defaults to ``tup.sixj``; pass the scalar formula to stay
    independent of any precomputed table.
    """
    six = sixj or tup.sixj
    lhs = 0.0
    for m in tup.labels:
        t1 = six(a, i, m, d, e, j)
        if t1 == 0.0:
            continue
        lhs += t1 * six(b, c, l, d, m, i) * six(b, l, k, e, a, m)
    rhs = six(b, c, k, j, a, i) * six(k, c, l, d, e, j)
    return lhs, rhs


# Draw order and the triples closed at each step.  The first plan makes every
# right-hand factor admissible, the second every m-independent left-hand one.
_PLANS = (
    (("j", ()), ("d", ()), ("e", ("dej",)), ("a", ()), ("i", ("aji",)),
     ("b", ()), ("c", ("bci",)), ("k", ("abk", "cjk")), ("l", ("ekl", "cdl"))),
    (("j", ()), ("d", ()), ("e", ("dej",)), ("a", ()), ("i", ("aij",)),
     ("b", ()), ("c", ("bci",)), ("l", ("cdl",)), ("k", ("abk", "lek"))),
)


def _draw(tup: PentagonTuple, rng, plan) -> dict | None:
    labels = tup.labels
    got: dict = {}
    for name, triples in plan:
        ok = []
        for x in labels:
            got[name] = x
            if all(tup.admissible(*(got[ch] for ch in t)) for t in triples):
                ok.append(x)
        if not ok:
            return None
        got[name] = ok[int(rng.integers(len(ok)))]
    return got


def check_pentagon_random(tup: PentagonTuple, samples: int = 10_000, seed: int = 0,
                          tol: float = PENTAGON_TOL, sixj=None) -> IdentityReport:
    """Pentagon identity on ``samples`` random label tuples with admissible faces."""
    rng = np.random.default_rng(seed)
    checked = 0
    max_err, worst = 0.0, None
    misses = 0
    while checked < samples:
        got = _draw(tup, rng, _PLANS[checked % 2])
        if got is None:
            misses += 1
            if misses > 100 * samples:
                break
            continue
        checked += 1
        lhs, rhs = pentagon_residual(tup, sixj=sixj, **got)
        if abs(lhs - rhs) > max_err or worst is None:
            max_err = abs(lhs - rhs)
            worst = dict(got)
    return IdentityReport(
        identity="pentagon",
        tuple_name=tup.name,
        tolerance=tol,
        checked=checked,
        nontrivial=checked,
        max_error=max_err,
        worst=worst,
        mode="random",
        extra={"seed": seed},
    )
