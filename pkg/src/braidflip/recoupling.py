"""Quantum integers, theta/tetrahedral networks and q-6j symbols at q = exp(i*pi/r).

Everything is real: q enters only through ``[n] = sin(n*pi/r) / sin(pi/r)``.
The 6j symbol ``sixj(a, b, i, c, d, j)`` is the coefficient of the
``i``-diagonal coloring when the ``j``-diagonal of a quadrilateral with sides
``a, b, c, d`` is flipped; it is nonzero only if ``(a,b,j), (c,d,j), (a,d,i),
(b,c,i)`` are admissible.

A :class:`PentagonTuple` bundles labels, an admissibility predicate and a 6j
function.  Two instances ship: :class:`RecouplingTuple` and
:class:`PtolemyTuple`.
"""

from __future__ import annotations

import abc
import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import InadmissibleTriple, PtolemyZeroDivision


@dataclass(frozen=True)
class RecouplingParams:
    r: int

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 3:
            raise ValueError(f"r must be an integer >= 3, got {self.r}")

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi / self.r)

    @property
    def labels(self) -> range:
        return range(self.r - 1)


Level = Union[int, RecouplingParams]


def _level(p: Level) -> int:
    return p.r if isinstance(p, RecouplingParams) else RecouplingParams(p).r


def qint(n: int, p: Level) -> float:
    r = _level(p)
    if n % r == 0:
        return 0.0
    return math.sin(n * math.pi / r) / math.sin(math.pi / r)


def qfact(n: int, p: Level) -> float:
    r = _level(p)
    out = 1.0
    for k in range(1, n + 1):
        out *= qint(k, r)
    return out


def delta_n(n: int, p: Level) -> float:
    """Loop value of the ``n``-colored unknot."""
    return (-1) ** n * qint(n + 1, p)


def is_admissible(a: int, b: int, c: int, p: Level) -> bool:
    r = _level(p)
    return (min(a, b, c) >= 0 and (a + b + c) % 2 == 0
            and a + b >= c and a + c >= b and b + c >= a
            and a + b + c <= 2 * r - 4)


def _require(p: Level, *triples: tuple[int, int, int]) -> None:
    for t in triples:
        if not is_admissible(*t, p):
            raise InadmissibleTriple(f"triple {t} is not admissible at r={_level(p)}")


def theta(a: int, b: int, c: int, p: Level) -> float:
    _require(p, (a, b, c))
    x = (a + b - c) // 2
    y = (a + c - b) // 2
    z = (b + c - a) // 2
    return ((-1) ** (x + y + z) * qfact(x + y + z + 1, p) * qfact(x, p) * qfact(y, p) * qfact(z, p)
            / (qfact(x + y, p) * qfact(x + z, p) * qfact(y + z, p)))


def tet(a: int, b: int, i: int, c: int, d: int, j: int, p: Level) -> float:
    """Tetrahedral network with faces ``(a,b,j), (c,d,j), (a,d,i), (b,c,i)``."""
    _require(p, (a, b, j), (c, d, j), (a, d, i), (b, c, i))
    faces = ((a + b + j) // 2, (c + d + j) // 2, (a + d + i) // 2, (b + c + i) // 2)
    squares = ((a + b + c + d) // 2, (a + c + i + j) // 2, (b + d + i + j) // 2)
    pre = 1.0
    for t in faces:
        for s in squares:
            pre *= qfact(s - t, p)
    for label in (a, b, c, d, i, j):
        pre /= qfact(label, p)
    total = 0.0
    for s in range(max(faces), min(squares) + 1):
        den = 1.0
        for t in faces:
            den *= qfact(s - t, p)
        for u in squares:
            den *= qfact(u - s, p)
        total += (-1) ** s * qfact(s + 1, p) / den
    return pre * total


def sixj(a: int, b: int, i: int, c: int, d: int, j: int, p: Level) -> float:
    """Scalar q-6j symbol; 0 off its support."""
    if not (is_admissible(a, b, j, p) and is_admissible(c, d, j, p)
            and is_admissible(a, d, i, p) and is_admissible(b, c, i, p)):
        return 0.0
    return tet(a, b, i, c, d, j, p) * delta_n(i, p) / (theta(a, d, i, p) * theta(b, c, i, p))


@lru_cache(maxsize=None)
def _cached_table(r: int) -> np.ndarray:
    table = kernels.sixj_table(r)
    table.setflags(write=False)
    return table


def sixj_table(p: Level) -> np.ndarray:
    """Read-only dense table ``T[a, b, i, c, d, j]`` over labels ``0..r-2``."""
    return _cached_table(_level(p))


# -- pentagon tuples -------------------------------------------------------


class PentagonTuple(abc.ABC):
    """Label set, symmetric admissibility set and 6j function."""

    name: str = "tuple"

    @property
    def labels(self) -> tuple | None:
        """Finite sorted label list, or ``None`` for an infinite label set."""
        return None

    @abc.abstractmethod
    def admissible(self, a, b, c) -> bool: ...

    @abc.abstractmethod
    def sixj(self, a, b, i, c, d, j) -> float: ...

    @abc.abstractmethod
    def candidates(self, a, b, c, d, j) -> list:
        """Every ``i`` for which ``sixj(a, b, i, c, d, j)`` may be nonzero."""

    def table(self) -> np.ndarray:
        labels = self.labels
        if labels is None:
            raise ValueError(f"{self.name} has no finite label set")
        L = len(labels)
        out = np.zeros((L,) * 6)
        for idx in itertools.product(range(L), repeat=6):
            out[idx] = self.sixj(*(labels[k] for k in idx))
        return out


class RecouplingTuple(PentagonTuple):
    def __init__(self, params: Level):
        self.params = params if isinstance(params, RecouplingParams) else RecouplingParams(params)
        self.name = f"recoupling(r={self.params.r})"

    def __repr__(self):
        return f"RecouplingTuple(r={self.params.r})"

    def __eq__(self, other):
        return type(other) is RecouplingTuple and other.params == self.params

    def __hash__(self):
        return hash(("recoupling", self.params.r))

    @property
    def r(self) -> int:
        return self.params.r

    @cached_property
    def labels(self) -> tuple[int, ...]:
        return tuple(self.params.labels)

    def admissible(self, a, b, c) -> bool:
        return is_admissible(a, b, c, self.params)

    def table(self) -> np.ndarray:
        return sixj_table(self.params)

    def sixj(self, a, b, i, c, d, j) -> float:
        L = self.params.r - 1
        if all(0 <= x < L for x in (a, b, i, c, d, j)):
            return float(self.table()[a, b, i, c, d, j])
        return 0.0

    def candidates(self, a, b, c, d, j) -> list[int]:
        return [i for i in self.labels if self.admissible(a, d, i) and self.admissible(b, c, i)]


def recoupling_tuple(p: Level) -> RecouplingTuple:
    return RecouplingTuple(p)


PTOLEMY_REL_TOL = 1e-9
PTOLEMY_ABS_TOL = 1e-12


class PtolemyTuple(PentagonTuple):
    """Real labels; the only nonzero coefficient sends ``j`` to ``(ac + bd) / j``.

    In the slot order used throughout, ``a, b`` share a triangle with ``j``,
    so ``a, c`` and ``b, d`` are opposite sides of the quadrilateral and the
    rule is Ptolemy's relation for a cyclic quadrilateral.
    """

    name = "ptolemy"

    def __repr__(self):
        return "PtolemyTuple()"

    def __eq__(self, other):
        return type(other) is PtolemyTuple

    def __hash__(self):
        return hash("ptolemy")

    def admissible(self, a, b, c) -> bool:
        return True

    def sixj(self, a, b, i, c, d, j) -> float:
        lhs = a * c + b * d
        rhs = i * j
        return 1.0 if math.isclose(lhs, rhs, rel_tol=PTOLEMY_REL_TOL, abs_tol=PTOLEMY_ABS_TOL) else 0.0

    def candidates(self, a, b, c, d, j) -> list[float]:
        if abs(j) <= PTOLEMY_ABS_TOL:
            raise PtolemyZeroDivision(f"diagonal label {j!r} is zero")
        return [(a * c + b * d) / j]


def ptolemy_tuple() -> PtolemyTuple:
    return PtolemyTuple()


class PerturbedTuple(PentagonTuple):
    """``base`` with ``sixj`` at exactly one argument tuple shifted by ``delta``.

    Test hook: an identity check that cannot tell this apart from ``base``
    has no power.
    """

    def __init__(self, base: PentagonTuple, args: Sequence, delta: float = 1e-3):
        self.base = base
        self.args = tuple(args)
        self.delta = delta
        self.name = f"{base.name}+perturbed{self.args}"

    @property
    def labels(self):
        return self.base.labels

    def admissible(self, a, b, c) -> bool:
        return self.base.admissible(a, b, c)

    def sixj(self, a, b, i, c, d, j) -> float:
        value = self.base.sixj(a, b, i, c, d, j)
        if (a, b, i, c, d, j) == self.args:
            value += self.delta
        return value

    def candidates(self, a, b, c, d, j) -> list:
        found = list(self.base.candidates(a, b, c, d, j))
        if (a, b, c, d, j) == self.args[:2] + self.args[3:] and self.args[2] not in found:
            found.append(self.args[2])
        return found

    def table(self) -> np.ndarray:
        out = np.array(self.base.table(), copy=True)
        labels = self.labels
        out[tuple(labels.index(x) for x in self.args)] += self.delta
        return out
