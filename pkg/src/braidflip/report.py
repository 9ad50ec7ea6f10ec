"""Structured run reports (plain dicts, JSON-ready)."""

from __future__ import annotations

import datetime as _dt
import functools

import numpy as np

from . import __version__, kernels
from .braid_operator import (
    COMPOSITION_ORDER,
    SPECTRUM_TOL,
    BraidInvariant,
    eigen_multiplicity,
    reverse_defect,
    spectrum_summary,
)
from .identities import (
    ORTHOGONALITY_TOL,
    PENTAGON_TOL,
    check_orthogonality,
    check_pentagon,
    check_pentagon_random,
)
from .kinetic import FlipEvent
from .recoupling import PentagonTuple, RecouplingTuple, sixj

REVERSE_TOL = 1e-9
EXHAUSTIVE_PENTAGON_MAX_R = 8
RANDOM_PENTAGON_SAMPLES = 10_000


def event_dict(ev: FlipEvent) -> dict:
    return {
        "t_lo": ev.t_lo,
        "t_hi": ev.t_hi,
        "removed": list(ev.removed),
        "inserted": list(ev.inserted),
        "quad": [list(e) for e in ev.quad],
    }


def identity_suite(tup: PentagonTuple, random_samples: int = RANDOM_PENTAGON_SAMPLES,
                   seed: int = 0) -> list[dict]:
    """Orthogonality (exhaustive) and pentagon (exhaustive up to r=8, then random)."""
    reports = [check_orthogonality(tup)]
    r = getattr(tup, "r", None)
    if r is None or r <= EXHAUSTIVE_PENTAGON_MAX_R:
        reports.append(check_pentagon(tup))
    if r is not None and (r > EXHAUSTIVE_PENTAGON_MAX_R or random_samples) and isinstance(tup, RecouplingTuple):
        scalar = functools.lru_cache(maxsize=None)(functools.partial(sixj, p=r))
        reports.append(check_pentagon_random(tup, samples=random_samples or RANDOM_PENTAGON_SAMPLES,
                                             seed=seed, sixj=lambda *args: scalar(*args)))
    return [rep.as_dict() for rep in reports]


def tolerances(samples: int, time_tol: float) -> dict:
    return {
        "initial_samples": samples,
        "time_tolerance": time_tol,
        "incircle_relative": 1e-10,
        "orthogonality": ORTHOGONALITY_TOL,
        "pentagon": PENTAGON_TOL,
        "reverse_flip": REVERSE_TOL,
        "eigen_multiplicity": 1e-8,
        "spectrum_cluster": SPECTRUM_TOL,
    }


def header(command: str) -> dict:
    return {
        "tool": "braidflip",
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "command": command,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def invariant_report(name: str, result: BraidInvariant, tup: PentagonTuple,
                     samples: int, time_tol: float, dump_matrix: bool = False,
                     identities: list[dict] | None = None) -> dict:
    A = result.invariant.matrix
    defects = [reverse_defect(op, tup) for op in result.operators]
    rep = header("invariant")
    rep.update({
        "input": name,
        "tuple": tup.name,
        "composition_order": COMPOSITION_ORDER,
        "tolerances": tolerances(samples, time_tol),
        "events": [event_dict(ev) for ev in result.events],
        "event_count": len(result.events),
        "triangulations": [[list(t) for t in sorted(g.triangles)] for g in result.triangulations],
        "dimensions": result.dims,
        "operator": {
            "dim": int(A.shape[0]),
            "distance_from_identity": float(np.abs(A - np.eye(A.shape[0])).max(initial=0.0)),
            "is_identity": bool(np.array_equal(A, np.eye(A.shape[0]))),
            "multiplicity_minus_one": eigen_multiplicity(A, -1.0),
            "multiplicity_plus_one": eigen_multiplicity(A, 1.0),
        },
        "spectrum": spectrum_summary(A),
        "reverse_flip_defects": defects,
        "identity_suite": identities or [],
    })
    gates = [d <= REVERSE_TOL for d in defects] + [s["passed"] for s in rep["identity_suite"]]
    rep["gates_passed"] = all(gates)
    if dump_matrix:
        rep["basis"] = {
            "edge_order": [list(e) for e in result.bases[0].edge_order],
            "colorings": [list(v) for v in result.bases[0].colorings],
        }
        rep["matrix"] = [float(x) for x in A.ravel()]
    return rep
