"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import importlib
import random
import timeit

from braidflip import _pykernels
from braidflip.coloring import enumerate_colorings
from braidflip.fixtures import loop_braid
from braidflip.kinetic import triangulation_at
from braidflip.recoupling import recoupling_tuple


def _labeling_args(r):
    g = triangulation_at(loop_braid(), 0.0)
    tup = recoupling_tuple(r)
    edges = g.edge_order
    pos = {e: k for k, e in enumerate(edges)}
    closing = [[] for _ in edges]
    for t in g.triangles:
        e1, e2, e3 = sorted(pos[e] for e in g.triangle_edges(t))
        closing[e3].append((e1, e2))
    L = r - 1
    adm = bytes(tup.admissible(x, y, z) for x in range(L) for y in range(L) for z in range(L))
    assert len(enumerate_colorings(g, tup).colorings) > 0
    return len(edges), closing, adm, L


def cases():
    rng = random.Random(0)
    quads = [[rng.uniform(-1, 1) for _ in range(8)] for _ in range(20_000)]
    lab = _labeling_args(7)
    return {
        "incircle x20000": lambda k: [k.incircle(*q) for q in quads],
        "orient2d x20000": lambda k: [k.orient2d(*q[:6]) for q in quads],
        "colorings (9 edges, r=7)": lambda k: k.enumerate_labelings(*lab),
        "6j table r=8": lambda k: k.sixj_table(8),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _pykernels}
    try:
        backends["cython"] = importlib.import_module("braidflip._ckernels")
    except ImportError:
        print("compiled extension not available; timing the fallback only")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name in backends) + "     speedup")
    for label, fn in cases().items():
        times = {name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
                 for name, mod in backends.items()}
        row = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
