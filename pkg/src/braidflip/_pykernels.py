"""Pure-Python reference kernels.

Same call signatures and results as the compiled ``_ckernels`` module; used
when the extension is not built or when ``BRAIDFLIP_PURE=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np


def orient2d(ax, ay, bx, by, cx, cy):
    """Twice the signed area of (a, b, c); positive when counterclockwise."""
    acx = ax - cx
    acy = ay - cy
    bcx = bx - cx
    bcy = by - cy
    return math.fsum((acx * bcy, -acy * bcx))


def incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """Lifted 4x4 incircle determinant, translated to d and expanded.

    The twelve monomials are accumulated with ``math.fsum`` so cancellation
    in the final sum costs nothing beyond the rounding of each product.
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy
    return math.fsum((
        adx * adx * bdx * cdy,
        -adx * adx * cdx * bdy,
        ady * ady * bdx * cdy,
        -ady * ady * cdx * bdy,
        bdx * bdx * cdx * ady,
        -bdx * bdx * adx * cdy,
        bdy * bdy * cdx * ady,
        -bdy * bdy * adx * cdy,
        cdx * cdx * adx * bdy,
        -cdx * cdx * bdx * ady,
        cdy * cdy * adx * bdy,
        -cdy * cdy * bdx * ady,
    ))


def enumerate_labelings(n_edges, closing, admissible, n_labels):
    """All label-index vectors satisfying every closing triangle, in lex order.

    ``closing[k]`` lists pairs ``(e1, e2)`` with ``e1, e2 < k`` such that
    edges ``(e1, e2, k)`` bound a triangle; the triangle is checked as soon as
    edge ``k`` is assigned.  ``admissible`` is a flat C-ordered
    ``n_labels**3`` byte table.
    """
    if n_edges == 0:
        return [()]
    L = n_labels
    L2 = L * L
    adm = bytes(admissible)
    out = []
    lab = [0] * n_edges
    k = 0
    lab[0] = -1
    while k >= 0:
        lab[k] += 1
        if lab[k] >= L:
            k -= 1
            continue
        v = lab[k]
        ok = True
        for e1, e2 in closing[k]:
            if not adm[lab[e1] * L2 + lab[e2] * L + v]:
                ok = False
                break
        if not ok:
            continue
        if k == n_edges - 1:
            out.append(tuple(lab))
        else:
            k += 1
            lab[k] = -1
    return out


def _qfacts(r, n_max):
    s1 = math.sin(math.pi / r)
    q = [0.0 if n % r == 0 else math.sin(n * math.pi / r) / s1 for n in range(n_max + 1)]
    fact = [1.0] * (n_max + 1)
    for n in range(1, n_max + 1):
        fact[n] = fact[n - 1] * q[n]
    return q, fact


def sixj_table(r):
    """Dense table ``S[a, b, i, c, d, j]`` of q-6j symbols for labels 0..r-2."""
    L = r - 1
    q, fact = _qfacts(r, 4 * r)
    top = 2 * r - 4

    def adm(a, b, c):
        return (a + b + c) % 2 == 0 and a + b >= c and a + c >= b and b + c >= a and a + b + c <= top

    theta = np.zeros((L, L, L))
    for a in range(L):
        for b in range(L):
            for c in range(L):
                if adm(a, b, c):
                    x = (a + b - c) // 2
                    y = (a + c - b) // 2
                    z = (b + c - a) // 2
                    theta[a, b, c] = ((-1) ** (x + y + z) * fact[x + y + z + 1] * fact[x] * fact[y] * fact[z]
                                      / (fact[x + y] * fact[x + z] * fact[y + z]))
    delta = [(-1) ** n * q[n + 1] for n in range(L)]

    S = np.zeros((L,) * 6)
    for a in range(L):
        for b in range(L):
            for j in range(L):
                if not adm(a, b, j):
                    continue
                for c in range(L):
                    for d in range(L):
                        if not adm(c, d, j):
                            continue
                        for i in range(L):
                            if not (adm(a, d, i) and adm(b, c, i)):
                                continue
                            T = ((a + b + j) // 2, (c + d + j) // 2, (a + d + i) // 2, (b + c + i) // 2)
                            Q = ((a + b + c + d) // 2, (a + c + i + j) // 2, (b + d + i + j) // 2)
                            pre = 1.0
                            for u in T:
                                for w in Q:
                                    pre *= fact[w - u]
                            pre /= fact[a] * fact[b] * fact[c] * fact[d] * fact[i] * fact[j]
                            acc = 0.0
                            for s in range(max(T), min(Q) + 1):
                                den = 1.0
                                for u in T:
                                    den *= fact[s - u]
                                for w in Q:
                                    den *= fact[w - s]
                                acc += (-1) ** s * fact[s + 1] / den
                            S[a, b, i, c, d, j] = pre * acc * delta[i] / (theta[a, d, i] * theta[b, c, i])
    return S
