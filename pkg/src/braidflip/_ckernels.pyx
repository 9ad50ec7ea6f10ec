# cython: language_level=3
"""Compiled kernels; mirror of ``braidflip._pykernels``."""

import numpy as np

from libc.math cimport sin, fabs, M_PI
from libc.stdlib cimport malloc, free


cdef inline void _neumaier(double x, double* s, double* c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def orient2d(double ax, double ay, double bx, double by, double cx, double cy):
    cdef double acx = ax - cx, acy = ay - cy, bcx = bx - cx, bcy = by - cy
    cdef double s = 0.0, c = 0.0
    _neumaier(acx * bcy, &s, &c)
    _neumaier(-acy * bcx, &s, &c)
    return s + c


def incircle(double ax, double ay, double bx, double by,
             double cx, double cy, double dx, double dy):
    cdef double adx = ax - dx, ady = ay - dy
    cdef double bdx = bx - dx, bdy = by - dy
    cdef double cdx = cx - dx, cdy = cy - dy
    cdef double s = 0.0, c = 0.0
    _neumaier(adx * adx * bdx * cdy, &s, &c)
    _neumaier(-adx * adx * cdx * bdy, &s, &c)
    _neumaier(ady * ady * bdx * cdy, &s, &c)
    _neumaier(-ady * ady * cdx * bdy, &s, &c)
    _neumaier(bdx * bdx * cdx * ady, &s, &c)
    _neumaier(-bdx * bdx * adx * cdy, &s, &c)
    _neumaier(bdy * bdy * cdx * ady, &s, &c)
    _neumaier(-bdy * bdy * adx * cdy, &s, &c)
    _neumaier(cdx * cdx * adx * bdy, &s, &c)
    _neumaier(-cdx * cdx * bdx * ady, &s, &c)
    _neumaier(cdy * cdy * adx * bdy, &s, &c)
    _neumaier(-cdy * cdy * bdx * ady, &s, &c)
    return s + c


def enumerate_labelings(int n_edges, closing, admissible, int n_labels):
    if n_edges == 0:
        return [()]
    cdef const unsigned char[:] adm = bytes(admissible)
    cdef int L = n_labels, L2 = n_labels * n_labels
    cdef int total = 0, k, p, v
    cdef int* start = <int*> malloc((n_edges + 1) * sizeof(int))
    cdef int* lab = <int*> malloc(n_edges * sizeof(int))
    for k in range(n_edges):
        total += len(closing[k])
    cdef int* pairs = <int*> malloc((2 * total + 1) * sizeof(int))
    p = 0
    for k in range(n_edges):
        start[k] = p
        for e1, e2 in closing[k]:
            pairs[2 * p] = e1
            pairs[2 * p + 1] = e2
            p += 1
    start[n_edges] = p

    out = []
    cdef bint ok
    try:
        k = 0
        lab[0] = -1
        while k >= 0:
            lab[k] += 1
            if lab[k] >= L:
                k -= 1
                continue
            v = lab[k]
            ok = True
            for p in range(start[k], start[k + 1]):
                if not adm[lab[pairs[2 * p]] * L2 + lab[pairs[2 * p + 1]] * L + v]:
                    ok = False
                    break
            if not ok:
                continue
            if k == n_edges - 1:
                out.append(tuple([lab[p] for p in range(n_edges)]))
            else:
                k += 1
                lab[k] = -1
    finally:
        free(start)
        free(lab)
        free(pairs)
    return out


cdef inline bint _adm(int a, int b, int c, int top) noexcept nogil:
    return ((a + b + c) % 2 == 0 and a + b >= c and a + c >= b
            and b + c >= a and a + b + c <= top)


cdef inline int _imax(int a, int b) noexcept nogil:
    return a if a > b else b


cdef inline int _imin(int a, int b) noexcept nogil:
    return a if a < b else b


def sixj_table(int r):
    cdef int L = r - 1, top = 2 * r - 4, nmax = 4 * r
    cdef int n, a, b, c, d, i, j, x, y, z, s, u, w
    cdef double s1 = sin(M_PI / r)
    cdef double[::1] q = np.zeros(nmax + 1)
    cdef double[::1] fact = np.ones(nmax + 1)
    for n in range(1, nmax + 1):
        q[n] = 0.0 if n % r == 0 else sin(n * M_PI / r) / s1
        fact[n] = fact[n - 1] * q[n]

    theta_arr = np.zeros((L, L, L))
    cdef double[:, :, ::1] theta = theta_arr
    for a in range(L):
        for b in range(L):
            for c in range(L):
                if _adm(a, b, c, top):
                    x = (a + b - c) // 2
                    y = (a + c - b) // 2
                    z = (b + c - a) // 2
                    theta[a, b, c] = ((-1.0 if (x + y + z) % 2 else 1.0) * fact[x + y + z + 1]
                                      * fact[x] * fact[y] * fact[z]
                                      / (fact[x + y] * fact[x + z] * fact[y + z]))

    cdef double[::1] delta = np.zeros(L)
    for n in range(L):
        delta[n] = (-1.0 if n % 2 else 1.0) * q[n + 1]

    out = np.zeros((L, L, L, L, L, L))
    cdef double[:, :, :, :, :, ::1] S = out
    cdef int T[4]
    cdef int Q[3]
    cdef double pre, acc, den
    for a in range(L):
        for b in range(L):
            for j in range(L):
                if not _adm(a, b, j, top):
                    continue
                for c in range(L):
                    for d in range(L):
                        if not _adm(c, d, j, top):
                            continue
                        for i in range(L):
                            if not (_adm(a, d, i, top) and _adm(b, c, i, top)):
                                continue
                            T[0] = (a + b + j) // 2
                            T[1] = (c + d + j) // 2
                            T[2] = (a + d + i) // 2
                            T[3] = (b + c + i) // 2
                            Q[0] = (a + b + c + d) // 2
                            Q[1] = (a + c + i + j) // 2
                            Q[2] = (b + d + i + j) // 2
                            pre = 1.0
                            for u in range(4):
                                for w in range(3):
                                    pre *= fact[Q[w] - T[u]]
                            pre /= fact[a] * fact[b] * fact[c] * fact[d] * fact[i] * fact[j]
                            acc = 0.0
                            for s in range(_imax(_imax(T[0], T[1]), _imax(T[2], T[3])),
                                           _imin(_imin(Q[0], Q[1]), Q[2]) + 1):
                                den = 1.0
                                for u in range(4):
                                    den *= fact[s - T[u]]
                                for w in range(3):
                                    den *= fact[Q[w] - s]
                                acc += (-1.0 if s % 2 else 1.0) * fact[s + 1] / den
                            S[a, b, i, c, d, j] = pre * acc * delta[i] / (theta[a, d, i] * theta[b, c, i])
    return out
