# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics must match repcomp._pykernels exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _inv_mod(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(int64_t[:, ::1] a, int64_t p):
    """Reduce ``a`` in place to reduced row echelon form mod p; return pivot columns."""
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv_row
    cdef int64_t inv, f
    pivots = []
    with nogil:
        for i in range(nrows):
            for j in range(ncols):
                a[i, j] = a[i, j] % p
                if a[i, j] < 0:
                    a[i, j] += p
    for c in range(ncols):
        if r == nrows:
            break
        piv_row = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv_row = i
                break
        if piv_row < 0:
            continue
        with nogil:
            if piv_row != r:
                for j in range(ncols):
                    f = a[r, j]
                    a[r, j] = a[piv_row, j]
                    a[piv_row, j] = f
            inv = _inv_mod(a[r, c], p)
            for j in range(c, ncols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(nrows):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        pivots.append(c)
        r += 1
    return pivots


def series_coeffs_modp(int64_t[:, ::1] exps, int64_t[::1] coefs,
                       int64_t[::1] eq_index, Py_ssize_t n_eq,
                       int64_t[:, :, ::1] jets, Py_ssize_t order, int64_t p):
    """Coefficient of t**order in each equation, for each jet in the batch.

    ``jets[b, v, k]`` is the t**k coefficient of variable v in batch item b.
    """
    cdef Py_ssize_t B = jets.shape[0], n = jets.shape[1], S = jets.shape[2]
    cdef Py_ssize_t T = exps.shape[0]
    cdef Py_ssize_t b, v, e, k, l, term, maxdeg = 0
    cdef int64_t acc, x
    for term in range(T):
        for v in range(n):
            if exps[term, v] > maxdeg:
                maxdeg = exps[term, v]
    out_arr = np.zeros((B, n_eq), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr
    pw_arr = np.zeros((n, maxdeg + 1, order + 1), dtype=np.int64)
    cdef int64_t[:, :, ::1] pw = pw_arr
    cdef int64_t[::1] cur = np.zeros(order + 1, dtype=np.int64)
    cdef int64_t[::1] nxt = np.zeros(order + 1, dtype=np.int64)
    with nogil:
        for b in range(B):
            for v in range(n):
                for k in range(order + 1):
                    pw[v, 0, k] = 0
                pw[v, 0, 0] = 1
                for e in range(1, maxdeg + 1):
                    for k in range(order + 1):
                        acc = 0
                        for l in range(k + 1):
                            if l < S:
                                x = jets[b, v, l]
                                if x != 0:
                                    acc = (acc + x * pw[v, e - 1, k - l]) % p
                        pw[v, e, k] = acc
            for term in range(T):
                for k in range(order + 1):
                    cur[k] = 0
                cur[0] = 1
                for v in range(n):
                    e = exps[term, v]
                    if e == 0:
                        continue
                    for k in range(order + 1):
                        acc = 0
                        for l in range(k + 1):
                            if cur[l] != 0:
                                acc = (acc + cur[l] * pw[v, e, k - l]) % p
                        nxt[k] = acc
                    for k in range(order + 1):
                        cur[k] = nxt[k]
                out[b, eq_index[term]] = (out[b, eq_index[term]] + coefs[term] * cur[order]) % p
    return out_arr
