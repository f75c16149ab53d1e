"""Pure-Python/numpy versions of the compiled kernels in ``_ckernels.pyx``."""

from __future__ import annotations

import numpy as np


def rref_modp(a: np.ndarray, p: int) -> list[int]:
    """Reduce ``a`` in place to reduced row echelon form mod p; return pivot columns."""
    nrows, ncols = a.shape
    a %= p
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(col[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots


def series_coeffs_modp(exps, coefs, eq_index, n_eq, jets, order, p):
    """Coefficient of t**order in each equation, for each jet in the batch (vectorised over the batch)."""
    jets = np.asarray(jets, dtype=np.int64)
    B, n, S = jets.shape
    exps = np.asarray(exps, dtype=np.int64)
    maxdeg = int(exps.max()) if exps.size else 0
    width = order + 1
    series = np.zeros((B, n, width), dtype=np.int64)
    series[:, :, : min(S, width)] = jets[:, :, :width]
    # pw[e] has shape (B, n, width): truncated series of x_v ** e
    pw = [np.zeros((B, n, width), dtype=np.int64)]
    pw[0][:, :, 0] = 1
    for e in range(1, maxdeg + 1):
        prev = pw[-1]
        nxt = np.zeros_like(prev)
        for k in range(width):
            acc = np.zeros((B, n), dtype=np.int64)
            for l in range(k + 1):
                acc = (acc + series[:, :, l] * prev[:, :, k - l]) % p
            nxt[:, :, k] = acc
        pw.append(nxt)
    out = np.zeros((B, n_eq), dtype=np.int64)
    for term in range(exps.shape[0]):
        cur = np.zeros((B, width), dtype=np.int64)
        cur[:, 0] = 1
        for v in np.flatnonzero(exps[term]):
            fac = pw[int(exps[term, v])][:, v, :]
            nxt = np.zeros_like(cur)
            for k in range(width):
                acc = np.zeros(B, dtype=np.int64)
                for l in range(k + 1):
                    acc = (acc + cur[:, l] * fac[:, k - l]) % p
                nxt[:, k] = acc
            cur = nxt
        q = int(eq_index[term])
        out[:, q] = (out[:, q] + int(coefs[term]) * cur[:, order]) % p
    return out
