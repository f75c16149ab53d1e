import os
import subprocess
import sys

import numpy as np
import pytest

from repcomp import kernels

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


def _naive_rank_modp(rows, p):
    a = [list(r) for r in rows]
    rank = 0
    for c in range(len(a[0]) if a else 0):
        i = next((i for i in range(rank, len(a)) if a[i][c] % p), None)
        if i is None:
            continue
        a[rank], a[i] = a[i], a[rank]
        inv = pow(a[rank][c], -1, p)
        for k in range(len(a)):
            if k != rank and a[k][c] % p:
                f = a[k][c] * inv
                a[k] = [(x - f * y) % p for x, y in zip(a[k], a[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("p", [2, 5, 101, 2 ** 31 - 1])
def test_rref_modp_is_reduced_and_rank_correct(backend, p):
    impl = kernels.get_backend(backend)
    rng = np.random.default_rng(p)
    for _ in range(20):
        n, m = rng.integers(1, 9, size=2)
        a = rng.integers(-50, 50, size=(n, m)).astype(np.int64)
        a[-1] = a[0] * 3 % p
        orig = a.copy()
        piv = impl.rref_modp(a, p)
        assert len(piv) == _naive_rank_modp(orig.tolist(), p)
        for k, c in enumerate(piv):
            col = a[:, c] % p
            assert col[k] == 1 and np.count_nonzero(col) == 1
        assert not a[len(piv):].any()


def test_backends_agree():
    if "cython" not in BACKENDS:
        pytest.skip("extension not built")
    rng = np.random.default_rng(0)
    for _ in range(30):
        a = rng.integers(0, 7, size=(6, 8)).astype(np.int64)
        b = a.copy()
        assert kernels.get_backend("python").rref_modp(a, 7) == kernels.get_backend("cython").rref_modp(b, 7)
        assert (a == b).all()


@pytest.mark.parametrize("backend", BACKENDS)
def test_series_coeffs_matches_direct_expansion(backend):
    impl = kernels.get_backend(backend)
    p = 7
    # equation 0: x0*x1 - x2^3, equation 1: x0^2
    exps = np.array([[1, 1, 0], [0, 0, 3], [2, 0, 0]], dtype=np.int64)
    coefs = np.array([1, p - 1, 1], dtype=np.int64)
    eq_index = np.array([0, 0, 1], dtype=np.int64)
    rng = np.random.default_rng(1)
    jets = rng.integers(0, p, size=(5, 3, 4)).astype(np.int64)
    jets[:, :, 0] = 0
    out = impl.series_coeffs_modp(exps, coefs, eq_index, 2, jets, 3, p)

    def series_mul(a, b):
        c = [0] * 4
        for i in range(4):
            for j in range(4 - i):
                c[i + j] += a[i] * b[j]
        return c

    for b in range(5):
        s = [list(map(int, jets[b, v])) for v in range(3)]
        e0 = [x - y for x, y in zip(series_mul(s[0], s[1]), series_mul(series_mul(s[2], s[2]), s[2]))]
        e1 = series_mul(s[0], s[0])
        assert int(out[b, 0]) % p == e0[3] % p
        assert int(out[b, 1]) % p == e1[3] % p


def test_env_var_forces_fallback():
    env = dict(os.environ, REPCOMP_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from repcomp import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
