import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from repcomp.algebra import PairModule, Representation, direct_sum
from repcomp.catalog import (a2, a2_modules, cusp, example_pair_table, quiver_pair_triples, random_quiver_rep,
                             random_truncated_module, truncated_poly, uniserial, uniserial_sum)
from repcomp.errors import RepcompError
from repcomp.exactla import Matrix, random_invertible
from repcomp.field import FieldSpec
from repcomp.homology import (bar_ext_dim, constrained_der_dim, delta_image_basis, der_basis, der_dim,
                              e_constrained_dim, ext_dim, extension_module, find_isomorphism, hom_basis, hom_dim,
                              inner_derivation, is_derivation, is_split, pair_hom_dim, quotient_module, split_census)

F2, F3, F5 = (FieldSpec.prime(p) for p in (2, 3, 5))


def _log(count, q):
    k = 0
    while count > 1:
        assert count % q == 0
        count //= q
        k += 1
    return k


def brute_hom(rho, sigma):
    """dim Hom by listing every e x d matrix over F_q."""
    f = rho.field
    d, e = rho.dim, sigma.dim
    n = sum(1 for flat in product(range(f.p), repeat=d * e)
            if all((phi := Matrix.from_flat(f, e, d, flat)) @ a == b @ phi for a, b in zip(rho.mats, sigma.mats)))
    return _log(n, f.p)


def _word_derivation(xi, rho, sigma, word):
    """D(x_{w0} ... x_{wk}) = sum_j sigma(prefix) xi(x_{wj}) rho(suffix), written out directly."""
    f = rho.field
    total = Matrix.zeros(f, sigma.dim, rho.dim)
    for j, g in enumerate(word):
        left = Matrix.identity(f, sigma.dim)
        for h in word[:j]:
            left = left @ sigma.mats[h]
        right = Matrix.identity(f, rho.dim)
        for h in word[j + 1:]:
            right = right @ rho.mats[h]
        total = total + left @ xi[g] @ right
    return total


def brute_der(rho, sigma):
    f = rho.field
    alg = rho.algebra
    d, e = rho.dim, sigma.dim
    n = alg.num_generators
    count = 0
    for flat in product(range(f.p), repeat=n * d * e):
        xi = [Matrix.from_flat(f, e, d, flat[k * d * e:(k + 1) * d * e]) for k in range(n)]
        ok = True
        for rel in alg.relations:
            acc = Matrix.zeros(f, e, d)
            for c, w in rel.terms:
                acc = acc + _word_derivation(xi, rho, sigma, w).scale(c)
            if not acc.is_zero():
                ok = False
                break
        count += ok
    return _log(count, f.p)


SMALL_F2 = [
    ("S1,S1", lambda: (uniserial(truncated_poly(F2), 1), uniserial(truncated_poly(F2), 1))),
    ("S1,S2", lambda: (uniserial(truncated_poly(F2), 1), uniserial(truncated_poly(F2), 2))),
    ("S2,S1", lambda: (uniserial(truncated_poly(F2), 2), uniserial(truncated_poly(F2), 1))),
    ("S2,S2", lambda: (uniserial(truncated_poly(F2), 2), uniserial(truncated_poly(F2), 2))),
    ("A2 T,S1", lambda: (a2_modules(a2(F2))["T"], a2_modules(a2(F2))["S1"])),
    ("A2 S1,S2", lambda: (a2_modules(a2(F2))["S1"], a2_modules(a2(F2))["S2"])),
    ("A2 S2,S1", lambda: (a2_modules(a2(F2))["S2"], a2_modules(a2(F2))["S1"])),
]

# [DERIVED] values from brute_hom / brute_der over F_2, frozen
FROZEN = {"S1,S1": (1, 1), "S1,S2": (1, 2), "S2,S1": (1, 2), "S2,S2": (2, 4),
          "A2 T,S1": (1, 1), "A2 S1,S2": (0, 2), "A2 S2,S1": (0, 1)}


@pytest.mark.parametrize("name,make", SMALL_F2)
def test_hom_der_match_frozen_oracle(name, make):
    rho, sigma = make()
    assert (hom_dim(rho, sigma), der_dim(rho, sigma)) == FROZEN[name]


@pytest.mark.parametrize("name,make", SMALL_F2)
def test_brute_oracle_reproduces_frozen(name, make):
    rho, sigma = make()
    assert (brute_hom(rho, sigma), brute_der(rho, sigma)) == FROZEN[name]


def test_known_ext_values():
    alg = truncated_poly(F5)
    s1, s2 = uniserial(alg, 1), uniserial(alg, 2)
    assert ext_dim(s1, s1) == 1
    assert ext_dim(s2, s2) == 2
    assert len(delta_image_basis(s2, s2)) == 2
    m = a2_modules(a2(F5))
    assert ext_dim(m["T"], m["T"]) == 0
    assert ext_dim(m["S1"], m["S2"]) == 1
    assert ext_dim(m["S2"], m["S1"]) == 0


def test_split_and_extension_module():
    alg = truncated_poly(F5)
    s1 = uniserial(alg, 1)
    (xi,) = der_basis(s1, s1).basis
    ok, gamma = is_split(xi, s1, s1)
    assert not ok and gamma is None
    ext = extension_module(xi, s1, s1)
    assert find_isomorphism(ext, uniserial(alg, 2)) is not None
    s2 = uniserial(alg, 2)
    g = Matrix(F5, [[1, 2], [0, 3]])
    inner = inner_derivation(g, s2, s2)
    assert is_derivation(inner, s2, s2)
    ok, gamma = is_split(inner, s2, s2)
    assert ok and inner_derivation(gamma, s2, s2) == inner
    # on an idempotent, xi(e) = 1 breaks xi(e e) = xi(e) rho(e) + sigma(e) xi(e)
    qs1 = a2_modules(a2(F5))["S1"]
    bogus = tuple(Matrix.identity(F5, 1) if k == 0 else Matrix.zeros(F5, 1, 1) for k in range(len(qs1.mats)))
    assert not is_derivation(bogus, qs1, qs1)
    with pytest.raises(RepcompError):
        is_split(bogus, qs1, qs1)


def test_isomorphism_search():
    alg = truncated_poly(FieldSpec.rational())
    a = uniserial_sum(alg, [1, 2])
    g = random_invertible(alg.field, 3, random.Random(1))
    b = a.conjugate(g)
    w = find_isomorphism(a, b)
    assert w is not None and all(w @ x == y @ w for x, y in zip(a.mats, b.mats))
    assert find_isomorphism(a, uniserial_sum(alg, [3])) is None
    assert find_isomorphism(uniserial_sum(alg, [1, 1, 1]), uniserial_sum(alg, [1, 2])) is None


def test_quotient_module():
    alg = truncated_poly(F3)
    tau = uniserial(alg, 3)
    q, proj = quotient_module(tau, Matrix(F3, [[1], [0], [0]]))
    assert q.dim == 2
    assert find_isomorphism(q, uniserial(alg, 2)) is not None
    assert all(proj @ x == y @ proj for x, y in zip(tau.mats, q.mats))


def test_pair_table_reference_values():
    u, v = example_pair_table(F5)
    nv, _ = quotient_module(v.amb, v.map)
    mu, _ = quotient_module(u.amb, u.map)
    assert (hom_dim(u.sub, nv), hom_dim(v.sub, mu), hom_dim(u.amb, v.amb), hom_dim(v.amb, u.amb)) == (1, 0, 1, 1)
    assert (pair_hom_dim(u, v), pair_hom_dim(v, u)) == (0, 1)
    assert bar_ext_dim(u, v) == bar_ext_dim(v, u) == 0


def brute_pair_hom(a, b):
    """dim Hom of pairs over F_q: (alpha, beta) with alpha: U -> V, beta: M -> N, f_b alpha = beta f_a."""
    f = a.sub.field
    ds, es = a.sub.dim, b.sub.dim
    dm, em = a.amb.dim, b.amb.dim
    count = 0
    for fa in product(range(f.p), repeat=ds * es):
        alpha = Matrix.from_flat(f, es, ds, fa)
        if not all(alpha @ x == y @ alpha for x, y in zip(a.sub.mats, b.sub.mats)):
            continue
        for fb in product(range(f.p), repeat=dm * em):
            beta = Matrix.from_flat(f, em, dm, fb)
            if b.map @ alpha == beta @ a.map and all(beta @ x == y @ beta for x, y in zip(a.amb.mats, b.amb.mats)):
                count += 1
    return _log(count, f.p)


def test_pair_hom_against_brute_force():
    triples = quiver_pair_triples(F2)
    for pairs in triples.values():
        for a in pairs:
            for b in pairs:
                assert pair_hom_dim(a, b) == brute_pair_hom(a, b)
    for name, pairs in triples.items():
        for i, a in enumerate(pairs):
            for j, b in enumerate(pairs):
                if i != j:
                    assert bar_ext_dim(a, b) == 0, name


def test_constrained_spaces():
    alg = truncated_poly(F5)
    s1, s2 = uniserial(alg, 1), uniserial(alg, 2)
    # Hom(S1, S1) is everything, so every derivation must become inner after composing with the identity
    assert constrained_der_dim(s1, s1, s1) == 0
    assert e_constrained_dim(s1, s1, s1) == 0
    # the zero test module imposes nothing
    zero = Representation.zero(alg)
    assert constrained_der_dim(s1, s2, zero) == der_dim(s1, s2)


# ---------------------------------------------------------------- properties

@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6), st.booleans())
@settings(max_examples=40, deadline=None)
def test_voigt_identity_and_conjugation_invariance(d, e, seed, quiver):
    rng = random.Random(seed)
    if quiver:
        alg = a2(F5)
        rho = random_quiver_rep(alg, [rng.randint(0, 2), rng.randint(1, 2)], rng)
        sigma = random_quiver_rep(alg, [rng.randint(1, 2), rng.randint(0, 2)], rng)
    else:
        alg = truncated_poly(F5)
        rho = random_truncated_module(alg, d, 4, rng)
        sigma = random_truncated_module(alg, e, 4, rng)
    h, dr, x = hom_dim(rho, sigma), der_dim(rho, sigma), ext_dim(rho, sigma)
    assert x == dr - rho.dim * sigma.dim + h >= 0
    assert len(delta_image_basis(rho, sigma)) == rho.dim * sigma.dim - h
    g = random_invertible(F5, rho.dim, rng)
    assert (hom_dim(rho.conjugate(g), sigma), der_dim(rho.conjugate(g), sigma)) == (h, dr)
    assert hom_dim(direct_sum(rho, rho), sigma) == 2 * h
    for b in hom_basis(rho, sigma).basis:
        assert all(b @ a == c @ b for a, c in zip(rho.mats, sigma.mats))


@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_split_census_counts_inner_derivations(d, e, seed):
    rng = random.Random(seed)
    alg = truncated_poly(F3)
    rho = random_truncated_module(alg, d, 4, rng)
    sigma = random_truncated_module(alg, e, 4, rng)
    split, total = split_census(rho, sigma)
    assert total == 3 ** der_dim(rho, sigma)
    assert split == 3 ** (d * e - hom_dim(rho, sigma))
    # independent count: distinct inner derivations over all gamma
    inner = {tuple(m.rows for m in inner_derivation(Matrix.from_flat(F3, e, d, flat), rho, sigma))
             for flat in product(range(3), repeat=d * e)}
    assert len(inner) == split


def test_cusp_der_at_origin():
    f = F5
    alg = cusp(f)
    origin = Representation(alg, [Matrix.zeros(f, 1, 1)] * 2, 1)
    # at the origin both X^3 and Y^2 have zero linear part, so every xi is a derivation
    assert der_dim(origin, origin) == 2
