"""Acceptance criteria 1-9. Each test records one PASS/FAIL line, shown in the pytest summary.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import product

import pytest

from repcomp.algebra import Representation, count_points, direct_sum_many
from repcomp.catalog import (a2, a2_modules, example_pair_table, quiver_example_module, quiver_pair_triples,
                             random_quiver_rep, random_truncated_module, semisimple, sign_algebra,
                             truncated_poly, uniserial, uniserial_sum, cusp)
from repcomp.components import decompose, orbit_closure_is_component, reassemble, sum_is_component
from repcomp.exactla import Matrix, det, det_sum, random_invertible, random_matrix
from repcomp.field import FieldSpec
from repcomp.grass import (enumerate_submodules, grass_sum_is_component, stratify, tangent_dim)
from repcomp.homology import (bar_ext_dim, der_dim, ext_dim, find_isomorphism, hom_dim, pair_hom_dim,
                              quotient_module, split_census)
from repcomp.jets import (generic_verdict, lift_member, model_from_grass_chart, model_from_rep, probe,
                          rep2_jet_sets_check, stu_model, t2_member, tangent_vectors)

LIMITS = {1: 1.0, 2: 2.0, 3: 10.0, 4: 5.0, 5: 30.0, 6: 5.0, 7: 60.0, 8: 1.0, 9: 30.0}


def _record(log, k: int, fn) -> None:
    t0 = time.perf_counter()
    try:
        fn()
    except BaseException as exc:
        log.append(f"criterion {k}: FAIL ({time.perf_counter() - t0:.2f}s) {type(exc).__name__}: {exc}")
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < LIMITS[k]
    log.append(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, limit {LIMITS[k]:.0f}s)")
    assert ok, f"criterion {k} took {elapsed:.2f}s, limit {LIMITS[k]}s"


def _brute_tangent(u) -> int:
    """dim Hom(U, M/U) by listing every linear map U -> M/U over F_q and testing commutation."""
    amb = u.ambient
    f = amb.field
    q = f.p
    sub = u.sub_rep()
    quo, _ = quotient_module(amb, u.basis)
    d, e = sub.dim, quo.dim
    count = 0
    for entries in product(range(q), repeat=d * e):
        phi = Matrix.from_flat(f, e, d, entries)
        if all(phi @ a == b @ phi for a, b in zip(sub.mats, quo.mats)):
            count += 1
    k = 0
    while count > 1:
        count //= q
        k += 1
    return k


# ---------------------------------------------------------------- criteria

def crit1():
    for q in (2, 3, 5):
        f = FieldSpec.prime(q)
        s2 = uniserial(truncated_poly(f), 2)
        pts = enumerate_submodules(s2, 1)
        assert len(pts) == 1
        assert tangent_dim(pts[0]) == 1
        rep = probe(model_from_grass_chart(s2, pts[0].basis), r=2)
        assert (rep.lifting_count, rep.dim_proxy, rep.verdict) == (1, 0, "nonreduced")


# [DERIVED] tangent dims from _brute_tangent, frozen: q points with 1, one point with 2
CRIT2_TANGENTS = {2: [1, 1, 2], 3: [1, 1, 1, 2], 5: [1, 1, 1, 1, 1, 2]}


def crit2():
    for q in (2, 3, 5):
        f = FieldSpec.prime(q)
        alg = truncated_poly(f)
        m = uniserial_sum(alg, [1, 2])
        pts = enumerate_submodules(m, 1)
        assert len(pts) == q + 1
        tds = [tangent_dim(u) for u in pts]
        assert sorted(tds) == CRIT2_TANGENTS[q]
        verdicts = [probe(model_from_grass_chart(m, u.basis), r=2).verdict for u in pts]
        assert [v == "nonreduced" for v in verdicts] == [t == 2 for t in tds]
    f = FieldSpec.prime(5)
    u, v = example_pair_table(f)
    nv, _ = quotient_module(v.amb, v.map)
    mu, _ = quotient_module(u.amb, u.map)
    table = (hom_dim(u.sub, nv), hom_dim(v.sub, mu), hom_dim(u.amb, v.amb), hom_dim(v.amb, u.amb),
             pair_hom_dim(u, v), pair_hom_dim(v, u))
    assert table == (1, 0, 1, 1, 0, 1)  # published reference values
    assert bar_ext_dim(u, v) == 0 and bar_ext_dim(v, u) == 0
    assert grass_sum_is_component(u, v).certified


def crit3():
    for q in (2, 3):
        f = FieldSpec.prime(q)
        m = uniserial_sum(truncated_poly(f), [1, 3])
        pts = enumerate_submodules(m, 2)
        assert len(pts) == q + 1
        assert all(tangent_dim(u) == 2 for u in pts)
        reports = [probe(model_from_grass_chart(m, u.basis), r=3) for u in pts]
        assert all(rp.lifting_count == q and rp.dim_proxy == 1 for rp in reports)
        assert generic_verdict(reports) == "generically_nonreduced"
        strata = {s.label: s for s in stratify(m, points=pts)}
        assert set(strata) == {"2", "1^2"}
        assert strata["2"].count == q and strata["1^2"].count == 1
        alg = m.algebra
        assert find_isomorphism(strata["2"].representative.sub_rep(), uniserial(alg, 2)) is not None
        assert find_isomorphism(strata["1^2"].representative.sub_rep(), uniserial_sum(alg, [1, 1])) is not None


def crit4():
    for q in (2, 3, 5):
        f = FieldSpec.prime(q)
        alg = a2(f)
        m = quiver_example_module(alg)
        assert len(enumerate_submodules(m, dimvec=[1, 1])) == 2 * q + 1
        for name, triple in quiver_pair_triples(f).items():
            for i, a in enumerate(triple):
                for j, b in enumerate(triple):
                    if i != j:
                        assert bar_ext_dim(a, b) == 0, (name, i, j)
            for i in range(3):
                for j in range(i + 1, 3):
                    assert grass_sum_is_component(triple[i], triple[j]).certified


def crit5():
    f = FieldSpec.prime(5)
    model = stu_model(f)
    vecs = tangent_vectors(model, 10 ** 6)
    assert len(vecs) == 125
    t2 = {v for v in vecs if t2_member(model, v)}
    t3 = {v for v in t2 if lift_member(model, v, 3).member}
    # published reference sets
    assert t2 == {v for v in vecs if v[0] * v[1] % 5 == 0}
    assert t3 == {v for v in vecs if v[0] * v[1] % 5 == 0 and (v[0], v[1]) != (0, 0)} | {(0, 0, 0)}
    # cusp: only xi = 0 lifts to depth 3 at the origin of rep^1
    alg = cusp(f)
    origin = Representation(alg, [Matrix.zeros(f, 1, 1)] * 2, 1)
    m1 = model_from_rep(alg, origin)
    lifting = [v for v in tangent_vectors(m1, 10 ** 6) if lift_member(m1, v, 3).member]
    assert lifting == [(0, 0)]
    rep = rep2_jet_sets_check(3)
    assert rep.ok, rep
    assert (rep.t2_count, rep.t3_count) == (243, 225)


def crit6():
    rng = random.Random(6)
    for field in (FieldSpec.rational(), FieldSpec.prime(7)):
        failures = 0
        for _ in range(500):
            n = rng.randint(1, 3)
            d = rng.randint(1, 5)
            ms = [random_matrix(field, d, d, rng) for _ in range(n)]
            total = ms[0]
            for x in ms[1:]:
                total = total + x
            failures += det_sum(ms) != det(total)
        assert failures == 0, (field, failures)


def _nonzero_dimvec(rng) -> list[int]:
    while True:
        dv = [rng.randint(0, 2), rng.randint(0, 2)]
        if any(dv):
            return dv


def crit7():
    f = FieldSpec.prime(5)
    rng = random.Random(7)
    kx = truncated_poly(f)
    kq = a2(f)
    censuses = 0
    for trial in range(200):
        if trial % 2 == 0:
            rho = random_truncated_module(kx, rng.randint(1, 3), 4, rng)
            sigma = random_truncated_module(kx, rng.randint(1, 3), 4, rng)
        else:
            rho, sigma = (random_quiver_rep(kq, _nonzero_dimvec(rng), rng) for _ in range(2))
        d, e = rho.dim, sigma.dim
        h, dr, x = hom_dim(rho, sigma), der_dim(rho, sigma), ext_dim(rho, sigma)
        assert dr - (d * e - h) == x >= 0
        g1, g2 = random_invertible(f, d, rng), random_invertible(f, e, rng)
        r2, s2 = rho.conjugate(g1), sigma.conjugate(g2)
        assert (hom_dim(r2, s2), der_dim(r2, s2), ext_dim(r2, s2)) == (h, dr, x)
        if 5 ** dr <= 10 ** 5:
            split, total = split_census(rho, sigma)
            assert total == 5 ** dr
            assert split == 5 ** (d * e - h)
            censuses += 1
    assert censuses > 50


def crit8():
    assert count_points(sign_algebra(FieldSpec.prime(5)), 1) == 3
    assert count_points(sign_algebra(FieldSpec.prime(7)), 1) == 1


def crit9():
    f = FieldSpec.prime(5)
    ss = semisimple(f, 2)
    mods = [Representation.from_vertex_blocks(ss, list(dv), {}) for dv in product(range(3), repeat=2) if any(dv)]
    assert all(sum_is_component(a, b).certified for a in mods for b in mods)
    alg = a2(f)
    am = a2_modules(alg)
    assert orbit_closure_is_component(am["T"]).certified
    c = sum_is_component(am["S1"], am["S2"])
    assert not c.certified and c.reason["ext_12"] == 1  # [DERIVED] Ext(S1, S2) = 1 for 1 -> 2
    rng = random.Random(9)
    q_field = FieldSpec.rational()
    for trial in range(100):
        if trial % 3 == 0:
            base = a2(f if trial % 2 else q_field)
            pool = list(a2_modules(base).values())
        else:
            base = truncated_poly(f if trial % 2 else q_field)
            pool = [uniserial(base, k) for k in (1, 2, 3, 4)]
        parts = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
        rho = direct_sum_many(parts, base)
        rho = rho.conjugate(_adapted_invertible(rho, rng))
        rep = decompose(rho, seed=trial)
        assert rho.conjugate(rep.witness.inverse()) == reassemble(rep)
        got = rep.expanded()
        assert len(got) == len(parts)
        unmatched = list(parts)
        for g in got:
            k = next(i for i, p in enumerate(unmatched) if p.dim == g.dim and find_isomorphism(g, p) is not None)
            unmatched.pop(k)


def _adapted_invertible(rho: Representation, rng) -> Matrix:
    """Random invertible change of basis that respects the vertex decomposition when there is one."""
    f = rho.field
    dv = rho.dim_vector
    if not rho.algebra.idempotents or dv is None:
        return random_invertible(f, rho.dim, rng)
    from repcomp.exactla import block_diag
    return block_diag(f, [random_invertible(f, k, rng) for k in dv if k])


CRITERIA = {1: crit1, 2: crit2, 3: crit3, 4: crit4, 5: crit5, 6: crit6, 7: crit7, 8: crit8, 9: crit9}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, acceptance_log):
    _record(acceptance_log, k, CRITERIA[k])


def test_brute_tangent_oracle_matches_frozen():
    for q in (2, 3):
        m = uniserial_sum(truncated_poly(FieldSpec.prime(q)), [1, 2])
        assert sorted(_brute_tangent(u) for u in enumerate_submodules(m, 1)) == CRIT2_TANGENTS[q]


if __name__ == "__main__":
    lines: list[str] = []
    for k in sorted(CRITERIA):
        try:
            _record(lines, k, CRITERIA[k])
        except BaseException:
            pass
        print(lines[-1])
    sys.exit(0 if all(": PASS" in x for x in lines) else 1)
