import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from repcomp.algebra import Representation
from repcomp.catalog import cusp, truncated_poly, uniserial, uniserial_sum
from repcomp.errors import BudgetExceeded
from repcomp.exactla import Matrix
from repcomp.field import FieldSpec
from repcomp.grass import enumerate_submodules
from repcomp.jets import (Poly, generic_verdict, lift_member, model_from_equations, model_from_grass_chart,
                          model_from_rep, probe, rep2_expected_sets, stu_model, t2_member, tangent_dim_model,
                          tangent_vectors, tbar_dim_estimate, verify_jet)

F3, F5 = FieldSpec.prime(3), FieldSpec.prime(5)


def _series_eval(terms, jet, order, p):
    """Coefficient of t^order of sum c x^e with x_v = sum_k jet[k][v] t^(k+1); plain nested loops."""
    n = len(jet[0])
    xs = [[0] + [jet[k][v] for k in range(len(jet))] for v in range(n)]

    def mul(a, b):
        c = [0] * (order + 1)
        for i, x in enumerate(a[:order + 1]):
            for j, y in enumerate(b[:order + 1 - i]):
                c[i + j] += x * y
        return c

    total = 0
    for e, c in terms.items():
        s = [1] + [0] * order
        for v, k in enumerate(e):
            for _ in range(k):
                s = mul(s, xs[v])
        total += int(c) * s[order]
    return total % p


def brute_lifts(terms_list, n, xi, r, p):
    """True if some (eta_2..eta_r) makes every equation vanish to order r."""
    for rest in product(range(p), repeat=n * (r - 1)):
        jet = [list(xi)] + [list(rest[k * n:(k + 1) * n]) for k in range(r - 1)]
        if all(_series_eval(t, jet, o, p) == 0 for t in terms_list for o in range(1, r + 1)):
            return True
    return False


def test_stu_lifting_against_brute_force_over_f3():
    m = stu_model(F3)
    terms = [dict(eq.terms) for eq in m.equations]
    got = {v for v in tangent_vectors(m, 10 ** 4) if lift_member(m, v, 3).member}
    want = {v for v in product(range(3), repeat=3) if brute_lifts(terms, 3, v, 3, 3)}
    assert got == want
    # [DERIVED] frozen: the 15 points with s t = 0, minus the 2 nonzero points of the u-axis
    assert len(got) == 13


def test_stu_t2_and_lift_examples():
    m = stu_model(F5)
    assert tangent_dim_model(m) == 3
    assert not t2_member(m, (1, 1, 0))
    assert t2_member(m, (0, 0, 1))
    v = lift_member(m, (0, 0, 1), 3)
    assert v.status == "not_member"
    w = lift_member(m, (1, 0, 1), 3)
    assert w.member and verify_jet(m, w.witness_jet)


def test_chain_is_decreasing():
    m = stu_model(F5)
    counts = [tbar_dim_estimate(m, r).count for r in (1, 2, 3, 4)]
    assert counts[0] == 125
    assert counts == sorted(counts, reverse=True)
    assert counts[1:3] == [45, 41]


def test_budget_gives_unknown():
    m = stu_model(F5)
    v = lift_member(m, (1, 0, 1), 6, budget=3)
    assert v.status == "unknown"
    with pytest.raises(BudgetExceeded):
        tangent_vectors(m, budget=10)
    assert probe(m, 3, budget=10).verdict == "unknown"


def test_cusp_origin_only_zero_lifts():
    alg = cusp(F5)
    origin = Representation(alg, [Matrix.zeros(F5, 1, 1)] * 2, 1)
    m = model_from_rep(alg, origin)
    assert [v for v in tangent_vectors(m, 100) if lift_member(m, v, 3).member] == [(0, 0)]
    assert len([v for v in tangent_vectors(m, 100) if t2_member(m, v)]) == 5  # y^2 = 0


def test_rep2_expected_sets_nest():
    t2, t3 = rep2_expected_sets(3)
    assert t3 <= t2
    assert (len(t2), len(t3)) == (243, 225)


@pytest.mark.parametrize("q", [2, 3])
def test_probe_verdicts_on_grassmannian_examples(q):
    f = FieldSpec.prime(q)
    alg = truncated_poly(f)
    tau = uniserial_sum(alg, [1, 2])
    reports = [probe(model_from_grass_chart(tau, u.basis), 3) for u in enumerate_submodules(tau, 1)]
    assert sorted(r.verdict for r in reports) == ["nonreduced"] + ["reduced_evidence"] * q
    assert generic_verdict(reports) == "mixed"


def test_smooth_point_has_reduced_evidence():
    # x + y^2 at the origin: smooth, every tangent vector lifts
    f = F5
    x, y = Poly.var(f, 2, 0), Poly.var(f, 2, 1)
    m = model_from_equations(f, [x + y * y], [0, 0])
    rp = probe(m, 4)
    assert rp.verdict == "reduced_evidence" and rp.dim_proxy == 1


def test_recentering():
    f = F5
    x, y = Poly.var(f, 2, 0), Poly.var(f, 2, 1)
    eq = x * y - Poly.const(f, 2, 1)
    m = model_from_equations(f, [eq], [1, 1])
    assert tangent_dim_model(m) == 1
    assert probe(m, 3).verdict == "reduced_evidence"


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_lifting_set_is_a_cone_and_in_t2(seed):
    rng = random.Random(seed)
    f = F3
    n = 3
    # random quadric + cubic hypersurface through the origin
    vars_ = [Poly.var(f, n, i) for i in range(n)]
    eq = Poly.const(f, n, 0)
    for i in range(n):
        for j in range(i, n):
            eq = eq + (vars_[i] * vars_[j]).scale(rng.randrange(3))
    eq = eq + (vars_[0] * vars_[1] * vars_[2]).scale(rng.randrange(3))
    m = model_from_equations(f, [eq], [0] * n)
    est = tbar_dim_estimate(m, 3)
    members = set(est.members)
    assert all(t2_member(m, v) for v in members)
    assert all(tuple(c * x % 3 for x in v) in members for v in members for c in range(3))


def test_poly_evaluate_and_shift():
    f = F5
    x, y = Poly.var(f, 2, 0), Poly.var(f, 2, 1)
    p = x * x * y - y.scale(3)
    assert p.evaluate([2, 1]) == f(4 - 3)
    assert p.shift([2, 1]).evaluate([0, 0]) == p.evaluate([2, 1])
