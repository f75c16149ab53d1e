"""Jets on affine local models: tangent spaces, the quadric test and order-by-order lifting over F_q.

A model is a list of commutative polynomials re-centred so the base point is
the origin. A jet of order r through the origin is t*xi + t^2*eta_2 + ... +
t^r*eta_r; at order s the correction eta_s solves G eta_s = -b_s, where b_s is
the t^s coefficient of the equations with eta_s set to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import product as _iproduct
from typing import Sequence

import numpy as np

from . import kernels
from .algebra import AlgebraPresentation, Representation
from .errors import BudgetExceeded, RepcompError
from .exactla import Matrix, kernel_basis, left_kernel_basis, nullity, rref, solve_affine
from .field import FieldSpec


class Poly:
    """Sparse commutative polynomial in ``n`` variables: {exponent tuple: coefficient}."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: FieldSpec, n: int, terms: dict | None = None):
        self.field = field
        self.n = n
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, field: FieldSpec, n: int, c) -> "Poly":
        return cls(field, n, {(0,) * n: field(c)})

    @classmethod
    def var(cls, field: FieldSpec, n: int, i: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return cls(field, n, {tuple(e): field.one})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = self.field(out.get(e, 0) + c)
        return Poly(self.field, self.n, out)

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.n, {e: self.field(-c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.field, self.n, {e: self.field(c) for e, c in out.items()})

    def scale(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self.field, self.n, {e: self.field(c * v) for e, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, point: Sequence) -> object:
        f = self.field
        total = f.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return f(total)

    def shift(self, base: Sequence) -> "Poly":
        """p(base + y) as a polynomial in y."""
        f = self.field
        n = self.n
        out = Poly(f, n)
        for e, c in self.terms.items():
            term = Poly.const(f, n, c)
            for i, k in enumerate(e):
                if k:
                    lin = Poly.var(f, n, i) + Poly.const(f, n, base[i])
                    for _ in range(k):
                        term = term * lin
            out = out + term
        return out

    def series_coeffs(self, jet: Sequence[Sequence], order: int) -> list:
        """Coefficients of t^0..t^order of p(sum_k jet[k] t^k), jet[k] a vector."""
        f = self.field
        n = self.n
        series = [[jet[k][v] if k < len(jet) else f.zero for k in range(order + 1)] for v in range(n)]

        def mul(a, b):
            out = [f.zero] * (order + 1)
            for i, x in enumerate(a):
                if x:
                    for j in range(order + 1 - i):
                        if b[j]:
                            out[i + j] = out[i + j] + x * b[j]
            return [f(v) for v in out]

        total = [f.zero] * (order + 1)
        for e, c in self.terms.items():
            acc = [f.one] + [f.zero] * order
            for v, k in enumerate(e):
                for _ in range(k):
                    acc = mul(acc, series[v])
            total = [f(t + c * a) for t, a in zip(total, acc)]
        return total

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.n)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k) or "1"
            parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def _poly_matmul(a: list, b: list) -> list:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                t = a[i][k] * b[k][j]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------- models

@dataclass
class JetModel:
    """Polynomial equations re-centred at a base point, with cached linear and quadratic parts."""

    field: FieldSpec
    num_vars: int
    equations: list  # Poly, vanishing at the origin
    base_point: tuple
    var_names: list = dc_field(default_factory=list)
    G: Matrix = None
    H: Matrix = None
    pairs: list = dc_field(default_factory=list)

    def __post_init__(self) -> None:
        f = self.field
        n = self.num_vars
        if not self.var_names:
            self.var_names = [f"x{i}" for i in range(n)]
        zero = (0,) * n
        for k, eq in enumerate(self.equations):
            if eq.terms.get(zero, 0) != 0:
                raise RepcompError(f"equation {k} does not vanish at the base point")
        self.pairs = [(p, q) for p in range(n) for q in range(p, n)]
        pair_index = {pq: k for k, pq in enumerate(self.pairs)}
        grows, hrows = [], []
        for eq in self.equations:
            g = [f.zero] * n
            h = [f.zero] * len(self.pairs)
            for e, c in eq.terms.items():
                deg = sum(e)
                if deg == 1:
                    g[e.index(1)] = c
                elif deg == 2:
                    idx = [i for i, k in enumerate(e) for _ in range(k)]
                    h[pair_index[(idx[0], idx[1])]] = c
            grows.append(tuple(g))
            hrows.append(tuple(h))
        self.G = Matrix._raw(f, len(grows), n, tuple(grows))
        self.H = Matrix._raw(f, len(hrows), len(self.pairs), tuple(hrows))
        self._compiled = None
        self._solver = None

    @property
    def num_equations(self) -> int:
        return len(self.equations)

    def compiled(self):
        """Term arrays for the series kernel: (exps, coefs, eq_index)."""
        if self._compiled is None:
            exps, coefs, idx = [], [], []
            for k, eq in enumerate(self.equations):
                for e, c in eq.terms.items():
                    exps.append(e)
                    coefs.append(int(c))
                    idx.append(k)
            n = self.num_vars
            self._compiled = (np.array(exps, dtype=np.int64).reshape(len(exps), n),
                              np.array(coefs, dtype=np.int64), np.array(idx, dtype=np.int64))
        return self._compiled

    def to_json(self) -> dict:
        eqs = [[{"c": str(c), "e": list(e)} for e, c in sorted(eq.terms.items())] for eq in self.equations]
        return {"field": self.field.to_json(), "vars": list(self.var_names), "equations": eqs,
                "base_point": [str(x) for x in self.base_point], "centered": True}


def model_from_equations(field: FieldSpec, equations: Sequence[Poly], base_point: Sequence, names=None) -> JetModel:
    """Re-centre absolute-coordinate equations at ``base_point``."""
    base = tuple(field(x) for x in base_point)
    shifted = [eq.shift(base) for eq in equations]
    for k, eq in enumerate(equations):
        if eq.evaluate(base) != 0:
            raise RepcompError(f"equation {k} does not vanish at the base point")
    return JetModel(field, len(base), shifted, base, list(names or []))


def model_from_rep(alg: AlgebraPresentation, rho: Representation) -> JetModel:
    """Local model of rep^d at rho: offset variable i*d^2 + a*d + b is entry (a, b) of generator i."""
    f = alg.field
    d = rho.dim
    ngen = alg.num_generators
    n = ngen * d * d
    mats = []
    for i, m in enumerate(rho.mats):
        mats.append([[Poly.const(f, n, m.rows[a][b]) + Poly.var(f, n, i * d * d + a * d + b)
                      for b in range(d)] for a in range(d)])
    ident = [[Poly.const(f, n, 1 if a == b else 0) for b in range(d)] for a in range(d)]
    eqs = []
    cache: dict = {(): ident}
    for rel in alg.relations:
        total = [[Poly(f, n) for _ in range(d)] for _ in range(d)]
        for c, w in rel.terms:
            if w not in cache:
                prefix = w[:-1]
                if prefix not in cache:
                    acc = ident
                    for k in range(len(prefix)):
                        sub = prefix[:k + 1]
                        if sub not in cache:
                            cache[sub] = _poly_matmul(acc, mats[sub[-1]])
                        acc = cache[sub]
                cache[w] = _poly_matmul(cache[prefix], mats[w[-1]])
            prod = cache[w]
            total = [[total[a][b] + prod[a][b].scale(c) for b in range(d)] for a in range(d)]
        eqs.extend(total[a][b] for a in range(d) for b in range(d))
    names = [f"{alg.generator_names[i]}[{a},{b}]" for i in range(ngen) for a in range(d) for b in range(d)]
    base = tuple(x for m in rho.mats for x in m.flat())
    return JetModel(f, n, eqs, base, names)


def model_from_grass_chart(tau: Representation, basis: Matrix) -> JetModel:
    """Chart of the Grassmannian at U (column-echelon ``basis``): f[J] = 1, f[J^c] = U[J^c] + y.

    Equations are the entries of C(f) tau_i f, where C(f) has the identity on
    the columns J^c and -f[J^c] on the columns J, so C(f) f = 0.
    """
    f = tau.field
    m, d = basis.nrows, basis.ncols
    if d == 0 or d == m:
        return JetModel(f, 0, [], (), [])
    _, J = rref(basis.T)
    Jc = [i for i in range(m) if i not in set(J)]
    n = (m - d) * d
    var = {}
    for k, i in enumerate(Jc):
        for j in range(d):
            var[(i, j)] = k * d + j
    fm = []
    for i in range(m):
        row = []
        for j in range(d):
            p = Poly.const(f, n, basis.rows[i][j])
            if (i, j) in var:
                p = p + Poly.var(f, n, var[(i, j)])
            row.append(p)
        fm.append(row)
    cm = []
    for k, i in enumerate(Jc):
        row = [Poly(f, n) for _ in range(m)]
        row[i] = Poly.const(f, n, 1)
        for j, jrow in enumerate(J):
            row[jrow] = -fm[i][j]
        cm.append(row)
    eqs = []
    for x in tau.mats:
        xm = [[Poly.const(f, n, x.rows[a][b]) for b in range(m)] for a in range(m)]
        prod = _poly_matmul(_poly_matmul(cm, xm), fm)
        eqs.extend(prod[a][b] for a in range(m - d) for b in range(d))
    names = [f"y[{i},{j}]" for i in Jc for j in range(d)]
    return JetModel(f, n, eqs, tuple(basis.flat()), names)


# ---------------------------------------------------------------- tangent and quadric test

def tangent_dim_model(model: JetModel) -> int:
    if model.num_vars == 0:
        return 0
    if model.num_equations == 0:
        return model.num_vars
    return nullity(model.G)


def tangent_basis(model: JetModel) -> list:
    if model.num_equations == 0:
        f = model.field
        return [tuple(f.one if i == j else f.zero for i in range(model.num_vars)) for j in range(model.num_vars)]
    return kernel_basis(model.G)


def _check_tangent(model: JetModel, xi: Sequence) -> tuple:
    f = model.field
    if len(xi) != model.num_vars:
        raise RepcompError(f"vector has {len(xi)} entries, model has {model.num_vars} variables")
    xi = tuple(f(x) for x in xi)
    if model.num_equations and any(v != 0 for v in model.G.apply(xi)):
        raise RepcompError("vector is not tangent (G xi != 0)")
    return xi


def quadratic_values(model: JetModel, xi: Sequence) -> tuple:
    f = model.field
    prods = tuple(f(xi[p] * xi[q]) for p, q in model.pairs)
    return model.H.apply(prods) if model.num_equations else ()


def t2_member(model: JetModel, xi: Sequence) -> bool:
    """xi lies in the image of the 2-jets iff G eta = -Q(xi) is solvable."""
    xi = _check_tangent(model, xi)
    if model.num_equations == 0:
        return True
    rhs = tuple(model.field(-v) for v in quadratic_values(model, xi))
    return solve_affine(model.G, rhs) is not None


# ---------------------------------------------------------------- lifting

@dataclass(frozen=True)
class LiftVerdict:
    status: str  # "member", "not_member" or "unknown"
    member: bool
    depth_reached: int
    witness_jet: tuple | None  # (eta_1, ..., eta_r)
    nodes: int

    def to_json(self) -> dict:
        return {"status": self.status, "member": None if self.status == "unknown" else self.member,
                "depth_reached": self.depth_reached,
                "nodes": self.nodes,
                "witness_jet": [[str(x) for x in v] for v in self.witness_jet] if self.witness_jet else None}


class _Solver:
    """Precomputed pieces for G eta = c over F_q: annihilator, particular-solution map and kernel."""

    def __init__(self, model: JetModel, max_kernel: int):
        f = model.field
        q = f.p
        n, neq = model.num_vars, model.num_equations
        self.q = q
        g = model.G
        ann = left_kernel_basis(g) if neq else []
        self.ann = np.array(ann, dtype=np.int64).reshape(len(ann), neq)
        # particular solution: reduce [G | I] and read pivots
        aug = g.hstack(Matrix.identity(f, neq))
        r, piv = rref(aug)
        piv = [c for c in piv if c < n]
        e = np.array(r.rows, dtype=np.int64).reshape(neq, n + neq)[:, n:]
        part = np.zeros((n, neq), dtype=np.int64)
        for k, c in enumerate(piv):
            part[c] = e[k]
        self.part = part
        kb = tangent_basis(model)
        self.kernel_dim = len(kb)
        size = q ** len(kb)
        self.kernel_size = size
        if size <= max_kernel:
            coeffs = np.array(list(_iproduct(range(q), repeat=len(kb))), dtype=np.int64).reshape(size, len(kb))
            basis = np.array(kb, dtype=np.int64).reshape(len(kb), n)
            self.kernel_all = coeffs @ basis % q
        else:
            self.kernel_all = None

    def solvable(self, b: np.ndarray) -> np.ndarray:
        """Rows of b (B x neq) for which G eta = -b has a solution."""
        if self.ann.shape[0] == 0:
            return np.ones(b.shape[0], dtype=bool)
        return np.all((b @ self.ann.T) % self.q == 0, axis=1)

    def particular(self, b: np.ndarray) -> np.ndarray:
        return (self.part @ (-b % self.q)) % self.q


def _solver(model: JetModel, budget: int) -> _Solver:
    if model._solver is None or model._solver[0] < min(budget, 10 ** 6):
        model._solver = (min(budget, 10 ** 6), _Solver(model, min(budget, 10 ** 6)))
    return model._solver[1]


def _coeffs_at(model: JetModel, jets: np.ndarray, order: int) -> np.ndarray:
    exps, coefs, idx = model.compiled()
    if exps.shape[0] == 0:
        return np.zeros((jets.shape[0], model.num_equations), dtype=np.int64)
    return kernels.series_coeffs_modp(exps, coefs, idx, model.num_equations,
                                      np.ascontiguousarray(jets), order, model.field.p)


def verify_jet(model: JetModel, jet: Sequence[Sequence]) -> bool:
    """Exact check that every equation vanishes mod t^(r+1) along t*jet[0] + ... + t^r*jet[r-1]."""
    f = model.field
    r = len(jet)
    full = [tuple(f.zero for _ in range(model.num_vars))] + [tuple(f(x) for x in v) for v in jet]
    return all(all(c == 0 for c in eq.series_coeffs(full, r)) for eq in model.equations)


def lift_member(model: JetModel, xi: Sequence, r: int, budget: int = 10 ** 6) -> LiftVerdict:
    """Depth-first search for eta_2..eta_r extending xi to an r-jet of the model."""
    f = model.field
    if not f.is_prime:
        raise RepcompError("lifting search needs a prime field")
    if r < 1:
        raise RepcompError("depth r must be at least 1")
    xi = _check_tangent(model, xi)
    n = model.num_vars
    if r == 1 or model.num_equations == 0:
        jet = (xi,) + tuple((0,) * n for _ in range(r - 1))
        return LiftVerdict("member", True, r, jet, 0)
    sol = _solver(model, budget)
    q = f.p
    nodes = 0
    best = 1

    def dfs(prefix: np.ndarray, s: int):
        """prefix: B x n x (r+1) jets with orders < s filled. Returns a full jet or None."""
        nonlocal nodes, best
        b = _coeffs_at(model, prefix, s)
        ok = sol.solvable(b)
        if not ok.any():
            return None
        best = max(best, s)
        if s == r:
            i = int(np.flatnonzero(ok)[0])
            jet = prefix[i].copy()
            jet[:, s] = sol.particular(b[i])
            return jet
        if sol.kernel_all is None:
            raise BudgetExceeded("tangent space too large to enumerate corrections", sol.kernel_size)
        for i in np.flatnonzero(ok):
            nodes += sol.kernel_size
            if nodes > budget:
                raise BudgetExceeded(f"lifting search exceeded {budget} nodes", nodes)
            base = sol.particular(b[i])
            children = np.repeat(prefix[i:i + 1], sol.kernel_size, axis=0)
            children[:, :, s] = (base[None, :] + sol.kernel_all) % q
            found = dfs(children, s + 1)
            if found is not None:
                return found
        return None

    start = np.zeros((1, n, r + 1), dtype=np.int64)
    start[0, :, 1] = np.array(xi, dtype=np.int64)
    try:
        jet = dfs(start, 2)
    except BudgetExceeded:
        return LiftVerdict("unknown", False, best, None, nodes)
    if jet is None:
        return LiftVerdict("not_member", False, best, None, nodes)
    witness = tuple(tuple(int(x) for x in jet[:, k]) for k in range(1, r + 1))
    if not verify_jet(model, witness):
        raise AssertionError("lifting witness failed exact verification")
    return LiftVerdict("member", True, r, witness, nodes)


# ---------------------------------------------------------------- estimates and probes

@dataclass(frozen=True)
class TbarEstimate:
    count: int
    tangent_count: int
    tangent_dim: int
    dim_proxy: int | None  # k when count == q^k
    cone_ok: bool
    members: tuple
    unknown: int = 0


def tangent_vectors(model: JetModel, budget: int):
    f = model.field
    kb = tangent_basis(model)
    q = f.p
    size = q ** len(kb)
    if size > budget:
        raise BudgetExceeded(f"tangent space has {size} points, over the budget {budget}", size)
    if not kb:
        return [tuple(0 for _ in range(model.num_vars))]
    basis = np.array(kb, dtype=np.int64)
    coeffs = np.array(list(_iproduct(range(q), repeat=len(kb))), dtype=np.int64)
    vecs = coeffs @ basis % q
    return sorted(tuple(int(x) for x in v) for v in vecs)


def _log_exact(count: int, q: int) -> int | None:
    k = 0
    while count > 1 and count % q == 0:
        count //= q
        k += 1
    return k if count == 1 else None


def tbar_dim_estimate(model: JetModel, r: int, budget: int = 10 ** 6) -> TbarEstimate:
    """Count the F_q tangent vectors that lift to depth r."""
    f = model.field
    if not f.is_prime:
        raise RepcompError("lifting estimates need a prime field")
    q = f.p
    vecs = tangent_vectors(model, budget)
    members = []
    unknown = 0
    for v in vecs:
        verdict = lift_member(model, v, r, budget) if r >= 2 else LiftVerdict("member", True, 1, None, 0)
        if verdict.status == "unknown":
            unknown += 1
        elif verdict.member:
            members.append(v)
    mset = set(members)
    cone_ok = all(tuple(c * x % q for x in v) in mset for v in members for c in range(q))
    if not cone_ok:
        raise AssertionError("lifting set is not closed under scalars")
    td = tangent_dim_model(model)
    return TbarEstimate(len(members), len(vecs), td, _log_exact(len(members), q) if not unknown else None,
                        cone_ok, tuple(members), unknown)


@dataclass(frozen=True)
class ProbeReport:
    point: tuple
    tangent_dim: int
    depth: int
    lifting_count: int
    dim_proxy: int | None
    verdict: str  # "nonreduced", "reduced_evidence" or "unknown"

    def to_json(self) -> dict:
        return {"point": [str(x) for x in self.point], "tangent_dim": self.tangent_dim, "depth": self.depth,
                "lifting_count": self.lifting_count, "dim_proxy": self.dim_proxy, "verdict": self.verdict}


def probe(model: JetModel, r: int = 4, budget: int = 10 ** 6) -> ProbeReport:
    """Compare the depth-r lifting cone with the tangent space at the base point.

    "nonreduced" means some tangent vector is obstructed at depth r, so the
    reduced tangent space is strictly smaller here; at a point generic on its
    component this is non-reducedness. "reduced_evidence" only says that no
    obstruction was found through depth r.
    """
    try:
        est = tbar_dim_estimate(model, r, budget)
    except BudgetExceeded:
        return ProbeReport(model.base_point, tangent_dim_model(model), r, -1, None, "unknown")
    if est.unknown:
        verdict = "unknown" if est.count + est.unknown >= est.tangent_count else "nonreduced"
    else:
        verdict = "nonreduced" if est.count < est.tangent_count else "reduced_evidence"
    return ProbeReport(model.base_point, est.tangent_dim, r, est.count, est.dim_proxy, verdict)


def generic_verdict(reports: Sequence[ProbeReport]) -> str:
    """Verdict over a set of points meant to cover a component: every point obstructed => generically nonreduced."""
    if any(rp.verdict == "unknown" for rp in reports):
        return "unknown"
    if reports and all(rp.verdict == "nonreduced" for rp in reports):
        return "generically_nonreduced"
    if all(rp.verdict == "reduced_evidence" for rp in reports):
        return "reduced_evidence"
    return "mixed"


# ---------------------------------------------------------------- built-in scenarios

def stu_model(field: FieldSpec) -> JetModel:
    """s*t - u^3 at the origin of K^3."""
    n = 3
    s, t, u = (Poly.var(field, n, i) for i in range(n))
    eq = s * t - u * u * u
    return JetModel(field, n, [eq], (field.zero,) * 3, ["s", "t", "u"])


@dataclass(frozen=True)
class Rep2Report:
    q: int
    tangent_count: int
    t2_count: int
    t2_expected: int
    t2_matches: bool
    t3_count: int
    t3_expected: int
    t3_matches: bool

    @property
    def ok(self) -> bool:
        return self.t2_matches and self.t3_matches


def rep2_expected_sets(q: int) -> tuple[set, set]:
    """Closed-form sets in coordinates (x1, x2, x3, x4, y1, y2, y3, y4) for the 2-dim cusp point."""
    t2, t3 = set(), set()
    for x1, x2, x4, y1, y2, y3 in _iproduct(range(q), repeat=6):
        if (y1 * y1 + y2 * y3) % q:
            continue
        v = (x1, x2, 0, x4, y1, y2, y3, (-y1) % q)
        t2.add(v)
        if (y2, y3) != (0, 0):
            t3.add(v)
        elif y1 == 0 and (x4 + x1) % q == 0:
            t3.add(v)
    return t2, t3


def rep2_jet_sets_check(q: int = 3, budget: int = 10 ** 7) -> Rep2Report:
    """Exhaustive depth-2 and depth-3 lifting sets at X = J, Y = 0 in rep^2 of K<X,Y>/(X^3 - Y^2)."""
    from .catalog import cusp, cusp_rho

    f = FieldSpec.prime(q)
    alg = cusp(f)
    model = model_from_rep(alg, cusp_rho(alg))
    vecs = tangent_vectors(model, budget)
    t2 = {v for v in vecs if t2_member(model, v)}
    t3 = {v for v in t2 if lift_member(model, v, 3, budget).member}
    e2, e3 = rep2_expected_sets(q)
    return Rep2Report(q, len(vecs), len(t2), len(e2), t2 == e2, len(t3), len(e3), t3 == e3)
