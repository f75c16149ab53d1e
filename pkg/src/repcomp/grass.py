"""Quiver Grassmannians and flags over prime fields: enumeration, tangent spaces, strata, certificates."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product as _iproduct
from typing import Sequence

import numpy as np

from .algebra import ChainModule, PairModule, Representation
from .components import ComponentCertificate, decompose, end_dim, SEMICONTINUITY_NOTE
from .errors import BudgetExceeded, RepcompError
from .exactla import Matrix, det, rank, rref, row_basis
from .field import FieldSpec
from .homology import (bar_ext_dim, chain_hom_basis, ext_dim, find_isomorphism, hom_basis, hom_dim,
                       quotient_module)


# ---------------------------------------------------------------- submodules

def canonical_basis(field: FieldSpec, cols: Matrix) -> Matrix:
    """Column reduced-echelon basis of the column span."""
    m = cols.nrows
    rows = row_basis(field, cols.T.rows, m)
    if not rows:
        return Matrix.zeros(field, m, 0)
    return Matrix.from_columns(field, rows)


@dataclass(frozen=True)
class Submodule:
    ambient: Representation
    basis: Matrix  # m x d, transpose in reduced row echelon form

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @property
    def pivots(self) -> list[int]:
        return rref(self.basis.T)[1] if self.dim else []

    def sub_rep(self) -> Representation:
        return self.ambient.restrict(self.basis)

    def quotient(self) -> tuple[Representation, Matrix]:
        return quotient_module(self.ambient, self.basis)

    def pair(self) -> PairModule:
        return PairModule(self.sub_rep(), self.ambient, self.basis)

    def key(self) -> tuple:
        return self.basis.rows

    def is_closed(self) -> bool:
        d = self.dim
        if d == 0:
            return True
        return all(rank(self.basis.hstack(x @ self.basis)) == d for x in self.ambient.mats)


@dataclass(frozen=True)
class FlagPoint:
    ambient: Representation
    bases: tuple  # ascending chain of column-echelon bases

    def submodules(self) -> list[Submodule]:
        return [Submodule(self.ambient, b) for b in self.bases]


def _gaussian_count(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _rref_batches(n: int, k: int, q: int):
    """Yield (pivots, array B x k x n) covering every k-dim subspace of F_q^n once, as RREF rows."""
    if k == 0:
        yield (), np.zeros((1, 0, n), dtype=np.int64)
        return
    for piv in combinations(range(n), k):
        pivset = set(piv)
        free = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, n) if c not in pivset]
        count = q ** len(free)
        arr = np.zeros((count, k, n), dtype=np.int64)
        for r, p in enumerate(piv):
            arr[:, r, p] = 1
        if free:
            vals = np.array(list(_iproduct(range(q), repeat=len(free))), dtype=np.int64)
            for t, (r, c) in enumerate(free):
                arr[:, r, c] = vals[:, t]
        yield piv, arr


def _invariant_mask(gens: Sequence[np.ndarray], cols: np.ndarray, piv: Sequence[int], q: int) -> np.ndarray:
    """cols: B x m x d column bases whose transposes are RREF with pivots ``piv``."""
    keep = np.ones(cols.shape[0], dtype=bool)
    if cols.shape[2] == 0:
        return keep
    piv = list(piv)
    for x in gens:
        w = np.einsum("ij,bjk->bik", x, cols) % q
        # in the span iff w equals the combination read off at the pivot rows
        recon = np.einsum("bij,bjk->bik", cols, w[:, piv, :]) % q
        keep &= np.all(w == recon, axis=(1, 2))
    return keep


def submodule_count_bound(m: int, d: int, q: int, dimvec: Sequence[int] | None = None,
                          block_sizes: Sequence[int] | None = None) -> int:
    if dimvec is None:
        return _gaussian_count(m, d, q)
    total = 1
    for dv, bs in zip(dimvec, block_sizes):
        total *= _gaussian_count(bs, dv, q)
    return total


def enumerate_submodules(tau: Representation, d: int | None = None, dimvec: Sequence[int] | None = None,
                         budget: int = 10 ** 6, threads: int = 1) -> list[Submodule]:
    """All tau-invariant subspaces of dimension d (or of dimension vector ``dimvec``), canonical order."""
    f = tau.field
    if not f.is_prime:
        raise RepcompError("submodule enumeration needs a prime field")
    q = f.p
    m = tau.dim
    gens = [x.to_numpy() for x in tau.mats]
    if dimvec is not None:
        return _enumerate_by_dimvec(tau, tuple(dimvec), gens, budget)
    if d is None or not 0 <= d <= m:
        raise RepcompError(f"submodule dimension {d} out of range for a {m}-dimensional module")
    need = _gaussian_count(m, d, q)
    if need > budget:
        raise BudgetExceeded(f"enumerating {need} subspaces exceeds the budget {budget}", need)

    def work(item):
        piv, arr = item
        cols = np.transpose(arr, (0, 2, 1))
        mask = _invariant_mask(gens, cols, piv, q)
        return [Submodule(tau, Matrix.from_numpy(f, c)) for c in cols[mask]]

    batches = list(_rref_batches(m, d, q))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, batches))
    else:
        parts = [work(b) for b in batches]
    out = [s for part in parts for s in part]
    out.sort(key=lambda s: s.key())
    return out


def _enumerate_by_dimvec(tau: Representation, dimvec: tuple, gens, budget: int) -> list[Submodule]:
    f = tau.field
    q = f.p
    sizes = tau.dim_vector
    if sizes is None:
        raise RepcompError("dimension-vector enumeration needs an ambient in standard vertex form")
    if len(dimvec) != len(sizes) or any(not 0 <= a <= b for a, b in zip(dimvec, sizes)):
        raise RepcompError(f"dimension vector {list(dimvec)} does not fit inside {list(sizes)}")
    need = submodule_count_bound(tau.dim, sum(dimvec), q, dimvec, sizes)
    if need > budget:
        raise BudgetExceeded(f"enumerating {need} subspaces exceeds the budget {budget}", need)
    m = tau.dim
    per_vertex = []
    offset = 0
    for dv, bs in zip(dimvec, sizes):
        choices = []
        for piv, arr in _rref_batches(bs, dv, q):
            for a in arr:
                choices.append(([offset + p for p in piv], a))
        per_vertex.append((offset, bs, choices))
        offset += bs
    d = sum(dimvec)
    out = []
    for combo in _iproduct(*(c for _, _, c in per_vertex)):
        rows = np.zeros((d, m), dtype=np.int64)
        piv: list[int] = []
        r = 0
        for (off, bs, _), (pv, a) in zip(per_vertex, combo):
            k = a.shape[0]
            rows[r:r + k, off:off + bs] = a
            piv.extend(pv)
            r += k
        cols = rows.T[None, :, :]
        if _invariant_mask(gens, cols, piv, q)[0]:
            out.append(Submodule(tau, Matrix.from_numpy(f, rows.T)))
    out.sort(key=lambda s: s.key())
    return out


def point_count(tau: Representation, d: int | None = None, dimvec: Sequence[int] | None = None,
                budget: int = 10 ** 6) -> int:
    return len(enumerate_submodules(tau, d, dimvec, budget))


def tangent_dim(u: Submodule) -> int:
    """dim Hom(U, M/U), the tangent space to the Grassmannian at U."""
    if u.dim == 0 or u.dim == u.ambient.dim:
        return 0
    quot, _ = u.quotient()
    return hom_dim(u.sub_rep(), quot)


# ---------------------------------------------------------------- flags

def enumerate_flags(tau: Representation, dims: Sequence[int], budget: int = 10 ** 6) -> list[FlagPoint]:
    """Chains U^1 in ... in U^r of submodules with dim U^k = dims[k]."""
    dims = list(dims)
    if any(a > b for a, b in zip(dims, dims[1:])) or (dims and dims[-1] > tau.dim):
        raise RepcompError("flag dimensions must be nondecreasing and at most the module dimension")
    if not dims:
        return [FlagPoint(tau, ())]
    f = tau.field
    out = []
    for top in enumerate_submodules(tau, dims[-1], budget=budget):
        if len(dims) == 1:
            out.append(FlagPoint(tau, (top.basis,)))
            continue
        inner = top.sub_rep()
        for fl in enumerate_flags(inner, dims[:-1], budget):
            lower = tuple(canonical_basis(f, top.basis @ b) for b in fl.bases)
            out.append(FlagPoint(tau, lower + (top.basis,)))
    out.sort(key=lambda fp: tuple(b.rows for b in fp.bases))
    return out


def _quotient_chain(tau: Representation, bases: Sequence[Matrix]) -> ChainModule:
    f = tau.field
    m = tau.dim
    quots, projs, sections = [], [], []
    for b in bases:
        qrep, proj = quotient_module(tau, b)
        piv = set(rref(b.T)[1]) if b.ncols else set()
        comp = [i for i in range(m) if i not in piv]
        sec = Matrix.from_columns(f, [tuple(f.one if r == c else f.zero for r in range(m)) for c in comp], m) \
            if comp else Matrix.zeros(f, m, 0)
        quots.append(qrep)
        projs.append(proj)
        sections.append(sec)
    maps = []
    for k in range(len(bases) - 1):
        maps.append(projs[k + 1] @ sections[k] if quots[k].dim and quots[k + 1].dim
                    else Matrix.zeros(f, quots[k + 1].dim, quots[k].dim))
    return ChainModule(tuple(quots), tuple(maps))


def flag_chain(fl: FlagPoint) -> ChainModule:
    reps = [fl.ambient.restrict(b) for b in fl.bases]
    f = fl.ambient.field
    maps = []
    for k in range(len(reps) - 1):
        small, big = fl.bases[k], fl.bases[k + 1]
        # coordinates of the smaller basis inside the larger one
        if small.ncols == 0:
            maps.append(Matrix.zeros(f, big.ncols, 0))
            continue
        _, rows_j = rref(big.T)
        left = big.submatrix(rows_j, range(big.ncols)).inverse()
        maps.append(left @ small.submatrix(rows_j, range(small.ncols)))
    return ChainModule(tuple(reps), tuple(maps))


def flag_tangent_dim(fl: FlagPoint) -> int:
    """dim of chain morphisms from (U^1 -> ... -> U^r) to (M/U^1 -> ... -> M/U^r)."""
    return len(chain_hom_basis(flag_chain(fl), _quotient_chain(fl.ambient, fl.bases)))


# ---------------------------------------------------------------- strata

@dataclass(frozen=True)
class Stratum:
    label: str
    count: int
    representative: Submodule
    tangent_dims: tuple
    members: tuple  # indices into the enumeration
    certain: bool = True


def _summand_label(report, catalog: list) -> str:
    parts = []
    for rep, mult in report.summands:
        idx = None
        for k, known in enumerate(catalog):
            if known.dim == rep.dim and find_isomorphism(rep, known) is not None:
                idx = k
                break
        if idx is None:
            catalog.append(rep)
            idx = len(catalog) - 1
        name = f"{rep.dim}" if rep.dim_vector is None else "(" + ",".join(map(str, rep.dim_vector)) + ")"
        same_shape = [c for c in catalog if c.dim == rep.dim and c.dim_vector == rep.dim_vector]
        if len(same_shape) > 1:
            name += f"#{same_shape.index(catalog[idx])}"
        parts.append(name + (f"^{mult}" if mult > 1 else ""))
    return "+".join(parts) if parts else "0"


def stratify(tau: Representation, d: int | None = None, dimvec: Sequence[int] | None = None, seed: int = 0,
             budget: int = 10 ** 6, points: list[Submodule] | None = None) -> list[Stratum]:
    """Group Grassmannian points by the isomorphism class of the submodule."""
    pts = points if points is not None else enumerate_submodules(tau, d, dimvec, budget)
    classes: list = []  # [sub_rep, fingerprint, [indices], [tangent dims], certain]
    residual: list = []
    for i, u in enumerate(pts):
        sub = u.sub_rep()
        fp = (end_dim(sub), hom_dim(sub, tau), hom_dim(tau, sub))
        placed = False
        try:
            for cls in classes:
                if cls[1] != fp:
                    continue
                if find_isomorphism(sub, cls[0], seed, budget) is not None:
                    cls[2].append(i)
                    cls[3].append(tangent_dim(u))
                    placed = True
                    break
        except BudgetExceeded:
            residual.append(i)
            continue
        if not placed:
            classes.append([sub, fp, [i], [tangent_dim(u)]])
    catalog: list = []
    out = []
    for sub, _, idx, tds in classes:
        label = _summand_label(decompose(sub, seed, budget), catalog)
        out.append(Stratum(label, len(idx), pts[idx[0]], tuple(sorted(set(tds))), tuple(idx)))
    if residual:
        out.append(Stratum("unknown", len(residual), pts[residual[0]],
                           tuple(sorted({tangent_dim(pts[i]) for i in residual})), tuple(residual), False))
    out.sort(key=lambda s: (-s.count, s.label))
    return out


def find_embedding(rho: Representation, tau: Representation, seed: int = 0, budget: int = 10 ** 6) -> Matrix | None:
    """An injective intertwiner rho -> tau, or None if none exists."""
    f = rho.field
    d = rho.dim
    if d == 0:
        return Matrix.zeros(f, tau.dim, 0)
    if d > tau.dim:
        return None
    h = hom_basis(rho, tau).basis
    if not h:
        return None
    rng = random.Random(seed)

    def combo(coeffs):
        g = None
        for c, b in zip(coeffs, h):
            if c:
                t = b.scale(c)
                g = t if g is None else g + t
        return g

    for _ in range(64):
        coeffs = [rng.randrange(f.p) if f.is_prime else rng.randint(-10 ** 6, 10 ** 6) for _ in h]
        g = combo(coeffs)
        if g is not None and rank(g) == d:
            return g
    k = len(h)
    grid = range(f.p) if f.is_prime else range(d + 1)
    size = len(grid) ** k
    if size > budget:
        raise BudgetExceeded(f"embedding search over {size} combinations exceeds budget", size)
    for coeffs in _iproduct(grid, repeat=k):
        g = combo(coeffs)
        if g is not None and rank(g) == d:
            return g
    return None


def stratum_dim(rho: Representation, tau: Representation, seed: int = 0, budget: int = 10 ** 6) -> int:
    """dim Hom(rho, tau) - dim End(rho), for rho embeddable in tau."""
    if find_embedding(rho, tau, seed, budget) is None:
        raise RepcompError("no injective intertwiner exists")
    return hom_dim(rho, tau) - end_dim(rho)


def stratum_is_component(rho: Representation, tau: Representation, embedding: Matrix | None = None,
                         seed: int = 0, budget: int = 10 ** 6) -> ComponentCertificate:
    """Certified when Hom(rho, tau) -> Hom(rho, tau/rho) is onto, or when Ext^1(rho, rho) = 0."""
    if embedding is None:
        embedding = find_embedding(rho, tau, seed, budget)
        if embedding is None:
            raise RepcompError("no injective intertwiner exists")
    quot, proj = quotient_module(tau, embedding)
    target = hom_dim(rho, quot)
    homs = hom_basis(rho, tau).basis
    f = rho.field
    imgs = [(proj @ h).flat() for h in homs] if quot.dim and rho.dim else []
    image = len(row_basis(f, imgs, quot.dim * rho.dim)) if imgs else 0
    e = ext_dim(rho, rho)
    ok = image == target or e == 0
    return ComponentCertificate("certified" if ok else "not_certified",
                                {"hom_target": target, "image_rank": image, "ext_self": e},
                                SEMICONTINUITY_NOTE)


def grass_sum_is_component(a: PairModule, b: PairModule) -> ComponentCertificate:
    x, y = bar_ext_dim(a, b), bar_ext_dim(b, a)
    return ComponentCertificate("certified" if x == 0 and y == 0 else "not_certified",
                                {"bar_ext_12": x, "bar_ext_21": y}, SEMICONTINUITY_NOTE)


def grass_triple_certificate(pairs: Sequence[PairModule]) -> tuple[ComponentCertificate, dict]:
    """Pairwise bar-Ext vanishing for a list of pair modules."""
    dims = {}
    for i, a in enumerate(pairs):
        for j, b in enumerate(pairs):
            if i != j:
                dims[(i, j)] = bar_ext_dim(a, b)
    ok = all(v == 0 for v in dims.values())
    reason = {f"bar_ext_{i}{j}": v for (i, j), v in dims.items()}
    return ComponentCertificate("certified" if ok else "not_certified", reason, SEMICONTINUITY_NOTE), dims
