"""Hom, derivation and Ext spaces between representations, and their pair-module variants.

Ext^1 is only ever computed in dimension form,
dim Ext = dim Hom + dim Der - d*e, with classes represented by derivations
modulo inner derivations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Sequence

import numpy as np

from .algebra import ChainModule, PairModule, Representation, eval_word
from .errors import BudgetExceeded, RepcompError
from .exactla import (Matrix, det, in_span, kernel_basis, kron, left_kernel_basis, rank, row_basis, rref,
                      solve_affine)
from .field import FieldSpec

Derivation = tuple  # one e x d Matrix per generator


def _same_algebra(rho: Representation, sigma: Representation) -> None:
    if rho.algebra != sigma.algebra:
        raise RepcompError("representations of different algebras")


def _stack(field: FieldSpec, ncols: int, blocks: Sequence[Sequence[Matrix | None]], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``blocks[r][c]`` may be None for a zero block."""
    rows = []
    z = field.zero
    for brow in blocks:
        h = next((b.nrows for b in brow if b is not None), None)
        if h is None:
            continue
        for i in range(h):
            row = []
            for b, w in zip(brow, col_sizes):
                row.extend(b.rows[i] if b is not None else (z,) * w)
            rows.append(tuple(row))
    return Matrix._raw(field, len(rows), ncols, tuple(rows))


def _delta_matrix(rho: Representation, sigma: Representation) -> Matrix:
    """Matrix of gamma -> (gamma rho_i - sigma_i gamma)_i on row-major vec(gamma), gamma of shape e x d."""
    f = rho.field
    d, e = rho.dim, sigma.dim
    Id, Ie = Matrix.identity(f, d), Matrix.identity(f, e)
    blocks = [[kron(Ie, r.T) - kron(s, Id)] for r, s in zip(rho.mats, sigma.mats)]
    return _stack(f, e * d, blocks, [e * d])


def _unflatten_hom(field: FieldSpec, v: Sequence, e: int, d: int) -> Matrix:
    return Matrix.from_flat(field, e, d, v)


def _unflatten_der(field: FieldSpec, v: Sequence, n: int, e: int, d: int) -> Derivation:
    k = e * d
    return tuple(Matrix.from_flat(field, e, d, v[g * k:(g + 1) * k]) for g in range(n))


def _flatten_der(xi: Derivation) -> tuple:
    return tuple(x for m in xi for x in m.flat())


# ---------------------------------------------------------------- Hom and Der

@dataclass(frozen=True)
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple  # e x d matrices

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class DerSpace:
    source: Representation
    target: Representation
    basis: tuple  # derivation tuples

    @property
    def dim(self) -> int:
        return len(self.basis)


def hom_basis(rho: Representation, sigma: Representation) -> HomSpace:
    """Basis of the intertwiners f with f rho_i = sigma_i f."""
    _same_algebra(rho, sigma)
    f = rho.field
    d, e = rho.dim, sigma.dim
    if d * e == 0:
        return HomSpace(rho, sigma, ())
    ker = kernel_basis(_delta_matrix(rho, sigma))
    return HomSpace(rho, sigma, tuple(_unflatten_hom(f, v, e, d) for v in ker))


def hom_dim(rho: Representation, sigma: Representation) -> int:
    _same_algebra(rho, sigma)
    d, e = rho.dim, sigma.dim
    if d * e == 0:
        return 0
    return d * e - rank(_delta_matrix(rho, sigma))


def _der_system(rho: Representation, sigma: Representation) -> Matrix:
    """Linear conditions on (xi_1..xi_N) for the Leibniz extension to kill every relation."""
    f = rho.field
    alg = rho.algebra
    n = alg.num_generators
    d, e = rho.dim, sigma.dim
    k = e * d
    blocks = []
    for rel in alg.relations:
        coeff: list = [None] * n
        for c, w in rel.terms:
            for pos, g in enumerate(w):
                left = eval_word(w[:pos], sigma.mats, e, f)
                right = eval_word(w[pos + 1:], rho.mats, d, f)
                term = kron(left, right.T).scale(c)
                coeff[g] = term if coeff[g] is None else coeff[g] + term
        if any(b is not None for b in coeff):
            blocks.append(coeff)
    return _stack(f, n * k, blocks, [k] * n)


def der_basis(rho: Representation, sigma: Representation) -> DerSpace:
    _same_algebra(rho, sigma)
    f = rho.field
    n = rho.algebra.num_generators
    d, e = rho.dim, sigma.dim
    if d * e == 0:
        return DerSpace(rho, sigma, ())
    sysm = _der_system(rho, sigma)
    if sysm.nrows == 0:
        basis = [tuple(f.one if i == j else f.zero for i in range(n * d * e)) for j in range(n * d * e)]
    else:
        basis = kernel_basis(sysm)
    return DerSpace(rho, sigma, tuple(_unflatten_der(f, v, n, e, d) for v in basis))


def der_dim(rho: Representation, sigma: Representation) -> int:
    _same_algebra(rho, sigma)
    n = rho.algebra.num_generators
    k = n * rho.dim * sigma.dim
    if k == 0:
        return 0
    sysm = _der_system(rho, sigma)
    return k - (rank(sysm) if sysm.nrows else 0)


def is_derivation(xi: Derivation, rho: Representation, sigma: Representation) -> bool:
    if rho.dim * sigma.dim == 0:
        return True
    sysm = _der_system(rho, sigma)
    if sysm.nrows == 0:
        return True
    return all(x == 0 for x in sysm.apply(_flatten_der(xi)))


def ext_dim(rho: Representation, sigma: Representation) -> int:
    """dim Ext^1(rho, sigma) = dim Hom + dim Der - d*e."""
    val = hom_dim(rho, sigma) + der_dim(rho, sigma) - rho.dim * sigma.dim
    if val < 0:
        raise AssertionError(f"negative Ext dimension {val}: inconsistent Hom/Der computation")
    return val


def delta_image_basis(rho: Representation, sigma: Representation) -> list[Derivation]:
    """Basis of the inner derivations gamma rho - sigma gamma."""
    _same_algebra(rho, sigma)
    f = rho.field
    n = rho.algebra.num_generators
    d, e = rho.dim, sigma.dim
    if d * e == 0:
        return []
    dm = _delta_matrix(rho, sigma)
    cols = row_basis(f, dm.T.rows, dm.nrows)
    return [_unflatten_der(f, v, n, e, d) for v in cols]


def inner_derivation(gamma: Matrix, rho: Representation, sigma: Representation) -> Derivation:
    return tuple(gamma @ r - s @ gamma for r, s in zip(rho.mats, sigma.mats))


def is_split(xi: Derivation, rho: Representation, sigma: Representation) -> tuple[bool, Matrix | None]:
    """(True, gamma) with xi = gamma rho - sigma gamma when the extension splits, else (False, None)."""
    _same_algebra(rho, sigma)
    f = rho.field
    d, e = rho.dim, sigma.dim
    if len(xi) != rho.algebra.num_generators:
        raise RepcompError("derivation needs one matrix per generator")
    if d * e == 0:
        return True, Matrix.zeros(f, e, d)
    if not is_derivation(xi, rho, sigma):
        raise RepcompError("not a derivation")
    sol = solve_affine(_delta_matrix(rho, sigma), _flatten_der(xi))
    if sol is None:
        return False, None
    return True, _unflatten_hom(f, sol.solution, e, d)


def extension_module(xi: Derivation, rho: Representation, sigma: Representation) -> Representation:
    """The middle term with matrices [[sigma_i, xi_i], [0, rho_i]]."""
    _same_algebra(rho, sigma)
    f = rho.field
    d, e = rho.dim, sigma.dim
    mats = []
    for s, x, r in zip(sigma.mats, xi, rho.mats):
        top = s.hstack(x)
        bottom = Matrix.zeros(f, d, e).hstack(r)
        mats.append(top.vstack(bottom))
    return Representation(rho.algebra, mats, d + e)


def split_census(rho: Representation, sigma: Representation, limit: int = 10 ** 5) -> tuple[int, int]:
    """(number of split derivations, |Der|) by exhaustive enumeration of Der over F_q."""
    f = rho.field
    if not f.is_prime:
        raise RepcompError("census needs a prime field")
    der = der_basis(rho, sigma)
    k = der.dim
    q = f.p
    if q ** k > limit:
        raise BudgetExceeded(f"census of {q}^{k} derivations exceeds {limit}", q ** k)
    if k == 0:
        return 1, 1
    basis = np.array([_flatten_der(x) for x in der.basis], dtype=np.int64)
    dm = _delta_matrix(rho, sigma)
    ann = left_kernel_basis(dm)
    coeffs = np.array(list(_iproduct(range(q), repeat=k)), dtype=np.int64)
    vecs = coeffs @ basis % q
    if not ann:
        return len(coeffs), len(coeffs)
    a = np.array(ann, dtype=np.int64)
    split = np.all((vecs @ a.T) % q == 0, axis=1)
    return int(split.sum()), len(coeffs)


# ---------------------------------------------------------------- isomorphism

def _random_combo(field: FieldSpec, basis: Sequence[Matrix], rng: random.Random, bound: int = 10 ** 6) -> Matrix:
    out = None
    for b in basis:
        c = field(rng.randrange(field.p)) if field.is_prime else field(rng.randint(-bound, bound))
        t = b.scale(c)
        out = t if out is None else out + t
    return out


def find_isomorphism(rho: Representation, sigma: Representation, seed: int = 0, budget: int = 10 ** 6,
                     tries: int = 64) -> Matrix | None:
    """Invertible g with g rho_i = sigma_i g, or None when none exists.

    Raises BudgetExceeded when neither an isomorphism nor a proof of its
    absence is found within the budget.
    """
    _same_algebra(rho, sigma)
    f = rho.field
    if rho.dim != sigma.dim:
        return None
    if rho.dim == 0:
        return Matrix.zeros(f, 0, 0)
    if rho.dim_vector is not None and sigma.dim_vector is not None and rho.dim_vector != sigma.dim_vector:
        return None
    h = hom_basis(rho, sigma)
    if h.dim == 0:
        return None
    if h.dim != hom_dim(rho, rho) or h.dim != hom_dim(sigma, sigma) or h.dim != hom_dim(sigma, rho):
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        g = _random_combo(f, h.basis, rng)
        if det(g) != 0:
            return g
    k = h.dim
    d = rho.dim
    if f.is_prime:
        q = f.p
        if q ** k > budget:
            raise BudgetExceeded(f"exhaustive isomorphism search over {q}^{k} intertwiners exceeds budget", q ** k)
        for coeffs in _iproduct(range(q), repeat=k):
            if not any(coeffs):
                continue
            g = None
            for c, b in zip(coeffs, h.basis):
                if c:
                    t = b.scale(c)
                    g = t if g is None else g + t
            if det(g) != 0:
                return g
        return None
    # over Q: det of a generic combination has degree <= d; vanishing on the grid {0..d}^k proves it is zero
    if (d + 1) ** k > budget:
        raise BudgetExceeded(f"grid identity test of size {(d + 1)}^{k} exceeds budget", (d + 1) ** k)
    for coeffs in _iproduct(range(d + 1), repeat=k):
        g = None
        for c, b in zip(coeffs, h.basis):
            if c:
                t = b.scale(c)
                g = t if g is None else g + t
        if g is not None and det(g) != 0:
            return g
    return None


def is_isomorphic(rho: Representation, sigma: Representation, seed: int = 0, budget: int = 10 ** 6) -> bool:
    return find_isomorphism(rho, sigma, seed, budget) is not None


# ---------------------------------------------------------------- quotients, pairs, chains

def quotient_module(amb: Representation, sub_map: Matrix) -> tuple[Representation, Matrix]:
    """M/U on the coordinate complement of U's echelon pivots; returns (quotient, projection M -> M/U)."""
    f = amb.field
    m = amb.dim
    d = sub_map.ncols
    if sub_map.nrows != m:
        raise RepcompError("submodule basis has the wrong number of rows")
    if rank(sub_map) != d:
        raise RepcompError("submodule map is not injective")
    _, piv = rref(sub_map.T)
    comp = [i for i in range(m) if i not in set(piv)]
    ecols = [tuple(f.one if r == c else f.zero for r in range(m)) for c in comp]
    full = sub_map.hstack(Matrix.from_columns(f, ecols, m)) if ecols else sub_map
    inv = full.inverse()
    proj = inv.submatrix(range(d, m), range(m))
    emb = Matrix.from_columns(f, ecols, m) if ecols else Matrix.zeros(f, m, 0)
    mats = []
    for x in amb.mats:
        img = x @ sub_map
        if not _columns_in_span(f, sub_map, img):
            raise RepcompError("subspace is not invariant")
        mats.append(proj @ x @ emb if ecols else Matrix.zeros(f, 0, 0))
    return Representation(amb.algebra, mats, m - d), proj


def _columns_in_span(field: FieldSpec, basis: Matrix, img: Matrix) -> bool:
    if basis.ncols == 0:
        return img.is_zero()
    return rank(basis.hstack(img)) == basis.ncols


def chain_hom_basis(a: ChainModule, b: ChainModule) -> list[tuple[Matrix, ...]]:
    """Morphisms of chains: alpha_k: A_k -> B_k intertwining, with g_k alpha_k = alpha_{k+1} f_k."""
    if a.length != b.length:
        raise RepcompError("chains of different lengths")
    if a.length == 0:
        return []
    f = a.reps[0].field
    r = a.length
    sizes = [b.reps[k].dim * a.reps[k].dim for k in range(r)]
    offs = [sum(sizes[:k]) for k in range(r)]
    total = sum(sizes)
    if total == 0:
        return []
    blocks = []
    for k in range(r):
        if sizes[k] == 0:
            continue
        dm = _delta_matrix(a.reps[k], b.reps[k])
        row = [None] * r
        row[k] = dm
        blocks.append(row)
    for k in range(r - 1):
        fa, gb = a.maps[k], b.maps[k]
        # g alpha_k - alpha_{k+1} f: shape (dim B_{k+1}) x (dim A_k)
        h, w = b.reps[k + 1].dim, a.reps[k].dim
        if h * w == 0:
            continue
        row = [None] * r
        if sizes[k]:
            row[k] = kron(gb, Matrix.identity(f, a.reps[k].dim))
        if sizes[k + 1]:
            row[k + 1] = -kron(Matrix.identity(f, h), fa.T)
        blocks.append(row)
    sysm = _stack(f, total, blocks, sizes)
    if sysm.nrows == 0:
        vecs = [tuple(f.one if i == j else f.zero for i in range(total)) for j in range(total)]
    else:
        vecs = kernel_basis(sysm)
    out = []
    for v in vecs:
        out.append(tuple(Matrix.from_flat(f, b.reps[k].dim, a.reps[k].dim, v[offs[k]:offs[k] + sizes[k]])
                         for k in range(r)))
    return out


def _as_chain(p: PairModule) -> ChainModule:
    return ChainModule((p.sub, p.amb), (p.map,))


def pair_hom_basis(a: PairModule, b: PairModule) -> list[tuple[Matrix, Matrix]]:
    """Pairs (alpha, beta) of intertwiners with g alpha = beta f."""
    if a.algebra != b.algebra:
        raise RepcompError("pairs over different algebras")
    return chain_hom_basis(_as_chain(a), _as_chain(b))


def pair_hom_dim(a: PairModule, b: PairModule) -> int:
    return len(pair_hom_basis(a, b))


@dataclass(frozen=True)
class BarExtReport:
    hom_u_quotient: int
    hom_ambients: int
    hom_pairs: int

    @property
    def dim(self) -> int:
        return self.hom_u_quotient - self.hom_ambients + self.hom_pairs


def bar_ext_report(a: PairModule, b: PairModule) -> BarExtReport:
    if not a.is_injective() or not b.is_injective():
        raise RepcompError("bar-Ext needs injective pairs")
    nv, _ = quotient_module(b.amb, b.map)
    rep = BarExtReport(hom_dim(a.sub, nv), hom_dim(a.amb, b.amb), pair_hom_dim(a, b))
    if rep.dim < 0:
        raise AssertionError(f"negative bar-Ext dimension {rep}")
    return rep


def bar_ext_dim(a: PairModule, b: PairModule) -> int:
    """dim Hom(U, N/V) - dim Hom(M, N) + dim Hom of pairs, for A = (U in M), B = (V in N)."""
    return bar_ext_report(a, b).dim


# ---------------------------------------------------------------- constrained derivations

def constrained_der_dim(rho: Representation, sigma: Representation, test: Representation) -> int:
    """dim of {xi in Der(rho, sigma): phi xi is inner for every phi in Hom(sigma, test)}."""
    _same_algebra(rho, sigma)
    _same_algebra(sigma, test)
    f = rho.field
    n = rho.algebra.num_generators
    d, e, m = rho.dim, sigma.dim, test.dim
    der = der_basis(rho, sigma)
    if der.dim == 0:
        return 0
    homs = hom_basis(sigma, test).basis
    if not homs or m * d == 0:
        return der.dim
    dm = _delta_matrix(rho, test)
    ann = left_kernel_basis(dm)
    if not ann:
        return der.dim
    ann_m = Matrix._raw(f, len(ann), dm.nrows, tuple(tuple(r) for r in ann))
    cols = []
    for xi in der.basis:
        col = []
        for phi in homs:
            comp = tuple(x for g in range(n) for x in (phi @ xi[g]).flat())
            col.extend(ann_m.apply(comp))
        cols.append(tuple(col))
    cond = Matrix.from_columns(f, cols)
    return der.dim - rank(cond)


def e_constrained_dim(rho: Representation, sigma: Representation, test: Representation) -> int:
    val = hom_dim(rho, sigma) + constrained_der_dim(rho, sigma, test) - rho.dim * sigma.dim
    if val < 0:
        raise AssertionError(f"negative constrained Ext dimension {val}")
    return val
