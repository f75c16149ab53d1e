"""Endomorphism rings, indecomposable decompositions and irreducible-component certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import product as _iproduct

from .algebra import Representation, direct_sum_many, direct_sum_witness
from .errors import BudgetExceeded, RepcompError
from .exactla import Matrix, rank, row_basis
from .homology import (e_constrained_dim, ext_dim, find_isomorphism, hom_basis, hom_dim)

SEMICONTINUITY_NOTE = (
    "vanishing at this point implies generic vanishing on every component through it, "
    "since Hom/Ext dimensions are upper semicontinuous"
)


def end_dim(rho: Representation) -> int:
    return hom_dim(rho, rho)


def orbit_dim(rho: Representation) -> int:
    """Dimension of the GL_d-orbit: d^2 minus the stabilizer (= Aut) dimension."""
    return rho.dim ** 2 - end_dim(rho)


# ---------------------------------------------------------------- indecomposability

@dataclass(frozen=True)
class IndecVerdict:
    status: str  # "yes", "no" or "unknown"
    reason: str
    split: tuple | None = None  # (kernel basis, image basis) of a Fitting power when status == "no"


def _fitting_split(phi: Matrix, d: int):
    """Return (ker phi^d, im phi^d) column bases if that decomposition is nontrivial."""
    from .exactla import kernel_basis

    p = phi ** d
    r = rank(p)
    if r == 0 or r == d:
        return None
    f = phi.field
    im = row_basis(f, p.T.rows, d)
    ker = kernel_basis(p)
    return Matrix.from_columns(f, ker), Matrix.from_columns(f, im)


def _span_contains(field, basis_vecs, vecs, length) -> bool:
    base = len(row_basis(field, basis_vecs, length)) if basis_vecs else 0
    return len(row_basis(field, list(basis_vecs) + list(vecs), length)) == base


def _local_certificate(rho: Representation, ends: tuple) -> bool:
    """True when End = K*1 + N with N = {trace 0} a nilpotent ideal, so End is local."""
    f = rho.field
    d = rho.dim
    if f.characteristic and d % f.characteristic == 0:
        return False
    ident = Matrix.identity(f, d)
    nil = []
    for b in ends:
        tr = sum((b.rows[i][i] for i in range(d)), f.zero)
        c = f(tr) * f.inv(f(d))
        nil.append(b - ident.scale(c))
    nil_vecs = row_basis(f, [n.flat() for n in nil], d * d)
    if len(nil_vecs) != len(ends) - 1:
        return False
    basis = [Matrix.from_flat(f, d, d, v) for v in nil_vecs]
    if not _span_contains(f, nil_vecs, [(x @ y).flat() for x in basis for y in basis], d * d):
        return False
    power = basis
    for _ in range(d):
        vecs = row_basis(f, [(x @ y).flat() for x in power for y in basis], d * d)
        power = [Matrix.from_flat(f, d, d, v) for v in vecs]
        if not power:
            return True
    return False


def is_indecomposable(rho: Representation, seed: int = 0, budget: int = 10 ** 5, samples: int = 32) -> IndecVerdict:
    d = rho.dim
    if d == 0:
        raise RepcompError("the zero module is not indecomposable")
    if d == 1:
        return IndecVerdict("yes", "one-dimensional")
    ends = hom_basis(rho, rho).basis
    if len(ends) == 1:
        return IndecVerdict("yes", "End is one-dimensional")
    f = rho.field
    for b in ends:
        s = _fitting_split(b, d)
        if s:
            return IndecVerdict("no", "Fitting split of an End basis element", s)
    if _local_certificate(rho, ends):
        return IndecVerdict("yes", "End is local (trace-zero part is a nilpotent ideal)")
    rng = random.Random(seed)
    for _ in range(samples):
        phi = None
        for b in ends:
            c = f(rng.randrange(f.p)) if f.is_prime else f(rng.randint(-50, 50))
            t = b.scale(c)
            phi = t if phi is None else phi + t
        s = _fitting_split(phi, d)
        if s:
            return IndecVerdict("no", "Fitting split of a random endomorphism", s)
    if f.is_prime and f.p ** len(ends) <= budget:
        for coeffs in _iproduct(range(f.p), repeat=len(ends)):
            phi = None
            for c, b in zip(coeffs, ends):
                if c:
                    t = b.scale(c)
                    phi = t if phi is None else phi + t
            if phi is None:
                continue
            s = _fitting_split(phi, d)
            if s:
                return IndecVerdict("no", "Fitting split found by exhaustive search", s)
        return IndecVerdict("yes", "every endomorphism is nilpotent or invertible (exhaustive)")
    return IndecVerdict("unknown", "no split found and End too large for exhaustive search")


# ---------------------------------------------------------------- decomposition

@dataclass(frozen=True)
class DecompositionReport:
    summands: tuple  # ((Representation, multiplicity), ...)
    witness: Matrix  # W with W^-1 rho W = direct_sum_many(expanded summands)

    def expanded(self) -> list[Representation]:
        return [r for r, k in self.summands for _ in range(k)]

    @property
    def signature(self) -> tuple:
        return tuple(sorted(((r.dim, r.dim_vector or ()), k) for r, k in self.summands))


def _vertex_adapted(rho: Representation, basis: Matrix) -> Matrix:
    """Rebase an idempotent-stable subspace so that each vertex's vectors come first, in vertex order."""
    alg = rho.algebra
    if not alg.idempotents or basis.ncols == 0:
        return basis
    f = rho.field
    cols = []
    for g in alg.idempotents:
        part = rho.mats[g] @ basis
        cols.extend(row_basis(f, part.T.rows, rho.dim))
    if len(cols) != basis.ncols:
        raise RepcompError("subspace is not stable under the idempotents")
    return Matrix.from_columns(f, cols)


def _split_recursive(rho: Representation, basis: Matrix, seed: int, budget: int, out: list) -> None:
    """Append (part, basis-in-original-coordinates) for each indecomposable piece."""
    v = is_indecomposable(rho, seed, budget)
    if v.status == "yes":
        out.append((rho, basis))
        return
    if v.status == "unknown":
        raise BudgetExceeded(f"could not certify indecomposability of a {rho.dim}-dimensional part")
    for piece in v.split:
        piece = _vertex_adapted(rho, piece)
        sub = rho.restrict(piece)
        _split_recursive(sub, basis @ piece, seed, budget, out)


def decompose(rho: Representation, seed: int = 0, budget: int = 10 ** 5) -> DecompositionReport:
    """Krull-Remak-Schmidt decomposition, summands grouped up to isomorphism."""
    f = rho.field
    if rho.dim == 0:
        return DecompositionReport((), Matrix.zeros(f, 0, 0))
    parts: list = []
    _split_recursive(rho, Matrix.identity(f, rho.dim), seed, budget, parts)
    parts.sort(key=lambda pb: (pb[0].dim, pb[0].dim_vector or (), tuple(m.rows for m in pb[0].mats)))
    groups: list = []  # [representative, [bases]]
    for part, basis in parts:
        for grp in groups:
            rep = grp[0]
            if rep.dim != part.dim:
                continue
            g = find_isomorphism(part, rep, seed, budget)
            if g is not None:
                # g part = rep g, so basis g^-1 carries rep
                grp[1].append(basis @ g.inverse())
                break
        else:
            groups.append([part, [basis]])
    summands = tuple((rep, len(bases)) for rep, bases in groups)
    expanded = [rep for rep, bases in groups for _ in bases]
    cols = [c for _, bases in groups for b in bases for c in b.columns()]
    w0 = Matrix.from_columns(f, cols)
    w = w0 @ direct_sum_witness(expanded)
    return DecompositionReport(summands, w)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class ComponentCertificate:
    verdict: str  # "certified" or "not_certified"
    reason: dict = dc_field(default_factory=dict)
    semicontinuity_note: str = SEMICONTINUITY_NOTE

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": dict(self.reason), "semicontinuity_note": self.semicontinuity_note}


def _cert(ok: bool, reason: dict, note: str = SEMICONTINUITY_NOTE) -> ComponentCertificate:
    return ComponentCertificate("certified" if ok else "not_certified", reason, note)


def orbit_closure_is_component(rho: Representation) -> ComponentCertificate:
    """Sufficient test: Ext^1(rho, rho) = 0. A failed test does not mean the closure is not a component."""
    e = ext_dim(rho, rho)
    return _cert(e == 0, {"ext_self": e}, "Ext^1 = 0 is sufficient, not necessary")


def sum_is_component(rho: Representation, sigma: Representation) -> ComponentCertificate:
    a, b = ext_dim(rho, sigma), ext_dim(sigma, rho)
    return _cert(a == 0 and b == 0, {"ext_12": a, "ext_21": b})


def xdu_membership(rho: Representation, test: Representation) -> int:
    """The u with rho in X_{d,u}: dim Hom(rho, test)."""
    return hom_dim(rho, test)


def xdu_sum_is_component(rho: Representation, sigma: Representation, test: Representation) -> ComponentCertificate:
    a = e_constrained_dim(rho, sigma, test)
    b = e_constrained_dim(sigma, rho, test)
    return _cert(a == 0 and b == 0, {"e_12": a, "e_21": b,
                                     "u_1": xdu_membership(rho, test), "u_2": xdu_membership(sigma, test)})


def reassemble(report: DecompositionReport) -> Representation:
    return direct_sum_many(report.expanded())
