"""Finitely presented algebras, their matrix representations, and pair/chain modules."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Sequence

from .errors import RepcompError
from .exactla import Matrix, block_diag, rank
from .field import FieldSpec

Word = tuple


@dataclass(frozen=True)
class NCPoly:
    """Noncommutative polynomial: a sum of coefficient * word, words being tuples of generator indices."""

    field: FieldSpec
    terms: tuple  # ((coef, word), ...) sorted by word, no zero coefficients, distinct words

    @classmethod
    def from_terms(cls, field: FieldSpec, terms) -> "NCPoly":
        acc: dict = {}
        for c, w in terms:
            w = tuple(int(i) for i in w)
            acc[w] = field(acc.get(w, 0) + field(c))
        return cls(field, tuple((c, w) for w, c in sorted(acc.items(), key=lambda t: (len(t[0]), t[0])) if c != 0))

    @classmethod
    def word(cls, field: FieldSpec, w: Sequence[int], c=1) -> "NCPoly":
        return cls.from_terms(field, [(c, w)])

    @classmethod
    def constant(cls, field: FieldSpec, c) -> "NCPoly":
        return cls.from_terms(field, [(c, ())])

    def __add__(self, other: "NCPoly") -> "NCPoly":
        return NCPoly.from_terms(self.field, list(self.terms) + list(other.terms))

    def __neg__(self) -> "NCPoly":
        return NCPoly.from_terms(self.field, [(-c, w) for c, w in self.terms])

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        return NCPoly.from_terms(self.field, [(a * b, u + v) for a, u in self.terms for b, v in other.terms])

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(w) for _, w in self.terms), default=-1)

    def generators_used(self) -> set[int]:
        return {i for _, w in self.terms for i in w}

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, w in self.terms:
            mono = "*".join(names[i] for i in w) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


@dataclass(frozen=True)
class QuiverData:
    vertices: tuple
    arrows: tuple  # ((name, src, tgt), ...)


@dataclass(frozen=True)
class AlgebraPresentation:
    """K<x_1..x_N>/I with an optional complete set of orthogonal idempotents among the generators."""

    field: FieldSpec
    generator_names: tuple
    relations: tuple
    idempotents: tuple | None = None  # generator indices of e^1..e^n
    quiver: QuiverData | None = None

    def __post_init__(self) -> None:
        n = len(self.generator_names)
        for r in self.relations:
            if r.field != self.field:
                raise RepcompError("relation over a different field")
            for i in r.generators_used():
                if not 0 <= i < n:
                    raise RepcompError(f"relation uses generator {i}, only {n} exist")
        if self.idempotents is not None:
            for i in self.idempotents:
                if not 0 <= i < n:
                    raise RepcompError(f"idempotent index {i} out of range")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    def gen(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise RepcompError(f"unknown generator {name!r}") from None

    @property
    def num_vertices(self) -> int:
        return len(self.idempotents) if self.idempotents else 0


def free_algebra(field: FieldSpec, names: Sequence[str], relations: Sequence[Sequence] = ()) -> AlgebraPresentation:
    """Presentation from relations given as [(coef, word), ...] lists."""
    rels = tuple(NCPoly.from_terms(field, r) for r in relations)
    return AlgebraPresentation(field, tuple(names), rels)


def idempotent_relations(field: FieldSpec, idem: Sequence[int]) -> list[NCPoly]:
    rels = []
    for i in idem:
        for j in idem:
            terms = [(1, (i, j))]
            if i == j:
                terms.append((-1, (i,)))
            rels.append(NCPoly.from_terms(field, terms))
    rels.append(NCPoly.from_terms(field, [(1, (i,)) for i in idem] + [(-1, ())]))
    return rels


def compile_quiver(field: FieldSpec, vertices: Sequence, arrows: Sequence, relations: Sequence = ()) -> AlgebraPresentation:
    """Path algebra KQ/I as a presentation.

    ``arrows`` is a list of (name, src, tgt). Each relation is a list of
    (coef, path) where path lists arrow names in travel order; the empty path
    is not allowed (use vertex idempotents via their generator names instead).
    Generators are the vertex idempotents ``e_<v>`` followed by the arrows.
    """
    vertices = tuple(vertices)
    if len(set(vertices)) != len(vertices):
        raise RepcompError("duplicate vertex")
    vindex = {v: k for k, v in enumerate(vertices)}
    arrows = tuple((str(a), s, t) for a, s, t in arrows)
    names = [f"e_{v}" for v in vertices] + [a for a, _, _ in arrows]
    if len(set(names)) != len(names):
        raise RepcompError("duplicate generator name")
    aindex = {a: len(vertices) + k for k, (a, _, _) in enumerate(arrows)}
    for a, s, t in arrows:
        if s not in vindex or t not in vindex:
            raise RepcompError(f"arrow {a} has an unknown endpoint")
    idem = tuple(range(len(vertices)))
    rels = idempotent_relations(field, idem)
    for a, s, t in arrows:
        x = aindex[a]
        rels.append(NCPoly.from_terms(field, [(1, (x, vindex[s])), (-1, (x,))]))
        rels.append(NCPoly.from_terms(field, [(1, (vindex[t], x)), (-1, (x,))]))
    arrow_ends = {a: (s, t) for a, s, t in arrows}
    for rel in relations:
        terms = []
        for c, path in rel:
            path = list(path)
            for a in path:
                if a not in arrow_ends:
                    raise RepcompError(f"relation uses unknown arrow {a!r}")
            for a, b in zip(path, path[1:]):
                if arrow_ends[a][1] != arrow_ends[b][0]:
                    raise RepcompError(f"path {path} is not composable at {a}->{b}")
            if not path:
                raise RepcompError("empty path in relation")
            # travel order a1 a2 ... acts as A_k ... A_1
            terms.append((c, tuple(aindex[a] for a in reversed(path))))
        rels.append(NCPoly.from_terms(field, terms))
    return AlgebraPresentation(field, tuple(names), tuple(rels), idem, QuiverData(vertices, arrows))


# ---------------------------------------------------------------- representations

def _standard_block_sizes(alg: AlgebraPresentation, mats: Sequence[Matrix], dim: int) -> tuple | None:
    """Block sizes if the idempotent matrices are the standard E_1..E_n, else None."""
    if not alg.idempotents:
        return None
    sizes = []
    pos = 0
    for g in alg.idempotents:
        m = mats[g]
        k = 0
        while pos + k < dim and m.rows[pos + k][pos + k] == 1:
            k += 1
        sizes.append(k)
        pos += k
    if pos != dim:
        return None
    ref = standard_idempotents(alg.field, sizes)
    if any(mats[g] != e for g, e in zip(alg.idempotents, ref)):
        return None
    return tuple(sizes)


def standard_idempotents(field: FieldSpec, sizes: Sequence[int]) -> list[Matrix]:
    d = sum(sizes)
    out = []
    pos = 0
    for s in sizes:
        rows = tuple(tuple(field.one if (i == j and pos <= i < pos + s) else field.zero for j in range(d)) for i in range(d))
        out.append(Matrix._raw(field, d, d, rows))
        pos += s
    return out


class Representation:
    """A d-dimensional representation: one d x d matrix per generator."""

    __slots__ = ("algebra", "dim", "mats", "dim_vector")

    def __init__(self, algebra: AlgebraPresentation, mats: Sequence[Matrix], dim: int | None = None):
        mats = tuple(mats)
        if len(mats) != algebra.num_generators:
            raise RepcompError(f"need {algebra.num_generators} matrices, got {len(mats)}")
        if dim is None:
            dim = mats[0].nrows if mats else 0
        for m in mats:
            if m.shape != (dim, dim):
                raise RepcompError(f"matrix of shape {m.shape} in a {dim}-dimensional representation")
            if m.field != algebra.field:
                raise RepcompError("matrix over the wrong field")
        self.algebra = algebra
        self.dim = dim
        self.mats = mats
        self.dim_vector = _standard_block_sizes(algebra, mats, dim)

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def __getitem__(self, name_or_index) -> Matrix:
        if isinstance(name_or_index, str):
            name_or_index = self.algebra.gen(name_or_index)
        return self.mats[name_or_index]

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self.algebra == other.algebra and self.mats == other.mats

    def __hash__(self) -> int:
        return hash(self.mats)

    def __repr__(self) -> str:
        return f"Representation(dim={self.dim}, dimvec={self.dim_vector})"

    def conjugate(self, g: Matrix) -> "Representation":
        """g rho g^-1."""
        gi = g.inverse()
        return Representation(self.algebra, [g @ m @ gi for m in self.mats], self.dim)

    def restrict(self, basis: Matrix) -> "Representation":
        """Action on the invariant subspace spanned by the columns of ``basis`` (full column rank)."""
        from .exactla import rref

        k = basis.ncols
        if k == 0:
            z = Matrix.zeros(self.field, 0, 0)
            return Representation(self.algebra, [z] * len(self.mats), 0)
        _, rows_j = rref(basis.T)
        if len(rows_j) != k:
            raise RepcompError("basis does not have full column rank")
        left = basis.submatrix(rows_j, range(k)).inverse()
        mats = []
        for m in self.mats:
            img = m @ basis
            coeff = left @ img.submatrix(rows_j, range(k))
            if basis @ coeff != img:
                raise RepcompError("subspace is not invariant")
            mats.append(coeff)
        return Representation(self.algebra, mats, k)

    @classmethod
    def zero(cls, algebra: AlgebraPresentation) -> "Representation":
        z = Matrix.zeros(algebra.field, 0, 0)
        return cls(algebra, [z] * algebra.num_generators, 0)

    @classmethod
    def from_vertex_blocks(cls, algebra: AlgebraPresentation, dimvec: Sequence[int], arrow_maps: dict) -> "Representation":
        """Quiver representation from per-arrow matrices (tgt_dim x src_dim); absent arrows act by 0."""
        q = algebra.quiver
        if q is None:
            raise RepcompError("algebra is not a compiled quiver")
        if len(dimvec) != len(q.vertices):
            raise RepcompError("dimension vector length differs from vertex count")
        field = algebra.field
        offsets = {}
        pos = 0
        for v, s in zip(q.vertices, dimvec):
            offsets[v] = (pos, s)
            pos += s
        d = pos
        mats = standard_idempotents(field, dimvec)
        for a, s, t in q.arrows:
            (so, sd), (to, td) = offsets[s], offsets[t]
            block = arrow_maps.get(a)
            rows = [[field.zero] * d for _ in range(d)]
            if block is not None:
                if not isinstance(block, Matrix):
                    block = Matrix(field, block, sd) if td else Matrix.zeros(field, 0, sd)
                if block.shape != (td, sd):
                    raise RepcompError(f"arrow {a} needs a {td}x{sd} block, got {block.shape}")
                for i in range(td):
                    for j in range(sd):
                        rows[to + i][so + j] = block.rows[i][j]
            mats.append(Matrix._raw(field, d, d, tuple(tuple(r) for r in rows)))
        return cls(algebra, mats, d)

    def arrow_block(self, arrow: str) -> Matrix:
        q = self.algebra.quiver
        if q is None or self.dim_vector is None:
            raise RepcompError("per-arrow blocks need a quiver representation in standard form")
        offs = {}
        pos = 0
        for v, s in zip(q.vertices, self.dim_vector):
            offs[v] = (pos, s)
            pos += s
        for a, s, t in q.arrows:
            if a == arrow:
                (so, sd), (to, td) = offs[s], offs[t]
                return self[a].submatrix(range(to, to + td), range(so, so + sd))
        raise RepcompError(f"unknown arrow {arrow!r}")


def eval_word(word: Sequence[int], mats: Sequence[Matrix], dim: int, field: FieldSpec) -> Matrix:
    out = None
    for i in word:
        if not 0 <= i < len(mats):
            raise IndexError(f"generator index {i} out of range")
        out = mats[i] if out is None else out @ mats[i]
    return Matrix.identity(field, dim) if out is None else out


def eval_ncpoly(f: NCPoly, rho: Representation) -> Matrix:
    """Substitute the representation's matrices into ``f``."""
    field = rho.field
    total = Matrix.zeros(field, rho.dim, rho.dim)
    cache: dict = {(): Matrix.identity(field, rho.dim)}
    for c, w in f.terms:
        if w not in cache:
            cache[w] = eval_word(w, rho.mats, rho.dim, field)
        total = total + cache[w].scale(c)
    return total


def validate_rep(alg: AlgebraPresentation, rho: Representation) -> list[int]:
    """Indices of violated relations; the empty list means the representation is valid."""
    if len(rho.mats) != alg.num_generators:
        raise RepcompError("wrong number of generator matrices")
    sizes = {m.shape for m in rho.mats}
    if len(sizes) > 1:
        raise RepcompError(f"generator matrices have different sizes: {sorted(sizes)}")
    return [k for k, r in enumerate(alg.relations) if not eval_ncpoly(r, rho).is_zero()]


def is_valid(rho: Representation) -> bool:
    return not validate_rep(rho.algebra, rho)


def dimension_vector_of(rho: Representation, idempotents: Sequence[int] | None = None) -> tuple:
    idem = idempotents if idempotents is not None else rho.algebra.idempotents
    if not idem:
        raise RepcompError("algebra has no idempotent block")
    dv = tuple(rank(rho.mats[g]) for g in idem)
    if sum(dv) != rho.dim:
        raise RepcompError(f"idempotent ranks {dv} do not sum to {rho.dim}")
    return dv


def _vertex_permutation(da: Sequence[int], db: Sequence[int]) -> list[int]:
    """Coordinate order of A (+) B that groups vertex blocks: A_1 B_1 A_2 B_2 ..."""
    order = []
    pa, pb = 0, sum(da)
    for a, b in zip(da, db):
        order.extend(range(pa, pa + a))
        order.extend(range(pb, pb + b))
        pa += a
        pb += b
    return order


def direct_sum(rho: Representation, sigma: Representation) -> Representation:
    if rho.algebra != sigma.algebra:
        raise RepcompError("direct sum of representations of different algebras")
    field = rho.field
    mats = [block_diag(field, [a, b]) for a, b in zip(rho.mats, sigma.mats)]
    if rho.dim_vector is not None and sigma.dim_vector is not None:
        order = _vertex_permutation(rho.dim_vector, sigma.dim_vector)
        mats = [m.submatrix(order, order) for m in mats]
    return Representation(rho.algebra, mats, rho.dim + sigma.dim)


def direct_sum_many(reps: Sequence[Representation], algebra: AlgebraPresentation | None = None) -> Representation:
    if not reps:
        if algebra is None:
            raise RepcompError("empty direct sum needs the algebra")
        return Representation.zero(algebra)
    out = reps[0]
    for r in reps[1:]:
        out = direct_sum(out, r)
    return out


def direct_sum_witness(reps: Sequence[Representation]) -> Matrix:
    """Permutation P with P^-1 (block-diagonal sum) P = direct_sum_many(reps)."""
    field = reps[0].field
    d = sum(r.dim for r in reps)
    if all(r.dim_vector is not None for r in reps):
        n = len(reps[0].dim_vector)
        # position of each block-diagonal coordinate in the vertex-grouped order
        starts = []
        pos = 0
        for r in reps:
            starts.append(pos)
            pos += r.dim
        order = []
        for v in range(n):
            for r, s in zip(reps, starts):
                off = s + sum(r.dim_vector[:v])
                order.extend(range(off, off + r.dim_vector[v]))
    else:
        order = list(range(d))
    rows = [[field.zero] * d for _ in range(d)]
    for new, old in enumerate(order):
        rows[old][new] = field.one
    return Matrix._raw(field, d, d, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------- pair and chain modules

@dataclass(frozen=True)
class PairModule:
    """A module map f: U -> M given by sub (U), amb (M) and the m x d matrix f."""

    sub: Representation
    amb: Representation
    map: Matrix

    def __post_init__(self) -> None:
        if self.sub.algebra != self.amb.algebra:
            raise RepcompError("pair over different algebras")
        if self.map.shape != (self.amb.dim, self.sub.dim):
            raise RepcompError(f"map has shape {self.map.shape}, expected {(self.amb.dim, self.sub.dim)}")
        for a, b in zip(self.sub.mats, self.amb.mats):
            if self.map @ a != b @ self.map:
                raise RepcompError("map does not intertwine the two representations")

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.sub.algebra

    def is_injective(self) -> bool:
        return rank(self.map) == self.sub.dim

    @classmethod
    def inclusion(cls, amb: Representation, basis: Matrix) -> "PairModule":
        return cls(amb.restrict(basis), amb, basis)


@dataclass(frozen=True)
class ChainModule:
    """U^1 -> U^2 -> ... -> U^r with intertwining maps."""

    reps: tuple
    maps: tuple

    def __post_init__(self) -> None:
        if len(self.maps) != max(len(self.reps) - 1, 0):
            raise RepcompError("a chain of r modules needs r-1 maps")
        for k, f in enumerate(self.maps):
            a, b = self.reps[k], self.reps[k + 1]
            if f.shape != (b.dim, a.dim):
                raise RepcompError(f"map {k} has the wrong shape")
            for x, y in zip(a.mats, b.mats):
                if f @ x != y @ f:
                    raise RepcompError(f"map {k} does not intertwine")

    @property
    def length(self) -> int:
        return len(self.reps)


_LAMBDA_R_CACHE: dict = {}


def chain_algebra(alg: AlgebraPresentation, r: int) -> AlgebraPresentation:
    """Lambda(r) = Lambda tensor K(1 -> 2 -> ... -> r), as a presentation.

    Generators: c_1..c_r (chain-position idempotents), f_1..f_{r-1}, then Lambda's generators.
    """
    key = (alg, r)
    if key in _LAMBDA_R_CACHE:
        return _LAMBDA_R_CACHE[key]
    field = alg.field
    names = [f"c_{i + 1}" for i in range(r)] + [f"f_{i + 1}" for i in range(r - 1)] + list(alg.generator_names)
    idem = tuple(range(r))
    off = 2 * r - 1
    rels = idempotent_relations(field, idem)
    for k in range(r - 1):
        x = r + k
        rels.append(NCPoly.from_terms(field, [(1, (x, k)), (-1, (x,))]))
        rels.append(NCPoly.from_terms(field, [(1, (k + 1, x)), (-1, (x,))]))
    for g in range(alg.num_generators):
        y = off + g
        for e in list(idem) + [r + k for k in range(r - 1)]:
            rels.append(NCPoly.from_terms(field, [(1, (y, e)), (-1, (e, y))]))
    for rel in alg.relations:
        rels.append(NCPoly.from_terms(field, [(c, tuple(off + i for i in w)) for c, w in rel.terms]))
    out = AlgebraPresentation(field, tuple(names), tuple(rels), idem)
    _LAMBDA_R_CACHE[key] = out
    return out


def chain_to_rep(ch: ChainModule) -> Representation:
    """The chain as a representation of Lambda(r); coordinates are U^1, U^2, ... in order."""
    reps = ch.reps
    r = len(reps)
    alg = chain_algebra(reps[0].algebra, r)
    field = alg.field
    dims = [u.dim for u in reps]
    total = sum(dims)
    starts = [sum(dims[:k]) for k in range(r)]
    mats = standard_idempotents(field, dims)
    for k, f in enumerate(ch.maps):
        rows = [[field.zero] * total for _ in range(total)]
        for i in range(f.nrows):
            for j in range(f.ncols):
                rows[starts[k + 1] + i][starts[k] + j] = f.rows[i][j]
        mats.append(Matrix._raw(field, total, total, tuple(tuple(x) for x in rows)))
    for g in range(reps[0].algebra.num_generators):
        mats.append(block_diag(field, [u.mats[g] for u in reps]))
    return Representation(alg, mats, total)


def pair_algebra(alg: AlgebraPresentation) -> AlgebraPresentation:
    return chain_algebra(alg, 2)


def pair_to_rep(pm: PairModule) -> Representation:
    """Lambda(2)-module of the pair, sub block first: dimension vector (d, m)."""
    return chain_to_rep(ChainModule((pm.sub, pm.amb), (pm.map,)))


# ---------------------------------------------------------------- finite field points

def enumerate_points(alg: AlgebraPresentation, d: int, limit: int = 10 ** 6):
    """Yield every valid d-dimensional representation over the prime field (brute force)."""
    field = alg.field
    if not field.is_prime:
        raise RepcompError("point enumeration needs a prime field")
    n = alg.num_generators * d * d
    if field.p ** n > limit:
        raise RepcompError(f"enumeration of {field.p}^{n} tuples exceeds the limit {limit}")
    for flat in _iproduct(range(field.p), repeat=n):
        mats = [Matrix.from_flat(field, d, d, flat[g * d * d:(g + 1) * d * d]) for g in range(alg.num_generators)]
        rho = Representation(alg, mats, d)
        if not validate_rep(alg, rho):
            yield rho


def count_points(alg: AlgebraPresentation, d: int, limit: int = 10 ** 6) -> int:
    return sum(1 for _ in enumerate_points(alg, d, limit))
