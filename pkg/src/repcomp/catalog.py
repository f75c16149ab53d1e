"""Built-in algebras and modules used by the examples, tests and CLI."""

from __future__ import annotations

import random
from typing import Sequence

from .algebra import (AlgebraPresentation, PairModule, Representation, compile_quiver, direct_sum_many,
                      free_algebra)
from .exactla import Matrix, random_invertible, random_matrix
from .field import FieldSpec


def truncated_poly(field: FieldSpec, n: int = 4) -> AlgebraPresentation:
    """K[X]/(X^n) on one generator ``X``."""
    return free_algebra(field, ["X"], [[(1, (0,) * n)]])


def truncated_poly_quiver(field: FieldSpec, n: int = 4) -> AlgebraPresentation:
    """K[X]/(X^n) as a loop quiver with one vertex."""
    return compile_quiver(field, [1], [("X", 1, 1)], [[(1, ["X"] * n)]])


def jordan_block(field: FieldSpec, k: int, eigenvalue=0) -> Matrix:
    """k x k matrix with ``eigenvalue`` on the diagonal and ones just above it."""
    return Matrix(field, [[eigenvalue if i == j else (1 if j == i + 1 else 0) for j in range(k)] for i in range(k)])


def uniserial(alg: AlgebraPresentation, k: int) -> Representation:
    """The length-k module K[X]/(X^k) over a one-generator algebra (or its loop-quiver form)."""
    field = alg.field
    if alg.quiver is not None:
        return Representation.from_vertex_blocks(alg, [k], {"X": jordan_block(field, k)})
    return Representation(alg, [jordan_block(field, k)], k)


def uniserial_sum(alg: AlgebraPresentation, parts: Sequence[int]) -> Representation:
    return direct_sum_many([uniserial(alg, k) for k in parts], alg)


def linear_quiver(field: FieldSpec, r: int = 2) -> AlgebraPresentation:
    """Path algebra of 1 -> 2 -> ... -> r (for r = 2 the upper-triangular 2x2 matrices)."""
    return compile_quiver(field, list(range(1, r + 1)), [(f"a{i}", i, i + 1) for i in range(1, r)])


def a2(field: FieldSpec) -> AlgebraPresentation:
    """Path algebra of the quiver 1 --a--> 2."""
    return compile_quiver(field, [1, 2], [("a", 1, 2)])


def a2_modules(alg: AlgebraPresentation) -> dict[str, Representation]:
    """S1 (simple at the source), S2 (simple at the sink) and the projective-injective T."""
    f = alg.field
    return {
        "S1": Representation.from_vertex_blocks(alg, [1, 0], {}),
        "S2": Representation.from_vertex_blocks(alg, [0, 1], {}),
        "T": Representation.from_vertex_blocks(alg, [1, 1], {"a": Matrix(f, [[1]])}),
    }


def semisimple(field: FieldSpec, n: int = 2) -> AlgebraPresentation:
    """K^n: n vertices and no arrows."""
    return compile_quiver(field, list(range(1, n + 1)), [])


def cusp(field: FieldSpec) -> AlgebraPresentation:
    """K<X, Y>/(X^3 - Y^2). One-dimensional points form the cuspidal curve."""
    return free_algebra(field, ["X", "Y"], [[(1, (0, 0, 0)), (-1, (1, 1))]])


def cusp_rho(alg: AlgebraPresentation) -> Representation:
    """The 2-dimensional point X = J (nilpotent Jordan block), Y = 0."""
    f = alg.field
    return Representation(alg, [jordan_block(f, 2), Matrix.zeros(f, 2, 2)], 2)


def sign_algebra(field: FieldSpec) -> AlgebraPresentation:
    """K<x, y>/(yx, (1 + x^2) x, (1 + x^2) y)."""
    return free_algebra(field, ["x", "y"], [
        [(1, (1, 0))],
        [(1, (0,)), (1, (0, 0, 0))],
        [(1, (1,)), (1, (0, 0, 1))],
    ])


def free_one(field: FieldSpec) -> AlgebraPresentation:
    return free_algebra(field, ["X"])


# ---------------------------------------------------------------- random modules

def random_partition(d: int, max_part: int, rng: random.Random) -> list[int]:
    parts = []
    left = d
    while left:
        k = rng.randint(1, min(left, max_part))
        parts.append(k)
        left -= k
    return parts


def random_truncated_module(alg: AlgebraPresentation, d: int, n: int, rng: random.Random) -> Representation:
    """Random d-dimensional K[X]/(X^n)-module: a conjugated direct sum of Jordan blocks."""
    parts = random_partition(d, n, rng)
    rho = uniserial_sum(alg, parts) if d else Representation.zero(alg)
    if d == 0 or alg.quiver is not None:
        return rho
    return rho.conjugate(random_invertible(alg.field, d, rng))


def random_quiver_rep(alg: AlgebraPresentation, dimvec: Sequence[int], rng: random.Random) -> Representation:
    """Random representation of a quiver without relations."""
    q = alg.quiver
    pos = {v: k for k, v in enumerate(q.vertices)}
    blocks = {a: random_matrix(alg.field, dimvec[pos[t]], dimvec[pos[s]], rng) for a, s, t in q.arrows}
    return Representation.from_vertex_blocks(alg, dimvec, blocks)


# ---------------------------------------------------------------- worked pair examples

def example_pair_table(field: FieldSpec) -> tuple[PairModule, PairModule]:
    """Over K[X]/(X^4): U. = (S1 = S1) and V. = (0 in S2)."""
    alg = truncated_poly(field)
    s1, s2 = uniserial(alg, 1), uniserial(alg, 2)
    zero = Representation.zero(alg)
    u = PairModule(s1, s1, Matrix.identity(field, 1))
    v = PairModule(zero, s2, Matrix.zeros(field, 2, 0))
    return u, v


def quiver_pair_triples(field: FieldSpec) -> dict[str, list[PairModule]]:
    """The two decompositions of points of Gr(S1 + S2 + T, (1, 1)) over the path algebra of 1 -> 2."""
    alg = a2(field)
    mods = a2_modules(alg)
    s1, s2, t = mods["S1"], mods["S2"], mods["T"]
    zero = Representation.zero(alg)
    ident = lambda m: PairModule(m, m, Matrix.identity(field, m.dim))
    inc0 = lambda m: PairModule(zero, m, Matrix.zeros(field, m.dim, 0))
    return {
        "X": [ident(s1), ident(s2), inc0(t)],
        "Y": [inc0(s1), inc0(s2), ident(t)],
    }


def quiver_example_module(alg: AlgebraPresentation) -> Representation:
    """M = S1 + S2 + T with dimension vector (2, 2)."""
    mods = a2_modules(alg)
    return direct_sum_many([mods["S1"], mods["S2"], mods["T"]])
