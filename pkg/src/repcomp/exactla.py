"""Exact dense linear algebra over Q and F_p.

Matrices are immutable row-major tuples of canonical scalars. Elimination over
Q is fraction-free (Bareiss) on integer-scaled rows; over F_p it runs in the
compiled kernel when the modulus fits in 31 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product as _iproduct
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .field import FieldSpec, Scalar

Vector = tuple


class Matrix:
    """Dense immutable matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, field: FieldSpec, nrows: int, ncols: int, rows: tuple) -> "Matrix":
        m = object.__new__(cls)
        m.field = field
        m.nrows = nrows
        m.ncols = ncols
        m.rows = rows
        m._hash = None
        return m

    # construction
    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_flat(cls, field: FieldSpec, nrows: int, ncols: int, flat: Sequence) -> "Matrix":
        if len(flat) != nrows * ncols:
            raise ValueError("flat vector has wrong length")
        flat = tuple(flat)
        return cls._raw(field, nrows, ncols, tuple(flat[i * ncols:(i + 1) * ncols] for i in range(nrows)))

    @classmethod
    def column(cls, field: FieldSpec, vec: Sequence) -> "Matrix":
        return cls._raw(field, len(vec), 1, tuple((x,) for x in vec))

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            return cls.zeros(field, nrows or 0, 0)
        return cls._raw(field, len(cols[0]), len(cols), tuple(zip(*cols)))

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    def flat(self) -> Vector:
        return tuple(x for r in self.rows for x in r)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def to_numpy(self) -> np.ndarray:
        """int64 array of residues (prime fields only)."""
        if not self.field.is_prime:
            raise ValueError("numpy view only for prime fields")
        return np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)

    @classmethod
    def from_numpy(cls, field: FieldSpec, a: np.ndarray) -> "Matrix":
        a = np.asarray(a) % field.p
        return cls._raw(field, a.shape[0], a.shape[1], tuple(tuple(int(x) for x in r) for r in a))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix<{self.field}>({self.nrows}x{self.ncols}: {body})"

    # arithmetic
    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        if self.field.is_prime:
            p = self.field.p
            rows = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        else:
            rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix._raw(self.field, self.nrows, self.ncols, rows)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        if self.field.is_prime:
            p = self.field.p
            rows = tuple(tuple(c * a % p for a in r) for r in self.rows)
        else:
            rows = tuple(tuple(c * a for a in r) for r in self.rows)
        return Matrix._raw(self.field, self.nrows, self.ncols, rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other.rows)) if other.nrows else tuple(() for _ in range(other.ncols))
        if self.field.is_prime:
            p = self.field.p
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        else:
            z = Fraction(0)
            rows = tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), z) for c in cols) for r in self.rows)
        return Matrix._raw(self.field, self.nrows, other.ncols, rows)

    def apply(self, vec: Sequence) -> Vector:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        if self.field.is_prime:
            p = self.field.p
            return tuple(sum(a * b for a, b in zip(r, vec)) % p for r in self.rows)
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square() or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "Matrix":
        rows = tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols))
        return Matrix._raw(self.field, self.ncols, self.nrows, rows)

    def submatrix(self, I: Sequence[int], J: Sequence[int]) -> "Matrix":
        rows = tuple(tuple(self.rows[i][j] for j in J) for i in I)
        return Matrix._raw(self.field, len(I), len(J), rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.field, self.nrows, self.ncols + other.ncols,
                           tuple(a + b for a, b in zip(self.rows, other.rows)))

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix._raw(self.field, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        r, piv = rref(self.hstack(Matrix.identity(self.field, n)))
        if piv[:n] != list(range(n)) or len(piv) > n:
            raise ZeroDivisionError("matrix is singular")
        return r.submatrix(range(n), range(n, 2 * n))

    def det(self) -> Scalar:
        return det(self)

    def rank(self) -> int:
        return rank(self)


def block_diag(field: FieldSpec, blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    z = field.zero
    rows = []
    c0 = 0
    for b in blocks:
        left = (z,) * c0
        right = (z,) * (m - c0 - b.ncols)
        rows.extend(left + r + right for r in b.rows)
        c0 += b.ncols
    return Matrix._raw(field, n, m, tuple(rows))


def stack_rows(field: FieldSpec, ncols: int, mats: Sequence[Matrix]) -> Matrix:
    rows = tuple(r for m in mats for r in m.rows)
    return Matrix._raw(field, len(rows), ncols, rows)


def kron(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(f(x * y) if f.is_prime else x * y for x in ra for y in rb))
    return Matrix._raw(f, a.nrows * b.nrows, a.ncols * b.ncols, tuple(rows))


# ---------------------------------------------------------------- elimination

_KERNEL_MAX_P = 1 << 31


def _rref_rows_modp(rows: list[list[int]], ncols: int, p: int) -> tuple[list[tuple], list[int]]:
    if not rows or ncols == 0:
        return [tuple(r) for r in rows], []
    if p < _KERNEL_MAX_P:
        a = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
        piv = kernels.rref_modp(a, p)
        return [tuple(int(x) for x in r) for r in a], list(piv)
    a = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        i = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if i is None:
            continue
        a[r], a[i] = a[i], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for k in range(len(a)):
            if k != r and a[k][c]:
                f = a[k][c]
                a[k] = [(x - f * y) % p for x, y in zip(a[k], a[r])]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    return [tuple(x % p for x in row) for row in a], piv


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        den = reduce(math.lcm, (Fraction(x).denominator for x in r), 1)
        out.append([int(Fraction(x) * den) for x in r])
    return out


def _primitive_distinct(rows: list[list[int]]) -> list[list[int]]:
    """Drop zero rows and rows equal up to scaling; the row space is unchanged."""
    seen = set()
    out = []
    for r in rows:
        g = reduce(math.gcd, r, 0)
        if g == 0:
            continue
        lead = next(x for x in r if x)
        if lead < 0:
            g = -g
        key = tuple(x // g for x in r)
        if key not in seen:
            seen.add(key)
            out.append(list(key))
    return out


def _rref_rows_q(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[tuple], list[int]]:
    """Fraction-free Gauss-Jordan; every intermediate entry is a minor of the scaled input."""
    nrows = len(rows)
    a = _primitive_distinct(_integer_rows(rows))
    n = len(a)
    piv: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == n:
            break
        i = next((i for i in range(r, n) if a[i][c]), None)
        if i is None:
            continue
        a[r], a[i] = a[i], a[r]
        pr = a[r]
        pv = pr[c]
        for k in range(n):
            if k == r:
                continue
            row = a[k]
            f = row[c]
            if f == 0 and pv == prev:
                continue
            a[k] = [(pv * x - f * y) // prev for x, y in zip(row, pr)]
        prev = pv
        piv.append(c)
        r += 1
    out = []
    zero = tuple(Fraction(0) for _ in range(ncols))
    for k in range(nrows):
        if k < len(piv):
            pv = a[k][piv[k]]
            out.append(tuple(Fraction(x, pv) for x in a[k]))
        else:
            out.append(zero)
    return out, piv


def _rref_rows(field: FieldSpec, rows, ncols: int):
    if field.is_prime:
        return _rref_rows_modp([list(r) for r in rows], ncols, field.p)
    return _rref_rows_q(rows, ncols)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    rows, piv = _rref_rows(m.field, m.rows, m.ncols)
    return Matrix._raw(m.field, m.nrows, m.ncols, tuple(rows)), piv


def rank(m: Matrix) -> int:
    return len(_rref_rows(m.field, m.rows, m.ncols)[1])


def row_basis(field: FieldSpec, vectors: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Canonical basis (nonzero RREF rows) of the span of ``vectors``."""
    if not vectors:
        return []
    rows, piv = _rref_rows(field, vectors, ncols)
    return [tuple(r) for r in rows[:len(piv)]]


def _kernel_from_rref(field: FieldSpec, rows, piv: list[int], ncols: int) -> list[Vector]:
    z, o = field.zero, field.one
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [z] * ncols
        v[f] = o
        for k, c in enumerate(piv):
            v[c] = field(-rows[k][f])
        basis.append(v)
    return basis


def _big_primes(count: int) -> list[int]:
    out = []
    c = 2 ** 31 - 1
    while len(out) < count:
        if all(c % d for d in range(3, math.isqrt(c) + 1, 2)):
            out.append(c)
        c -= 2
    return out


_PRIMES = _big_primes(40)


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    """n/d with n = a d mod m and |n|, d below sqrt(m/2), or None."""
    bound = math.isqrt(m // 2)
    r0, r1, t0, t1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _kernel_q_modular(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]] | None:
    """Kernel over Q from residues mod several 31-bit primes, combined by CRT.

    Each candidate is checked exactly. Since rank mod p never exceeds rank over Q,
    n - rank_p verified independent kernel vectors prove the kernel is complete.
    Returns None when reconstruction does not settle, so the caller can fall back.
    """
    ints = [r for r in _integer_rows(rows) if any(r)]
    if not ints:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    best_piv = None
    residues: list[list[int]] = []
    modulus = 1
    for p in _PRIMES:
        a = np.array([[x % p for x in r] for r in ints], dtype=np.int64)
        piv = list(kernels.rref_modp(a, p))
        if best_piv is None or len(piv) > len(best_piv) or (len(piv) == len(best_piv) and piv < best_piv):
            # a bigger rank or an earlier pivot pattern means every previous prime was unlucky
            best_piv, residues, modulus = piv, [], 1
        elif piv != best_piv:
            continue
        free = [c for c in range(ncols) if c not in set(piv)]
        vals = []
        for j in free:
            for k, c in enumerate(piv):
                vals.append(int(-a[k, j]) % p)
        if not residues:
            residues = [v for v in vals]
            modulus = p
        else:
            inv = pow(modulus, -1, p)
            residues = [r + modulus * (((v - r) * inv) % p) for r, v in zip(residues, vals)]
            modulus *= p
        recon = [_rational_reconstruct(r, modulus) for r in residues]
        if any(x is None for x in recon):
            continue
        basis = []
        it = iter(recon)
        for j in free:
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            for c in piv:
                v[c] = next(it)
            basis.append(v)
        scaled = []
        for v in basis:
            den = reduce(math.lcm, (x.denominator for x in v), 1)
            scaled.append([(x.numerator * (den // x.denominator), k) for k, x in enumerate(v) if x])
        if all(sum(x * r[k] for x, k in sv) == 0 for sv in scaled for r in ints):
            return basis
    return None


_MODULAR_MIN_SIZE = 400


def kernel_basis(m: Matrix) -> list[Vector]:
    """Right null space, as the RREF of the kernel (leading entries 1)."""
    if not m.field.is_prime and m.nrows * m.ncols >= _MODULAR_MIN_SIZE:
        raw = _kernel_q_modular(m.rows, m.ncols)
        if raw is not None:
            return row_basis(m.field, raw, m.ncols)
    rows, piv = _rref_rows(m.field, m.rows, m.ncols)
    raw = _kernel_from_rref(m.field, rows, piv, m.ncols)
    return row_basis(m.field, raw, m.ncols)


def left_kernel_basis(m: Matrix) -> list[Vector]:
    return kernel_basis(m.T)


def nullity(m: Matrix) -> int:
    return m.ncols - rank(m)


@dataclass(frozen=True)
class AffineSolution:
    solution: Vector
    kernel: list


def solve_affine(m: Matrix, b: Sequence) -> AffineSolution | None:
    """Solve m x = b exactly; ``None`` when the system is inconsistent."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has {len(b)} entries, matrix has {m.nrows} rows")
    f = m.field
    b = tuple(f(x) for x in b)
    aug = [r + (x,) for r, x in zip(m.rows, b)]
    rows, piv = _rref_rows(f, aug, m.ncols + 1)
    if piv and piv[-1] == m.ncols:
        return None
    sol = [f.zero] * m.ncols
    for k, c in enumerate(piv):
        sol[c] = rows[k][m.ncols]
    kern = row_basis(f, _kernel_from_rref(f, [r[:m.ncols] for r in rows], piv, m.ncols), m.ncols)
    return AffineSolution(tuple(sol), kern)


def in_span(field: FieldSpec, basis: Sequence[Sequence], v: Sequence, ncols: int) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return len(row_basis(field, list(basis) + [v], ncols)) == len(row_basis(field, basis, ncols))


# ---------------------------------------------------------------- determinants

def _det_rows(field: FieldSpec, rows: Sequence[Sequence]) -> Scalar:
    n = len(rows)
    if n == 0:
        return field.one
    if n == 1:
        return rows[0][0]
    if n == 2:
        v = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        return v % field.p if field.is_prime else v
    if field.is_prime:
        p = field.p
        a = [list(r) for r in rows]
        d = 1
        for c in range(n):
            i = next((i for i in range(c, n) if a[i][c]), None)
            if i is None:
                return 0
            if i != c:
                a[c], a[i] = a[i], a[c]
                d = -d
            pv = a[c][c]
            d = d * pv % p
            inv = pow(pv, -1, p)
            for k in range(c + 1, n):
                if a[k][c]:
                    f = a[k][c] * inv % p
                    a[k] = [(x - f * y) % p for x, y in zip(a[k], a[c])]
        return d % p
    # Bareiss on integer-scaled rows
    scale = Fraction(1)
    a = []
    for r in rows:
        den = reduce(math.lcm, (Fraction(x).denominator for x in r), 1)
        scale *= den
        a.append([int(Fraction(x) * den) for x in r])
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            i = next((i for i in range(c + 1, n) if a[i][c]), None)
            if i is None:
                return Fraction(0)
            a[c], a[i] = a[i], a[c]
            sign = -sign
        pv = a[c][c]
        for k in range(c + 1, n):
            for j in range(c + 1, n):
                a[k][j] = (pv * a[k][j] - a[k][c] * a[c][j]) // prev
        prev = pv
    return Fraction(sign * a[n - 1][n - 1]) / scale


def det(m: Matrix) -> Scalar:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    return m.field(_det_rows(m.field, m.rows))


def minor(m: Matrix, I: Sequence[int], J: Sequence[int]) -> Scalar:
    """Determinant of the submatrix on rows I and columns J (0-based)."""
    if len(I) != len(J):
        raise ValueError("row and column index sets differ in size")
    if len(set(I)) != len(I) or len(set(J)) != len(J):
        raise ValueError("repeated index")
    for i in I:
        if not 0 <= i < m.nrows:
            raise IndexError(f"row index {i} out of range")
    for j in J:
        if not 0 <= j < m.ncols:
            raise IndexError(f"column index {j} out of range")
    return det(m.submatrix(I, J))


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _ordered_partitions(d: int, sizes: tuple) -> list[tuple[tuple, int]]:
    """All (mask_1..mask_n, shuffle sign) with |mask_k| = sizes[k], disjoint, covering range(d)."""
    out = []
    full = (1 << d) - 1

    def rec(k: int, remaining: int, masks: list, sign: int):
        if k == len(sizes) - 1:
            out.append((tuple(masks) + (remaining,), sign))
            return
        idx = _bits(remaining)
        for combo in combinations(idx, sizes[k]):
            mask = 0
            for i in combo:
                mask |= 1 << i
            rest = remaining & ~mask
            # inversions: element of this part greater than an element of a later part
            inv = sum(1 for a in combo for b in _bits(rest) if a > b)
            rec(k + 1, rest, masks + [mask], -sign if inv & 1 else sign)

    rec(0, full, [], 1)
    return out


def det_sum(ms: Sequence[Matrix]) -> Scalar:
    """det(M_1 + ... + M_n) via the ordered-partition expansion, never forming the sum.

    Exponential in the size; a verification tool, not a fast determinant.
    """
    if not ms:
        raise ValueError("need at least one matrix")
    field = ms[0].field
    d = ms[0].nrows
    for m in ms:
        if m.field != field:
            raise ValueError("field mismatch")
        if m.shape != (d, d):
            raise ValueError("all matrices must be square of the same size")
    n = len(ms)
    # minors[k][(rowmask, colmask)]
    masks_by_size: dict[int, list[int]] = {}
    for mask in range(1 << d):
        masks_by_size.setdefault(bin(mask).count("1"), []).append(mask)
    minors = []
    for m in ms:
        table = {}
        for s, lst in masks_by_size.items():
            for rm in lst:
                rsel = [m.rows[i] for i in _bits(rm)]
                for cm in lst:
                    cols = _bits(cm)
                    table[(rm, cm)] = _det_rows(field, [tuple(r[j] for j in cols) for r in rsel])
        minors.append(table)
    total = field.zero
    for sizes in _compositions(d, n):
        parts = _ordered_partitions(d, sizes)
        for rmasks, rs in parts:
            for cmasks, cs in parts:
                term = rs * cs
                for k in range(n):
                    v = minors[k][(rmasks[k], cmasks[k])]
                    if v == 0:
                        term = 0
                        break
                    term = term * v
                if term:
                    total = total + term
    return field(total)


def det_sum_pair(a: Matrix, b: Matrix) -> Scalar:
    """Two-matrix expansion: sum over I, J of (-1)^(sum I + sum J) minor_IJ(a) minor_I'J'(b), 1-based indices."""
    if a.shape != b.shape or not a.is_square():
        raise ValueError("need two square matrices of the same size")
    field = a.field
    d = a.nrows
    total = field.zero
    idx = range(d)
    for k in range(d + 1):
        for I in combinations(idx, k):
            Ic = [i for i in idx if i not in I]
            for J in combinations(idx, k):
                Jc = [j for j in idx if j not in J]
                sign = -1 if (sum(I) + sum(J) + 2 * k) & 1 else 1
                x = _det_rows(field, [tuple(a.rows[i][j] for j in J) for i in I])
                if x == 0:
                    continue
                y = _det_rows(field, [tuple(b.rows[i][j] for j in Jc) for i in Ic])
                total = total + sign * x * y
    return field(total)


def random_matrix(field: FieldSpec, nrows: int, ncols: int, rng, bound: int = 5) -> Matrix:
    return Matrix._raw(field, nrows, ncols, tuple(
        tuple(field.random_element(rng, bound) for _ in range(ncols)) for _ in range(nrows)))


def random_invertible(field: FieldSpec, n: int, rng, bound: int = 3) -> Matrix:
    while True:
        g = random_matrix(field, n, n, rng, bound)
        if det(g) != 0:
            return g


def all_vectors(field: FieldSpec, n: int):
    """Every vector in F_p^n, lexicographic."""
    return _iproduct(range(field.p), repeat=n)


def combine(field: FieldSpec, coeffs: Sequence, vectors: Sequence[Sequence], length: int) -> Vector:
    """Linear combination sum coeffs[k] * vectors[k]."""
    acc = [0] * length
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    acc[i] += c * x
    return tuple(field(x) for x in acc)
