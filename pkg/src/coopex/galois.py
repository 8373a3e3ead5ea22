"""Arithmetic over GF(2^m) and dense linear algebra over the field.

Multiplication uses log/antilog tables built from a primitive element.
Matrices are plain lists of int rows; the sizes that show up here (packet
counts in the tens) do not justify anything heavier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import ValidationError

# Reduction polynomials with x a primitive element, per field exponent.
# m=8 is the AES polynomial x^8+x^4+x^3+x+1.
_REDUCTION_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11B,
}


class GF2m:
    """The finite field GF(2^m); addition is XOR, multiplication by tables."""

    def __init__(self, m: int = 8, poly: Optional[int] = None):
        if poly is None:
            if m not in _REDUCTION_POLY:
                raise ValidationError(f"no default reduction polynomial for m={m}")
            poly = _REDUCTION_POLY[m]
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self._build_tables()

    def _raw_mul(self, a: int, b: int) -> int:
        """Schoolbook carryless multiply with reduction; used only to
        bootstrap the tables."""
        prod = 0
        while b:
            if b & 1:
                prod ^= a
            b >>= 1
            a <<= 1
            if a & self.order:
                a ^= self.poly
        return prod

    def _build_tables(self):
        size = self.order
        self.exp = [0] * (2 * size)
        self.log = [0] * size
        if size == 2:
            self.exp[0] = self.exp[1] = 1
            self.log[1] = 0
            return
        # x itself need not generate the multiplicative group (it does not
        # for the classic m=8 polynomial 0x11b), so search for a generator.
        for g in range(2, size):
            x = 1
            seen = 0
            for i in range(size - 1):
                self.exp[i] = x
                x = self._raw_mul(x, g)
                seen += 1
                if x == 1:
                    break
            if seen == size - 1 and x == 1:
                for i, v in enumerate(self.exp[: size - 1]):
                    self.log[v] = i
                for i in range(size - 1, 2 * size - 2):
                    self.exp[i] = self.exp[i - (size - 1)]
                return
        raise ValidationError(
            f"polynomial {self.poly:#x} does not define a field of order {size}"
        )

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.exp[self.order - 1 - self.log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def __repr__(self):
        return f"GF2m(m={self.m}, poly={self.poly:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))


DEFAULT_FIELD = GF2m(8)


def field_for_instance(n: int) -> GF2m:
    """Smallest supported power-of-two field with order >= 2n."""
    for m in range(1, 9):
        if 1 << m >= 2 * n:
            return GF2m(m)
    raise ValidationError(f"no supported field of order >= {2 * n}")


@dataclass
class FieldMatrix:
    """Row-major matrix over a GF(2^m); thin wrapper for rank/solve work."""

    field: GF2m
    rows: List[List[int]]

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, field: GF2m, n: int) -> "FieldMatrix":
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)])

    def copy(self) -> "FieldMatrix":
        return FieldMatrix(self.field, [row[:] for row in self.rows])


def _scale_row(field, row, c):
    return [field.mul(c, v) for v in row]


def _axpy(field, target, c, source):
    """target += c * source, in place."""
    for idx, v in enumerate(source):
        if v:
            target[idx] ^= field.mul(c, v)


def rref(field: GF2m, rows: Sequence[Sequence[int]]):
    """Reduced row echelon form.  Returns (reduced rows, pivot columns)."""
    mat = [list(r) for r in rows]
    ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        mat[r] = _scale_row(field, mat[r], field.inv(mat[r][col]))
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                _axpy(field, mat[i], mat[i][col], mat[r])
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(mat: FieldMatrix) -> int:
    return len(rref(mat.field, mat.rows)[0])


def solve(mat: FieldMatrix, y: Sequence[int]) -> Optional[List[int]]:
    """One solution x of M x = y, or None if the system is inconsistent."""
    nrows, ncols = mat.shape
    if len(y) != nrows:
        raise ValidationError("right-hand side length does not match row count")
    aug = [list(row) + [yi] for row, yi in zip(mat.rows, y)]
    if not aug:
        return [0] * ncols
    reduced, pivots = rref(mat.field, aug)
    x = [0] * ncols
    for row, col in zip(reduced, pivots):
        if col == ncols:
            return None  # pivot in the augmented column
        x[col] = row[ncols]
    return x


def nullspace_basis(mat: FieldMatrix) -> FieldMatrix:
    """Basis of {x : M x = 0}; one row per free column (cols - rank rows)."""
    nrows, ncols = mat.shape
    reduced, pivots = rref(mat.field, mat.rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for row, col in zip(reduced, pivots):
            vec[col] = row[free]  # -row[free], but char 2
        basis.append(vec)
    return FieldMatrix(mat.field, basis)


class RowSpace:
    """Incrementally maintained row space (RLNC decoder style).

    Rows are inserted one at a time and reduced against the current
    basis; ``rank`` is the number of independent rows seen so far.
    """

    def __init__(self, field: GF2m, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivot_rows = {}  # pivot column -> normalized row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _reduce(self, vec: Sequence[int]) -> List[int]:
        vec = list(vec)
        for col, row in self.pivot_rows.items():
            if vec[col]:
                _axpy(self.field, vec, vec[col], row)
        return vec

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self._reduce(vec))

    def insert(self, vec: Sequence[int]) -> bool:
        """Add a row; returns True if it increased the rank."""
        red = self._reduce(vec)
        pivot = next((i for i, v in enumerate(red) if v), None)
        if pivot is None:
            return False
        red = _scale_row(self.field, red, self.field.inv(red[pivot]))
        for row in self.pivot_rows.values():
            if row[pivot]:
                _axpy(self.field, row, row[pivot], red)
        self.pivot_rows[pivot] = red
        return True

    def basis_rows(self) -> List[List[int]]:
        return [self.pivot_rows[c][:] for c in sorted(self.pivot_rows)]

    def random_combination(self, rng) -> List[int]:
        """Uniformly random element of the row space."""
        vec = [0] * self.ncols
        for row in self.pivot_rows.values():
            c = int(rng.integers(self.field.order))
            if c:
                _axpy(self.field, vec, c, row)
        return vec
