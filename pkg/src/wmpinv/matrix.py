"""Field-generic dense matrices and the block helpers the recursions use.

Matrices are immutable, stored row-major, and tagged with the field their
entries live in.  Raw element access is 0-based (``A[i, j]``); the block
helpers named after the column sweep (take_col, leading_principal, ...)
are 1-based, matching how the recursion counts columns k = 1..n.

The float64 variant routes matrix products through numpy; exact fields
always use the plain sequential loop, so exact results never depend on a
backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    SingularMatrix,
    UnsupportedField,
)
from .fields import FLOAT64, Field, RatFun, field_of_value


class Matrix:
    """Immutable dense matrix over a single scalar field."""

    __slots__ = ("rows", "cols", "field", "_d")

    def __init__(self, rows: int, cols: int, entries, field: Field):
        if rows < 1 or cols < 1:
            raise DimensionMismatch(f"matrix dimensions must be positive, got {rows}x{cols}")
        data = tuple(entries)
        if len(data) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}"
            )
        self.rows = rows
        self.cols = cols
        self.field = field
        self._d = data

    @classmethod
    def from_rows(cls, rows_data, field: Field) -> "Matrix":
        rows_data = [list(r) for r in rows_data]
        if not rows_data or not rows_data[0]:
            raise DimensionMismatch("from_rows needs at least one row and one column")
        ncols = len(rows_data[0])
        flat = []
        for r in rows_data:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
            flat.extend(r)
        return cls(len(rows_data), ncols, flat, field)

    @classmethod
    def from_int_rows(cls, rows_data, field: Field) -> "Matrix":
        """Convenience: embed integer entries through the field."""
        return cls.from_rows(
            [[field.from_int(v) for v in row] for row in rows_data], field
        )

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls(rows, cols, [field.zero] * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        z, o = field.zero, field.one
        return cls(n, n, [o if i == j else z for i in range(n) for j in range(n)], field)

    @classmethod
    def column(cls, entries, field: Field) -> "Matrix":
        entries = list(entries)
        return cls(len(entries), 1, entries, field)

    @classmethod
    def row_vector(cls, entries, field: Field) -> "Matrix":
        entries = list(entries)
        return cls(1, len(entries), entries, field)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexOutOfRange(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self._d[i * self.cols + j]

    def to_rows(self):
        c = self.cols
        return [list(self._d[i * c:(i + 1) * c]) for i in range(self.rows)]

    def entries(self):
        return self._d

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.field is other.field
            and self._d == other._d
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.field.name, self._d))

    def _check_same_field(self, other: "Matrix"):
        if self.field is not other.field:
            raise DimensionMismatch(
                f"mixed scalar fields: {self.field.name} vs {other.field.name}"
            )

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"add: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        return Matrix(
            self.rows, self.cols,
            [a + b for a, b in zip(self._d, other._d)], self.field,
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"sub: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        return Matrix(
            self.rows, self.cols,
            [a - b for a, b in zip(self._d, other._d)], self.field,
        )

    def __neg__(self):
        return Matrix(self.rows, self.cols, [-a for a in self._d], self.field)

    def scale(self, s) -> "Matrix":
        return Matrix(self.rows, self.cols, [a * s for a in self._d], self.field)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"matmul: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        if self.field is FLOAT64:
            a = np.array(self._d, dtype=float).reshape(self.rows, self.cols)
            b = np.array(other._d, dtype=float).reshape(other.rows, other.cols)
            return Matrix(self.rows, other.cols, (a @ b).ravel().tolist(), FLOAT64)
        n, k, m = self.rows, self.cols, other.cols
        ad, bd = self._d, other._d
        zero = self.field.zero
        out = []
        for i in range(n):
            arow = ad[i * k:(i + 1) * k]
            for j in range(m):
                s = zero
                for t in range(k):
                    a = arow[t]
                    if a:
                        s = s + a * bd[t * m + j]
                out.append(s)
        return Matrix(n, m, out, self.field)

    def conj_transpose(self) -> "Matrix":
        conj = self.field.conj
        c = self.cols
        out = [conj(self._d[i * c + j]) for j in range(c) for i in range(self.rows)]
        return Matrix(c, self.rows, out, self.field)

    def is_zero_matrix(self, tol: float = 0.0) -> bool:
        is_zero = self.field.is_zero
        return all(is_zero(a, tol) for a in self._d)

    def scalar(self):
        """The single entry of a 1x1 matrix."""
        if self.rows != 1 or self.cols != 1:
            raise DimensionMismatch(f"scalar() on {self.rows}x{self.cols} matrix")
        return self._d[0]

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.field.name})"


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def conj_transpose(a: Matrix) -> Matrix:
    return a.conj_transpose()


# ---------------------------------------------------------------------------
# Block helpers (1-based k, as the column sweep counts).
# ---------------------------------------------------------------------------

def take_col(a: Matrix, k: int) -> Matrix:
    """Column k of a, 1-based, as a column matrix."""
    if not 1 <= k <= a.cols:
        raise IndexOutOfRange(f"column {k} of a {a.rows}x{a.cols} matrix")
    j = k - 1
    return Matrix(a.rows, 1, [a._d[i * a.cols + j] for i in range(a.rows)], a.field)


def take_cols(a: Matrix, k: int) -> Matrix:
    """The first k columns of a."""
    if not 1 <= k <= a.cols:
        raise IndexOutOfRange(f"first {k} columns of a {a.rows}x{a.cols} matrix")
    out = []
    for i in range(a.rows):
        out.extend(a._d[i * a.cols:i * a.cols + k])
    return Matrix(a.rows, k, out, a.field)


def leading_principal(a: Matrix, k: int) -> Matrix:
    """Leading principal k x k submatrix."""
    if a.rows != a.cols:
        raise DimensionMismatch("leading_principal needs a square matrix")
    if not 1 <= k <= a.rows:
        raise IndexOutOfRange(f"order-{k} leading block of a {a.rows}x{a.rows} matrix")
    out = []
    for i in range(k):
        out.extend(a._d[i * a.cols:i * a.cols + k])
    return Matrix(k, k, out, a.field)


def border_column(a: Matrix, k: int) -> Matrix:
    """First k-1 entries of column k: the border of the k-th leading block."""
    if a.rows != a.cols:
        raise DimensionMismatch("border_column needs a square matrix")
    if not 2 <= k <= a.rows:
        raise IndexOutOfRange(f"border column {k} of a {a.rows}x{a.rows} matrix")
    j = k - 1
    return Matrix(k - 1, 1, [a._d[i * a.cols + j] for i in range(k - 1)], a.field)


def corner(a: Matrix, k: int):
    """Diagonal entry (k, k), 1-based."""
    if not (1 <= k <= a.rows and k <= a.cols):
        raise IndexOutOfRange(f"corner {k} of a {a.rows}x{a.cols} matrix")
    return a._d[(k - 1) * a.cols + (k - 1)]


def hstack(a: Matrix, b: Matrix) -> Matrix:
    a._check_same_field(b)
    if a.rows != b.rows:
        raise DimensionMismatch(f"hstack: {a.rows} rows vs {b.rows} rows")
    out = []
    for i in range(a.rows):
        out.extend(a._d[i * a.cols:(i + 1) * a.cols])
        out.extend(b._d[i * b.cols:(i + 1) * b.cols])
    return Matrix(a.rows, a.cols + b.cols, out, a.field)


def vstack(a: Matrix, b: Matrix) -> Matrix:
    a._check_same_field(b)
    if a.cols != b.cols:
        raise DimensionMismatch(f"vstack: {a.cols} cols vs {b.cols} cols")
    return Matrix(a.rows + b.rows, a.cols, a._d + b._d, a.field)


# ---------------------------------------------------------------------------
# Inversion, SPD test, norms.
# ---------------------------------------------------------------------------

def gauss_inverse(a: Matrix, tol: float = 0.0) -> Matrix:
    """Explicit inverse by Gauss-Jordan elimination.

    Exact fields eliminate with exact division and the first nonzero pivot
    in each column; float64 uses full pivoting and treats a pivot of
    magnitude <= tol * max(1, max|a_ij|) as zero.
    """
    if a.rows != a.cols:
        raise DimensionMismatch("cannot invert a non-square matrix")
    n = a.rows
    if a.field is FLOAT64:
        return _gauss_inverse_float(a, tol)
    field = a.field
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(a.to_rows())]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not field.is_zero(aug[r][col]):
                piv = r
                break
        if piv is None:
            raise SingularMatrix(f"zero pivot in column {col + 1}")
        if piv != col:
            aug[piv], aug[col] = aug[col], aug[piv]
        inv_p = field.inv(aug[col][col])
        aug[col] = [x * inv_p for x in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if not field.is_zero(f):
                aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
    return Matrix(n, n, [x for row in aug for x in row[n:]], field)


def _gauss_inverse_float(a: Matrix, tol: float) -> Matrix:
    n = a.rows
    aug = [list(map(float, row)) + [1.0 if i == j else 0.0 for j in range(n)]
           for i, row in enumerate(a.to_rows())]
    scale = max(1.0, max(abs(x) for x in a._d))
    colperm = list(range(n))
    for step in range(n):
        # full pivot over the remaining submatrix
        best, bi, bj = -1.0, step, step
        for r in range(step, n):
            for c in range(step, n):
                v = abs(aug[r][c])
                if v > best:
                    best, bi, bj = v, r, c
        if best <= tol * scale:
            raise SingularMatrix(f"pivot {best:.3e} below tolerance at step {step + 1}")
        if bi != step:
            aug[bi], aug[step] = aug[step], aug[bi]
        if bj != step:
            for row in aug:
                row[bj], row[step] = row[step], row[bj]
            colperm[bj], colperm[step] = colperm[step], colperm[bj]
        p = aug[step][step]
        aug[step] = [x / p for x in aug[step]]
        prow = aug[step]
        for r in range(n):
            if r == step:
                continue
            f = aug[r][step]
            if f:
                aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
    # left block is now I in permuted columns: row t of the right block is
    # row colperm[t] of the true inverse
    out = [[0.0] * n for _ in range(n)]
    for t in range(n):
        out[colperm[t]] = aug[t][n:]
    return Matrix(n, n, [x for row in out for x in row], FLOAT64)


@dataclass(frozen=True)
class SpdCertificate:
    """Outcome of the symmetric positive definite test."""

    ok: bool
    failing_minor_index: Optional[int]
    symmetry_defect: float

    def __bool__(self):
        return self.ok


def _is_positive_pivot(field: Field, p) -> bool:
    if isinstance(p, Fraction):
        return p > 0
    if isinstance(p, RatFun):
        # p.d. only makes sense for constant entries in the function field
        return p.is_constant and not p.is_zero and p.constant_value() > 0
    return p > 0


def is_spd(a: Matrix, tol: float = 1e-9) -> SpdCertificate:
    """Symmetric positive definite certificate.

    Exact fields demand exact symmetry and positive leading principal
    minors (checked through elimination pivots, whose running product is
    the minor sequence).  Float64 allows a symmetry defect up to
    tol * max(1, ||a||_F) and requires positive elimination pivots.
    """
    if a.rows != a.cols:
        raise DimensionMismatch("is_spd needs a square matrix")
    n = a.rows
    field = a.field
    if field is FLOAT64:
        defect = max(
            abs(a._d[i * n + j] - a._d[j * n + i]) for i in range(n) for j in range(n)
        )
        if defect > tol * max(1.0, fro_norm(a)):
            return SpdCertificate(False, None, defect)
    else:
        sym = all(
            a._d[i * n + j] == a._d[j * n + i] for i in range(n) for j in range(i + 1, n)
        )
        if not sym:
            return SpdCertificate(False, None, float("inf"))
        defect = 0.0
    work = a.to_rows()
    for k in range(n):
        p = work[k][k]
        if not _is_positive_pivot(field, p):
            return SpdCertificate(False, k + 1, defect)
        prow = work[k]
        inv_p = field.inv(p)
        for i in range(k + 1, n):
            if not field.is_zero(work[i][k]):
                f = work[i][k] * inv_p
                work[i] = [x - f * y for x, y in zip(work[i], prow)]
    return SpdCertificate(True, None, defect)


def fro_norm(a: Matrix) -> float:
    """Frobenius norm; float64 matrices only."""
    if a.field is not FLOAT64:
        raise UnsupportedField(
            f"fro_norm is defined for float matrices, not {a.field.name}"
        )
    return math.sqrt(math.fsum(x * x for x in a._d))


def column_norm2(a: Matrix) -> float:
    """Euclidean norm of a float column (or any float matrix, flattened)."""
    if a.field is not FLOAT64:
        raise UnsupportedField("column_norm2 is defined for float matrices")
    return math.sqrt(math.fsum(x * x for x in a._d))


def max_abs_gap(a: Matrix, b: Matrix) -> float:
    """Largest entrywise |a - b| between two float matrices."""
    if a.field is not FLOAT64 or b.field is not FLOAT64:
        raise UnsupportedField("max_abs_gap compares float matrices")
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatch("max_abs_gap: shapes differ")
    return max(abs(x - y) for x, y in zip(a._d, b._d))
