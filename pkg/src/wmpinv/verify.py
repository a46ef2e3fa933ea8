"""Independent ground truth for the recursion engines.

Three layers of defense:

* ``penrose_residuals`` evaluates the four defining equations of the
  weighted Moore-Penrose inverse directly (exact yes/no per equation in
  exact fields, Frobenius norms in float64).
* ``wmp_oracle`` computes the inverse by a completely different route, a
  full-rank factorization pushed through a closed formula that needs no
  matrix square roots, and refuses to return anything that does not pass
  the four equations itself.
* ``equivalence_check`` runs both engines side by side and compares
  results and branch decisions column by column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DimensionMismatch, UnsupportedField
from .fields import FLOAT64
from .matrix import Matrix, fro_norm, gauss_inverse, max_abs_gap
from .recursion import DEFAULT_CONFIG, RecursionConfig, sweep_with_trace


@dataclass(frozen=True)
class PenroseResiduals:
    """Residuals of AXA=A, XAX=X, (MAX)*=MAX, (NXA)*=NXA.

    For exact fields each entry is a bool (True means the equation holds
    exactly); for float64, each is the Frobenius norm of the defect.
    """

    r1: object
    r2: object
    r3: object
    r4: object
    exact: bool

    def all_exact_zero(self) -> bool:
        if not self.exact:
            raise UnsupportedField("all_exact_zero applies to exact fields")
        return bool(self.r1 and self.r2 and self.r3 and self.r4)

    def max_norm(self) -> float:
        if self.exact:
            raise UnsupportedField("max_norm applies to the float field")
        return max(self.r1, self.r2, self.r3, self.r4)

    def passes(self, threshold: float) -> bool:
        """All four equations hold, exactly or within the given norm."""
        if self.exact:
            return self.all_exact_zero()
        return self.max_norm() <= threshold


def penrose_residuals(a: Matrix, x: Matrix, m_weight: Matrix, n_weight: Matrix) -> PenroseResiduals:
    """Check a candidate inverse against the four defining equations."""
    if x.rows != a.cols or x.cols != a.rows:
        raise DimensionMismatch(
            f"candidate must be {a.cols}x{a.rows}, got {x.rows}x{x.cols}"
        )
    if m_weight.rows != m_weight.cols or m_weight.rows != a.rows:
        raise DimensionMismatch("left weight has the wrong order")
    if n_weight.rows != n_weight.cols or n_weight.rows != a.cols:
        raise DimensionMismatch("right weight has the wrong order")
    ax = a @ x
    xa = x @ a
    e1 = ax @ a - a
    e2 = xa @ x - x
    t3 = m_weight @ ax
    e3 = t3.conj_transpose() - t3
    t4 = n_weight @ xa
    e4 = t4.conj_transpose() - t4
    if a.field is FLOAT64:
        return PenroseResiduals(
            fro_norm(e1), fro_norm(e2), fro_norm(e3), fro_norm(e4), exact=False
        )
    return PenroseResiduals(
        e1.is_zero_matrix(), e2.is_zero_matrix(),
        e3.is_zero_matrix(), e4.is_zero_matrix(), exact=True,
    )


def residual_threshold(a: Matrix, tol: float = 1e-8) -> float:
    """Default float acceptance threshold: tol * max(1, ||A||_F)."""
    return tol * max(1.0, fro_norm(a))


def full_rank_factorize(a: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    """Exact full-rank factorization A = F G from the reduced row echelon
    form: G keeps the nonzero rows of rref(A), F the pivot columns of A.

    Returns None for the zero matrix (rank 0).  Exact fields only; the
    oracle deliberately has no float path.
    """
    field = a.field
    if field is FLOAT64:
        raise UnsupportedField("full_rank_factorize runs in exact fields only")
    work = a.to_rows()
    n_rows, n_cols = a.rows, a.cols
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if not field.is_zero(work[i][col]):
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv_p = field.inv(work[r][col])
        work[r] = [v * inv_p for v in work[r]]
        prow = work[r]
        for i in range(n_rows):
            if i != r and not field.is_zero(work[i][col]):
                f = work[i][col]
                work[i] = [v - f * w for v, w in zip(work[i], prow)]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    if r == 0:
        return None
    g = Matrix.from_rows(work[:r], field)
    f_cols = [[a[i, j] for j in pivots] for i in range(n_rows)]
    f = Matrix.from_rows(f_cols, field)
    return f, g


def wmp_oracle(a: Matrix, m_weight: Matrix, n_weight: Matrix) -> Matrix:
    """Closed-form weighted Moore-Penrose inverse from A = F G:

        X = N^-1 G* (G N^-1 G*)^-1 (F* M F)^-1 F* M

    Chosen because it needs no square roots, so it runs entirely in exact
    arithmetic.  The result is self-checked against the four equations
    before being returned; a failure aborts, because a broken oracle is
    worse than no oracle.
    """
    fg = full_rank_factorize(a)
    if fg is None:
        return Matrix.zeros(a.cols, a.rows, a.field)
    f, g = fg
    n_inv = gauss_inverse(n_weight)
    g_star = g.conj_transpose()
    f_star = f.conj_transpose()
    s1 = gauss_inverse(g @ n_inv @ g_star)
    s2 = gauss_inverse(f_star @ m_weight @ f)
    x = n_inv @ g_star @ s1 @ s2 @ f_star @ m_weight
    res = penrose_residuals(a, x, m_weight, n_weight)
    if not res.all_exact_zero():
        raise RuntimeError(
            "oracle self-check failed: factorization inverse does not satisfy "
            f"the four defining equations ({res})"
        )
    return x


@dataclass(frozen=True)
class EquivalenceReport:
    """Side-by-side comparison of the two engines on one input."""

    exact: bool
    equal: Optional[bool]
    max_entry_gap: Optional[float]
    branch_trace_wang: Tuple[str, ...]
    branch_trace_udwadia: Tuple[str, ...]

    @property
    def traces_match(self) -> bool:
        return self.branch_trace_wang == self.branch_trace_udwadia


def equivalence_check(
    a: Matrix, m_weight: Matrix, n_weight: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> EquivalenceReport:
    """Run both engines and compare outputs and branch decisions."""
    x_w, trace_w, _ = sweep_with_trace(a, m_weight, n_weight, cfg, engine="wang")
    x_u, trace_u, _ = sweep_with_trace(a, m_weight, n_weight, cfg, engine="udwadia")
    if a.field is FLOAT64:
        gap = max_abs_gap(x_w, x_u)
        return EquivalenceReport(
            exact=False, equal=None, max_entry_gap=gap,
            branch_trace_wang=trace_w, branch_trace_udwadia=trace_u,
        )
    return EquivalenceReport(
        exact=True, equal=(x_w == x_u), max_entry_gap=None,
        branch_trace_wang=trace_w, branch_trace_udwadia=trace_u,
    )
