"""Column-partitioning recursions for the weighted Moore-Penrose inverse.

Two equivalent engines share one column sweep:

* ``wmp_wang``   -- Wang and Chen's recursion: the new row b* comes from
  the column residual c_k when it is nonzero, otherwise from the
  delta_k correction built out of the right weight's bordered blocks.
* ``lm_udwadia`` -- the recursive construction of the generalized
  LM-inverse after Udwadia and Phohomsiri, with its q / U quadratic
  forms on the zero branch.

Both consume the right weight incrementally through the bordered-inverse
recursion (Schur complement update of the leading principal inverse), so
no full matrix inversion ever happens inside a sweep.

Convention used throughout: the *left* weight is the m x m matrix acting
on the residual norm, the *right* weight the n x n matrix acting on the
solution norm.  For an m x n input the result is n x m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import (
    DegenerateDelta,
    DegenerateWeight,
    DimensionMismatch,
    WeightNotSPD,
)
from .fields import FLOAT64
from .matrix import (
    Matrix,
    border_column,
    column_norm2,
    corner,
    is_spd,
    leading_principal,
    take_col,
    take_cols,
    vstack,
)


@dataclass(frozen=True)
class RecursionConfig:
    """Knobs of a sweep.

    zero_tol_rel scales every float zero test; exact fields ignore it.
    validate_weights switches the SPD precheck (it is not part of the
    recursions themselves and can be turned off for benchmarking).
    """

    zero_tol_rel: float = 1e-9
    algorithm: str = "both"  # "wang" | "udwadia" | "both"
    validate_weights: bool = True


DEFAULT_CONFIG = RecursionConfig()

NONZERO = "nonzero"
ZERO = "zero"


@dataclass(frozen=True)
class WeightPartition:
    """Bordered decomposition of the order-k leading block of a weight:
    [[leading, border], [border*, corner]]."""

    leading: Matrix
    border: Matrix
    corner: object

    def assembled(self) -> Matrix:
        top = self.leading
        k = top.rows
        out = []
        for i in range(k):
            out.extend(top._d[i * k:(i + 1) * k])
            out.append(self.border[i, 0])
        bstar = self.border.conj_transpose()
        out.extend(bstar._d)
        out.append(self.corner)
        return Matrix(k + 1, k + 1, out, top.field)


def bordering(w: Matrix, k: int) -> WeightPartition:
    """The k-th bordering of a square weight, k = 2..order."""
    return WeightPartition(
        leading=leading_principal(w, k - 1),
        border=border_column(w, k),
        corner=corner(w, k),
    )


@dataclass
class BorderedInverseState:
    """Running inverse of the leading principal blocks of a weight."""

    k: int
    inv: Matrix
    last_g: object
    last_f: Optional[Matrix]


@dataclass
class IterationScratch:
    """Per-column intermediates, kept for inspection and branch tracing.

    d is the projection of the new column through the previous inverse,
    c the column residual deciding the branch (identical quantities in
    both engines), b_star the appended row.  delta / p / q / u are only
    populated by the branch that computes them.
    """

    d: Matrix
    c: Matrix
    b_star: Matrix
    branch: str
    delta: object = None
    p: Optional[Matrix] = None
    q: Optional[Matrix] = None
    u: Optional[Matrix] = None


def bordered_inverse_init(w: Matrix) -> BorderedInverseState:
    """State holding the inverse of the 1x1 leading block."""
    field = w.field
    n11 = corner(w, 1)
    if field.is_zero(n11):
        raise DegenerateWeight("leading entry of the weight is zero")
    g = field.inv(n11)
    return BorderedInverseState(k=1, inv=Matrix(1, 1, [g], field), last_g=g, last_f=None)


def bordered_inverse_step(
    state: BorderedInverseState, part: WeightPartition
) -> BorderedInverseState:
    """Grow the inverse of the leading block by one bordered row/column.

    With the previous inverse E = inv(N_{k-1}) and the new border (l, n_kk):
    g = 1 / (n_kk - l* E l), f = -g E l, and the new inverse assembles as
    [[E + f f* / g, f], [f*, g]].
    """
    field = state.inv.field
    prev_inv = state.inv
    l = part.border
    if l.rows != prev_inv.rows:
        raise DimensionMismatch(
            f"partition of order {l.rows + 1} applied to state of order {state.k}"
        )
    w = prev_inv @ l
    schur = part.corner - (l.conj_transpose() @ w).scalar()
    if field.is_zero(schur):
        raise DegenerateWeight(
            f"zero Schur complement at order {state.k + 1}: weight is not p.d."
        )
    g = field.inv(schur)
    f = w.scale(-g)
    e_block = prev_inv + (f @ f.conj_transpose()).scale(field.inv(g))
    k = state.k + 1
    out = []
    for i in range(k - 1):
        out.extend(e_block._d[i * (k - 1):(i + 1) * (k - 1)])
        out.append(f[i, 0])
    out.extend(f.conj_transpose()._d)
    out.append(g)
    return BorderedInverseState(k=k, inv=Matrix(k, k, out, field), last_g=g, last_f=f)


def bordered_inverse(w: Matrix) -> Matrix:
    """Full inverse of a square weight via the bordered recursion."""
    if w.rows != w.cols:
        raise DimensionMismatch("bordered_inverse needs a square matrix")
    state = bordered_inverse_init(w)
    for k in range(2, w.rows + 1):
        state = bordered_inverse_step(state, bordering(w, k))
    return state.inv


def _column_is_zero(col: Matrix, cfg: RecursionConfig, ref_norm: float) -> bool:
    if col.field is FLOAT64:
        return column_norm2(col) <= cfg.zero_tol_rel * ref_norm
    return col.is_zero_matrix()


def _delta_negligible(delta, field, cfg: RecursionConfig, nkk) -> bool:
    if field is FLOAT64:
        return abs(delta) <= cfg.zero_tol_rel * max(1.0, abs(nkk))
    return field.is_zero(delta)


def init_first_column(a1: Matrix, m_weight: Matrix, cfg: RecursionConfig = DEFAULT_CONFIG) -> Matrix:
    """Inverse of a single column: (a* M a)^-1 a* M, or a zero row for a
    zero column."""
    if a1.cols != 1:
        raise DimensionMismatch("init_first_column expects a column matrix")
    if m_weight.rows != m_weight.cols or m_weight.rows != a1.rows:
        raise DimensionMismatch("left weight must be square of the column length")
    field = a1.field
    if _column_is_zero(a1, cfg, 1.0):
        return Matrix.zeros(1, a1.rows, field)
    row = a1.conj_transpose() @ m_weight
    denom = (row @ a1).scalar()
    if field.is_zero(denom):
        raise DegenerateWeight("a* M a = 0 for a nonzero column: M is not p.d.")
    return row.scale(field.inv(denom))


def wang_step(
    x_prev: Matrix,
    a_prev: Matrix,
    a_k: Matrix,
    part: WeightPartition,
    ninv_prev: Matrix,
    m_weight: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> Tuple[Matrix, IterationScratch]:
    """One column step of the Wang recursion.

    Shapes: x_prev is (k-1) x m, a_prev is m x (k-1), a_k is m x 1,
    ninv_prev is the bordered inverse of part.leading.  Returns the k x m
    inverse of [a_prev | a_k] under the grown right weight.
    """
    field = x_prev.field
    d = x_prev @ a_k
    c = a_k - a_prev @ d
    l = part.border
    # u = (I - X_{k-1} A_{k-1}) N_{k-1}^{-1} l, assembled right to left
    w = ninv_prev @ l
    u = w - x_prev @ (a_prev @ w)
    ref = max(1.0, column_norm2(a_k)) if field is FLOAT64 else 1.0
    if not _column_is_zero(c, cfg, ref):
        row = c.conj_transpose() @ m_weight
        denom = (row @ c).scalar()
        if field.is_zero(denom):
            raise DegenerateWeight("c* M c = 0 for a nonzero residual: M is not p.d.")
        b_star = row.scale(field.inv(denom))
        scratch = IterationScratch(d=d, c=c, b_star=b_star, branch=NONZERO)
    else:
        d_star = d.conj_transpose()
        l_star = l.conj_transpose()
        quad = (d_star @ (part.leading @ d)).scalar()
        cross = (d_star @ l).scalar() + (l_star @ d).scalar()
        tail = (l_star @ u).scalar()
        delta = part.corner + quad - cross - tail
        if _delta_negligible(delta, field, cfg, part.corner):
            raise DegenerateDelta(
                "zero-branch denominator delta_k vanished (weight not p.d.?)"
            )
        row = d_star @ part.leading - l_star
        b_star = (row @ x_prev).scale(field.inv(delta))
        scratch = IterationScratch(d=d, c=c, b_star=b_star, branch=ZERO, delta=delta)
    x_k = vstack(x_prev - (d + u) @ b_star, b_star)
    return x_k, scratch


def udwadia_step(
    x_prev: Matrix,
    a_prev: Matrix,
    a_k: Matrix,
    part: WeightPartition,
    minv_prev: Matrix,
    l_weight: Matrix,
    m_k: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> Tuple[Matrix, IterationScratch]:
    """One column step of the LM-inverse recursion.

    part / minv_prev / m_k describe the right weight (the one bordered
    here); l_weight is the left weight used on the nonzero branch.
    """
    field = x_prev.field
    v = x_prev @ a_k
    residual = a_k - a_prev @ v
    w = minv_prev @ part.border
    p = w - x_prev @ (a_prev @ w)
    ref = max(1.0, column_norm2(a_k)) if field is FLOAT64 else 1.0
    if not _column_is_zero(residual, cfg, ref):
        row = residual.conj_transpose() @ l_weight
        denom = (row @ residual).scalar()
        if field.is_zero(denom):
            raise DegenerateWeight("d* L d = 0 for a nonzero residual: L is not p.d.")
        b_star = row.scale(field.inv(denom))
        scratch = IterationScratch(
            d=v, c=residual, b_star=b_star, branch=NONZERO, p=p
        )
    else:
        minus_one = -field.one
        q = vstack(v + p, Matrix(1, 1, [minus_one], field))
        u_mat = vstack(x_prev, Matrix.zeros(1, x_prev.cols, field))
        q_m = q.conj_transpose() @ m_k
        delta = (q_m @ q).scalar()
        if _delta_negligible(delta, field, cfg, part.corner):
            raise DegenerateDelta(
                "zero-branch denominator q* M q vanished (weight not p.d.?)"
            )
        b_star = (q_m @ u_mat).scale(field.inv(delta))
        scratch = IterationScratch(
            d=v, c=residual, b_star=b_star, branch=ZERO,
            delta=delta, p=p, q=q, u=u_mat,
        )
    x_k = vstack(x_prev - (v + p) @ b_star, b_star)
    return x_k, scratch


def _validate_inputs(a: Matrix, left: Matrix, right: Matrix, cfg: RecursionConfig):
    if left.rows != left.cols or left.rows != a.rows:
        raise DimensionMismatch(
            f"left weight must be {a.rows}x{a.rows}, got {left.rows}x{left.cols}"
        )
    if right.rows != right.cols or right.rows != a.cols:
        raise DimensionMismatch(
            f"right weight must be {a.cols}x{a.cols}, got {right.rows}x{right.cols}"
        )
    if left.field is not a.field or right.field is not a.field:
        raise DimensionMismatch("matrix and weights must share one scalar field")
    if cfg.validate_weights:
        cert = is_spd(left, tol=cfg.zero_tol_rel)
        if not cert.ok:
            raise WeightNotSPD(f"left weight is not s.p.d.: {cert}")
        cert = is_spd(right, tol=cfg.zero_tol_rel)
        if not cert.ok:
            raise WeightNotSPD(f"right weight is not s.p.d.: {cert}")


def _wang_sweep(a, left, right, cfg):
    """Yield (k, X_k, branch, scratch) for k = 1..n; scratch is None at k=1."""
    a1 = take_col(a, 1)
    x = init_first_column(a1, left, cfg)
    branch = ZERO if _column_is_zero(a1, cfg, 1.0) else NONZERO
    yield 1, x, branch, None
    if a.cols == 1:
        return
    state = bordered_inverse_init(right)
    for k in range(2, a.cols + 1):
        part = bordering(right, k)
        a_prev = take_cols(a, k - 1)
        a_k = take_col(a, k)
        x, scratch = wang_step(x, a_prev, a_k, part, state.inv, left, cfg)
        state = bordered_inverse_step(state, part)
        yield k, x, scratch.branch, scratch


def _udwadia_sweep(a, left, right, cfg):
    a1 = take_col(a, 1)
    x = init_first_column(a1, left, cfg)
    branch = ZERO if _column_is_zero(a1, cfg, 1.0) else NONZERO
    yield 1, x, branch, None
    if a.cols == 1:
        return
    state = bordered_inverse_init(right)
    for k in range(2, a.cols + 1):
        part = bordering(right, k)
        a_prev = take_cols(a, k - 1)
        a_k = take_col(a, k)
        m_k = leading_principal(right, k)
        x, scratch = udwadia_step(x, a_prev, a_k, part, state.inv, left, m_k, cfg)
        state = bordered_inverse_step(state, part)
        yield k, x, scratch.branch, scratch


def wmp_wang(
    a: Matrix, m_weight: Matrix, n_weight: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> Matrix:
    """Weighted Moore-Penrose inverse of a under (M, N) by the Wang sweep."""
    _validate_inputs(a, m_weight, n_weight, cfg)
    x = None
    for _, x, _, _ in _wang_sweep(a, m_weight, n_weight, cfg):
        pass
    return x


def lm_udwadia(
    a: Matrix, l_weight: Matrix, m_weight: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> Matrix:
    """Generalized LM-inverse of a (equal to the weighted Moore-Penrose
    inverse under (L, M)) by the Udwadia-Phohomsiri sweep."""
    _validate_inputs(a, l_weight, m_weight, cfg)
    x = None
    for _, x, _, _ in _udwadia_sweep(a, l_weight, m_weight, cfg):
        pass
    return x


def prefix_inverses(
    a: Matrix, m_weight: Matrix, n_weight: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
) -> List[Matrix]:
    """All intermediate inverses X_k of the first k columns, k = 1..n."""
    _validate_inputs(a, m_weight, n_weight, cfg)
    return [x for _, x, _, _ in _wang_sweep(a, m_weight, n_weight, cfg)]


def sweep_with_trace(
    a: Matrix, left: Matrix, right: Matrix,
    cfg: RecursionConfig = DEFAULT_CONFIG,
    engine: str = "wang",
) -> Tuple[Matrix, Tuple[str, ...], List[Optional[IterationScratch]]]:
    """Run one engine and keep the per-column branch tags and scratch."""
    _validate_inputs(a, left, right, cfg)
    sweep = _wang_sweep if engine == "wang" else _udwadia_sweep
    x = None
    branches = []
    scratches = []
    for _, x, branch, scratch in sweep(a, left, right, cfg):
        branches.append(branch)
        scratches.append(scratch)
    return x, tuple(branches), scratches
