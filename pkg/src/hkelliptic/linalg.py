"""Row reduction over the encoded finite fields of :mod:`hkelliptic.fields`."""
from __future__ import annotations

import numpy as np

from .fields import FieldCtx


def row_reduce(ctx: FieldCtx, mat, reduced: bool = True) -> tuple[np.ndarray, list[int]]:
    """Echelon form of ``mat`` with leftmost pivots.

    Returns ``(rows, pivots)`` where ``rows`` holds the nonzero echelon rows
    (normalized to pivot 1) and ``pivots`` their pivot columns.  With
    ``reduced=True`` the result is the unique reduced row echelon form, so it
    does not depend on the order of the input rows.
    """
    m = np.array(mat, dtype=np.int64, copy=True)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        return np.zeros((0, m.shape[1] if m.ndim == 2 else 0), dtype=np.int64), []
    nrows, ncols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = ctx.vmul(ctx.inv(lead), m[r])
        col = m[:, c].copy()
        col[r] = 0
        if not reduced:
            col[:r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = ctx.vsub(m[hit], ctx.vmul(col[hit, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(ctx: FieldCtx, mat) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    return len(row_reduce(ctx, mat, reduced=False)[1])


def kernel_dim(ctx: FieldCtx, mat) -> int:
    """Dimension of the left kernel {v : v @ mat = 0} (rows are the source)."""
    mat = np.asarray(mat)
    return mat.shape[0] - rank(ctx, mat)
