"""Gauss-Jordan elimination over any :class:`~cosine_sine.fields.Field`.

Finite fields are exact.  Over complex doubles the pivot is the largest entry
in the column and anything below ``tol * max(1, max|M|)`` counts as zero.
"""

from __future__ import annotations

import numpy as np

from .fields import Field

__all__ = ["rref", "nullspace", "solve", "rank", "dependency", "fit"]


def rref(field: Field, M, limit: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns.

    With ``limit`` only the first ``limit`` columns are used as pivots, so
    reducing ``[A | I]`` yields ``[R | T]`` with ``T A = R``.
    """
    M = field.asarray(M).copy()
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = M.shape
    pivots: list[int] = []
    if not field.is_finite:
        cutoff = field.tol * max(1.0, float(np.abs(M).max(initial=0.0)))
    r = 0
    for c in range(cols if limit is None else min(limit, cols)):
        if r == rows:
            break
        col = M[r:, c]
        if field.is_finite:
            nz = np.flatnonzero(col)
            if nz.size == 0:
                continue
            i = r + int(nz[0])
        else:
            i = r + int(np.argmax(np.abs(col)))
            if abs(M[i, c]) <= cutoff:
                M[r:, c] = 0
                continue
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = field.mul(M[r], field.inv(M[r, c]))
        factors = M[:, c].copy()
        factors[r] = 0
        M = field.sub(M, field.mul(factors[:, None], M[r][None, :]))
        if not field.is_finite:
            M[:, c] = 0
            M[r, c] = 1
        pivots.append(c)
        r += 1
    return M, pivots


def nullspace(field: Field, M) -> np.ndarray:
    """Basis of {x : M x = 0}, one vector per row."""
    M = field.asarray(M)
    cols = M.shape[1]
    R, pivots = rref(field, M)
    free = [j for j in range(cols) if j not in pivots]
    basis = field.zeros((len(free), cols))
    for k, j in enumerate(free):
        basis[k, j] = field.from_int(1)
        for i, pc in enumerate(pivots):
            basis[k, pc] = field.neg(R[i, j])
    return basis


def solve(field: Field, A, b) -> tuple[np.ndarray | None, np.ndarray]:
    """Affine solution set of ``A x = b``: (particular or None, nullspace basis)."""
    A = field.asarray(A)
    b = field.asarray(b).reshape(-1, 1)
    R, pivots = rref(field, np.hstack([A, b]))
    cols = A.shape[1]
    basis = nullspace(field, A)
    if cols in pivots:
        return None, basis
    x = field.zeros(cols)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols]
    return x, basis


def rank(field: Field, vectors) -> int:
    V = field.asarray(vectors)
    if V.size == 0:
        return 0
    return len(rref(field, V)[1])


def dependency(field: Field, vectors) -> np.ndarray | None:
    """Coefficients ``c`` with ``sum c_i v_i = 0``, last nonzero entry -1.

    Returns None when the vectors are linearly independent.
    """
    V = field.asarray(vectors)
    basis = nullspace(field, V.T)
    if len(basis) == 0:
        return None
    c = basis[0]
    last = int(np.flatnonzero(~field.is_zero(c))[-1])
    return field.mul(c, field.neg(field.inv(c[last])))


def fit(field: Field, target, basis) -> np.ndarray | None:
    """Coefficients ``c`` with ``target = sum c_i basis_i`` or None.

    When the basis is dependent the free coefficients are set to zero.
    """
    B = field.asarray(basis)
    t = field.asarray(target)
    if B.shape[0] == 0:
        return field.zeros(0) if field.all_zero(t) else None
    x, _ = solve(field, B.T, t)
    if x is None:
        return None
    if not field.is_finite and not field.all_eq(field.dot(x, B), t):
        return None
    return x
