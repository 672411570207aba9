"""Gaussian elimination over F_q on index arrays."""

from __future__ import annotations

import numpy as np

from .field import FieldSpec


def rref(mat, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(mat, dtype=np.int64, copy=True)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = field.mul(m[r], field.inv[m[r, c]])
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                # row_i -= m[i,c] * row_r
                m[i] = field.sub(m[i], field.mul(m[i, c], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat, field: FieldSpec) -> int:
    return len(rref(mat, field)[1])


def nullspace(mat, field: FieldSpec) -> np.ndarray:
    """Basis (as rows) of {x : mat @ x = 0}."""
    m, pivots = rref(mat, field)
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg[m[r, f]]
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)
