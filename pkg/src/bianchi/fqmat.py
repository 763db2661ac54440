"""Vectorized exact linear algebra over F_l and F_{l^2}.

Matrices are numpy integer arrays of shape (n, m, f) where f is the field
degree; the trailing axis holds coefficients in the polynomial basis.  All
products route through float64 BLAS matmuls, which are exact here: entries
are reduced below l <= a few hundred and inner dimensions stay far below
the 2^53 mantissa limit.

The workhorse is FqEchelon, an incremental reduced-row-echelon builder
that accepts row blocks.  Short rows should be fed first when sparsity
matters (the homology layer does its own cheap pre-pass); within the
echelon, pivots are chosen at the lowest column index, so results are
deterministic for a fixed row order.
"""

from __future__ import annotations

import numpy as np

from .finitefield import FqElem, FqField

_CHUNK = 256  # rows per float64 matmul chunk, keeps temporaries small


def zeros(field: FqField, n: int, m: int, dtype=np.int64) -> np.ndarray:
    return np.zeros((n, m, field.degree), dtype=dtype)


def eye(field: FqField, n: int, dtype=np.int64) -> np.ndarray:
    out = zeros(field, n, n, dtype)
    out[np.arange(n), np.arange(n), 0] = 1
    return out


def to_elem(field: FqField, vec) -> FqElem:
    return field.elem(*(int(c) for c in vec))


def from_elem(x: FqElem) -> np.ndarray:
    return np.array(x.coeffs, dtype=np.int64)


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # exact float64 product of nonnegative reduced integer planes
    return a.astype(np.float64) @ b.astype(np.float64)


def matmul(field: FqField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """(n,k,f) @ (k,m,f) -> (n,m,f), reduced mod l."""
    ell = field.ell
    n = A.shape[0]
    out = np.empty((n, B.shape[1], field.degree), dtype=np.int64)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        a = A[lo:hi]
        if field.degree == 1:
            out[lo:hi, :, 0] = _mm(a[:, :, 0], B[:, :, 0]) % ell
        else:
            a0, a1 = a[:, :, 0], a[:, :, 1]
            b0, b1 = B[:, :, 0], B[:, :, 1]
            out[lo:hi, :, 0] = (_mm(a0, b0) + field.c * _mm(a1, b1)) % ell
            out[lo:hi, :, 1] = (_mm(a0, b1) + _mm(a1, b0)) % ell
    return out


def scalar_mul(field: FqField, s: tuple[int, ...], A: np.ndarray) -> np.ndarray:
    """Multiply every entry of A by the field scalar s (coefficient tuple)."""
    if field.degree == 1:
        return (A * s[0]) % field.ell
    a0, a1 = A[..., 0], A[..., 1]
    out = np.empty_like(A)
    out[..., 0] = (s[0] * a0 + field.c * s[1] * a1) % field.ell
    out[..., 1] = (s[0] * a1 + s[1] * a0) % field.ell
    return out


def submul_outer(field: FqField, B: np.ndarray, coef: np.ndarray, row: np.ndarray):
    """B -= outer(coef, row) in the field, in place, reduced mod l.

    B has shape (k, w, f), coef (k, f), row (w, f).
    """
    ell = field.ell
    if field.degree == 1:
        B[:, :, 0] = (B[:, :, 0] - coef[:, 0:1] * row[None, :, 0]) % ell
    else:
        c0, c1 = coef[:, 0:1], coef[:, 1:2]
        r0, r1 = row[None, :, 0], row[None, :, 1]
        B[:, :, 0] = (B[:, :, 0] - c0 * r0 - field.c * c1 * r1) % ell
        B[:, :, 1] = (B[:, :, 1] - c0 * r1 - c1 * r0) % ell


class FqEchelon:
    """Incremental reduced row echelon form over F_q.

    Rows arrive in blocks; the stored matrix R stays fully reduced (RREF)
    after every block, with unit pivots at self.pivcols.
    """

    def __init__(self, field: FqField, width: int):
        self.field = field
        self.width = width
        self.rows = np.zeros((0, width, field.degree), dtype=np.int8)
        self.pivcols: list[int] = []
        self.pivrow_of_col = np.full(width, -1, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivcols)

    def reduce_block(self, B: np.ndarray) -> np.ndarray:
        """Reduce a block (k, w, f) against the current echelon, mod l."""
        B = B % self.field.ell
        if self.rank and B.size:
            pc = np.array(self.pivcols)
            coef = B[:, pc, :]
            if coef.any():
                B = (B - matmul(self.field, coef, self.rows)) % self.field.ell
        return B

    def add_block(self, B: np.ndarray):
        """Absorb new relation rows, updating the echelon."""
        field = self.field
        B = self.reduce_block(np.ascontiguousarray(B, dtype=np.int64))
        k = B.shape[0]
        new_rows = []
        new_cols = []
        for i in range(k):
            row = B[i]
            nz = np.flatnonzero(row.any(axis=-1))
            # reduce against pivots created earlier in this same block
            while nz.size:
                j = int(nz[0])
                r = int(self.pivrow_of_col[j])
                if r < 0:
                    break
                prow = (
                    new_rows[r - self.rows.shape[0]]
                    if r >= self.rows.shape[0]
                    else self.rows[r].astype(np.int64)
                )
                coef = row[j].copy()
                submul_outer(field, row[None, :, :], coef[None, :], prow)
                nz = np.flatnonzero(row.any(axis=-1))
            if not nz.size:
                continue
            j = int(nz[0])
            inv = field.inv(tuple(int(c) for c in row[j]))
            row = scalar_mul(field, inv, row)
            self.pivrow_of_col[j] = self.rows.shape[0] + len(new_rows)
            self.pivcols.append(j)
            new_rows.append(row)
            new_cols.append(j)
            # clear this pivot column from the remaining block rows
            rest = B[i + 1 :]
            if rest.shape[0]:
                coef = rest[:, j, :].copy()
                if coef.any():
                    submul_outer(field, rest, coef, row)
            # and from earlier new rows of this block
            for t, earlier in enumerate(new_rows[:-1]):
                c = earlier[j]
                if c.any():
                    submul_outer(field, earlier[None, :, :], c.copy()[None, :], row)
        if not new_rows:
            return
        new_arr = np.stack(new_rows).astype(np.int8)
        # eliminate the new pivot columns from the pre-existing rows
        if self.rows.shape[0]:
            pc = np.array(new_cols)
            coef = self.rows[:, pc, :]
            if coef.any():
                upd = matmul(self.field, coef, new_arr)
                old = (self.rows.astype(np.int64) - upd) % field.ell
                self.rows = old.astype(np.int8)
        self.rows = np.concatenate([self.rows, new_arr], axis=0)

    def free_columns(self) -> list[int]:
        pivset = set(self.pivcols)
        return [j for j in range(self.width) if j not in pivset]


def rref(field: FqField, M: np.ndarray, block: int = 512):
    """RREF of a dense (n, m, f) matrix; returns (echelon object)."""
    ech = FqEchelon(field, M.shape[1])
    for lo in range(0, M.shape[0], block):
        ech.add_block(M[lo : lo + block])
    return ech


def rank(field: FqField, M: np.ndarray) -> int:
    return rref(field, M).rank


def nullspace(field: FqField, M: np.ndarray) -> np.ndarray:
    """Basis of the right kernel of M (n, m, f), as columns (m, k, f)."""
    ech = rref(field, M)
    free = ech.free_columns()
    out = zeros(field, M.shape[1], len(free))
    for t, j in enumerate(free):
        out[j, t, 0] = 1
        for p in ech.pivcols:
            r = ech.pivrow_of_col[p]
            c = ech.rows[r, j].astype(np.int64)
            if c.any():
                out[p, t] = (-c) % field.ell
    return out


def solve_in_span(field: FqField, B: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Solve B @ X = Y for X, where B (n,k,f) has full column rank.

    Raises ValueError if some column of Y leaves the span of B.
    """
    kk = B.shape[1]
    aug = np.concatenate([B, Y], axis=1)
    ech = rref(field, aug)
    piv = sorted(ech.pivcols)
    if any(p >= kk for p in piv):
        raise ValueError("right-hand side not in the span of the basis")
    if len(piv) != kk:
        raise ValueError("basis does not have full column rank")
    X = zeros(field, kk, Y.shape[1])
    for p in piv:
        r = ech.pivrow_of_col[p]
        X[p] = ech.rows[r, kk:].astype(np.int64)
    return X


def mat_eq(A: np.ndarray, B: np.ndarray) -> bool:
    return A.shape == B.shape and bool(np.all(A == B))
