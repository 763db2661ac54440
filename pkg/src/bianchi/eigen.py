"""Simultaneous eigensystems of commuting matrices over F_q.

The decomposition is the classical recursive refinement: eigenvalues of
the first operator come from the roots of its characteristic polynomial
in the search field, the space splits into the strict kernels
ker(T - a), and the remaining operators recurse on each piece.  Leaves
give the systems with their multiplicities; whatever dimension never
acquires an eigenvalue in the field is reported as a residue rather than
silently expanded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fqmat
from .finitefield import FqElem, FqField, roots_in_field
from .gaussian import GaussianInt
from .hecke import HeckeMatrix


@dataclass
class EigenSystem:
    """One simultaneous eigensystem: prime -> eigenvalue, with multiplicity."""

    values: dict[GaussianInt, FqElem]
    multiplicity: int
    field: FqField

    def value(self, prime: GaussianInt) -> FqElem:
        return self.values[prime]

    def sort_key(self):
        return tuple(self.values[p].coeffs for p in sorted(
            self.values, key=lambda z: (z.norm(), z.re, z.im)))

    def __str__(self):
        parts = ", ".join(
            f"a_{p}={list(v.coeffs)}" for p, v in sorted(
                self.values.items(), key=lambda kv: (kv[0].norm(), kv[0].re, kv[0].im))
        )
        return f"EigenSystem({parts}; mult={self.multiplicity})"


def _hessenberg(field: FqField, M: np.ndarray) -> np.ndarray:
    """Exact upper Hessenberg form by Gaussian similarity transforms."""
    H = M.copy() % field.ell
    n = H.shape[0]
    for k in range(n - 2):
        col = H[k + 1 :, k]
        nz = np.flatnonzero(col.any(axis=-1))
        if nz.size == 0:
            continue
        piv = k + 1 + int(nz[0])
        if piv != k + 1:
            H[[k + 1, piv], :] = H[[piv, k + 1], :]
            H[:, [k + 1, piv]] = H[:, [piv, k + 1]]
        inv = field.inv(tuple(int(c) for c in H[k + 1, k]))
        rows = H[k + 2 :, :]
        coef = _scal_vec(field, inv, rows[:, k, :])
        if coef.any():
            fqmat.submul_outer(field, rows, coef, H[k + 1, :])
            # similarity: add back on the (k+1)-st column
            upd = fqmat.matmul(field, H[:, k + 2 :, :], coef[:, None, :])[:, 0, :]
            H[:, k + 1] = (H[:, k + 1] + upd) % field.ell
    return H


def _scal_vec(field: FqField, s: tuple[int, ...], v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    if field.degree == 1:
        out[:, 0] = (v[:, 0] * s[0]) % field.ell
    else:
        out[:, 0] = (v[:, 0] * s[0] + field.c * v[:, 1] * s[1]) % field.ell
        out[:, 1] = (v[:, 0] * s[1] + v[:, 1] * s[0]) % field.ell
    return out


def char_poly(M: np.ndarray, field: FqField) -> list[FqElem]:
    """Monic characteristic polynomial, constant coefficient first.

    Hessenberg reduction followed by the leading-minor recurrence; all
    arithmetic stays in the field, and the recurrence's inner sums run
    as single matrix products over the stacked lower-degree polynomials.
    """
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise ValueError("characteristic polynomial needs a square matrix")
    if n == 0:
        return [field.one()]
    H = _hessenberg(field, M)
    f = field.degree
    # polys[k] holds p_k, the char poly of the leading k x k minor
    polys = np.zeros((n + 1, n + 1, f), dtype=np.int64)
    polys[0, 0, 0] = 1
    # beta[m] = product of subdiagonal entries H[k-m+1, k-m] ... H[k, k-1]
    for k in range(1, n + 1):
        hkk = tuple(int(c) for c in H[k - 1, k - 1])
        # p_k = x * p_{k-1} - hkk * p_{k-1} - sum_m H[k-1-m, k-1] * beta_m * p_{k-1-m}
        shifted = np.zeros((n + 1, f), dtype=np.int64)
        shifted[1:] = polys[k - 1][:-1]
        term = _scal_poly(field, hkk, polys[k - 1])
        acc = (shifted - term) % field.ell
        if k >= 2:
            weights = np.zeros((k - 1, f), dtype=np.int64)
            beta = field.one().coeffs
            for m in range(1, k):
                beta = field.mul(beta, tuple(int(c) for c in H[k - m, k - m - 1]))
                if not any(beta):
                    break
                w = field.mul(beta, tuple(int(c) for c in H[k - 1 - m, k - 1]))
                weights[m - 1] = w
            if weights.any():
                stack = polys[k - 2 :: -1][: k - 1]  # p_{k-2}, p_{k-3}, ..., p_0
                upd = fqmat.matmul(field, weights[None, :, :], stack)[0]
                acc = (acc - upd) % field.ell
        polys[k] = acc
    return [field.elem(*(int(c) for c in row)) for row in polys[n]]


def _scal_poly(field: FqField, s: tuple[int, ...], poly: np.ndarray) -> np.ndarray:
    out = np.empty_like(poly)
    if field.degree == 1:
        out[:, 0] = (poly[:, 0] * s[0]) % field.ell
    else:
        out[:, 0] = (poly[:, 0] * s[0] + field.c * poly[:, 1] * s[1]) % field.ell
        out[:, 1] = (poly[:, 0] * s[1] + poly[:, 1] * s[0]) % field.ell
    return out


def eval_poly_at_matrix(poly: list[FqElem], M: np.ndarray, field: FqField) -> np.ndarray:
    """Horner evaluation of a polynomial at a matrix (for oracle tests)."""
    n = M.shape[0]
    acc = fqmat.zeros(field, n, n)
    for c in reversed(poly):
        acc = fqmat.matmul(field, acc, M)
        acc[np.arange(n), np.arange(n)] = (
            acc[np.arange(n), np.arange(n)] + np.array(c.coeffs)
        ) % field.ell
    return acc


def _kernel_of_shift(field: FqField, M: np.ndarray, a: FqElem) -> np.ndarray:
    n = M.shape[0]
    shifted = M.copy()
    idx = np.arange(n)
    shifted[idx, idx] = (shifted[idx, idx] - np.array(a.coeffs)) % field.ell
    return fqmat.nullspace(field, shifted)


def _restrict(field: FqField, T: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix of T on the invariant column span of B, in B-coordinates."""
    return fqmat.solve_in_span(field, B, fqmat.matmul(field, T, B))


class NonCommutingError(ValueError):
    pass


def simultaneous_eigensystems(
    ops: list[HeckeMatrix],
    field: FqField,
    with_residue: bool = False,
    ambient_dim: int | None = None,
):
    """All simultaneous eigensystems of a commuting family over the field.

    Operators refine left to right; output systems are sorted by their
    eigenvalue tuples.  An empty operator list leaves the whole space as
    one unconstrained system (ambient_dim must then be given).  With
    with_residue=True also returns the dimension that never acquired an
    eigenvalue in the field, so sum(multiplicities) + residue == dim.
    """
    if not ops:
        if ambient_dim is None:
            raise ValueError("empty operator list needs an explicit ambient_dim")
        systems = [EigenSystem({}, ambient_dim, field)] if ambient_dim else []
        return (systems, 0) if with_residue else systems
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise ValueError("operators act on different spaces")
    n = dims.pop()
    _check_commuting(ops, field)
    systems: list[EigenSystem] = []
    residue = 0

    def recurse(basis: np.ndarray, remaining: list[HeckeMatrix], partial: dict):
        nonlocal residue
        k = basis.shape[1]
        if k == 0:
            return
        if not remaining:
            systems.append(EigenSystem(dict(partial), k, field))
            return
        op = remaining[0]
        t_w = _restrict(field, op.matrix, basis)
        roots = roots_in_field(char_poly(t_w, field), field)
        seen: list[FqElem] = []
        accounted = 0
        for a in roots:
            if a in seen:
                continue
            seen.append(a)
            ker = _kernel_of_shift(field, t_w, a)
            if ker.shape[1] == 0:
                continue
            accounted += ker.shape[1]
            sub = fqmat.matmul(field, basis, ker)
            partial[op.prime] = a
            recurse(sub, remaining[1:], partial)
            del partial[op.prime]
        residue += k - accounted

    recurse(fqmat.eye(field, n), list(ops), {})
    systems.sort(key=lambda s: s.sort_key())
    if with_residue:
        return systems, residue
    return systems


def _check_commuting(ops: list[HeckeMatrix], field: FqField, full_limit: int = 250):
    """Pairwise commutativity; above full_limit only first-vs-rest is checked
    at full dimension (the recursion re-checks the rest on small subspaces)."""
    n = ops[0].dim
    pairs = []
    if n <= full_limit:
        pairs = [(i, j) for i in range(len(ops)) for j in range(i + 1, len(ops))]
    else:
        pairs = [(0, j) for j in range(1, len(ops))]
    for i, j in pairs:
        ab = fqmat.matmul(field, ops[i].matrix, ops[j].matrix)
        ba = fqmat.matmul(field, ops[j].matrix, ops[i].matrix)
        if not fqmat.mat_eq(ab, ba):
            raise NonCommutingError(
                f"operators for {ops[i].prime} and {ops[j].prime} do not commute"
            )


def common_eigenvector_dim(
    ops: list[HeckeMatrix], values: dict, field: FqField
) -> int:
    """Dimension of the joint eigenspace for the given eigenvalue assignment.

    Soundness oracle: a reported system must give a value >= multiplicity.
    """
    n = ops[0].dim
    basis = fqmat.eye(field, n)
    for op in ops:
        a = values[op.prime]
        t_w = _restrict(field, op.matrix, basis)
        ker = _kernel_of_shift(field, t_w, a)
        basis = fqmat.matmul(field, basis, ker)
        if basis.shape[1] == 0:
            return 0
    return basis.shape[1]
