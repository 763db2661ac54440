"""The Manin symbol space and its quotient by the Steinberg relations.

The ambient module X = R[P^1(n)] (x) V (x) eps has one generator per
(point, weight-basis) pair.  Three families of relation rows are imposed,
one per generator x: x(I - J), x(I + S), x(I + L + L^2), where

    J = (i 0; 0 1),  S = (0 i; 1 0),  L = (1 -1; 1 0).

J and S act monomially on the weight basis, so their rows couple at most
two generators; those are absorbed first by a scalar union-find (the
degenerate case of least-fill pivoting).  The surviving rows are rewritten
over the representatives and eliminated by the blocked echelon in fqmat.
The result is a basis of free generators for H = H_0(Gamma, St (x) V (x) eps)
together with a dense projection from ambient coordinates.
"""

from __future__ import annotations

import hashlib

import numpy as np

from . import fqmat
from .finitefield import FqField
from .fixtures import torsion_check
from .gaussian import I as _I
from .gaussian import GMatrix2
from .projline import P1Table
from .weights import CharacterSpec, WeightSpace

J_MAT = GMatrix2(_I, 0, 0, 1)
S_MAT = GMatrix2(0, _I, 1, 0)
T_MAT = GMatrix2(1, 1, 0, 1)
TP_MAT = GMatrix2(1, 0, 1, 1)
L_MAT = GMatrix2(1, -1, 1, 0)
L2_MAT = L_MAT * L_MAT

Row = list[tuple[int, tuple[int, ...]]]


class RelationRows:
    """The sparse relation matrix: one row list per generator and family."""

    def __init__(self, table: P1Table, W: WeightSpace, eps: CharacterSpec, rows: list[Row]):
        self.table = table
        self.W = W
        self.eps = eps
        self.rows = rows
        self.ambient_dim = len(table) * W.dim

    def __len__(self):
        return len(self.rows)


def _act_data(table: P1Table, W: WeightSpace, eps: CharacterSpec, g: GMatrix2):
    """Per-point permutation with character fold, and the weight matrix of g^-1."""
    field = W.field
    perm = []
    for p in table.points:
        q, scaler = table.act_right(p, g)
        perm.append((table.index[q], eps.fold(scaler, field).coeffs))
    return perm, W.action(g.inverse())


def relation_rows(
    table: P1Table,
    W: WeightSpace,
    eps: CharacterSpec,
    generators: tuple[GMatrix2, ...] | None = None,
) -> RelationRows:
    """Rows x(I - J), x(I + S), x(I + L + L^2) for every generator x.

    The exact row count is 3 * |P^1| * dim V.  `generators` overrides the
    ideal generators for cross-checks (e.g. the equivalent set with
    I - T - T'); each entry is (sign_pattern, matrices) implicitly
    sign +1 except J which enters negatively.
    """
    ok, reason = torsion_check(W.spec.ell, table.level)
    if not ok:
        raise ValueError(f"torsion obstruction: {reason}")
    field = W.field
    dimv = W.dim
    # (coefficient sign, matrices in the group-ring element beyond the leading I)
    families = (
        ((-1, (J_MAT,)),)
        + ((1, (S_MAT,)),)
        + ((1, (L_MAT, L2_MAT)),)
        if generators is None
        else generators
    )
    data = []
    for sign, mats in families:
        data.append((sign, [_act_data(table, W, eps, g) for g in mats]))
    one = field.one().coeffs
    rows: list[Row] = []
    for p_idx in range(len(table)):
        for j in range(dimv):
            x = p_idx * dimv + j
            for sign, acts in data:
                row: Row = [(x, one)]
                for perm, amat in acts:
                    q_idx, fold = perm[p_idx]
                    col = amat[:, j]
                    for k in range(dimv):
                        entry = col[k]
                        if not entry.any():
                            continue
                        c = field.mul(fold, tuple(int(v) for v in entry))
                        if sign < 0:
                            c = field.neg(c)
                        row.append((q_idx * dimv + k, c))
                rows.append(row)
    return RelationRows(table, W, eps, rows)


class _UnionFind:
    """Union-find with multiplicative scalars: e_i = s_i * e_root(i)."""

    def __init__(self, n: int, field: FqField):
        self.field = field
        self.parent = list(range(n))
        self.scal = [field.one().coeffs] * n
        self.killed = bytearray(n)

    def find(self, i: int) -> tuple[int, tuple[int, ...]]:
        """Root of i and the scalar s with e_i = s * e_root; compresses."""
        start = i
        path = []
        while self.parent[i] != i:
            path.append(i)
            i = self.parent[i]
        root = i
        # Compress from the node nearest the root outward: once parent(p)
        # is the root, scal[p] is the direct scalar and composes cleanly.
        for node in reversed(path):
            p = self.parent[node]
            if p != root:
                self.scal[node] = self.field.mul(self.scal[node], self.scal[p])
                self.parent[node] = root
        if start == root:
            return root, self.field.one().coeffs
        return root, self.scal[start]

    def resolve(self, idx: int):
        """(root, scalar) or None when the class is dead."""
        r, s = self.find(idx)
        if self.killed[r]:
            return None
        return r, s

    def kill(self, root: int):
        self.killed[root] = 1

    def merge(self, r1: int, s1, r2: int, s2):
        """Impose s1 * e_r1 + s2 * e_r2 = 0 for distinct live roots."""
        field = self.field
        # e_r1 = -(s2/s1) e_r2
        coef = field.neg(field.mul(s2, field.inv(s1)))
        self.parent[r1] = r2
        self.scal[r1] = coef


def _resolve_row(uf: _UnionFind, row: Row, field: FqField) -> list[tuple[int, tuple]]:
    acc: dict[int, tuple] = {}
    for idx, c in row:
        got = uf.resolve(idx)
        if got is None:
            continue
        r, s = got
        c2 = field.mul(c, s)
        cur = acc.get(r)
        acc[r] = field.add(cur, c2) if cur is not None else c2
    return [(r, c) for r, c in acc.items() if any(c)]


class QuotientSpace:
    """H with a chosen basis of free generators and the ambient projection.

    free_indices lists the ambient generators that form the basis; P holds
    the projection of every ambient generator onto that basis, stored as
    small ints in the field's coefficient planes.
    """

    def __init__(self, field: FqField, ambient_dim: int, free_indices: list[int],
                 P: np.ndarray, meta: str = ""):
        self.field = field
        self.ambient_dim = ambient_dim
        self.free_indices = free_indices
        self.dim = len(free_indices)
        self.P = P  # (ambient, dim, degree) int8
        self.meta = meta
        h = hashlib.sha256()
        h.update(meta.encode())
        h.update(repr(free_indices).encode())
        h.update(P.tobytes())
        self.basis_hash = h.hexdigest()[:16]

    def project_index(self, idx: int) -> np.ndarray:
        """H-coordinates of the ambient generator idx, shape (dim, degree)."""
        return self.P[idx].astype(np.int64)

    def project_block(self, p_idx: int, block: np.ndarray, dimv: int) -> np.ndarray:
        """Project a per-point coefficient block (dimv, degree)."""
        rows = self.P[p_idx * dimv : (p_idx + 1) * dimv].astype(np.int64)
        return fqmat.matmul(self.field, block[None, :, :], rows)[0]

    def project(self, vec) -> np.ndarray:
        """Project a ManinVector; returns H-coordinates (dim, degree)."""
        out = np.zeros((self.dim, self.field.degree), dtype=np.int64)
        dimv = vec.W.dim
        for p_idx, block in vec.blocks.items():
            out = (out + self.project_block(p_idx, block, dimv)) % self.field.ell
        return out

    def include(self, k: int) -> int:
        """Ambient index of the k-th basis generator."""
        return self.free_indices[k]


def quotient(rel: RelationRows, block: int = 512) -> QuotientSpace:
    """Echelonize the relation rows and carve out the quotient basis.

    Rows with at most two resolved entries feed a scalar union-find (the
    cheapest pivots first); the rest are rewritten over class
    representatives and eliminated by blocked RREF.  Pivots always take
    the lowest available column, so the basis is deterministic for a
    fixed generator order.
    """
    field = rel.W.field
    ambient = rel.ambient_dim
    uf = _UnionFind(ambient, field)
    pending: list[Row] = []
    for row in rel.rows:
        resolved = _resolve_row(uf, row, field)
        if len(resolved) <= 2:
            _apply_short(uf, resolved, field)
        else:
            pending.append(row)
    # merges may have shortened buffered rows; iterate to a fixpoint
    while True:
        nxt: list[Row] = []
        changed = False
        for row in pending:
            resolved = _resolve_row(uf, row, field)
            if len(resolved) <= 2:
                _apply_short(uf, resolved, field)
                changed = True
            else:
                nxt.append(row)
        pending = nxt
        if not changed:
            break

    # freeze the union-find; number the live representatives
    reduced_id: dict[int, int] = {}
    for idx in range(ambient):
        got = uf.resolve(idx)
        if got is not None and got[0] not in reduced_id and got[0] == idx:
            reduced_id[idx] = len(reduced_id)
    m = len(reduced_id)

    ech = fqmat.FqEchelon(field, m)
    buf = np.zeros((block, m, field.degree), dtype=np.int64)
    fill = 0
    for row in pending:
        resolved = _resolve_row(uf, row, field)
        if not resolved:
            continue
        for r, c in resolved:
            buf[fill, reduced_id[r]] = c
        fill += 1
        if fill == block:
            ech.add_block(buf)
            buf = np.zeros((block, m, field.degree), dtype=np.int64)
            fill = 0
    if fill:
        ech.add_block(buf[:fill])

    free_cols = ech.free_columns()
    free_pos = {c: t for t, c in enumerate(free_cols)}
    dim_h = len(free_cols)
    rep_of_reduced = {v: k for k, v in reduced_id.items()}
    free_indices = [rep_of_reduced[c] for c in free_cols]

    # rows of the reduced space expressed on the free basis
    rows_m = np.zeros((m, dim_h, field.degree), dtype=np.int64)
    for c in free_cols:
        rows_m[c, free_pos[c], 0] = 1
    free_arr = np.array(free_cols, dtype=np.int64)
    for c in ech.pivcols:
        r = ech.pivrow_of_col[c]
        if dim_h:
            rows_m[c] = (-ech.rows[r][free_arr].astype(np.int64)) % field.ell

    # gather per-ambient scalars and representative ids, then expand
    P = np.zeros((ambient, dim_h, field.degree), dtype=np.int8)
    if dim_h:
        rid = np.zeros(ambient, dtype=np.int64)
        scal = np.zeros((ambient, field.degree), dtype=np.int64)
        live = np.zeros(ambient, dtype=bool)
        for idx in range(ambient):
            got = uf.resolve(idx)
            if got is None:
                continue
            r, s = got
            rid[idx] = reduced_id[r]
            scal[idx] = s
            live[idx] = True
        for lo in range(0, ambient, 4096):
            hi = min(lo + 4096, ambient)
            rows_part = rows_m[rid[lo:hi]]
            s_part = scal[lo:hi][:, None, :]
            if field.degree == 1:
                vals = (rows_part[..., 0] * s_part[..., 0]) % field.ell
                P[lo:hi, :, 0] = np.where(live[lo:hi, None], vals, 0)
            else:
                r0, r1 = rows_part[..., 0], rows_part[..., 1]
                s0, s1 = s_part[..., 0], s_part[..., 1]
                v0 = (r0 * s0 + field.c * r1 * s1) % field.ell
                v1 = (r0 * s1 + r1 * s0) % field.ell
                P[lo:hi, :, 0] = np.where(live[lo:hi, None], v0, 0)
                P[lo:hi, :, 1] = np.where(live[lo:hi, None], v1, 0)

    meta = (
        f"level={rel.table.level} weight={rel.W.spec} eps={rel.eps} "
        f"field=({field.ell},{field.degree},{field.c})"
    )
    return QuotientSpace(field, ambient, free_indices, P, meta)


def _apply_short(uf: _UnionFind, resolved, field: FqField):
    if not resolved:
        return
    if len(resolved) == 1:
        (r, c), = resolved
        uf.kill(r)
        return
    (r1, c1), (r2, c2) = resolved
    uf.merge(r1, c1, r2, c2)


def project(vec, q: QuotientSpace) -> np.ndarray:
    """Linear projection ambient -> H killing every relation row."""
    return q.project(vec)


def homology_space(table: P1Table, W: WeightSpace, eps: CharacterSpec) -> QuotientSpace:
    """Build H = H_0(Gamma, St (x) V (x) eps) for the given level data."""
    return quotient(relation_rows(table, W, eps))
