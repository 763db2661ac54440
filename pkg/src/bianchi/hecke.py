"""Hecke operators T_q on the homology quotient.

For a prime q = (pi) coprime to the level, the coset matrices are the
diagonal (pi 0; 0 1) weighted by eps(pi) together with (1 x; 0 pi) for x
over a residue system mod pi.  A basis generator (p, e_j) untwists to the
modular symbol [g(0), g(oo)] with weight g.e_j for g = lift(p); each coset
matrix acts on the left, the result converts back through continued
fractions, and the projection collapses everything onto the basis.

Columns sharing a P^1 point share all their symbol geometry, so the
engine walks distinct points once and accumulates whole column blocks;
weight transport needs one memoized action matrix per continued-fraction
term (the matrices only depend on the term mod l).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import fqmat
from .finitefield import FqElem
from .gaussian import GaussianInt, GMatrix2, canonical_associate, divides, residues_mod
from .homology import QuotientSpace
from .modsym import ModSym, _primitive, cf_expand, split_symbol
from .projline import P1Table
from .weights import CharacterSpec, WeightSpace


@dataclass
class DeltaCosets:
    """Coset data for T_q: (coefficient, matrix) pairs, length N(q) + 1."""

    prime: GaussianInt
    pairs: list[tuple[FqElem, GMatrix2]]

    def __len__(self):
        return len(self.pairs)


@dataclass
class HeckeMatrix:
    """Matrix of T_q on the quotient basis, columns indexed like the basis."""

    prime: GaussianInt
    matrix: np.ndarray  # (dim, dim, degree) int64
    basis_hash: str
    meta: str = dc_field(default="")

    @property
    def dim(self):
        return self.matrix.shape[0]


def _coset_pairs(pi: GaussianInt, eps: CharacterSpec, W: WeightSpace):
    pairs = [(eps.value(pi, W.field), GMatrix2(pi, 0, 0, 1))]
    one = W.field.one()
    for x in residues_mod(pi):
        pairs.append((one, GMatrix2(1, x, 0, pi)))
    return pairs


def delta_cosets(
    prime: GaussianInt,
    eps: CharacterSpec,
    W: WeightSpace,
    level: GaussianInt,
) -> DeltaCosets:
    """Coset representatives for the double coset of determinant q.

    Rejects primes dividing the level or l: T_q only exists for q
    coprime to l * n.
    """
    pi = canonical_associate(prime)[0]
    if divides(pi, level):
        raise ValueError(f"prime {pi} divides the level {level}")
    for p_ell in W.spec.primes:
        if canonical_associate(p_ell)[0] == pi:
            raise ValueError(f"prime {pi} divides l = {W.spec.ell}")
    return DeltaCosets(pi, _coset_pairs(pi, eps, W))


def _columns_by_point(quot: QuotientSpace, dimv: int):
    """Group basis columns by their P^1 point: point -> (j list, col list)."""
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for col, amb in enumerate(quot.free_indices):
        p_idx, j = divmod(amb, dimv)
        groups.setdefault(p_idx, ([], []))[0].append(j)
        groups[p_idx][1].append(col)
    return sorted(groups.items())


def _assemble(
    cosets: DeltaCosets,
    quot: QuotientSpace,
    table: P1Table,
    W: WeightSpace,
    eps: CharacterSpec,
    col_chunk: int = 256,
) -> HeckeMatrix:
    field = W.field
    dimv = W.dim
    T = np.zeros((quot.dim, quot.dim, field.degree), dtype=np.int64)
    if quot.dim == 0:
        return HeckeMatrix(cosets.prime, T, quot.basis_hash, meta=quot.meta)
    P_t = quot.P.transpose(1, 0, 2)

    groups = _columns_by_point(quot, dimv)
    chunks: list[list] = [[]]
    count = 0
    for item in groups:
        nj = len(item[1][0])
        if chunks[-1] and count + nj > col_chunk:
            chunks.append([])
            count = 0
        chunks[-1].append(item)
        count += nj

    for chunk in chunks:
        ncols = sum(len(jl) for _, (jl, _) in chunk)
        macc = np.zeros((quot.ambient_dim, ncols, field.degree), dtype=np.int64)
        out_cols: list[int] = []
        base = 0
        for p_idx, (jlist, cols) in chunk:
            out_cols.extend(cols)
            jarr = np.array(jlist)
            sel = slice(base, base + len(jlist))
            g = table.lift(table.points[p_idx])
            for coef, delta in cosets.pairs:
                m = delta * g
                sym = ModSym(_primitive((m.b, m.d)), _primitive((m.a, m.c)))
                for sign, col in split_symbol(sym):
                    for gamma in cf_expand(*col).gammas:
                        q_idx, scaler = table.index_of(*gamma.bottom_row())
                        coeff = coef * eps.fold(scaler, field)
                        if sign < 0:
                            coeff = -coeff
                        amat = W.action(gamma.adjugate() * m)
                        block = fqmat.scalar_mul(field, coeff.coeffs, amat[:, jarr])
                        qbase = q_idx * dimv
                        macc[qbase : qbase + dimv, sel] += block
            base += len(jlist)
        macc %= field.ell
        T[:, np.array(out_cols)] = fqmat.matmul(field, P_t, macc)
    return HeckeMatrix(cosets.prime, T, quot.basis_hash, meta=quot.meta)


def hecke_matrix(
    prime: GaussianInt,
    quot: QuotientSpace,
    table: P1Table,
    W: WeightSpace,
    eps: CharacterSpec,
    cache=None,
    col_chunk: int = 256,
) -> HeckeMatrix:
    """Compute (or load from cache) the matrix of T_prime on the basis."""
    pi = canonical_associate(prime)[0]
    if cache is not None:
        hit = cache.load(table.level, W.spec, eps, pi, quot.basis_hash)
        if hit is not None:
            return HeckeMatrix(pi, hit, quot.basis_hash, meta=quot.meta)
    cosets = delta_cosets(pi, eps, W, table.level)
    hm = _assemble(cosets, quot, table, W, eps, col_chunk)
    if cache is not None:
        cache.store(table.level, W.spec, eps, pi, quot.basis_hash, hm.matrix)
    return hm


def commute(a: HeckeMatrix, b: HeckeMatrix, field) -> bool:
    """Exact commutativity check of two Hecke matrices."""
    ab = fqmat.matmul(field, a.matrix, b.matrix)
    ba = fqmat.matmul(field, b.matrix, a.matrix)
    return fqmat.mat_eq(ab, ba)


def generator_invariance_check(
    prime: GaussianInt,
    quot: QuotientSpace,
    table: P1Table,
    W: WeightSpace,
    eps: CharacterSpec,
) -> bool:
    """Recompute T with the generator i*pi; the matrices must coincide."""
    pi = canonical_associate(prime)[0]
    base = hecke_matrix(pi, quot, table, W, eps)
    pi_alt = GaussianInt(0, 1) * pi
    alt = _assemble(
        DeltaCosets(pi_alt, _coset_pairs(pi_alt, eps, W)), quot, table, W, eps
    )
    return fqmat.mat_eq(base.matrix, alt.matrix)
