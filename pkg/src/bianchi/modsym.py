"""Modular symbols over Q(i): continued fractions and Manin conversion.

A symbol [v1, v2] of unimodular columns splits as -[0, v1] + [0, v2], and
each [0, a/b] telescopes along the Gaussian continued fraction of a/b into
unimodular symbols [g(0), g(infinity)] with g in SL2(O).  Those carry
straight over to Manin generators: the P^1 point is the bottom row of g
and the weight vector travels through g^-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finitefield import FqElem
from .gaussian import (
    IDENTITY,
    ONE,
    ZERO,
    GaussianInt,
    GMatrix2,
    euc_divmod,
    floor_div,
    ggcd,
)
from .projline import P1Table
from .weights import CharacterSpec, WeightSpace

Column = tuple[GaussianInt, GaussianInt]

INFINITY: Column = (ONE, ZERO)
CUSP_ZERO: Column = (ZERO, ONE)


@dataclass(frozen=True)
class ModSym:
    """[v1, v2] with unimodular columns; infinity = (1,0), 0 = (0,1)."""

    v1: Column
    v2: Column

    def det(self) -> GaussianInt:
        return self.v1[0] * self.v2[1] - self.v2[0] * self.v1[1]

    def __str__(self):
        return f"[{self.v1[0]}/{self.v1[1]}, {self.v2[0]}/{self.v2[1]}]"


class CFExpansion:
    """Partial quotients and convergent matrices for [0, alpha/beta].

    gammas[0] is the identity-seed matrix (the [0, infinity] term); the
    remaining gammas[n+1] cover [p_{n-1}/q_{n-1}, p_n/q_n].  Every gamma
    lies in SL2(O) by the determinant identity of the convergents.
    """

    def __init__(self, quotients: list[GaussianInt], gammas: list[GMatrix2]):
        self.quotients = quotients
        self.gammas = gammas

    def __len__(self):
        return len(self.gammas)


def cf_steps(alpha: GaussianInt, beta: GaussianInt):
    """Yield the partial quotients of alpha/beta (nearest-integer CF)."""
    num, den = alpha, beta
    while den:
        a = floor_div(num, den)
        yield a
        num, den = den, num - a * den


def cf_expand(alpha: GaussianInt, beta: GaussianInt) -> CFExpansion:
    """Expand [0, alpha/beta] into SL2(O) symbols; needs gcd(alpha, beta) = 1."""
    if not alpha and not beta:
        raise ValueError("0/0 is not a cusp")
    if alpha and beta and not ggcd(alpha, beta).is_unit():
        raise ValueError(f"{alpha}/{beta} is not in lowest terms")
    p_prev2, q_prev2 = ZERO, ONE  # p_{-2}, q_{-2}
    p_prev, q_prev = ONE, ZERO  # p_{-1}, q_{-1}
    quotients: list[GaussianInt] = []
    gammas = [GMatrix2(p_prev, p_prev2, q_prev, q_prev2)]  # the identity
    sign = -1  # (-1)^(n+1) for n = 0
    for a in cf_steps(alpha, beta):
        quotients.append(a)
        p, q = a * p_prev + p_prev2, a * q_prev + q_prev2
        gammas.append(GMatrix2(sign * p, p_prev, sign * q, q_prev))
        p_prev2, q_prev2 = p_prev, q_prev
        p_prev, q_prev = p, q
        sign = -sign
    return CFExpansion(quotients, gammas)


def _primitive(col: Column) -> Column:
    """Divide out the gcd so the column is unimodular."""
    a, b = col
    if not a and not b:
        raise ValueError("zero column has no primitive form")
    g = ggcd(a, b)
    if g.is_unit():
        return col
    qa, ra = euc_divmod(a, g)
    qb, rb = euc_divmod(b, g)
    assert not ra and not rb
    return (qa, qb)


def split_symbol(s: ModSym) -> list[tuple[int, Column]]:
    """[v1, v2] = -[0, v1] + [0, v2] as signed cusps.

    Degenerate pieces vanish and are dropped: the whole symbol when the
    columns are proportional, and any [0, 0] term (a cusp whose first
    coordinate is zero).
    """
    if not s.det():
        return []
    out = []
    for sign, col in ((-1, s.v1), (1, s.v2)):
        if col[0]:  # cusp 0 contributes [0, 0] = 0
            out.append((sign, col))
    return out


class ManinVector:
    """Sparse element of R[P^1(n)] (x) V (x) eps.

    Stored as per-point coefficient blocks (weight dim x field degree);
    zero blocks are pruned so iteration never reports stored zeros.
    """

    def __init__(self, table: P1Table, W: WeightSpace):
        self.table = table
        self.W = W
        self.blocks: dict[int, np.ndarray] = {}

    def add_block(self, p_idx: int, vec: np.ndarray):
        cur = self.blocks.get(p_idx)
        if cur is None:
            self.blocks[p_idx] = vec % self.W.field.ell
        else:
            self.blocks[p_idx] = (cur + vec) % self.W.field.ell
        if not self.blocks[p_idx].any():
            del self.blocks[p_idx]

    def items(self):
        """Yield ((p1_index, weight_index), FqElem) over nonzero entries."""
        f = self.W.field
        for p_idx in sorted(self.blocks):
            block = self.blocks[p_idx]
            for j in range(self.W.dim):
                if block[j].any():
                    yield (p_idx, j), f.elem(*(int(c) for c in block[j]))

    def __bool__(self):
        return bool(self.blocks)

    def __eq__(self, other):
        return (
            isinstance(other, ManinVector)
            and dict((k, v) for k, v in self.items())
            == dict((k, v) for k, v in other.items())
        )

    def scaled(self, c: FqElem) -> "ManinVector":
        out = ManinVector(self.table, self.W)
        from .fqmat import scalar_mul

        for p_idx, block in self.blocks.items():
            out.add_block(p_idx, scalar_mul(self.W.field, c.coeffs, block))
        return out

    def __add__(self, other: "ManinVector") -> "ManinVector":
        out = ManinVector(self.table, self.W)
        for p_idx, block in self.blocks.items():
            out.add_block(p_idx, block)
        for p_idx, block in other.blocks.items():
            out.add_block(p_idx, block)
        return out


def _matvec(field, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    from .fqmat import matmul

    return matmul(field, A, v.reshape(v.shape[0], 1, field.degree))[:, 0, :]


def to_manin(
    s: ModSym,
    w: np.ndarray,
    table: P1Table,
    W: WeightSpace,
    eps: CharacterSpec,
) -> ManinVector:
    """Convert a weighted modular symbol to its Manin vector.

    w is a weight coordinate vector of shape (dim, field degree).  Each
    continued-fraction term gamma contributes at the P^1 index of gamma's
    bottom row, with weight action_matrix(gamma^-1) @ w and coefficient
    sign * eps(scaler)^-1.
    """
    from .fqmat import scalar_mul

    field = W.field
    out = ManinVector(table, W)
    for sign, col in split_symbol(s):
        for gamma in cf_expand(*_primitive(col)).gammas:
            idx, scaler = table.index_of(*gamma.bottom_row())
            coeff = eps.fold(scaler, field)
            if sign < 0:
                coeff = -coeff
            vec = _matvec(field, W.action(gamma.inverse()), w)
            out.add_block(idx, scalar_mul(field, coeff.coeffs, vec))
    return out
