"""Serre weight modules for GL2(O/lO) and nebentypus characters.

A weight is a tensor over the primes p | l and the embeddings of each
residue field: det^a (x) Sym^(b-1) of the standard representation.  The
matrix action on the homogeneous-polynomial basis follows the substitution
g . P(X, Y) = P(dX - bY, -cX + aY) composed with reduction mod p, a
Frobenius twist per embedding, and the det power; it extends verbatim to
2x2 integer matrices with nonzero determinant, which is what Hecke
operators feed it.
"""

from __future__ import annotations

import logging
import re as _re
from math import comb

import numpy as np

from .finitefield import FqElem, FqField, ResidueMap, quadratic_character
from .gaussian import GaussianInt, GMatrix2, canonical_associate, norm, split_type

log = logging.getLogger(__name__)


class WeightSpec:
    """Exponent data (a_tau, b_tau) for one Serre weight at a prime l.

    For split l the two pairs attach to the two primes above l in the
    fixed (norm, re, im) generator order; for inert l they attach to the
    identity and Frobenius embeddings of F_{l^2}.
    """

    def __init__(self, ell: int, a: tuple[int, int], b: tuple[int, int], strict: bool = True):
        self.ell = ell
        kind = split_type(ell)
        if kind[0] == "ramified":
            raise ValueError("l = 2 is ramified in Q(i) and not supported")
        self.split = kind[0] == "split"
        self.primes = list(kind[1:]) if self.split else [GaussianInt(ell, 0)]
        amod = (ell - 1) if self.split else (ell * ell - 1)
        norm_a = []
        for x in a:
            if not (0 <= x < amod):
                log.warning("normalizing det exponent %s mod %s", x, amod)
                x %= amod
            norm_a.append(x)
        self.a = tuple(norm_a)
        for x in b:
            if strict and not (1 <= x <= ell):
                raise ValueError(f"Sym exponent b={x} outside [1, {ell}]")
            if not strict and x < 1:
                raise ValueError("Sym exponent must be at least 1")
        self.b = tuple(b)

    def dimension(self) -> int:
        out = 1
        for x in self.b:
            out *= x
        return out

    def __eq__(self, other):
        return (
            isinstance(other, WeightSpec)
            and (self.ell, self.a, self.b) == (other.ell, other.a, other.b)
        )

    def __hash__(self):
        return hash((self.ell, self.a, self.b))

    def __str__(self):
        return f"l={self.ell} a=({self.a[0]},{self.a[1]}) b=({self.b[0]},{self.b[1]})"

    __repr__ = __str__

    @staticmethod
    def parse(s: str) -> "WeightSpec":
        m = _re.match(
            r"^\s*l=(\d+)\s+a=\((-?\d+)\s*,\s*(-?\d+)\)\s+b=\((\d+)\s*,\s*(\d+)\)\s*$", s
        )
        if not m:
            raise ValueError(f"cannot parse weight spec from {s!r}")
        ell, a0, a1, b0, b1 = (int(g) for g in m.groups())
        return WeightSpec(ell, (a0, a1), (b0, b1))


def dimension(spec: WeightSpec) -> int:
    """prod b_tau, the dimension of the weight module."""
    return spec.dimension()


def _sym_block(field: FqField, entries, deg: int) -> np.ndarray:
    """Matrix of P -> P(dX - bY, -cX + aY) on X^(deg-j) Y^j, j ascending."""
    a, b, c, d = entries
    dim = deg + 1
    out = np.zeros((dim, dim, field.degree), dtype=np.int64)
    for j in range(dim):
        # (dX - bY)^(deg-j) * (-cX + aY)^j, coefficients by convolution
        p1 = [
            (field.elem(comb(deg - j, k)) * d ** (deg - j - k) * (-b) ** k)
            for k in range(deg - j + 1)
        ]
        p2 = [
            (field.elem(comb(j, m)) * (-c) ** (j - m) * a**m) for m in range(j + 1)
        ]
        for k, x in enumerate(p1):
            for m, y in enumerate(p2):
                tot = k + m  # Y-degree of the product term
                v = x * y
                cur = out[tot, j]
                out[tot, j] = (cur + np.array(v.coeffs)) % field.ell
    return out


class WeightSpace:
    """A weight module with its coefficient field and monomial basis.

    The basis is the Kronecker order over embedding blocks: index
    j0 * b1 + j1 with j the ascending Y-degree inside each block.
    action() returns the matrix of an integer 2x2 matrix on that basis,
    memoized on the reduction of the matrix mod l.
    """

    def __init__(self, spec: WeightSpec):
        self.spec = spec
        ell = spec.ell
        self.field = FqField(ell, 1 if spec.split else 2)
        if spec.split:
            self.rmaps = [ResidueMap(p) for p in spec.primes]
            self.blocks = [(self.rmaps[0], 0, spec.a[0], spec.b[0]),
                           (self.rmaps[1], 0, spec.a[1], spec.b[1])]
        else:
            rmap = ResidueMap(spec.primes[0])
            self.rmaps = [rmap]
            self.blocks = [(rmap, 0, spec.a[0], spec.b[0]),
                           (rmap, 1, spec.a[1], spec.b[1])]
        self.dim = spec.dimension()
        self._memo: dict[tuple, np.ndarray] = {}

    def _key(self, g: GMatrix2):
        ell = self.spec.ell
        return (
            g.a.re % ell, g.a.im % ell, g.b.re % ell, g.b.im % ell,
            g.c.re % ell, g.c.im % ell, g.d.re % ell, g.d.im % ell,
        )

    def action(self, g: GMatrix2) -> np.ndarray:
        """Matrix of g on the weight basis, shape (dim, dim, field degree)."""
        key = self._key(g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        field = self.field
        total = None
        for rmap, frob_power, a_exp, b_exp in self.blocks:
            ent = [rmap.reduce(z) for z in (g.a, g.b, g.c, g.d)]
            for _ in range(frob_power):
                ent = [x ** field.ell for x in ent]
            det = ent[0] * ent[3] - ent[1] * ent[2]
            block = _sym_block(field, ent, b_exp - 1)
            if a_exp:
                if det:
                    scal = det**a_exp
                    block = _apply_scalar(field, scal, block)
                else:
                    block = np.zeros_like(block)
            mat = block
            if total is None:
                total = mat
            else:
                total = _kron(field, total, mat)
        self._memo[key] = total
        return total

    def basis_labels(self) -> list[str]:
        b0, b1 = self.spec.b
        out = []
        for j0 in range(b0):
            for j1 in range(b1):
                out.append(f"X0^{b0 - 1 - j0}Y0^{j0}.X1^{b1 - 1 - j1}Y1^{j1}")
        return out


def _apply_scalar(field: FqField, s: FqElem, M: np.ndarray) -> np.ndarray:
    out = np.zeros_like(M)
    if field.degree == 1:
        out[..., 0] = (M[..., 0] * s.coeffs[0]) % field.ell
    else:
        s0, s1 = s.coeffs
        out[..., 0] = (M[..., 0] * s0 + field.c * M[..., 1] * s1) % field.ell
        out[..., 1] = (M[..., 0] * s1 + M[..., 1] * s0) % field.ell
    return out


def _kron(field: FqField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    na, nb = A.shape[0], B.shape[0]
    out = np.zeros((na * nb, na * nb, field.degree), dtype=np.int64)
    if field.degree == 1:
        out[..., 0] = np.kron(A[..., 0], B[..., 0]) % field.ell
    else:
        a0, a1, b0, b1 = A[..., 0], A[..., 1], B[..., 0], B[..., 1]
        out[..., 0] = (np.kron(a0, b0) + field.c * np.kron(a1, b1)) % field.ell
        out[..., 1] = (np.kron(a0, b1) + np.kron(a1, b0)) % field.ell
    return out


def action_matrix(g: GMatrix2, W: WeightSpace) -> np.ndarray:
    """Matrix of g acting on W's basis (left action: A(gh) = A(g) A(h))."""
    return W.action(g)


class CharacterSpec:
    """A character of (O/n)*: trivial, or the quadratic character mod a prime."""

    def __init__(self, level: GaussianInt, kind: str = "trivial",
                 prime: GaussianInt | None = None):
        if kind not in ("trivial", "quadratic"):
            raise ValueError(f"unknown character kind {kind!r}")
        self.level = canonical_associate(level)[0]
        self.kind = kind
        self.prime = canonical_associate(prime or level)[0] if kind == "quadratic" else None
        if self.kind == "quadratic" and norm(self.prime) % 2 == 0:
            raise ValueError("quadratic character needs an odd-norm prime")
        self._eps_cache: dict[FqField, object] = {}

    def is_trivial(self) -> bool:
        return self.kind == "trivial"

    def value(self, u: GaussianInt, field: FqField) -> FqElem:
        """epsilon(u) in the given coefficient field."""
        if self.kind == "trivial":
            return field.one()
        eps = self._eps_cache.get(field)
        if eps is None:
            eps = quadratic_character(self.prime, field)
            self._eps_cache[field] = eps
        return eps(u)

    def fold(self, u: GaussianInt, field: FqField) -> FqElem:
        """epsilon(u)^-1, the factor picked up when normalizing a coset rep.

        The inverse mirrors the twisted action on the character line; for
        the trivial and quadratic characters in scope the values are +-1,
        so folding and direct evaluation agree.
        """
        v = self.value(u, field)
        return v.inverse()

    def __str__(self):
        if self.kind == "trivial":
            return "trivial"
        return f"quadratic({self.prime})"


def char_value(eps: CharacterSpec, u: GaussianInt, field: FqField) -> FqElem:
    """Character evaluation; errors when u is not coprime to the modulus."""
    return eps.value(u, field)
