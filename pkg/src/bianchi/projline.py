"""The projective line P^1(O/n) indexing Gamma_0(n) cosets.

Points are normalized pairs (c:d) of canonical residues mod n.  The
normalization works locally at each prime power p^e dividing n: when c is
invertible there the local form is (1 : d/c), otherwise d must be
invertible and the local form is (c/d : 1); the local scalings are
CRT-recombined into a single unit of (O/n)*, which is what a nebentypus
character sees.  Normalization is idempotent and O(1) per call after the
table's factor data is built.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gaussian import (
    ZERO,
    ONE,
    GaussianInt,
    GMatrix2,
    canonical_associate,
    complete_row,
    euc_divmod,
    exact_div,
    factor,
    ggcd,
    gxgcd,
    norm,
    residues_mod,
)


@dataclass(frozen=True)
class P1Point:
    c: GaussianInt
    d: GaussianInt

    def __str__(self):
        return f"({self.c}:{self.d})"


class _LocalFactor:
    """Data for one prime power p^e exactly dividing the level."""

    def __init__(self, prime: GaussianInt, e: int):
        self.prime = prime
        self.e = e
        self.modulus = prime
        for _ in range(e - 1):
            self.modulus = self.modulus * prime
        # inverses of the invertible residues mod p^e
        self.inverses: dict[GaussianInt, GaussianInt] = {}
        for r in residues_mod(self.modulus):
            g, u, _ = gxgcd(r, self.modulus) if r else (self.modulus, ZERO, ONE)
            if g.is_unit():
                self.inverses[r] = euc_divmod(g.conj() * u, self.modulus)[1]

    def reduce(self, z: GaussianInt) -> GaussianInt:
        return euc_divmod(z, self.modulus)[1]


class P1Table:
    """Enumerated P^1(O/n) with O(1) normalization and index lookup."""

    def __init__(self, level: GaussianInt):
        if not level or level.is_unit():
            raise ValueError("level must be a nonzero non-unit")
        self.level = canonical_associate(level)[0]
        self.factors = [_LocalFactor(p, e) for p, e in factor(self.level)]
        # CRT idempotents: basis[k] = 1 mod m_k, = 0 mod the others
        self._basis: list[GaussianInt] = []
        for k, f in enumerate(self.factors):
            rest = ONE
            for j, g in enumerate(self.factors):
                if j != k:
                    rest = rest * g.modulus
            # solve rest * t = 1 mod m_k (the canonical gcd of a coprime pair is 1)
            _, t, _ = gxgcd(euc_divmod(rest, f.modulus)[1], f.modulus)
            self._basis.append(self._reduce(rest * t))
        self.points = self._enumerate()
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise AssertionError("duplicate points in P^1 enumeration")

    def _reduce(self, z: GaussianInt) -> GaussianInt:
        return euc_divmod(z, self.level)[1]

    def size_formula(self) -> int:
        """N(n) * prod_{p | n} (1 + 1/N(p)), the classical index."""
        out = 1
        for f in self.factors:
            np_ = norm(f.prime)
            out *= np_**f.e + np_ ** (f.e - 1)
        return out

    def __len__(self):
        return len(self.points)

    def _crt(self, locals_: list[GaussianInt]) -> GaussianInt:
        acc = ZERO
        for v, b in zip(locals_, self._basis):
            acc = acc + v * b
        return self._reduce(acc)

    def _enumerate(self) -> list[P1Point]:
        local_points: list[list[tuple[GaussianInt, GaussianInt]]] = []
        for f in self.factors:
            pts = [(f.reduce(ONE), d) for d in residues_mod(f.modulus)]
            if f.e > 1:
                sub = residues_mod(exact_div(f.modulus, f.prime))
            else:
                sub = [ZERO]
            pts += [(f.reduce(f.prime * t), f.reduce(ONE)) for t in sub]
            local_points.append(pts)
        combos: list[list[tuple[GaussianInt, GaussianInt]]] = [[]]
        for pts in local_points:
            combos = [prefix + [pt] for prefix in combos for pt in pts]
        out = []
        for combo in combos:
            c = self._crt([pt[0] for pt in combo])
            d = self._crt([pt[1] for pt in combo])
            out.append(P1Point(c, d))
        out.sort(key=lambda p: (p.c.re, p.c.im, p.d.re, p.d.im))
        return out

    def normalize(self, c: GaussianInt, d: GaussianInt) -> tuple[P1Point, GaussianInt]:
        """Canonical representative and the unit u with (c, d) = u * point.

        Raises ValueError when (c, d, n) is not the unit ideal.
        """
        c, d = self._reduce(c), self._reduce(d)
        loc_c, loc_d, loc_u = [], [], []
        for f in self.factors:
            ck, dk = f.reduce(c), f.reduce(d)
            ci = f.inverses.get(ck)
            if ci is not None:
                loc_u.append(ck)
                loc_c.append(f.reduce(ONE))
                loc_d.append(f.reduce(dk * ci))
            else:
                di = f.inverses.get(dk)
                if di is None:
                    raise ValueError(f"({c}:{d}) is not unimodular mod {self.level}")
                loc_u.append(dk)
                loc_c.append(f.reduce(ck * di))
                loc_d.append(f.reduce(ONE))
        point = P1Point(self._crt(loc_c), self._crt(loc_d))
        return point, self._crt(loc_u)

    def index_of(self, c: GaussianInt, d: GaussianInt) -> tuple[int, GaussianInt]:
        p, u = self.normalize(c, d)
        return self.index[p], u

    def lift(self, p: P1Point) -> GMatrix2:
        """An SL2(O) matrix whose bottom row is congruent to (c, d) mod n.

        The congruence is exact (not just up to units), so the lift
        normalizes back to (p, 1).
        """
        c, d = p.c, p.d
        if not c and not d:
            raise ValueError("(0:0) is not a projective point")
        for t in _lift_shifts():
            dd = d + t * self.level
            if c or dd:
                if (c and ggcd(c, dd).is_unit()) or (not c and dd.is_unit()):
                    return complete_row(c, dd)
        raise AssertionError(f"no coprime lift found for {p}")

    def act_right(self, p: P1Point, g: GMatrix2) -> tuple[P1Point, GaussianInt]:
        """Right action (c:d) . g = (c a + d c', c b + d d'), normalized."""
        det = g.det()
        if not det.is_unit():
            gc = ggcd(det, self.level)
            if not gc.is_unit():
                raise ValueError(f"det {det} shares the factor {gc} with the level")
        c, d = p.c, p.d
        return self.normalize(c * g.a + d * g.c, c * g.b + d * g.d)

    def dump(self) -> str:
        """One 'c d index' line per point (debug format)."""
        return "\n".join(f"{pt.c} {pt.d} {i}" for i, pt in enumerate(self.points))


def _lift_shifts():
    yield ZERO
    for r in range(1, 13):
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                if max(abs(x), abs(y)) == r:
                    yield GaussianInt(x, y)


def enumerate_p1(level: GaussianInt) -> P1Table:
    """Build the P^1(O/n) table for a level given by any generator."""
    return P1Table(level)
