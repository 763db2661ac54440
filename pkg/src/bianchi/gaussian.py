"""Exact arithmetic in Z[i] and Q(i).

Everything downstream (projective lines, continued fractions, Hecke cosets)
reduces to the primitives here: norms, the rounded floor on Q(i), Euclidean
division, gcd with canonical associates, unimodular completions, prime
splitting and residue systems.  All components are arbitrary-precision ints.
"""

from __future__ import annotations

import re as _re


class GaussianInt:
    """An element a+bi of Z[i].  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    def __eq__(self, other):
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.re == other and self.im == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __add__(self, other):
        if not isinstance(other, (GaussianInt, int)):
            return NotImplemented
        other = _coerce(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (GaussianInt, int)):
            return NotImplemented
        other = _coerce(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (GaussianInt, int)):
            return NotImplemented
        other = _coerce(other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def conj(self):
        return GaussianInt(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def is_unit(self):
        return self.norm() == 1

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


def _coerce(x) -> GaussianInt:
    if isinstance(x, GaussianInt):
        return x
    if isinstance(x, int):
        return GaussianInt(x, 0)
    raise TypeError(f"cannot coerce {x!r} to GaussianInt")


def norm(z: GaussianInt) -> int:
    """Field norm a^2 + b^2; multiplicative, zero only at zero."""
    return z.re * z.re + z.im * z.im


def _round_half_down(n: int, d: int) -> int:
    """Least integer a with |a - n/d| <= 1/2, for d > 0.

    Equals ceil(n/d - 1/2); a tie at half rounds toward the smaller integer.
    """
    return -((d - 2 * n) // (2 * d))


class GaussianRational:
    """A ratio of Gaussian integers, kept in lowest terms.

    The denominator is normalized to its canonical (first-quadrant)
    associate so equal values have equal representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num = _coerce(num)
        den = _coerce(den)
        if not den:
            raise ZeroDivisionError("GaussianRational with zero denominator")
        g = ggcd(num, den) if num else den
        num, den = exact_div(num, g), exact_div(den, g)
        den_c, u = canonical_associate(den)
        object.__setattr__(self, "num", num * u)
        object.__setattr__(self, "den", den_c)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, GaussianRational)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"GaussianRational({self.num!r}, {self.den!r})"

    def __sub__(self, other):
        if isinstance(other, (int, GaussianInt)):
            other = _coerce(other)
            return GaussianRational(self.num - other * self.den, self.den)
        return GaussianRational(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def inverse(self):
        return GaussianRational(self.den, self.num)


def floor_q(r: GaussianRational) -> GaussianInt:
    """Nearest Gaussian integer to r, ties per coordinate to the smaller int."""
    # Clear the denominator: r = num * conj(den) / norm(den) with real denominator.
    d = norm(r.den)
    w = r.num * r.den.conj()
    return GaussianInt(_round_half_down(w.re, d), _round_half_down(w.im, d))


def floor_div(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    """floor_q(z/w) computed without building a rational."""
    if not w:
        raise ZeroDivisionError("division by zero in Z[i]")
    d = norm(w)
    t = z * w.conj()
    return GaussianInt(_round_half_down(t.re, d), _round_half_down(t.im, d))


def euc_divmod(z: GaussianInt, w: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division z = q*w + r with norm(r) <= norm(w)/2."""
    q = floor_div(z, w)
    return q, z - q * w


def exact_div(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    """z / w when w divides z exactly."""
    q, r = euc_divmod(z, w)
    if r:
        raise ValueError(f"{w} does not divide {z}")
    return q


def divides(w: GaussianInt, z: GaussianInt) -> bool:
    if not w:
        return not z
    return not euc_divmod(z, w)[1]


def canonical_associate(z: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Return (a, u) with a = u*z the unique associate with re > 0, im >= 0.

    Zero maps to (0, 1).  The canonical form makes gcds and prime
    generators usable as dictionary keys.
    """
    if not z:
        return ZERO, ONE
    for u in UNITS:
        a = u * z
        if a.re > 0 and a.im >= 0:
            return a, u
    raise AssertionError("unreachable: one associate lies in the first quadrant")


def ggcd(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    """Gcd in Z[i], normalized to the canonical associate."""
    if not z and not w:
        raise ValueError("gcd(0, 0) is undefined")
    while w:
        z, w = w, euc_divmod(z, w)[1]
    return canonical_associate(z)[0]


def gxgcd(z: GaussianInt, w: GaussianInt) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """Extended gcd: returns (g, u, v) with u*z + v*w = g canonical."""
    if not z and not w:
        raise ValueError("gcd(0, 0) is undefined")
    r0, r1 = z, w
    u0, u1 = ONE, ZERO
    v0, v1 = ZERO, ONE
    while r1:
        q, r = euc_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    g, s = canonical_associate(r0)
    return g, s * u0, s * v0


class GMatrix2:
    """A 2x2 matrix over Z[i], row-major (a b; c d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        object.__setattr__(self, "a", _coerce(a))
        object.__setattr__(self, "b", _coerce(b))
        object.__setattr__(self, "c", _coerce(c))
        object.__setattr__(self, "d", _coerce(d))

    def __setattr__(self, name, value):
        raise AttributeError("GMatrix2 is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, GMatrix2)
            and self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __mul__(self, other: "GMatrix2") -> "GMatrix2":
        return GMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> GaussianInt:
        return self.a * self.d - self.b * self.c

    def is_gl2(self) -> bool:
        return self.det().is_unit()

    def is_sl2(self) -> bool:
        return self.det() == ONE

    def adjugate(self) -> "GMatrix2":
        return GMatrix2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "GMatrix2":
        """Inverse of a GL2(O) matrix (unit determinant)."""
        det = self.det()
        if not det.is_unit():
            raise ValueError("matrix is not invertible over Z[i]")
        # 1/u for a unit u is its conjugate.
        return det.conj() * self.adjugate()

    def __rmul__(self, scalar):
        scalar = _coerce(scalar)
        return GMatrix2(
            scalar * self.a, scalar * self.b, scalar * self.c, scalar * self.d
        )

    def apply(self, col: tuple[GaussianInt, GaussianInt]):
        """Matrix times a column vector."""
        x, y = col
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def bottom_row(self):
        return (self.c, self.d)

    def __repr__(self):
        return f"GMatrix2({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = GMatrix2(1, 0, 0, 1)

# Small ball of Gaussian integers ordered by (norm, re, im); used when a
# bounded search for a good completion or lift parameter is needed.
_SMALL = sorted(
    (GaussianInt(x, y) for x in range(-6, 7) for y in range(-6, 7)),
    key=lambda z: (norm(z), z.re, z.im),
)


def unimodular_complete(alpha: GaussianInt, beta: GaussianInt) -> GMatrix2:
    """Complete a coprime column (alpha, beta) to a matrix in SL2(O).

    Returns M = (alpha delta; beta gamma) with alpha*gamma - beta*delta = 1
    and, whenever alpha and beta are both nonzero, norm(delta) <= norm(alpha)
    and norm(gamma) <= norm(beta).
    """
    g, u, v = gxgcd(alpha, beta)
    if not g.is_unit():
        raise ValueError(f"column ({alpha}, {beta}) is not unimodular")
    # u*alpha + v*beta = 1 after rescaling by the unit gcd.
    gamma0, delta0 = u, -v
    if not alpha or not beta:
        return GMatrix2(alpha, delta0, beta, gamma0)
    # Shift (delta, gamma) by multiples of the column to meet the size bounds.
    t0 = floor_div(gamma0, beta)
    na, nb = norm(alpha), norm(beta)
    for dt in _SMALL:
        t = t0 + dt
        delta, gamma = delta0 + t * alpha, gamma0 + t * beta
        if norm(delta) <= na and norm(gamma) <= nb:
            return GMatrix2(alpha, delta, beta, gamma)
    raise AssertionError("no small completion found; bound in _SMALL too tight")


def complete_row(c: GaussianInt, d: GaussianInt) -> GMatrix2:
    """Complete a coprime row (c, d) to an SL2(O) matrix with that bottom row."""
    m = unimodular_complete(c, d)
    # m = (c delta; d gamma) with c*gamma - d*delta = 1, so the matrix
    # (-delta -gamma; c d) has determinant 1.
    return GMatrix2(-m.b, -m.d, m.a, m.c)


def split_type(ell: int):
    """Factorization type of a rational prime in Z[i].

    Returns ('split', pi, pibar) for ell = 1 mod 4, ('inert',) for
    ell = 3 mod 4, and ('ramified', 1+i) for ell = 2.
    """
    if ell < 2 or any(ell % k == 0 for k in range(2, int(ell**0.5) + 1)):
        raise ValueError(f"{ell} is not prime")
    if ell == 2:
        return ("ramified", GaussianInt(1, 1))
    if ell % 4 == 3:
        return ("inert",)
    for a in range(1, int(ell**0.5) + 1):
        b2 = ell - a * a
        b = int(b2**0.5)
        if b * b == b2:
            pi = canonical_associate(GaussianInt(a, b))[0]
            pibar = canonical_associate(pi.conj())[0]
            lo, hi = sorted((pi, pibar), key=lambda z: (z.re, z.im))
            return ("split", lo, hi)
    raise AssertionError(f"no two-square decomposition found for {ell}")


def residues_mod(m: GaussianInt) -> list[GaussianInt]:
    """A complete residue system for O/(m), canonically reduced.

    Every element is the euc_divmod remainder of its class, so membership
    and reduction agree everywhere the system is used.
    """
    if not m:
        raise ValueError("zero modulus")
    n = norm(m)
    bound = int(n**0.5) + 1
    seen: dict[GaussianInt, None] = {}
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            r = euc_divmod(GaussianInt(x, y), m)[1]
            if r not in seen:
                seen[r] = None
                if len(seen) == n:
                    return sorted(seen, key=lambda z: (norm(z), z.re, z.im))
    raise AssertionError(f"residue enumeration incomplete for {m}: {len(seen)} < {n}")


def _rational_primes(bound: int):
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [p for p in range(2, bound + 1) if sieve[p]]


def enumerate_primes(bound: int) -> list[tuple[GaussianInt, int]]:
    """Canonical generators of the prime ideals of norm <= bound.

    Returns (generator, residue degree) pairs ordered by norm, then by
    (re, im) of the generator.  Both primes above a split rational prime
    appear; an inert prime p contributes norm p^2.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    out = []
    for p in _rational_primes(bound):
        kind = split_type(p)
        if kind[0] == "ramified":
            out.append((GaussianInt(1, 1), 1))
        elif kind[0] == "split":
            out.append((kind[1], 1))
            out.append((kind[2], 1))
        elif p * p <= bound:
            out.append((GaussianInt(p, 0), 2))
    out.sort(key=lambda t: (norm(t[0]), t[0].re, t[0].im))
    return out


def factor(z: GaussianInt) -> list[tuple[GaussianInt, int]]:
    """Factor a nonzero Gaussian integer into canonical prime powers.

    Returns (prime, exponent) pairs sorted by (norm, re, im); the unit part
    is dropped.  Works by factoring the norm by trial division, which is
    ample for the levels and Hecke primes in scope.
    """
    if not z:
        raise ValueError("cannot factor zero")
    n = norm(z)
    out = []
    rest = z
    p = 2
    while p * p <= n:
        if n % p == 0:
            kind = split_type(p)
            cands = (
                [kind[1]] if kind[0] == "ramified" else [GaussianInt(p, 0)]
                if kind[0] == "inert"
                else [kind[1], kind[2]]
            )
            for pi in cands:
                e = 0
                while divides(pi, rest):
                    rest = exact_div(rest, pi)
                    e += 1
                if e:
                    out.append((pi, e))
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:  # a single large prime factor of the norm remains
        kind = split_type(n)
        cands = (
            [kind[1]] if kind[0] == "ramified" else [GaussianInt(n, 0)]
            if kind[0] == "inert"
            else [kind[1], kind[2]]
        )
        for pi in cands:
            e = 0
            while divides(pi, rest):
                rest = exact_div(rest, pi)
                e += 1
            if e:
                out.append((pi, e))
    assert rest.is_unit(), f"unfactored part {rest} left from {z}"
    out.sort(key=lambda t: (norm(t[0]), t[0].re, t[0].im))
    return out


_GAUSS_RE = _re.compile(
    r"""^\s*
    (?:(?P<re>[+-]?\d+))?
    (?:(?P<im>[+-]?\d*)\s*[*]?\s*i)?
    \s*$""",
    _re.VERBOSE,
)


def parse_gaussian(s: str) -> GaussianInt:
    """Parse 'a+bi', 'a-bi', 'a', 'bi', 'i', '-i' into a GaussianInt."""
    m = _GAUSS_RE.match(s.replace(" ", ""))
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse Gaussian integer from {s!r}")
    re_part = int(m.group("re")) if m.group("re") is not None else 0
    im = m.group("im")
    if im is None:
        im_part = 0
    elif im in ("", "+"):
        im_part = 1
    elif im == "-":
        im_part = -1
    else:
        im_part = int(im)
    return GaussianInt(re_part, im_part)


def format_gaussian(z: GaussianInt) -> str:
    """Inverse of parse_gaussian: '0', 'a', 'bi', 'a+bi', 'a-bi'."""
    if z.im == 0:
        return str(z.re)
    im = "i" if z.im == 1 else "-i" if z.im == -1 else f"{z.im}i"
    if z.re == 0:
        return im
    return f"{z.re}+{im}" if z.im > 0 else f"{z.re}{im}"
