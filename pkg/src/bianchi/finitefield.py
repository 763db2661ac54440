"""Arithmetic in F_l and small extensions F_{l^k}.

Elements live in a fixed polynomial basis over the prime field.  Degree-2
fields use the modulus x^2 + 1 when -1 is a non-residue (l = 3 mod 4) and
x^2 - c for the least quadratic non-residue c otherwise, so serialized
matrices are reproducible across runs.  Residue maps O -> O/p for Gaussian
primes p and the quadratic character of (O/p)* are built on top.
"""

from __future__ import annotations

from . import gaussian
from .gaussian import GaussianInt, norm, split_type


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


class FqField:
    """F_{l^degree} in the basis 1, x, ..., x^(degree-1).

    For degree 2 the modulus is x^2 - c; self.c stores c.  Elements are
    FqElem wrappers around coefficient tuples.
    """

    def __init__(self, ell: int, degree: int = 1):
        if not _is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if ell == 2:
            raise ValueError("l = 2 is ramified in Q(i) and not supported")
        if degree < 1:
            raise ValueError("degree must be positive")
        self.ell = ell
        self.degree = degree
        if degree == 1:
            self.c = None
        elif degree == 2:
            self.c = self._choose_c(ell)
        else:
            raise NotImplementedError("only degrees 1 and 2 are implemented")
        self.order = ell**degree

    @staticmethod
    def _choose_c(ell: int) -> int:
        if ell % 4 == 3:
            return ell - 1  # x^2 + 1
        for c in range(2, ell):
            if pow(c, (ell - 1) // 2, ell) == ell - 1:
                return c
        raise AssertionError("no quadratic non-residue found")

    # -- element constructors -------------------------------------------------

    def elem(self, *coeffs: int) -> "FqElem":
        cs = [c % self.ell for c in coeffs]
        cs += [0] * (self.degree - len(cs))
        if len(cs) != self.degree:
            raise ValueError("too many coefficients")
        return FqElem(self, tuple(cs))

    def zero(self) -> "FqElem":
        return self.elem()

    def one(self) -> "FqElem":
        return self.elem(1)

    def gen(self) -> "FqElem":
        """The class of x (only meaningful for degree 2)."""
        return self.elem(0, 1)

    def elements(self):
        """All field elements, in lexicographic coefficient order."""
        if self.degree == 1:
            return [self.elem(a) for a in range(self.ell)]
        return [self.elem(a, b) for a in range(self.ell) for b in range(self.ell)]

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and self.ell == other.ell
            and self.degree == other.degree
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.ell, self.degree, self.c))

    def __repr__(self):
        if self.degree == 1:
            return f"FqField({self.ell})"
        return f"FqField({self.ell}^2, x^2 - {self.c})"

    # -- raw coefficient arithmetic (tuples), used by FqElem and matrix code --

    def add(self, a, b):
        return tuple((x + y) % self.ell for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.ell for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.ell for x in a)

    def mul(self, a, b):
        if self.degree == 1:
            return ((a[0] * b[0]) % self.ell,)
        c = self.c
        return (
            (a[0] * b[0] + c * a[1] * b[1]) % self.ell,
            (a[0] * b[1] + a[1] * b[0]) % self.ell,
        )

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        if self.degree == 1:
            return (pow(a[0], self.ell - 2, self.ell),)
        # (a0 + a1 x)^-1 = (a0 - a1 x) / (a0^2 - c a1^2)
        d = (a[0] * a[0] - self.c * a[1] * a[1]) % self.ell
        di = pow(d, self.ell - 2, self.ell)
        return ((a[0] * di) % self.ell, (-a[1] * di) % self.ell)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = (1,) + (0,) * (self.degree - 1)
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out


class FqElem:
    """An element of an FqField; thin wrapper over a coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs: tuple[int, ...]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FqElem is immutable")

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.elem(other)
        return (
            isinstance(other, FqElem)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.elem(other)
        self._check(other)
        return FqElem(self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.elem(other)
        self._check(other)
        return FqElem(self.field, self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.elem(other)
        self._check(other)
        return FqElem(self.field, self.field.mul(self.coeffs, other.coeffs))

    def __pow__(self, n: int):
        return FqElem(self.field, self.field.pow(self.coeffs, n))

    def inverse(self):
        return FqElem(self.field, self.field.inv(self.coeffs))

    def __repr__(self):
        return f"FqElem{list(self.coeffs)}"

    def serialize(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def make_field(ell: int, degree: int) -> FqField:
    """Deterministic field constructor; rejects l = 2 and composite l."""
    return FqField(ell, degree)


def frobenius(x: FqElem) -> FqElem:
    """x^l, the nontrivial automorphism on degree-2 fields."""
    return x ** x.field.ell


class ResidueMap:
    """The reduction map O -> O/p = k_p for a Gaussian prime p.

    Stores the image of i, which pins the map: a + bi goes to a + b*img_i.
    For a split prime a+bi the image of i is -a/b in F_l; for an inert
    prime the image is the class of x in F_{l^2} with x^2 = -1.
    """

    def __init__(self, prime: GaussianInt):
        self.prime = prime
        n = norm(prime)
        if prime.im == 0 or prime.re == 0:
            # inert rational prime (up to associate): k_p = F_{l^2}
            ell = abs(prime.re or prime.im)
            if ell % 4 != 3:
                raise ValueError(f"{prime} is not a Gaussian prime")
            self.field = FqField(ell, 2)
            self.img_i = self.field.gen()
        else:
            if not _is_prime(n):
                raise ValueError(f"{prime} is not a Gaussian prime")
            self.field = FqField(n, 1)
            binv = pow(prime.im % n, n - 2, n)
            self.img_i = self.field.elem(-prime.re * binv)
        check = self.img_i * self.img_i + 1
        assert not check, "image of i must square to -1"

    def reduce(self, z: GaussianInt) -> FqElem:
        return self.field.elem(z.re) + self.field.elem(z.im) * self.img_i

    def __repr__(self):
        return f"ResidueMap({self.prime} -> {self.field})"


def reduce(z: GaussianInt, m: ResidueMap) -> FqElem:
    """Ring-homomorphic image of z in k_p."""
    return m.reduce(z)


def quadratic_character(prime: GaussianInt, target: FqField):
    """The unique surjective order-2 character of (O/p)*, valued in target.

    eps(u) = u^((N(p)-1)/2) computed in k_p, transported to target as +-1.
    """
    n = norm(prime)
    if n % 2 == 0:
        raise ValueError("quadratic character needs an odd-norm prime")
    rmap = ResidueMap(prime)
    exponent = (n - 1) // 2
    one = rmap.field.one()
    plus, minus = target.one(), -target.one()

    def eps(u: GaussianInt) -> FqElem:
        r = rmap.reduce(u)
        if not r:
            raise ValueError(f"{u} is not coprime to {prime}")
        return plus if r**exponent == one else minus

    return eps


def eval_poly(poly: list[FqElem], a: FqElem) -> FqElem:
    """Horner evaluation; poly lists coefficients from the constant term up."""
    acc = a.field.zero()
    for c in reversed(poly):
        acc = acc * a + c
    return acc


def _divide_linear(poly: list[FqElem], a: FqElem, field: FqField) -> list[FqElem]:
    # poly = (x - a) * q when a is a root; returns q.
    n = len(poly) - 1
    q = [field.zero()] * n
    q[n - 1] = poly[n]
    for k in range(n - 2, -1, -1):
        q[k] = poly[k + 1] + q[k + 1] * a
    return q


def roots_in_field(poly: list[FqElem], field: FqField) -> list[FqElem]:
    """All roots of a nonzero polynomial in the field, with multiplicity.

    Exhaustive scan over the field; fine for the orders in scope (at most
    a few thousand elements).
    """
    work = list(poly)
    while work and not work[-1]:
        work.pop()
    if not work:
        raise ValueError("zero polynomial")
    roots = []
    for a in field.elements():
        while len(work) > 1 and not eval_poly(work, a):
            roots.append(a)
            work = _divide_linear(work, a, field)
    return roots
