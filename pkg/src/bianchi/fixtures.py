"""Galois representation fixtures and end-to-end verification.

Each fixture records a representation's level, character, conjugacy-class
trace table, per-prime Frobenius orders and predicted weights.  The trace
tables cover the two groups in play: the binary tetrahedral image (split
and inert trace columns, for base-change representations) and the
dihedral group of order 6 (one trace column).  Frobenius orders and
predicted weights are data, not computations: recomputing them would need
class groups and the full weight recipe, which live outside this package.

verify() drives the whole pipeline for one fixture: build the homology
space in each predicted weight, compute Hecke operators at every fixture
prime in range, extract eigensystems, and look for one system matching
the expected traces everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from importlib import resources

from .finitefield import FqElem, FqField
from .gaussian import (
    GaussianInt,
    canonical_associate,
    divides,
    norm,
    parse_gaussian,
)
from .weights import WeightSpec

# order of rho(Frob) -> (trace for q split, trace for q inert), as integers
CLASS_TABLES: dict[str, dict[int, tuple[int, int]]] = {
    # binary tetrahedral group inside GL2(F_3); inert column applies
    # a_q -> a_q^2 - 2 from base change
    "sl2f3": {1: (-1, -1), 2: (1, -1), 3: (-1, -1), 4: (0, 1), 6: (1, -1)},
    # dihedral of order 6: trace determined by element order
    "d3": {1: (2, 2), 2: (0, 0), 3: (-1, -1)},
}


@dataclass(frozen=True)
class FixturePrime:
    label: str
    generator: GaussianInt  # as printed in the table
    ideal: GaussianInt  # canonical generator
    order: int | None  # Frobenius order; None for the table's "-" rows
    a: int | None  # recorded eigenvalue; None with order

    @property
    def inert(self) -> bool:
        # rational primes p = 3 mod 4 stay prime in Z[i]; everything else
        # in the tables is split (or 1+i, which uses the split column)
        return self.generator.im == 0 and abs(self.generator.re) % 4 == 3


@dataclass
class RepFixture:
    """One Galois representation with everything needed to verify it."""

    name: str
    ells: list[int]
    level: GaussianInt
    character: str
    classtable: str
    weights: dict[int, list[tuple[WeightSpec, str]]]  # per ell: (weight, metadata)
    primes: list[FixturePrime]

    def excluded(self, q: GaussianInt, ell: int) -> bool:
        """True when q | l*n, where the Hecke operators are undefined."""
        qc = canonical_associate(q)[0]
        if divides(qc, self.level):
            return True
        return divides(qc, GaussianInt(ell, 0))

    def included_primes(self, ell: int, bound: int) -> list[FixturePrime]:
        out = []
        for fp in self.primes:
            if norm(fp.ideal) > bound or self.excluded(fp.ideal, ell):
                continue
            if fp.order is None:
                raise ValueError(f"{self.name}: prime {fp.label} has no recorded order")
            out.append(fp)
        return sorted(out, key=lambda fp: (norm(fp.ideal), fp.ideal.re, fp.ideal.im))


def expected_trace(fx: RepFixture, q: GaussianInt, ell: int,
                   field: FqField | None = None):
    """tr(rho(Frob_q)) mod ell, from the fixture's order and class table.

    Returns an int in [0, ell), or an FqElem when a field is supplied.
    Raises for excluded primes and unknown orders.
    """
    qc = canonical_associate(q)[0]
    if fx.excluded(qc, ell):
        raise ValueError(f"prime {qc} is excluded at l={ell} (divides l*n)")
    fp = next((p for p in fx.primes if p.ideal == qc), None)
    if fp is None or fp.order is None:
        raise ValueError(f"no Frobenius order recorded for {qc} in {fx.name}")
    table = CLASS_TABLES[fx.classtable]
    if fp.order not in table:
        raise ValueError(f"order {fp.order} not in class table {fx.classtable}")
    split_tr, inert_tr = table[fp.order]
    t = (inert_tr if fp.inert else split_tr) % ell
    if field is not None:
        return field.elem(t)
    return t


def torsion_check(ell: int, level: GaussianInt):
    """Whether the homology method applies at (l, n).

    Returns (True, '') or (False, reason).  l = 2 is always out (2
    ramifies in Q(i)); l = 3 fails exactly when the level divides 3,
    where 3-torsion of the congruence subgroup survives.
    """
    if ell == 2:
        return False, "l = 2 is ramified in Q(i); the duality argument needs l odd"
    if ell == 3 and divides(level, GaussianInt(3, 0)):
        return False, "level divides 3O, so 3-torsion is not invertible mod l"
    return True, ""


# -- fixture file parsing ------------------------------------------------------


def _parse_fixture(text: str) -> RepFixture:
    name = ""
    ells: list[int] = []
    level = None
    character = ""
    classtable = ""
    weights: dict[int, list[tuple[WeightSpec, str]]] = {}
    primes: list[FixturePrime] = []
    in_primes = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_primes:
            parts = line.split()
            label, order_s, a_s = parts[0], parts[1], parts[2]
            gen = parse_gaussian(label)
            order = None if order_s == "-" else int(order_s)
            a = None if a_s == "-" else int(a_s)
            primes.append(
                FixturePrime(label, gen, canonical_associate(gen)[0], order, a)
            )
            continue
        if line == "primes:":
            in_primes = True
            continue
        if line.startswith("weight "):
            body = line[len("weight "):]
            meta = ""
            if " B=" in body:
                body, meta = body.split(" B=", 1)
            spec = WeightSpec.parse(body)
            weights.setdefault(spec.ell, []).append((spec, meta))
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "name":
            name = value
        elif key == "ell":
            ells = [int(x) for x in value.split()]
        elif key == "level":
            level = parse_gaussian(value)
        elif key == "character":
            character = value
        elif key == "classtable":
            classtable = value
        else:
            raise ValueError(f"unknown fixture key {key!r}")
    if level is None or not name or not ells:
        raise ValueError("incomplete fixture file")
    if classtable not in CLASS_TABLES:
        raise ValueError(f"unknown class table {classtable!r}")
    return RepFixture(
        name, ells, canonical_associate(level)[0], character, classtable, weights, primes
    )


def fixture_names() -> list[str]:
    files = resources.files("bianchi.data")
    return sorted(
        f.name[: -len(".fixture")]
        for f in files.iterdir()
        if f.name.endswith(".fixture")
    )


def load_fixture(name: str) -> RepFixture:
    path = resources.files("bianchi.data").joinpath(f"{name}.fixture")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise KeyError(f"no fixture named {name!r}; have {fixture_names()}")
    fx = _parse_fixture(text)
    if fx.name != name:
        raise ValueError(f"fixture file {name} declares name {fx.name}")
    return fx


# -- verification --------------------------------------------------------------


@dataclass
class PrimeRow:
    label: str
    ideal: GaussianInt
    order: int
    expected: int
    got: list[int] | None  # coefficient vector of the matched system's value
    ok: bool


@dataclass
class WeightResult:
    weight: WeightSpec
    dim_h: int
    n_systems: int
    matched: object | None
    rows: list[PrimeRow]
    passed: bool


@dataclass
class VerificationReport:
    fixture: str
    ell: int
    bound: int
    results: list[WeightResult] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)


def verify(
    fx: RepFixture,
    ell: int,
    bound: int,
    cache=None,
    progress=None,
    weights: list[WeightSpec] | None = None,
) -> VerificationReport:
    """Check the fixture's predicted weights against computed eigensystems."""
    from .eigen import simultaneous_eigensystems
    from .hecke import hecke_matrix
    from .homology import homology_space
    from .projline import P1Table
    from .weights import CharacterSpec, WeightSpace

    ok, reason = torsion_check(ell, fx.level)
    if not ok:
        raise ValueError(f"torsion obstruction: {reason}")
    if ell not in fx.ells:
        raise ValueError(f"fixture {fx.name} has no data for l={ell}")
    say = progress or (lambda msg: None)
    report = VerificationReport(fx.name, ell, bound)
    table = P1Table(fx.level)
    eps = CharacterSpec(fx.level, fx.character)
    todo = weights if weights is not None else [w for w, _ in fx.weights.get(ell, [])]
    for spec in todo:
        say(f"[{fx.name}] weight {spec}: building homology")
        W = WeightSpace(spec)
        quot = homology_space(table, W, eps)
        say(f"[{fx.name}] weight {spec}: dim H = {quot.dim}")
        fps = fx.included_primes(ell, bound)
        ops = []
        for fp in fps:
            ops.append(hecke_matrix(fp.ideal, quot, table, W, eps, cache=cache))
            say(f"[{fx.name}] weight {spec}: T_{fp.label} done")
        systems = simultaneous_eigensystems(ops, W.field, ambient_dim=quot.dim)
        say(f"[{fx.name}] weight {spec}: {len(systems)} eigensystems")
        matched = None
        for sys_ in systems:
            hit = True
            for fp in fps:
                want = expected_trace(fx, fp.ideal, ell, W.field)
                if sys_.values.get(fp.ideal) != want:
                    hit = False
                    break
            if hit:
                matched = sys_
                break
        rows = []
        for fp in fps:
            want = expected_trace(fx, fp.ideal, ell)
            got = (
                list(matched.values[fp.ideal].coeffs) if matched is not None else None
            )
            rows.append(
                PrimeRow(
                    fp.label,
                    fp.ideal,
                    fp.order,
                    want,
                    got,
                    matched is not None,
                )
            )
        report.results.append(
            WeightResult(spec, quot.dim, len(systems), matched, rows, matched is not None)
        )
    return report
