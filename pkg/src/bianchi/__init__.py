"""Cohomological mod-l modular forms over Q(i) via Manin symbols.

The pipeline: exact Gaussian-integer arithmetic feeds a projective-line
coset table; Serre weight modules supply the coefficient action; the
Steinberg relations carve the homology quotient out of the Manin symbol
space; Hecke operators act through continued fractions; and simultaneous
eigensystems are matched against stored Galois-representation traces.
"""

from .eigen import EigenSystem, char_poly, simultaneous_eigensystems
from .finitefield import FqElem, FqField, ResidueMap, make_field, quadratic_character
from .fixtures import (
    RepFixture,
    VerificationReport,
    expected_trace,
    fixture_names,
    load_fixture,
    torsion_check,
    verify,
)
from .gaussian import (
    GaussianInt,
    GaussianRational,
    GMatrix2,
    canonical_associate,
    enumerate_primes,
    euc_divmod,
    factor,
    floor_q,
    format_gaussian,
    ggcd,
    norm,
    parse_gaussian,
    residues_mod,
    split_type,
    unimodular_complete,
)
from .hecke import DeltaCosets, HeckeMatrix, delta_cosets, generator_invariance_check, hecke_matrix
from .homology import QuotientSpace, homology_space, quotient, relation_rows
from .modsym import CFExpansion, ManinVector, ModSym, cf_expand, split_symbol, to_manin
from .projline import P1Point, P1Table, enumerate_p1
from .weights import CharacterSpec, WeightSpace, WeightSpec, action_matrix, char_value, dimension

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
