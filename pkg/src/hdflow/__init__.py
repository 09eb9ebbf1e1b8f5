"""Higgs-de Rham flow self-maps over finite fields and their Lattes-map identity."""

from .errors import (
    BadLambda,
    ConstraintUnsolvable,
    DegenerateMap,
    FieldTooLarge,
    HdflowError,
    NotIrreducible,
    NotPrime,
    PoleAtPoint,
)
from .fields import Elem, FiniteField, RatFunc, embed, extension, frobenius_power, gf, parse_field, prime_field, ratfunc_field
from .legendre import LegendreCurve, hasse_roots, is_supersingular, lattes_map, lift_x, torsion_predicate
from .poly import INF, Poly, RationalMap, compose, hankel_det
from .selfmap import (
    OrbitGraph,
    SelfMap,
    artin_schreier_solve,
    build_selfmap,
    closed_form,
    iterate,
    orbit_graph,
    periodic_points,
    preperiod,
    torsor_coefficient,
)
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "artin_schreier_solve",
    "BadLambda",
    "build_selfmap",
    "closed_form",
    "compose",
    "ConstraintUnsolvable",
    "DegenerateMap",
    "Elem",
    "embed",
    "extension",
    "FieldTooLarge",
    "FiniteField",
    "frobenius_power",
    "gf",
    "hankel_det",
    "hasse_roots",
    "HdflowError",
    "INF",
    "is_supersingular",
    "iterate",
    "lattes_map",
    "LegendreCurve",
    "lift_x",
    "NotIrreducible",
    "NotPrime",
    "orbit_graph",
    "OrbitGraph",
    "parse_field",
    "periodic_points",
    "PoleAtPoint",
    "Poly",
    "preperiod",
    "prime_field",
    "RatFunc",
    "ratfunc_field",
    "RationalMap",
    "run_suite",
    "SelfMap",
    "torsion_predicate",
    "torsor_coefficient",
    "VerificationReport",
]
