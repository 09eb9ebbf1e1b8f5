from __future__ import annotations

import json

import numpy as np
import pytest
import sympy

from hdflow.errors import ConstraintUnsolvable
from hdflow.fields import embed, gf, parse_field, prime_field
from hdflow.poly import Poly, RationalMap
from hdflow.selfmap import symbolic_dets
from hdflow.verify import (
    FAMILY_TABLE,
    FamilyEntry,
    VerificationReport,
    bad_locus_residue,
    constraint_roots,
    count_checks,
    cubic_discriminant,
    fixed_point_count,
    infinity_fixed_multiplicity,
    lattes_identity_bounds,
    ordinary_lambdas,
    run_suite,
    selfmap_lambda_degree_bounds,
    squarefree_decomposition,
    verify_appendixA_diagrams,
    verify_family_bad_reduction,
    verify_lattes,
    verify_periodic_torsion,
    verify_supersingular_degeneration,
)

F7 = prime_field(7)


def P(F, *c):
    return Poly.from_ints(F, c)


def test_report_json_schema():
    rep = VerificationReport("x", {"p": 3}, "pass", "symbolic", samples=np.int64(4))
    d = json.loads(rep.to_json())
    assert d == {"claim": "x", "params": {"p": 3}, "verdict": "pass", "method": "symbolic", "samples": 4}
    assert rep.passed
    assert not VerificationReport("x", {}, "fail", "exhaustive", {"z": 1}).passed


@pytest.mark.parametrize("p", [3, 5, 7])
def test_lattes_symbolic_passes(p):
    rep = verify_lattes(p)
    assert rep.passed and rep.method == "symbolic"
    assert rep.details["degree"] == p * p


def test_lattes_sampled_reports_bounds_and_enough_samples():
    rep = verify_lattes(7, "sampled", seed=3)
    assert rep.passed and rep.method == "sampled"
    assert rep.degree_bounds == lattes_identity_bounds(7)
    assert rep.samples > max(rep.degree_bounds.values())


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_degree_bounds_cover_the_determinants(p):
    f_coeffs, g_coeffs = symbolic_dets(p)
    n1, d1 = selfmap_lambda_degree_bounds(p)
    deg_f = max(len(c) - 1 for c in f_coeffs)
    deg_g = max(len(c) - 1 for c in g_coeffs)
    assert 2 * deg_f <= n1
    assert (p - 1) + 2 * deg_g <= d1
    assert lattes_identity_bounds(p)["z"] == 2 * p * p


def test_squarefree_decomposition_matches_sympy():
    rng = np.random.default_rng(8)
    x = sympy.symbols("x")
    for F in (F7, prime_field(3), prime_field(5)):
        for _ in range(40):
            factors = [Poly(F, rng.integers(0, F.q, rng.integers(2, 4)).tolist() + [1]) for _ in range(3)]
            f = Poly(F, [1])
            for k, g in enumerate(factors, start=1):
                for _ in range(k + int(rng.integers(0, F.p + 1))):
                    f = f * g
            ours = squarefree_decomposition(f)
            assert sum(k * v.deg() for k, v in ours.items()) == f.deg()
            sp = sympy.Poly(list(reversed(f.coeffs)), x, modulus=F.p)
            expected = {}
            for fac, k in sp.factor_list()[1]:
                expected[k] = expected.get(k, 0) + fac.degree()
            assert {k: v.deg() for k, v in ours.items()} == expected


def test_infinity_multiplicity_examples():
    # z^2 + 1 fixes infinity once more than a Mobius map; z + 1 has infinity as a double fixed point
    assert infinity_fixed_multiplicity(RationalMap(P(F7, 1, 0, 1))) == 1
    assert infinity_fixed_multiplicity(RationalMap(P(F7, 1, 1))) == 2
    assert infinity_fixed_multiplicity(RationalMap(P(F7, 1), P(F7, 0, 1))) == 0
    count = fixed_point_count(RationalMap(P(F7, 1, 1)))
    assert count["total"] == 2 and count["finite"] == 0


def test_counts_example_p3_lambda2_in_f7_degenerates():
    # 1 + lambda + lambda^2 = 0 at lambda = 2 in F_7, so the map collapses to 4 z^3 of degree 3
    rep = count_checks(3, 1, 2, F7)
    assert rep.details["fixed_points"]["total"] == 4
    assert rep.details["degree"] == 3
    assert not rep.passed
    assert rep.witness == rep.details


def test_counts_example_p3_lambda3_in_f7():
    rep = count_checks(3, 1, 3, F7)
    assert rep.details["fixed_points"]["total"] == 10
    assert rep.passed


@pytest.mark.parametrize("p,f,n", [(3, 1, 2), (3, 2, 2), (5, 1, 1)])
def test_counts_ordinary(p, f, n):
    F = gf(p, n)
    lams = ordinary_lambdas(p, F, 3)
    assert len(lams) == 3
    for lam in lams:
        rep = count_checks(p, f, lam, F)
        assert rep.passed, rep.to_json()
        assert rep.details["nodes"] == F.q + 1


def test_counts_supersingular_is_z_to_p_squared():
    rep = count_checks(3, 1, 2, gf(3, 2))
    assert rep.passed
    assert rep.details["fixed_points"] == {"finite": 9, "infinity": 1, "total": 10, "distinct_finite": 9}


def test_periodic_torsion_small():
    F = gf(3, 2)
    for lam in ordinary_lambdas(3, F, 2):
        rep = verify_periodic_torsion(3, lam, F, 1)
        assert rep.passed
        assert rep.samples == F.q + 1


def test_supersingular_degeneration_small():
    for p in (3, 5, 7):
        rep = verify_supersingular_degeneration(p)
        assert rep.passed
        assert rep.params["p"] == p


def test_diagrams_pass_for_every_conjugate():
    rep = verify_appendixA_diagrams()
    assert rep.passed
    assert all(v == [0, 1, 2, 3] for v in rep.details["conjugates_matching_labels"].values())


def test_discriminant_oracle():
    rng = np.random.default_rng(9)
    for _ in range(50):
        c = [int(v) for v in rng.integers(0, 7, 4)]
        if c[0] == 0:
            continue
        x = sympy.symbols("x")
        expected = int(sympy.discriminant(sum(ci * x ** (3 - i) for i, ci in enumerate(c)), x)) % 7
        got = cubic_discriminant(*(P(F7, ci) for ci in c))
        assert got == P(F7, expected)


def test_order1_family_multiplicities():
    entry = FAMILY_TABLE[0]
    rep = verify_family_bad_reduction(entry, 7, 3)
    assert rep.passed
    (case,) = rep.details["cases"]
    # the three pairwise differences each vanish once at their point, squared in the discriminant
    assert case["multiplicities"] == {"0": 2, "1": 2, "lambda": 2}


def test_order2_family_locus():
    entry = FAMILY_TABLE[1]
    rep = verify_family_bad_reduction(entry, 7, 3)
    assert rep.passed
    (case,) = rep.details["cases"]
    assert case["multiplicities"]["0"] == 0
    assert case["multiplicities"]["1"] == 2 and case["multiplicities"]["lambda"] == 2
    assert case["degree_drop_at_infinity"] == 2


def test_order3_family_over_f7():
    entry = FAMILY_TABLE[4]
    base, lam_b, roots = constraint_roots(entry, F7, 3)
    assert roots
    for a in roots:
        assert entry.constraint(base, lam_b).eval(a) == 0
    assert verify_family_bad_reduction(entry, 7, 3).passed


def test_family_rejects_a_off_the_constraint():
    entry = FAMILY_TABLE[4]
    with pytest.raises(ValueError):
        verify_family_bad_reduction(entry, 7, 3, a_samples=[0])


@pytest.mark.parametrize("p", [7, 11])
@pytest.mark.parametrize("idx", [0, 1, 2, 3, 4, 8, 9, 10])
def test_family_rows_pass(p, idx):
    F = prime_field(p)
    for lam in ordinary_lambdas(p, F, 2):
        rep = verify_family_bad_reduction(FAMILY_TABLE[idx], p, lam)
        assert rep.passed, rep.to_json()


@pytest.mark.parametrize("idx", [5, 6, 7])
def test_order4_rows_as_printed_fail_with_a_replayable_witness(idx):
    entry = FAMILY_TABLE[idx]
    rep = verify_family_bad_reduction(entry, 7, 3)
    assert not rep.passed
    w = rep.witness
    assert "extraneous_factor" in w
    # replay: the witness a reproduces the same extraneous factor
    big = parse_field(rep.params.get("sample_field", F7.descriptor))
    lam_b = embed(F7, big, 3)
    assert entry.constraint(big, lam_b).eval(w["a"]) == 0
    rest, _ = bad_locus_residue(cubic_discriminant(*entry.cubic(big, lam_b, w["a"])), lam_b)
    assert rest.deg() > 0
    assert rest.to_text("t") == w["extraneous_factor"]


def _order4_halved(which):
    """The order-4 cubic with x^2-coefficient 2(t-a) in place of 4(t-a)."""

    def cubic(F, lam, a):
        t = Poly(F, [0, 1])
        c2 = (t - Poly(F, [a])).scale(F.from_int(2))
        if which == 0:
            c1 = (t - Poly(F, [1])) * (t - Poly(F, [lam]))
        elif which == 1:
            c1 = t * (t - Poly(F, [lam]))
        else:
            c1 = t * t - t
        return Poly(F, [1]), c2, c1, Poly(F)

    return cubic


@pytest.mark.parametrize("p", [7, 11])
@pytest.mark.parametrize("which", [0, 1, 2])
def test_order4_rows_with_halved_coefficient_pass(p, which):
    printed = FAMILY_TABLE[5 + which]
    entry = FamilyEntry(4, printed.equation.replace("4(t-a)", "2(t-a)"), _order4_halved(which), printed.constraint, printed.constraint_text)
    for lam in ordinary_lambdas(p, prime_field(p), 2):
        rep = verify_family_bad_reduction(entry, p, lam)
        assert rep.passed, rep.to_json()


def test_constraint_unsolvable():
    entry = FamilyEntry(4, "test", _order4_halved(0), lambda F, lam: Poly(F, [1]), "1=0")
    with pytest.raises(ConstraintUnsolvable):
        constraint_roots(entry, F7, 3, max_degree=2)


def test_run_suite_sorted_and_typed():
    reports = run_suite("lattes", pmax=5)
    assert [r.params["p"] for r in reports] == [3, 5]
    with pytest.raises(ValueError):
        run_suite("nope")


def test_run_suite_counts_with_explicit_case():
    (rep,) = run_suite("counts", p=3, field=F7, lam=3, f=1)
    assert rep.passed
