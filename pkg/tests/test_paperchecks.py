import random
from fractions import Fraction

import pytest

from sonccert.certify import case2_exponents
from sonccert.circuit import validate
from sonccert.poly import Poly, parse
from sonccert.paperchecks import (
    R_EXPANSION,
    BoxAtom,
    DimensionTooSmall,
    aggregate_report,
    affine_substitution,
    build_fa,
    check_lemma52,
    check_lemma53,
    corollary32_regression,
    fourier_motzkin_feasible,
    lemma31_regression,
    min_outer_for_edge,
    putinar_bound,
    run_all,
    theorem51_aggregate_check,
    value_profile,
)
from sonccert.randgen import random_nonneg_circuit


def test_build_fa_values():
    f = build_fa(3, 8)
    assert f.evaluate((1, 1, 1)) == 8
    assert f.evaluate((-1, 1, 1)) == 1
    assert build_fa(4, 1) == Poly.constant(4, 1)


def test_putinar_bound():
    assert putinar_bound(4) == 5
    assert putinar_bound(3) == 7
    assert putinar_bound(10) == Fraction(1023, 255)
    vals = [putinar_bound(n) for n in range(3, 40)]
    assert all(x > y > 4 for x, y in zip(vals, vals[1:]))
    with pytest.raises(DimensionTooSmall):
        putinar_bound(2)


def test_value_profiles():
    prof = value_profile(parse("1 + x1^2 - 2*x1", 2))
    assert dict(prof.histogram) == {0: 2, 4: 2}
    assert dict(value_profile(parse("x1^2*x2^2", 2)).histogram) == {1: 4}
    c = validate(parse("1 + x1^2 - 2*x1", 2))
    prof = value_profile(c.poly * BoxAtom(0).poly(2))
    assert len(prof) <= 4 and min(prof.histogram.values()) >= 1


def test_value_count_laws_random():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(1, 7)
        c = random_nonneg_circuit(rng, n)
        assert check_lemma52(c)
        box = BoxAtom(rng.randrange(n), rng.choice((1, -1)), Fraction(rng.randint(0, 4), rng.randint(1, 3)))
        assert check_lemma53(c, box)


def test_box_product_law_both_cases():
    # i inside and outside the odd support of beta
    c = validate(parse("1/2 + 1/2*x1^2*x2^2 + x1*x2", 3))
    for i in range(3):
        assert check_lemma53(c, BoxAtom(i))
    single = validate(parse("1/2 + 1/2*x1^2 - x1", 3))
    assert check_lemma53(single, BoxAtom(0, -1))


def test_product_of_squares_not_sonc():
    res = lemma31_regression()
    assert res
    assert res.x1x2_coefficient == 4
    assert res.edge_thresholds == (1, 1)
    r = parse("1 - 2*x1 + x1^2", 2) * parse("1 - 2*x2 + x2^2", 2)
    assert r == parse(R_EXPANSION, 2) and len(r) == 9


def test_edge_threshold_and_fm():
    assert min_outer_for_edge(Fraction(-2), Fraction(1)) == 1
    assert min_outer_for_edge(Fraction(3), Fraction(2)) == Fraction(9, 8)
    # {c1 >= 1, c2 >= 1, c1 + c2 <= 1}
    rows = [((-1, 0), -1), ((0, -1), -1), ((1, 1), 1)]
    assert not fourier_motzkin_feasible(rows)
    assert fourier_motzkin_feasible([((-1, 0), -1), ((0, -1), -1), ((1, 1), 2)])


def test_affine_image_of_square():
    assert corollary32_regression()
    sq = Poly.monomial((2, 2))
    flip = [(Fraction(1), Fraction(-1))] * 2
    assert affine_substitution(affine_substitution(sq, flip), flip) == sq


# A vertex-matching single-multiplier decomposition of f_{7/2} on {-1,1}^4.
# Each row: weight, index set S, sign of chi_S, box index (or None), box sign.
CANDIDATE_7_2 = [
    ("1/64", (0,), 1, 3, 1),
    ("1/16", (0,), -1, 2, -1),
    ("1/32", (2,), 1, 2, 1),
    ("1/64", (2,), 1, 3, 1),
    ("5/32", (0, 1), 1, None, 1),
    ("3/32", (0, 2), 1, 1, 1),
    ("3/32", (0, 3), 1, 1, 1),
    ("3/64", (0, 3), 1, 2, 1),
    ("3/32", (1, 2), 1, None, 1),
    ("1/16", (1, 2), 1, 3, 1),
    ("1/16", (1, 3), 1, 0, 1),
    ("3/32", (1, 3), 1, 2, 1),
    ("9/64", (2, 3), 1, 0, 1),
    ("1/16", (0, 1, 2), 1, 3, 1),
    ("1/32", (0, 2, 3), 1, 1, 1),
    ("1/16", (0, 2, 3), -1, 1, -1),
]


def _chi_circuit(n, S, sigma, w):
    """w * (1 + sigma x^S) on the cube, as the circuit w/2 x^a1 + w/2 x^a2 + sigma w x^S."""
    beta = tuple(1 if i in S else 0 for i in range(n))
    a1, a2 = case2_exponents(beta)
    w = Fraction(w)
    return validate(Poly(n, [(a1, w / 2), (a2, w / 2), (beta, sigma * w)]))


def _candidate(rows, n=4):
    return [(_chi_circuit(n, S, sig, w), None if i is None else BoxAtom(i, tau)) for w, S, sig, i, tau in rows]


def test_candidate_below_bound_passes():
    cand = _candidate(CANDIDATE_7_2)
    rep = aggregate_report(4, Fraction(7, 2), cand)
    assert rep.terms_valid and rep.vertex_match and rep.value_counts_ok
    assert not rep.aggregate_refutes
    # counting chain: sum over H of f_a = 2^n - 1 + a >= sum of e-value counts >= 2^(n-2) a
    assert rep.vertex_sum == 15 + Fraction(7, 2)
    assert rep.e_value == Fraction(7, 2)
    assert rep.vertex_sum >= rep.weighted_e_sum >= 4 * rep.e_value
    assert theorem51_aggregate_check(4, Fraction(7, 2), cand)


def test_refutation_above_bound():
    cand = _candidate(CANDIDATE_7_2)
    # the same terms do not match f_6, and the inequality alone already refutes
    rep = aggregate_report(4, 6, cand)
    assert not rep.vertex_match and rep.aggregate_refutes
    assert not theorem51_aggregate_check(4, 6, cand)
    assert aggregate_report(4, 6, []).aggregate_refutes


def test_no_refutation_at_four():
    rep = aggregate_report(4, 4, [])
    assert not rep.aggregate_refutes  # 16 <= 19
    assert not rep.vertex_match  # empty candidate still fails to match
    assert not theorem51_aggregate_check(4, 4, [])


def test_run_all_green():
    rows = run_all(0)
    assert rows and all(ok for _, ok in rows)
