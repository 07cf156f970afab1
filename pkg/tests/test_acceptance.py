"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed even with output capture on) or directly with
``python3 tests/test_acceptance.py``.
"""

import os
import random
import sys
import time
from fractions import Fraction
from math import ceil, comb

import mpmath
import pytest
import sympy

sys.path.insert(0, os.path.dirname(__file__))

from _support import FIELD_CLASSES, brute_force_valid, nonneg_instance, tamper  # noqa: E402
from sonccert.certify import case2_exponents, certificate_polynomial, certify_hypercube, decompose_vanishing  # noqa: E402
from sonccert.circuit import Cmp, circuit_number_compare, circuit_number_power, is_nonnegative, validate  # noqa: E402
from sonccert.hypercube import delta_factored, kronecker_delta, normal_form, s_polynomial_check  # noqa: E402
from sonccert.paperchecks import (  # noqa: E402
    BoxAtom,
    aggregate_report,
    check_lemma52,
    check_lemma53,
    corollary32_regression,
    lemma31_regression,
    min_outer_for_edge,
    putinar_bound,
    theorem51_aggregate_check,
)
from sonccert.poly import Poly, parse  # noqa: E402
from sonccert.randgen import random_circuit, random_cube, random_nonneg_circuit, random_poly  # noqa: E402
from sonccert.shorten import GroupedCert, monomial_space_dim, shorten_certificate  # noqa: E402
from sonccert.verify import verify_certificate  # noqa: E402

SEED = 20240601


def _emit(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return line


# --- 1 ------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(SEED + 1)
    bad = 0
    t10 = None
    for n in range(1, 11):
        cube = random_cube(rng, n)
        verts = list(cube.vertices())
        start = time.perf_counter()
        for v in verts:
            d = delta_factored(cube, v)
            for w in verts:
                if d.evaluate(w) != (1 if w == v else 0):
                    bad += 1
        if n == 10:
            t10 = time.perf_counter() - start
        if n <= 6:
            # the expanded form obeys the same law
            for v in verts:
                _, p = kronecker_delta(cube, v)
                bad += sum(p.evaluate(w) != (1 if w == v else 0) for w in verts)
    ok = bad == 0 and t10 < 10
    return ok, f"mismatches={bad}, n=10 exhaustive in {t10:.2f}s"


# --- 2 ------------------------------------------------------------------------


def criterion_2():
    rng = random.Random(SEED + 2)
    s_fail = 0
    for _ in range(100):
        if not s_polynomial_check(random_cube(rng, rng.randint(2, 6))):
            s_fail += 1
    nf_fail = 0
    for _ in range(200):
        n = rng.randint(1, 6)
        cube = random_cube(rng, n)
        f = random_poly(rng, n, rng.randint(0, 6), rng.randint(1, 8))
        res = normal_form(f, cube)
        recon = res.remainder
        for j, q in enumerate(res.quotients):
            recon = recon + q * cube.g(j)
        if recon != f or not res.remainder.is_multilinear():
            nf_fail += 1
    return s_fail == 0 and nf_fail == 0, f"S-polynomial failures={s_fail}/100, re-expansion failures={nf_fail}/200"


# --- 3 ------------------------------------------------------------------------


def criterion_3():
    rng = random.Random(SEED + 3)
    start = time.perf_counter()
    fails = {"a": 0, "b": 0, "c": 0}
    odd = 0
    odd_at_minus_one = 0
    done = 0
    while done < 200:
        n = rng.randint(1, 6)
        cube = random_cube(rng, n)
        f = Poly.zero(n)
        for j in range(n):
            f = f + random_poly(rng, n, rng.randint(0, 4), rng.randint(0, 3)) * cube.g(j)
        if f.is_zero():
            continue
        done += 1
        dec = decompose_vanishing(f, cube)
        deg = int(f.degree())
        if not all(is_nonnegative(t.circuit) for t in dec.terms):
            fails["a"] += 1
        if dec.expand(cube) != f:
            fails["b"] += 1
        top = max(t.circuit.degree for t in dec.terms)
        # deg f - 2 for even deg f; for odd deg f no circuit through an odd
        # quotient monomial of degree deg f - 2 can have degree below deg f - 1
        if top > 2 * ceil(deg / 2) - 2:
            fails["c"] += 1
        if deg % 2:
            odd += 1
            odd_at_minus_one += top == deg - 1
    elapsed = time.perf_counter() - start
    ok = not any(fails.values()) and elapsed < 60
    return ok, (
        f"failures a/b/c={fails['a']}/{fails['b']}/{fails['c']} over 200, "
        f"odd-degree inputs={odd} ({odd_at_minus_one} reach deg f - 1), {elapsed:.1f}s"
    )


# --- 4 and 6 --------------------------------------------------------------------


def _criterion4_instances():
    rng = random.Random(SEED + 4)
    for _ in range(100):
        n = rng.randint(1, 6)
        m = rng.randint(0, 3)
        d = rng.randint(1, 2)
        yield nonneg_instance(rng, n, m, d)


_CERTS = []


def _certs():
    if not _CERTS:
        for cube, cs, f in _criterion4_instances():
            _CERTS.append((cube, cs, f, certify_hypercube(f, cube, cs)))
    return _CERTS


def criterion_4():
    bad = 0
    degree_bad = 0
    for cube, cs, f, cert in _certs():
        if not verify_certificate(f, cert.to_json(), cube, cs).overall:
            bad += 1
        if cert.degree > cube.n + cs.degree:
            degree_bad += 1
    return bad == 0 and degree_bad == 0, f"rejected={bad}/100, degree > n+d: {degree_bad}"


def criterion_6():
    group_bad = total_bad = sum_bad = 0
    strict_over = 0
    before = after = 0
    for cube, cs, f, cert in _certs():
        short = shorten_certificate(cert)
        n, D = cube.n, cert.degree
        per_group = monomial_space_dim(n, D) + 1
        groups = GroupedCert.from_certificate(short).groups
        if any(len(v) > per_group for v in groups.values()):
            group_bad += 1
        if len(short) > len(groups) * per_group:
            total_bad += 1
        if certificate_polynomial(short, cube, cs) != certificate_polynomial(cert, cube, cs):
            sum_bad += 1
        if certificate_polynomial(short, cube, cs) != f:
            sum_bad += 1
        # the same count measured against the constraint degree alone
        if any(len(v) > comb(n + cs.degree, cs.degree) + 1 for v in groups.values()):
            strict_over += 1
        before += len(cert)
        after += len(short)
    ok = group_bad == total_bad == sum_bad == 0
    return ok, (
        f"group-bound violations={group_bad}, total-bound violations={total_bad}, "
        f"sum mismatches={sum_bad}, terms {before} -> {after}; "
        f"groups above C(n+d_P,d_P)+1 with d_P = constraint degree: {strict_over}/100"
    )


# --- 5 ------------------------------------------------------------------------


def _exact_decision(c):
    """Independent exact decision with sympy rationals."""
    lam = [sympy.Rational(l.numerator, l.denominator) for l in c.lambdas]
    D = sympy.ilcm(*[l.q for l in lam])
    fb = abs(sympy.Rational(c.inner[1].numerator, c.inner[1].denominator))
    lhs = fb**D
    rhs = sympy.Integer(1)
    for (_, coef), l in zip(c.outer, lam):
        rhs *= (sympy.Rational(coef.numerator, coef.denominator) / l) ** int(l * D)
    return Cmp.LESS if lhs < rhs else Cmp.EQUAL if lhs == rhs else Cmp.GREATER


def _lambda_system_ok(c):
    if sum(c.lambdas) != 1 or any(l <= 0 for l in c.lambdas):
        return False
    beta = c.inner[0]
    return all(sum(l * e[i] for l, (e, _) in zip(c.lambdas, c.outer)) == beta[i] for i in range(c.n))


def _boundary_circuit(rng):
    """Exactly EQUAL instances: pick lambda and outer coefficients so Theta is rational."""
    n = rng.randint(1, 3)
    u = tuple(2 * rng.randint(0, 3) for _ in range(n))
    w = tuple(2 * rng.randint(0, 3) for _ in range(n))
    while w == u:
        w = tuple(2 * rng.randint(0, 3) for _ in range(n))
    beta = tuple((x + y) // 2 for x, y in zip(u, w))
    # Theta = 2 sqrt(c1 c2) with c1 c2 a rational square
    p, q = Fraction(rng.randint(1, 9), rng.randint(1, 5)), Fraction(rng.randint(1, 9), rng.randint(1, 5))
    c1, c2 = p * p * q, q
    return validate(Poly(n, [(u, c1), (w, c2), (beta, rng.choice((1, -1)) * 2 * p * q)]))


def criterion_5():
    rng = random.Random(SEED + 5)
    mpmath.mp.prec = 200
    band = mpmath.mpf(2) ** -150
    disagree = redecided = lam_bad = equal_seen = 0
    big_den = 0
    for k in range(10_000):
        c = _boundary_circuit(rng) if k % 20 == 0 else random_circuit(rng, rng.randint(1, 4), spread=0.3)
        if max(l.denominator for l in c.lambdas) > 12:
            big_den += 1
        if not _lambda_system_ok(c):
            lam_bad += 1
        got = circuit_number_compare(c)
        logs = mpmath.fsum(
            mpmath.mpf(l.numerator) / l.denominator
            * (mpmath.log(mpmath.mpf(coef.numerator) / coef.denominator) - mpmath.log(mpmath.mpf(l.numerator) / l.denominator))
            for (_, coef), l in zip(c.outer, c.lambdas)
        )
        fb = abs(c.inner[1])
        diff = mpmath.log(mpmath.mpf(fb.numerator) / fb.denominator) - logs
        if abs(diff) < band:
            redecided += 1
            want = _exact_decision(c)
        else:
            want = Cmp.GREATER if diff > 0 else Cmp.LESS
        equal_seen += got is Cmp.EQUAL
        if got is not want:
            disagree += 1
    # anchors
    anchor = validate(parse("1 - 2*x1 + x1^2", 1))
    anchor_ok = circuit_number_power(anchor) == (4, 2) and circuit_number_compare(anchor) is Cmp.EQUAL
    t = min_outer_for_edge(Fraction(-2), Fraction(1))
    boundary = validate(Poly(1, [((0,), t), ((2,), Fraction(1)), ((1,), Fraction(-2))]))
    anchor_ok = anchor_ok and circuit_number_compare(boundary) is Cmp.EQUAL
    ok = disagree == 0 and lam_bad == 0 and big_den == 0 and anchor_ok
    return ok, (
        f"disagreements={disagree}/10000, exact re-decisions={redecided}, EQUAL cases={equal_seen}, "
        f"lambda-system failures={lam_bad}, anchors {'ok' if anchor_ok else 'FAILED'}"
    )


# --- 7 ------------------------------------------------------------------------

# a vertex-matching decomposition of f_{7/2} on {-1,1}^4: weight, S, sign of chi_S, box index, box sign
_CANDIDATE_7_2 = [
    ("1/64", (0,), 1, 3, 1), ("1/16", (0,), -1, 2, -1), ("1/32", (2,), 1, 2, 1), ("1/64", (2,), 1, 3, 1),
    ("5/32", (0, 1), 1, None, 1), ("3/32", (0, 2), 1, 1, 1), ("3/32", (0, 3), 1, 1, 1), ("3/64", (0, 3), 1, 2, 1),
    ("3/32", (1, 2), 1, None, 1), ("1/16", (1, 2), 1, 3, 1), ("1/16", (1, 3), 1, 0, 1), ("3/32", (1, 3), 1, 2, 1),
    ("9/64", (2, 3), 1, 0, 1), ("1/16", (0, 1, 2), 1, 3, 1), ("1/32", (0, 2, 3), 1, 1, 1), ("1/16", (0, 2, 3), -1, 1, -1),
]


def _chi_term(n, S, sigma, w):
    beta = tuple(1 if i in S else 0 for i in range(n))
    a1, a2 = case2_exponents(beta)
    w = Fraction(w)
    return validate(Poly(n, [(a1, w / 2), (a2, w / 2), (beta, sigma * w)]))


def _random_candidate(rng, n):
    terms = []
    for _ in range(rng.randint(0, 8)):
        c = random_nonneg_circuit(rng, n, max_den=4)
        box = BoxAtom(rng.randrange(n), rng.choice((1, -1)), Fraction(rng.randint(0, 2))) if rng.random() < 0.6 else None
        terms.append((c, box))
    return terms


def criterion_7():
    rng = random.Random(SEED + 7)
    start = time.perf_counter()
    bound_ok = putinar_bound(4) == 5
    law_fail = 0
    for k in range(500):
        n = rng.randint(1, 10)
        c = random_nonneg_circuit(rng, n)
        if k % 2 == 0:
            law_fail += not check_lemma52(c)
        else:
            box = BoxAtom(rng.randrange(n), rng.choice((1, -1)), Fraction(rng.randint(0, 3), rng.randint(1, 3)))
            law_fail += not check_lemma53(c, box)
    # a = 6: the aggregate inequality fails, so every candidate is refuted
    at6 = aggregate_report(4, 6, [])
    refuted6 = at6.aggregate_refutes
    candidates = [_random_candidate(rng, 4) for _ in range(30)]
    chi = [(_chi_term(4, S, s, w), None if i is None else BoxAtom(i, t)) for w, S, s, i, t in _CANDIDATE_7_2]
    candidates.append(chi)
    refuted6 = refuted6 and not any(theorem51_aggregate_check(4, 6, cand) for cand in candidates)
    # a = 4: the inequality 16 <= 19 holds, no refutation from the aggregate
    no_refute4 = not aggregate_report(4, 4, []).aggregate_refutes
    no_refute4 = no_refute4 and all(not aggregate_report(4, 4, cand).aggregate_refutes for cand in candidates)
    # a matching candidate below the bound is accepted by the check
    witness = theorem51_aggregate_check(4, Fraction(7, 2), chi)
    elapsed = time.perf_counter() - start
    ok = bound_ok and law_fail == 0 and refuted6 and no_refute4 and witness and elapsed < 30
    return ok, (
        f"bound(4)={putinar_bound(4)}, histogram-law failures={law_fail}/500, "
        f"a=6 refuted={refuted6}, a=4 aggregate refutes nothing={no_refute4}, "
        f"a=7/2 matching candidate accepted={witness}, {elapsed:.1f}s"
    )


# --- 8 ------------------------------------------------------------------------


def criterion_8():
    res = lemma31_regression()
    r = parse("1 - 2*x1 + x1^2", 2) * parse("1 - 2*x2 + x2^2", 2)
    nine = len(r) == 9 and r.coefficient((1, 1)) == 4
    ok = bool(res) and res.expansion_ok and res.system_infeasible and nine and corollary32_regression()
    return ok, (
        f"product obstruction={bool(res)} (9-term expansion={res.expansion_ok}, system infeasible={res.system_infeasible}), "
        f"affine image={corollary32_regression()}"
    )


# --- 9 ------------------------------------------------------------------------


def criterion_9():
    rng = random.Random(SEED + 9)
    pool = []
    while len(pool) < 60:
        cube, cs, f = nonneg_instance(rng, rng.randint(1, 4), rng.randint(0, 3), rng.randint(1, 2))
        data = certify_hypercube(f, cube, cs).to_json()
        if data["terms"]:
            pool.append((cube, cs, f, data))
    rejected = accepted_confirmed = accepted_unconfirmed = 0
    for k in range(1000):
        cube, cs, f, data = pool[k % len(pool)]
        bad = tamper(data, rng, FIELD_CLASSES[k % len(FIELD_CLASSES)])
        if verify_certificate(f, bad, cube, cs).overall:
            if brute_force_valid(f, bad, cube, cs, rng):
                accepted_confirmed += 1
            else:
                accepted_unconfirmed += 1
        else:
            rejected += 1
    ok = rejected >= 990 and accepted_unconfirmed == 0
    return ok, (
        f"rejected={rejected}/1000, accepted and brute-force valid={accepted_confirmed}, "
        f"accepted but invalid={accepted_unconfirmed}"
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number - 1]()
    with capsys.disabled():
        print()
        _emit(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        _emit(k, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
