"""Executable regressions for structural facts about SONC polynomials.

* The product (1 - x1)^2 (1 - x2)^2 of two nonnegative circuits is not
  SONC, and neither is the affine image of the monomial square x1^2 x2^2.
* On {-1, 1}^n a single-multiplier SONC decomposition cannot reach the
  family f_a = (a - 1) prod (x_i + 1)/2 + 1 once a exceeds
  (2^n - 1) / (2^(n-2) - 1).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .circuit import Circuit, Cmp, circuit_number_compare, circuit_number_power, is_nonnegative, validate
from .hypercube import DEFAULT_CAP, DimensionTooLarge
from .poly import Poly, parse
from .randgen import random_nonneg_circuit


class DimensionTooSmall(ValueError):
    pass


def pm1_vertices(n: int, cap: int = DEFAULT_CAP):
    if n > cap:
        raise DimensionTooLarge(f"n = {n} exceeds vertex cap {cap}")
    return itertools.product((-1, 1), repeat=n)


def build_fa(n: int, a) -> Poly:
    if n < 1:
        raise ValueError("n must be positive")
    a = Fraction(a)
    prod = Poly.constant(n, 1)
    for i in range(n):
        prod = prod * (Poly.variable(n, i) + 1).scale(Fraction(1, 2))
    return prod.scale(a - 1) + 1


def putinar_bound(n: int) -> Fraction:
    if n <= 2:
        raise DimensionTooSmall("the bound needs n >= 3")
    return Fraction(2**n - 1, 2 ** (n - 2) - 1)


@dataclass(frozen=True)
class BoxAtom:
    """1 + c + sign * x_i with c >= 0, i 0-based."""

    i: int
    sign: int = 1
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if Fraction(self.c) < 0:
            raise ValueError("box offset c must be nonnegative")

    def poly(self, n: int) -> Poly:
        return Poly.variable(n, self.i).scale(self.sign) + (1 + Fraction(self.c))


@dataclass
class ValueProfile:
    histogram: Counter

    @property
    def total(self) -> int:
        return sum(self.histogram.values())

    def __len__(self):
        return len(self.histogram)


def value_profile(s: Poly, n: Optional[int] = None, cap: int = DEFAULT_CAP) -> ValueProfile:
    """Exact histogram of the values of ``s`` over {-1, 1}^n."""
    n = s.n if n is None else n
    if n != s.n:
        raise ValueError("dimension mismatch")
    return ValueProfile(Counter(s.evaluate(v) for v in pm1_vertices(n, cap)))


def check_lemma52(circuit: Circuit, n: Optional[int] = None) -> bool:
    """At most two values on {-1,1}^n; if two, each on exactly half the vertices."""
    n = circuit.n if n is None else n
    prof = value_profile(circuit.poly, n)
    if len(prof) == 1:
        return True
    return len(prof) == 2 and all(c == 2 ** (n - 1) for c in prof.histogram.values())


def check_lemma53(circuit: Circuit, box: BoxAtom, n: Optional[int] = None) -> bool:
    """At most four values; each taken on at least a quarter of the vertices."""
    n = circuit.n if n is None else n
    prof = value_profile(circuit.poly * box.poly(n), n)
    return len(prof) <= 4 and all(c >= 2 ** (n - 2) for c in prof.histogram.values())


# --- product and affine non-closure -------------------------------------------

R_EXPANSION = "1 - 2*x1 - 2*x2 + 4*x1*x2 + x1^2 + x2^2 - 2*x1^2*x2 - 2*x1*x2^2 + x1^2*x2^2"


@dataclass
class ProductObstruction:
    p1_ok: bool
    p2_ok: bool
    theta_ok: bool
    expansion_ok: bool
    x1x2_coefficient: Fraction
    edge_thresholds: tuple[Fraction, Fraction]
    system_infeasible: bool
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return all(
            (self.p1_ok, self.p2_ok, self.theta_ok, self.expansion_ok, self.system_infeasible)
        )


def min_outer_for_edge(inner_coef: Fraction, other_outer: Fraction) -> Fraction:
    """Smallest constant term c with |inner| <= Theta for c + u x^2 + inner x, lambda = (1/2, 1/2).

    Theta = 2 sqrt(c u), so the threshold is inner^2 / (4 u).  The value is
    confirmed against the exact comparison: EQUAL at the threshold and
    GREATER just below it.
    """
    c = inner_coef**2 / (4 * other_outer)
    at = validate(Poly(1, [((0,), c), ((2,), other_outer), ((1,), inner_coef)]))
    below = validate(Poly(1, [((0,), c * Fraction(999, 1000)), ((2,), other_outer), ((1,), inner_coef)]))
    assert circuit_number_compare(at) is Cmp.EQUAL
    assert circuit_number_compare(below) is Cmp.GREATER
    return c


def fourier_motzkin_feasible(rows: Sequence[tuple[Sequence[Fraction], Fraction]]) -> bool:
    """Decide feasibility of {x : a . x <= b for (a, b) in rows} exactly."""
    system = [([Fraction(x) for x in a], Fraction(b)) for a, b in rows]
    if not system:
        return True
    nvars = len(system[0][0])
    for k in range(nvars):
        pos = [(a, b) for a, b in system if a[k] > 0]
        neg = [(a, b) for a, b in system if a[k] < 0]
        keep = [(a, b) for a, b in system if a[k] == 0]
        for ap, bp in pos:
            for an, bn in neg:
                lp, ln = -an[k], ap[k]
                keep.append(([lp * x + ln * y for x, y in zip(ap, an)], lp * bp + ln * bn))
        system = keep
    return all(b >= 0 for _, b in system)


def lemma31_regression() -> ProductObstruction:
    p1 = parse("1 - 2*x1 + x1^2", 2)
    p2 = parse("1 - 2*x2 + x2^2", 2)
    c1, c2 = validate(p1), validate(p2)
    half = (Fraction(1, 2), Fraction(1, 2))
    p1_ok = is_nonnegative(c1) and c1.lambdas == half
    p2_ok = is_nonnegative(c2) and c2.lambdas == half
    theta_ok = all(
        circuit_number_power(c) == (Fraction(4), 2) and circuit_number_compare(c) is Cmp.EQUAL
        for c in (c1, c2)
    )
    x1, x2 = Poly.variable(2, 0), Poly.variable(2, 1)
    r = p1 * p2
    expansion_ok = r == parse(R_EXPANSION, 2) and r == ((1 - x1) * (1 - x2)) ** 2 and len(r) == 9

    # -2 x1 must be the inner term of a circuit with outer terms 1 and x1^2;
    # the x1^2 budget is 1, so its constant coefficient c1 is at least t1
    t1 = min_outer_for_edge(r.coefficient((1, 0)), r.coefficient((2, 0)))
    t2 = min_outer_for_edge(r.coefficient((0, 1)), r.coefficient((0, 2)))
    budget = r.coefficient((0, 0))
    # variables (c1, c2): -c1 <= -t1, -c2 <= -t2, c1 + c2 <= budget
    system = [
        ((Fraction(-1), Fraction(0)), -t1),
        ((Fraction(0), Fraction(-1)), -t2),
        ((Fraction(1), Fraction(1)), budget),
    ]
    infeasible = not fourier_motzkin_feasible(system)
    return ProductObstruction(
        p1_ok,
        p2_ok,
        theta_ok,
        expansion_ok,
        r.coefficient((1, 1)),
        (t1, t2),
        infeasible,
    )


def affine_substitution(p: Poly, shifts: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Apply x_i -> shifts[i][0] + shifts[i][1] * x_i."""
    subs = [Poly.variable(p.n, i).scale(s) + c for i, (c, s) in enumerate(shifts)]
    return p.compose(subs)


def corollary32_regression() -> bool:
    square = validate(Poly.monomial((2, 2)))
    if not (square.is_monomial_square and is_nonnegative(square)):
        return False
    flip = [(Fraction(1), Fraction(-1))] * 2
    image = affine_substitution(square.poly, flip)
    r = parse(R_EXPANSION, 2)
    identity = affine_substitution(r, [(Fraction(0), Fraction(1))] * 2)
    twice = affine_substitution(image, flip)
    return image == r and identity == r and twice == square.poly


# --- the single-multiplier bound ------------------------------------------------


@dataclass
class AggregateReport:
    n: int
    a: Fraction
    terms_valid: bool
    vertex_match: bool
    value_counts_ok: bool
    vertex_sum: Fraction  # sum over the cube of the candidate
    weighted_e_sum: Fraction  # sum over terms of (#vertices with the e-value) * e-value
    e_value: Fraction
    aggregate_refutes: bool  # 2^(n-2) a > 2^n - 1 + a
    notes: list[str] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return not (self.terms_valid and self.vertex_match and self.value_counts_ok) or self.aggregate_refutes


def aggregate_report(
    n: int, a, candidate_terms: Sequence[tuple[Circuit, Optional[BoxAtom]]], cap: int = DEFAULT_CAP
) -> AggregateReport:
    """Run the counting argument against a claimed single-multiplier decomposition."""
    a = Fraction(a)
    fa = build_fa(n, a)
    e = (1,) * n
    notes = []
    terms_valid = True
    polys = []
    for k, (circ, box) in enumerate(candidate_terms):
        if circ.n != n or not is_nonnegative(circ):
            terms_valid = False
            notes.append(f"term {k} is not a nonnegative circuit in {n} variables")
        polys.append(circ.poly if box is None else circ.poly * box.poly(n))

    vertices = list(pm1_vertices(n, cap))
    vertex_match = True
    vertex_sum = Fraction(0)
    for v in vertices:
        value = sum((p.evaluate(v) for p in polys), Fraction(0))
        vertex_sum += value
        if value != fa.evaluate(v):
            vertex_match = False
    if not vertex_match:
        notes.append("candidate does not agree with f_a on the cube")

    value_counts_ok = True
    weighted = Fraction(0)
    e_value = Fraction(0)
    for k, ((circ, box), p) in enumerate(zip(candidate_terms, polys)):
        at_e = p.evaluate(e)
        e_value += at_e
        hist = value_profile(p, n, cap).histogram
        need = 2 ** (n - 1) if box is None else 2 ** (n - 2)
        if hist[at_e] < need or any(val < 0 for val in hist):
            value_counts_ok = False
            notes.append(f"term {k}: e-value taken on {hist[at_e]} < {need} vertices")
        weighted += hist[at_e] * at_e

    bound_lhs = 2 ** (n - 2) * a
    bound_rhs = 2**n - 1 + a
    return AggregateReport(
        n,
        a,
        terms_valid,
        vertex_match,
        value_counts_ok,
        vertex_sum,
        weighted,
        e_value,
        bound_lhs > bound_rhs,
        notes,
    )


def theorem51_aggregate_check(
    n: int, a, candidate_terms: Sequence[tuple[Circuit, Optional[BoxAtom]]], cap: int = DEFAULT_CAP
) -> bool:
    """False when the candidate is refuted (mismatch on the cube or a above the bound)."""
    return not aggregate_report(n, a, candidate_terms, cap).refuted


def run_all(seed: int = 0) -> list[tuple[str, bool]]:
    """Every regression as (name, passed) rows."""
    rng = random.Random(seed)
    rows = [
        ("product of two nonnegative circuits is not SONC", bool(lemma31_regression())),
        ("affine image of x1^2 x2^2 is not SONC", corollary32_regression()),
        ("putinar bound n=3 is 7", putinar_bound(3) == 7),
        ("putinar bound n=4 is 5", putinar_bound(4) == 5),
        (
            "putinar bound decreases towards 4",
            all(putinar_bound(k) > putinar_bound(k + 1) > 4 for k in range(3, 30)),
        ),
        ("f_a(e) = a, f_a = 1 elsewhere (n=3, a=8)", _fa_values_ok(3, Fraction(8))),
    ]
    ok52 = ok53 = True
    for _ in range(50):
        k = rng.randint(1, 6)
        c = random_nonneg_circuit(rng, k)
        ok52 &= check_lemma52(c)
        ok53 &= check_lemma53(c, BoxAtom(rng.randrange(k), rng.choice((1, -1)), Fraction(rng.randint(0, 3), rng.randint(1, 3))))
    rows.append(("two-value law on 50 random circuits", ok52))
    rows.append(("four-value law on 50 random circuit*box products", ok53))
    rows.append(("aggregate inequality fails at n=4, a=6", aggregate_report(4, 6, []).aggregate_refutes))
    rows.append(("aggregate inequality holds at n=4, a=4", not aggregate_report(4, 4, []).aggregate_refutes))
    return rows


def _fa_values_ok(n: int, a: Fraction) -> bool:
    fa = build_fa(n, a)
    return all(fa.evaluate(v) == (a if all(x == 1 for x in v) else 1) for v in pm1_vertices(n))
