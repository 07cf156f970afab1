"""Seeded random instances for property runs and the CLI self-checks."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .circuit import Circuit, affinely_independent, is_nonnegative, validate
from .hypercube import ConstraintSet, Hypercube
from .poly import Poly, monomials_up_to


def rand_fraction(rng: random.Random, lo: int = -3, hi: int = 3, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def rand_positive(rng: random.Random, hi: int = 3, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(1, hi * den), den)


def random_cube(rng: random.Random, n: int) -> Hypercube:
    roots = []
    for _ in range(n):
        a = rand_fraction(rng)
        roots.append((a, a + rand_positive(rng)))
    return Hypercube(tuple(roots))


def random_poly(rng: random.Random, n: int, degree: int, nterms: int, max_den: int = 4) -> Poly:
    monos = monomials_up_to(n, degree) if math.comb(n + degree, degree) <= 5000 else None
    terms = []
    for _ in range(nterms):
        if monos is not None:
            exp = rng.choice(monos)
        else:
            exp = [0] * n
            for _ in range(rng.randint(0, degree)):
                exp[rng.randrange(n)] += 1
        terms.append((exp, rand_fraction(rng, max_den=max_den)))
    return Poly(n, terms)


def random_multilinear(rng: random.Random, n: int, nterms: int) -> Poly:
    terms = []
    for _ in range(nterms):
        terms.append(([rng.randint(0, 1) for _ in range(n)], rand_fraction(rng)))
    return Poly(n, terms)


def random_constraints(rng: random.Random, n: int, m: int, degree: int) -> ConstraintSet:
    return ConstraintSet(tuple(random_poly(rng, n, degree, rng.randint(1, 4)) + rand_positive(rng) for _ in range(m)))


def random_simplex(rng: random.Random, n: int, r: int, max_den: int = 12, max_coord: int = 3, tries: int = 200):
    """Even affinely independent vertices and integer beta strictly inside.

    Returns ``(vertices, beta)`` with ``beta`` = sum lambda_j vertices_j and
    every lambda_j denominator at most ``max_den``.
    """
    for _ in range(tries):
        verts = [tuple(2 * rng.randint(0, max_coord) for _ in range(n)) for _ in range(r + 1)]
        D = rng.randint(r + 1, max(r + 1, max_den))
        # positive integer weights summing to D
        cuts = sorted(rng.sample(range(1, D), r)) if r else []
        ks = [b - a for a, b in zip([0] + cuts, cuts + [D])]
        beta = []
        for i in range(n):
            s = sum(k * v[i] for k, v in zip(ks, verts))
            if s % D:
                break
            beta.append(s // D)
        else:
            # integrality is the cheap filter; independence is checked second
            if len(set(verts)) == r + 1 and affinely_independent(verts):
                return verts, tuple(beta)
    # fall back to a midpoint pair, always integral
    while True:
        u = tuple(2 * rng.randint(0, max_coord) for _ in range(n))
        w = tuple(2 * rng.randint(0, max_coord) for _ in range(n))
        if u != w:
            return [u, w], tuple((x + y) // 2 for x, y in zip(u, w))


def _theta_float(outer, lambdas) -> float:
    return math.exp(sum(float(l) * (math.log(float(c)) - math.log(float(l))) for (_, c), l in zip(outer, lambdas)))


def random_circuit(rng: random.Random, n: int, max_den: int = 12, spread: float = 0.5) -> Circuit:
    """Circuit whose inner coefficient lands near the circuit number on either side."""
    r = rng.randint(1, n)
    verts, beta = random_simplex(rng, n, r, max_den)
    outer = [(v, rand_positive(rng, 4, 6)) for v in verts]
    base = validate(Poly(n, outer + [(beta, Fraction(1))]))
    theta = _theta_float(base.outer, base.lambdas)
    factor = 1 + rng.uniform(-spread, spread)
    mag = Fraction(theta * factor).limit_denominator(10**6) or Fraction(1, 10**6)
    sign = rng.choice((1, -1))
    return validate(Poly(n, outer + [(beta, sign * mag)]))


def random_nonneg_circuit(rng: random.Random, n: int, max_den: int = 12) -> Circuit:
    """A nonnegative circuit; sometimes a monomial square, sometimes exactly at the boundary."""
    if rng.random() < 0.1:
        exp = tuple(2 * rng.randint(0, 2) for _ in range(n))
        return validate(Poly.monomial(exp, rand_positive(rng)))
    r = rng.randint(1, n)
    verts, beta = random_simplex(rng, n, r, max_den)
    if rng.random() < 0.3:
        # lambda = (1/2, 1/2) pair with inner coefficient exactly 2 sqrt(c1 c2)
        verts, beta = random_simplex(rng, n, 1, 2)
        c = rand_positive(rng)
        return validate(Poly(n, [(verts[0], c), (verts[1], c), (beta, rng.choice((2, -2)) * c)]))
    outer = [(v, rand_positive(rng, 4, 6)) for v in verts]
    base = validate(Poly(n, outer + [(beta, Fraction(1))]))
    theta = _theta_float(base.outer, base.lambdas)
    mag = Fraction(theta * rng.uniform(0.05, 0.999)).limit_denominator(1000)
    circ = validate(Poly(n, outer + [(beta, rng.choice((1, -1)) * mag)])) if mag else base
    while not is_nonnegative(circ):
        mag /= 2
        circ = validate(Poly(n, outer + [(beta, -mag)]))
    return circ
