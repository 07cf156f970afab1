"""Hypercubes prod_j {a_j, b_j}, their Kronecker deltas and multilinear normal forms."""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .poly import DimensionMismatch, Poly, parse, to_fraction

DEFAULT_CAP = 20


class DimensionTooLarge(ValueError):
    pass


class NotAVertex(ValueError):
    pass


@dataclass(frozen=True)
class Hypercube:
    roots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        roots = tuple((to_fraction(a), to_fraction(b)) for a, b in self.roots)
        for j, (a, b) in enumerate(roots):
            if not a < b:
                raise ValueError(f"coordinate {j + 1}: need a < b, got {a}, {b}")
        object.__setattr__(self, "roots", roots)

    @property
    def n(self) -> int:
        return len(self.roots)

    def g(self, j: int) -> Poly:
        """g_j = (x_j - a_j)(x_j - b_j) for 0-based ``j``."""
        a, b = self.roots[j]
        x = Poly.variable(self.n, j)
        return (x - a) * (x - b)

    def vertices(self, cap: int = DEFAULT_CAP) -> Iterator[tuple[Fraction, ...]]:
        """Lazily enumerate all 2^n vertices."""
        if self.n > cap:
            raise DimensionTooLarge(f"n = {self.n} exceeds vertex cap {cap}")
        return itertools.product(*self.roots)

    def is_vertex(self, v: Sequence) -> bool:
        return len(v) == self.n and all(to_fraction(x) in r for x, r in zip(v, self.roots))

    def to_json(self) -> dict:
        return {"roots": [[str(a), str(b)] for a, b in self.roots]}

    @classmethod
    def from_json(cls, data: dict) -> "Hypercube":
        return cls(tuple((Fraction(a), Fraction(b)) for a, b in data["roots"]))


def pm1(n: int) -> Hypercube:
    return Hypercube(((Fraction(-1), Fraction(1)),) * n)


def zero_one(n: int) -> Hypercube:
    return Hypercube(((Fraction(0), Fraction(1)),) * n)


def parse_cube(spec: str) -> Hypercube:
    """``pm1:n``, ``01:n`` or a path to a hypercube JSON file."""
    if ":" in spec:
        kind, _, count = spec.partition(":")
        n = int(count)
        if kind == "pm1":
            return pm1(n)
        if kind == "01":
            return zero_one(n)
        raise ValueError(f"unknown cube shorthand {kind!r}")
    with open(spec) as fh:
        return Hypercube.from_json(json.load(fh))


# --- Kronecker deltas -------------------------------------------------------


@dataclass(frozen=True)
class DeltaFactored:
    """scale * prod_j factor_j, with factor_j = b_j - x_j (v_j = a_j) or x_j - a_j (v_j = b_j)."""

    scale: Fraction
    upper: tuple[bool, ...]  # upper[j] is True when v_j = b_j
    cube: Hypercube

    def factor(self, j: int) -> Poly:
        a, b = self.cube.roots[j]
        x = Poly.variable(self.cube.n, j)
        return x - a if self.upper[j] else b - x

    @property
    def factors(self) -> list[Poly]:
        return [self.factor(j) for j in range(self.cube.n)]

    def expand(self) -> Poly:
        out = Poly.constant(self.cube.n, self.scale)
        for f in self.factors:
            out = out * f
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        roots = self.cube.roots
        # a vanishing factor is found by comparison alone, before any products
        for (a, b), up, x in zip(roots, self.upper, point):
            if x == (a if up else b):
                return Fraction(0)
        value = self.scale
        for (a, b), up, x in zip(roots, self.upper, point):
            value *= (x - a) if up else (b - x)
        return value


def delta_factored(cube: Hypercube, v: Sequence) -> DeltaFactored:
    """The factored delta alone, skipping the 2^n-term expansion."""
    if not cube.is_vertex(v):
        raise NotAVertex(f"{tuple(v)} is not a vertex of the hypercube")
    upper = tuple(to_fraction(x) == b for x, (a, b) in zip(v, cube.roots))
    scale = Fraction(1)
    for a, b in cube.roots:
        scale /= b - a
    return DeltaFactored(scale, upper, cube)


def kronecker_delta(cube: Hypercube, v: Sequence) -> tuple[DeltaFactored, Poly]:
    d = delta_factored(cube, v)
    return d, d.expand()


# --- normal form ------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormResult:
    remainder: Poly
    quotients: tuple[Poly, ...]


def _heap_key(e):
    # min-heap key that pops the glex-largest exponent first
    return (-sum(e),) + tuple(-x for x in e)


def normal_form(f: Poly, cube: Hypercube) -> NormalFormResult:
    """Divide ``f`` by g_1..g_n under graded lex order.

    The glex-largest term divisible by some x_j^2 is rewritten with
    x_j^2 -> (a_j + b_j) x_j - a_j b_j (smallest such j first) until the
    remainder is multilinear.  Quotients are accumulated so that
    f == sum_j quotients[j] * g_j + remainder holds exactly.
    """
    if f.n != cube.n:
        raise DimensionMismatch(f"polynomial has n={f.n}, cube has n={cube.n}")
    n = cube.n
    work: dict[tuple, Fraction] = dict(f.terms)
    quot: list[dict[tuple, Fraction]] = [{} for _ in range(n)]
    heap = [(_heap_key(e), e) for e in work if max(e, default=0) >= 2]
    heapq.heapify(heap)
    queued = {e for _, e in heap}

    def push(e):
        if e not in queued and max(e, default=0) >= 2:
            queued.add(e)
            heapq.heappush(heap, (_heap_key(e), e))

    def add(e, c):
        s = work.get(e, 0) + c
        if s:
            work[e] = s
            push(e)
        else:
            work.pop(e, None)

    while heap:
        _, e = heapq.heappop(heap)
        queued.discard(e)
        c = work.pop(e, None)
        if not c:
            continue
        j = next(i for i, x in enumerate(e) if x >= 2)
        a, b = cube.roots[j]
        base = list(e)
        base[j] -= 2
        base = tuple(base)
        quot[j][base] = quot[j].get(base, 0) + c
        lin = list(base)
        lin[j] += 1
        if a + b:
            add(tuple(lin), c * (a + b))
        if a * b:
            add(base, -c * a * b)

    return NormalFormResult(
        Poly(n, work),
        tuple(Poly(n, q) for q in quot),
    )


def vanishes_on_cube(f: Poly, cube: Hypercube) -> bool:
    return normal_form(f, cube).remainder.is_zero()


# --- Groebner check -----------------------------------------------------------


def s_polynomial(cube: Hypercube, i: int, j: int) -> Poly:
    """S(g_i, g_j) for i > j (0-based), written out coefficient by coefficient."""
    n = cube.n
    ai, bi = cube.roots[i]
    aj, bj = cube.roots[j]

    def mono(**powers):
        e = [0] * n
        e[i] += powers.get("xi", 0)
        e[j] += powers.get("xj", 0)
        return tuple(e)

    return Poly(
        n,
        [
            (mono(xi=2, xj=1), aj + bj),
            (mono(xi=1, xj=2), -(ai + bi)),
            (mono(xi=2), -aj * bj),
            (mono(xj=2), ai * bi),
        ],
    )


def s_polynomial_failures(cube: Hypercube) -> list[tuple[int, int]]:
    """Pairs (i, j), i > j, whose S-polynomial leaves a nonzero remainder."""
    bad = []
    for i in range(cube.n):
        for j in range(i):
            if not normal_form(s_polynomial(cube, i, j), cube).remainder.is_zero():
                bad.append((i, j))
    return bad


def s_polynomial_check(cube: Hypercube) -> bool:
    if cube.n < 2:
        raise ValueError("S-polynomial check needs n >= 2")
    return not s_polynomial_failures(cube)


# --- constraints --------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSet:
    """Inequalities p_i(x) >= 0 plus box constraints N +- x_j >= 0."""

    polys: tuple[Poly, ...] = ()
    box_constant: Fraction | None = None

    @property
    def m(self) -> int:
        return len(self.polys)

    @property
    def degree(self) -> int:
        """Largest constraint degree, 0 without constraints."""
        return max((int(p.degree()) for p in self.polys if p), default=0)

    def box_for(self, cube: Hypercube) -> Fraction:
        bound = max((max(abs(a), abs(b)) for a, b in cube.roots), default=Fraction(0))
        if self.box_constant is None:
            return 1 + bound
        if self.box_constant < bound:
            raise ValueError(f"box constant {self.box_constant} is below max |root| = {bound}")
        return self.box_constant

    def box_polys(self, cube: Hypercube) -> list[Poly]:
        """l_{2j} = N + x_j and l_{2j+1} = N - x_j."""
        N = self.box_for(cube)
        out = []
        for j in range(cube.n):
            x = Poly.variable(cube.n, j)
            out += [N + x, N - x]
        return out

    def satisfied(self, v: Sequence) -> bool:
        return all(p.evaluate(v) >= 0 for p in self.polys)

    def to_json(self) -> dict:
        out: dict = {"polys": [p.to_json() for p in self.polys]}
        if self.box_constant is not None:
            out["N"] = str(self.box_constant)
        return out

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "ConstraintSet":
        polys = []
        for p in data.get("polys", []):
            polys.append(parse(p, n) if isinstance(p, str) else Poly.from_json(p))
        N = data.get("N")
        return cls(tuple(polys), None if N is None else Fraction(N))


def feasible_vertices(cube: Hypercube, constraints: ConstraintSet, cap: int = DEFAULT_CAP) -> list[tuple]:
    return [v for v in cube.vertices(cap) if constraints.satisfied(v)]
