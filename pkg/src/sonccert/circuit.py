"""Circuit polynomials and the exact circuit-number test.

A circuit polynomial has even outer exponents forming the vertices of a
simplex and at most one further ("inner") term whose exponent lies in
the relative interior.  Its nonnegativity is decided by comparing the
inner coefficient against the circuit number

    Theta = prod_j (c_j / lambda_j) ** lambda_j

where lambda are the barycentric coordinates of the inner exponent.
Everything here is exact; no logarithms or floats are used.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import nullspace, rank
from .poly import Exponent, Poly, is_even_point


class CircuitError(ValueError):
    pass


class NotASimplex(CircuitError):
    pass


class VertexNotEven(CircuitError):
    pass


class InnerNotStrictlyInterior(CircuitError):
    pass


class TooManyInnerTerms(CircuitError):
    pass


class NegativeOuterCoefficient(CircuitError):
    pass


class NoInnerTerm(CircuitError):
    pass


class Cmp(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Circuit:
    n: int
    outer: tuple[tuple[Exponent, Fraction], ...]
    inner: Optional[tuple[Exponent, Fraction]]
    lambdas: tuple[Fraction, ...]

    @property
    def poly(self) -> Poly:
        terms = list(self.outer)
        if self.inner is not None:
            terms.append(self.inner)
        return Poly(self.n, terms)

    @property
    def degree(self) -> int:
        return max(sum(e) for e, _ in self.outer)

    @property
    def is_monomial_square(self) -> bool:
        return self.inner is None and len(self.outer) == 1

    def scaled(self, t) -> "Circuit":
        t = Fraction(t)
        if t <= 0:
            raise ValueError("circuits may only be scaled by a positive factor")
        inner = None if self.inner is None else (self.inner[0], self.inner[1] * t)
        return Circuit(self.n, tuple((e, c * t) for e, c in self.outer), inner, self.lambdas)

    def to_json(self) -> dict:
        return {
            "outer": [{"exp": list(e), "coef": str(c)} for e, c in self.outer],
            "inner": None if self.inner is None else {"exp": list(self.inner[0]), "coef": str(self.inner[1])},
            "lambda": [str(x) for x in self.lambdas],
        }

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "Circuit":
        """Rebuild from JSON.  The stored lambdas are ignored; validation recomputes them."""
        terms = [(tuple(t["exp"]), Fraction(t["coef"])) for t in data["outer"]]
        if data.get("inner") is not None:
            terms.append((tuple(data["inner"]["exp"]), Fraction(data["inner"]["coef"])))
        if n is None:
            n = len(terms[0][0])
        return validate(Poly(n, terms))


def monomial_square(exp: Sequence[int], coef=1) -> Circuit:
    return validate(Poly.monomial(exp, coef))


def validate(candidate: Poly) -> Circuit:
    """Check the circuit conditions on ``candidate`` and compute barycentric coordinates."""
    if candidate.is_zero():
        raise CircuitError("zero polynomial is not a circuit")
    items = candidate.items()
    n = candidate.n
    if len(items) == 1:
        exp, c = items[0]
        if not is_even_point(exp):
            raise VertexNotEven(f"single term at {exp} is not a monomial square")
        if c <= 0:
            raise NegativeOuterCoefficient(f"single term coefficient {c} is not positive")
        return Circuit(n, ((exp, c),), None, ())

    points = [e for e, _ in items]
    m = len(points)
    # columns are the lifted points (alpha, 1)
    lifted = [[p[i] for p in points] for i in range(n)] + [[1] * m]
    kernel = nullspace(lifted)
    if not kernel:
        raise NoInnerTerm("support is affinely independent; no inner term")
    if len(kernel) > 1:
        raise TooManyInnerTerms(f"support of {m} points has {len(kernel)} affine dependencies")
    mu = kernel[0]
    neg = [i for i, x in enumerate(mu) if x < 0]
    pos = [i for i, x in enumerate(mu) if x > 0]
    zero = [i for i, x in enumerate(mu) if x == 0]
    if len(neg) == 1 and len(pos) >= 1:
        b = neg[0]
    elif len(pos) == 1 and len(neg) >= 1:
        b = pos[0]
        mu = [-x for x in mu]
    else:
        raise NotASimplex("Newton polytope of the support is not a simplex")
    if zero:
        raise InnerNotStrictlyInterior(
            f"inner exponent {points[b]} lies on a proper face of the simplex"
        )
    beta = points[b]
    outer_idx = [i for i in range(m) if i != b]
    scale = -mu[b]
    lambdas = tuple(mu[i] / scale for i in outer_idx)

    outer = tuple(items[i] for i in outer_idx)
    for e, c in outer:
        if not is_even_point(e):
            raise VertexNotEven(f"vertex {e} is not even")
    for e, c in outer:
        if c <= 0:
            raise NegativeOuterCoefficient(f"outer coefficient {c} at {e} is not positive")
    return Circuit(n, outer, items[b], lambdas)


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def circuit_number_power(c: Circuit) -> tuple[Fraction, int]:
    """Return ``(Theta**D, D)`` with ``D`` the lcm of the lambda denominators."""
    if c.inner is None:
        raise NoInnerTerm("circuit number needs an inner term")
    D = _lcm(l.denominator for l in c.lambdas)
    value = Fraction(1)
    for (_, coef), lam in zip(c.outer, c.lambdas):
        k = lam * D
        assert k.denominator == 1
        value *= (coef / lam) ** int(k)
    return value, D


def circuit_number_compare(c: Circuit) -> Cmp:
    """Compare |f_beta| against Theta by raising both sides to the power D."""
    theta_d, D = circuit_number_power(c)
    lhs = abs(c.inner[1]) ** D
    if lhs < theta_d:
        return Cmp.LESS
    if lhs == theta_d:
        return Cmp.EQUAL
    return Cmp.GREATER


def is_nonnegative(c: Circuit) -> bool:
    if c.inner is None:
        return True
    beta, fb = c.inner
    if is_even_point(beta) and fb >= 0:
        return True
    return circuit_number_compare(c) is not Cmp.GREATER


def lambda_residual_ok(c: Circuit) -> bool:
    """Exact check that sum(lambda) == 1 and sum(lambda * alpha) == beta."""
    if c.inner is None:
        return not c.lambdas
    if sum(c.lambdas) != 1:
        return False
    beta = c.inner[0]
    for i in range(c.n):
        if sum(l * e[i] for l, (e, _) in zip(c.lambdas, c.outer)) != beta[i]:
            return False
    return True


def affinely_independent(points: Sequence[Sequence[int]]) -> bool:
    if not points:
        return True
    lifted = [list(p) + [1] for p in points]
    return rank(lifted) == len(points)
