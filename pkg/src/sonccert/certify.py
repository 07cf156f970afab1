"""Construction of SONC certificates over constrained hypercubes.

A certificate writes ``f`` as a finite sum of terms
``weight * scale * s(x) * h_1(x) * ... * h_q(x)`` where each ``s`` is a
nonnegative circuit polynomial and each ``h_k`` is one of the constraint
atoms below, all of which are nonnegative on the feasible vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

from .circuit import Circuit, is_nonnegative, monomial_square, validate
from .hypercube import (
    DEFAULT_CAP,
    ConstraintSet,
    Hypercube,
    kronecker_delta,
    normal_form,
)
from .poly import DimensionMismatch, Exponent, Poly, is_even_point, sum_polys

# atom kinds; j-indexed kinds refer to a coordinate, P to a constraint polynomial
G = "G"  # (x_j - a_j)(x_j - b_j)
NEG_G = "NEG_G"  # -(x_j - a_j)(x_j - b_j)
BOXPLUS = "BOXPLUS"  # x_j - a_j
BOXMINUS = "BOXMINUS"  # b_j - x_j
LPLUS = "LPLUS"  # N + x_j
LMINUS = "LMINUS"  # N - x_j
P = "P"  # p_i

KINDS = (G, NEG_G, BOXPLUS, BOXMINUS, LPLUS, LMINUS, P)
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


class CertifyError(ValueError):
    pass


class NegativeOnFeasibleVertex(CertifyError):
    def __init__(self, vertex, value):
        super().__init__(f"f({vertex}) = {value} < 0 at a feasible vertex")
        self.vertex = vertex
        self.value = value


class NoViolatedConstraint(CertifyError):
    pass


class DoesNotVanish(CertifyError):
    pass


class DegreeTooHigh(CertifyError):
    pass


@dataclass(frozen=True, order=True)
class Atom:
    kind: str
    index: int  # 0-based coordinate for G/box kinds, 0-based constraint index for P

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("atom index must be nonnegative")

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.index)

    def to_json(self) -> dict:
        if self.kind == P:
            return {"kind": P, "i": self.index}
        return {"kind": self.kind, "j": self.index + 1}

    @classmethod
    def from_json(cls, data: dict) -> "Atom":
        if data["kind"] == P:
            return cls(P, int(data["i"]))
        return cls(data["kind"], int(data["j"]) - 1)


def make_product(atoms) -> tuple[Atom, ...]:
    """Canonical multiset form: atoms sorted."""
    return tuple(sorted(atoms, key=Atom.sort_key))


def atom_poly(atom: Atom, cube: Hypercube, constraints: ConstraintSet) -> Poly:
    if atom.kind == P:
        return constraints.polys[atom.index]
    j = atom.index
    a, b = cube.roots[j]
    x = Poly.variable(cube.n, j)
    if atom.kind == G:
        return cube.g(j)
    if atom.kind == NEG_G:
        return -cube.g(j)
    if atom.kind == BOXPLUS:
        return x - a
    if atom.kind == BOXMINUS:
        return b - x
    N = constraints.box_for(cube)
    return N + x if atom.kind == LPLUS else N - x


def atom_degree(atom: Atom, constraints: ConstraintSet) -> int:
    if atom.kind == P:
        return int(constraints.polys[atom.index].degree())
    return 2 if atom.kind in (G, NEG_G) else 1


def expand_product(product: Sequence[Atom], cube: Hypercube, constraints: ConstraintSet) -> Poly:
    out = Poly.constant(cube.n, 1)
    for atom in product:
        out = out * atom_poly(atom, cube, constraints)
    return out


@dataclass(frozen=True)
class CertTerm:
    weight: Fraction
    circuit: Circuit
    product: tuple[Atom, ...] = ()
    scale: Fraction = Fraction(1)

    @property
    def coefficient(self) -> Fraction:
        return self.weight * self.scale

    def degree(self, constraints: ConstraintSet) -> int:
        return self.circuit.degree + sum(atom_degree(a, constraints) for a in self.product)

    def sort_key(self):
        return (
            tuple(a.sort_key() for a in self.product),
            tuple(sorted(e for e, _ in self.circuit.poly.items())),
            tuple(str(c) for _, c in self.circuit.poly.items()),
        )

    def to_json(self) -> dict:
        return {
            "weight": str(self.weight),
            "scale": str(self.scale),
            "circuit": self.circuit.to_json(),
            "product": [a.to_json() for a in self.product],
        }


@dataclass
class Certificate:
    n: int
    terms: list[CertTerm]
    degree: int
    seed: Optional[int] = None
    # True when the certificate is meant to meet the n + d degree bound
    degree_claim: bool = True
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.terms)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "degree": self.degree,
            "degree_claim": self.degree_claim,
            "terms": [t.to_json() for t in self.terms],
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        """Parse a certificate file.

        Circuits are rebuilt through :func:`circuit.validate`; a term whose
        circuit data is not a circuit at all raises ``CircuitError``.
        """
        n = int(data["n"])
        terms = []
        for t in data["terms"]:
            terms.append(
                CertTerm(
                    Fraction(t["weight"]),
                    Circuit.from_json(t["circuit"], n),
                    tuple(Atom.from_json(a) for a in t.get("product", [])),
                    Fraction(t.get("scale", "1")),
                )
            )
        return cls(n, terms, int(data["degree"]), data.get("seed"), bool(data.get("degree_claim", True)), data.get("meta", {}))


def certificate_polynomial(cert: Certificate, cube: Hypercube, constraints: ConstraintSet) -> Poly:
    cache: dict[tuple[Atom, ...], Poly] = {}
    parts = []
    for t in cert.terms:
        if t.product not in cache:
            cache[t.product] = expand_product(t.product, cube, constraints)
        parts.append((t.circuit.poly * cache[t.product]).scale(t.coefficient))
    return sum_polys(parts, cert.n)


# --- vanishing part -----------------------------------------------------------


@dataclass(frozen=True)
class VanishingTerm:
    circuit: Circuit
    sign: int  # +1 pairs with g_j, -1 with -g_j
    j: int  # 0-based coordinate
    extra: Optional[int] = None  # optional factor (x_extra - a_extra)

    def atoms(self) -> tuple[Atom, ...]:
        atoms = [Atom(G if self.sign > 0 else NEG_G, self.j)]
        if self.extra is not None:
            atoms.append(Atom(BOXPLUS, self.extra))
        return make_product(atoms)


@dataclass(frozen=True)
class VanishingDecomposition:
    terms: tuple[VanishingTerm, ...]

    def expand(self, cube: Hypercube) -> Poly:
        parts = []
        for t in self.terms:
            p = t.circuit.poly * cube.g(t.j)
            if t.extra is not None:
                a, _ = cube.roots[t.extra]
                p = p * (Poly.variable(cube.n, t.extra) - a)
            parts.append(p if t.sign > 0 else -p)
        return sum_polys(parts, cube.n)


def case2_exponents(beta: Exponent) -> tuple[Exponent, Exponent]:
    """Even exponents alpha1, alpha2 with midpoint beta.

    The odd coordinates of beta, in ascending order, are split at
    ceil(k/2): alpha1 raises the first half and lowers the rest, alpha2
    does the opposite.
    """
    odd = [i for i, e in enumerate(beta) if e % 2]
    h = ceil(len(odd) / 2)
    a1, a2 = list(beta), list(beta)
    for pos, i in enumerate(odd):
        step = 1 if pos < h else -1
        a1[i] += step
        a2[i] -= step
    return tuple(a1), tuple(a2)


def _monomial_terms(
    n: int,
    beta: Exponent,
    coef: Fraction,
    j: int,
    extra: Optional[int],
    degree_cap: Optional[int],
    cube: Hypercube,
) -> list[VanishingTerm]:
    if is_even_point(beta):
        sign = 1 if coef > 0 else -1
        return [VanishingTerm(monomial_square(beta, abs(coef)), sign, j, extra)]

    a1, a2 = case2_exponents(beta)
    used = 2 + (1 if extra is not None else 0)
    if degree_cap is not None and extra is None and sum(a1) + used > degree_cap:
        # odd-degree beta at the cap: peel x_i = (x_i - a_i) + a_i off the
        # first odd coordinate so both pieces stay within the cap
        i = next(k for k, e in enumerate(beta) if e % 2)
        rest = list(beta)
        rest[i] -= 1
        rest = tuple(rest)
        out = _monomial_terms(n, rest, coef, j, i, degree_cap, cube)
        a_i = cube.roots[i][0]
        if a_i:
            out += _monomial_terms(n, rest, coef * a_i, j, None, degree_cap, cube)
        return out

    mag = abs(coef)
    s = validate(Poly(n, [(a1, mag), (a2, mag), (beta, coef)]))
    return [
        VanishingTerm(s, 1, j, extra),
        VanishingTerm(monomial_square(a1, mag), -1, j, extra),
        VanishingTerm(monomial_square(a2, mag), -1, j, extra),
    ]


def decompose_vanishing(
    f: Poly, cube: Hypercube, degree_cap: Optional[int] = None
) -> VanishingDecomposition:
    """Write ``f`` (zero on every vertex) as sum of s * (+-g_j) with nonnegative circuits s.

    Each monomial of each division quotient is handled separately: an
    even monomial becomes a monomial square paired with g_j or -g_j by
    sign; an odd one becomes a circuit with two even vertices around it
    paired with g_j, compensated by the two vertex squares paired with
    -g_j.  With ``degree_cap`` set, odd monomials whose circuit would push
    a term past the cap are first split off along one linear box factor.
    """
    if f.n != cube.n:
        raise DimensionMismatch(f"polynomial has n={f.n}, cube has n={cube.n}")
    nf = normal_form(f, cube)
    if not nf.remainder.is_zero():
        raise DoesNotVanish(f"remainder {nf.remainder} is not zero")
    terms: list[VanishingTerm] = []
    for j, q in enumerate(nf.quotients):
        for beta, coef in q.items():
            terms.extend(_monomial_terms(f.n, beta, coef, j, None, degree_cap, cube))
    return VanishingDecomposition(tuple(terms))


# --- full certificate -------------------------------------------------------


def tie_break_pv(v: Sequence, constraints: ConstraintSet) -> int:
    """Smallest 0-based index i with p_i(v) < 0."""
    for i, p in enumerate(constraints.polys):
        if p.evaluate(v) < 0:
            return i
    raise NoViolatedConstraint(f"no constraint is violated at {tuple(v)}")


def delta_atoms(cube: Hypercube, v: Sequence) -> tuple[Atom, ...]:
    return make_product(
        Atom(BOXPLUS if x == b else BOXMINUS, j) for j, (x, (a, b)) in enumerate(zip(v, cube.roots))
    )


def certify_hypercube(
    f: Poly,
    cube: Hypercube,
    constraints: ConstraintSet | None = None,
    cap: int = DEFAULT_CAP,
    seed: Optional[int] = None,
) -> Certificate:
    """Build a degree n + d certificate for ``f`` >= 0 on the feasible vertices.

    Every vertex v contributes c_v * delta_v, with c_v = f(v) when f(v) >= 0
    and c_v = f(v) / p(v) times the first violated constraint p otherwise.
    The remainder vanishes on the cube and is decomposed into circuits
    times +-g_j.
    """
    constraints = constraints or ConstraintSet()
    n = cube.n
    if f.n != n:
        raise DimensionMismatch(f"polynomial has n={f.n}, cube has n={n}")
    if f.degree() > n:
        raise DegreeTooHigh(f"deg f = {f.degree()} exceeds n = {n}; reduce it first")
    d = constraints.degree
    one = monomial_square((0,) * n)

    terms: list[CertTerm] = []
    parts: list[Poly] = []
    for v in cube.vertices(cap):
        fv = f.evaluate(v)
        if constraints.satisfied(v):
            if fv < 0:
                raise NegativeOnFeasibleVertex(v, fv)
            extra: tuple[Atom, ...] = ()
            weight = fv
        elif fv < 0:
            i = tie_break_pv(v, constraints)
            extra = (Atom(P, i),)
            weight = fv / constraints.polys[i].evaluate(v)
        else:
            extra = ()
            weight = fv
        if not weight:
            continue
        delta, delta_poly = kronecker_delta(cube, v)
        product = make_product(delta_atoms(cube, v) + extra)
        terms.append(CertTerm(weight, one, product, delta.scale))
        piece = delta_poly.scale(weight)
        if extra:
            piece = piece * constraints.polys[extra[0].index]
        parts.append(piece)

    residual = f - sum_polys(parts, n)
    if not residual.is_zero():
        vanishing = decompose_vanishing(residual, cube, degree_cap=n + d)
        for t in vanishing.terms:
            terms.append(CertTerm(Fraction(1), t.circuit, t.atoms()))

    terms.sort(key=CertTerm.sort_key)
    degree = max((t.degree(constraints) for t in terms), default=0)
    if degree > n + d:
        raise AssertionError(f"certificate degree {degree} exceeds n + d = {n + d}")
    for t in terms:
        assert is_nonnegative(t.circuit)
    return Certificate(n, terms, degree, seed)
