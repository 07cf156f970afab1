"""Carathéodory pruning of certificate terms.

Inside one constraint-product group the circuits are vectors in the
monomial basis.  While there are more of them than the dimension of
their span plus one, an exact kernel vector of the affinely lifted
vectors lets us move weight off one term without changing the weighted
sum or the total weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .certify import Atom, Certificate, CertTerm
from .circuit import Circuit
from .linalg import nullspace, rank


def monomial_space_dim(n: int, degree: int) -> int:
    """Number of monomials of degree <= ``degree`` in ``n`` variables."""
    return comb(n + degree, degree)


def _merge(terms: Sequence[tuple[Fraction, Circuit]]) -> list[tuple[Fraction, Circuit]]:
    merged: dict[Circuit, Fraction] = {}
    for w, c in terms:
        merged[c] = merged.get(c, 0) + Fraction(w)
    return [(w, c) for c, w in merged.items() if w]


def span_dimension(circuits: Sequence[Circuit]) -> int:
    basis = sorted({e for c in circuits for e in c.poly.terms})
    return rank([[c.poly.coefficient(e) for e in basis] for c in circuits])


def caratheodory_prune(
    terms: Sequence[tuple[Fraction, Circuit]], degree_cap: int | None = None
) -> list[tuple[Fraction, Circuit]]:
    """Return at most dim + 1 terms with the same weighted sum.

    ``dim`` is the dimension of the span of the circuits, which never
    exceeds the number of monomials of degree <= ``degree_cap``.
    Duplicated circuits are merged first.
    """
    for w, c in terms:
        if w <= 0:
            raise ValueError("weights must be positive")
        if degree_cap is not None and c.degree > degree_cap:
            raise ValueError(f"circuit of degree {c.degree} exceeds cap {degree_cap}")
    work = _merge(terms)
    if len(work) <= 1:
        return work
    dim = span_dimension([c for _, c in work])
    limit = dim + 1
    if len(work) <= limit:
        return work

    weights = [w for w, _ in work]
    circuits = [c for _, c in work]
    basis = sorted({e for c in circuits for e in c.poly.terms})
    vectors = [[c.poly.coefficient(e) for e in basis] + [Fraction(1)] for c in circuits]

    alive = list(range(len(work)))
    while len(alive) > limit:
        # any limit + 1 columns of a rank <= limit matrix are dependent
        batch = alive[: limit + 1]
        rows = [[vectors[k][r] for k in batch] for r in range(len(basis) + 1)]
        kernel = nullspace(rows)
        gamma = kernel[0]
        if not any(g > 0 for g in gamma):
            gamma = [-g for g in gamma]
        t = None
        drop = None
        for pos, (k, g) in enumerate(zip(batch, gamma)):
            if g > 0:
                ratio = weights[k] / g
                if t is None or ratio < t:
                    t, drop = ratio, pos
        for k, g in zip(batch, gamma):
            weights[k] -= t * g
        weights[batch[drop]] = Fraction(0)
        alive = [k for k in alive if weights[k] > 0]
        assert all(weights[k] >= 0 for k in range(len(weights)))

    return [(weights[k], circuits[k]) for k in alive]


@dataclass
class GroupedCert:
    groups: dict[tuple[Atom, ...], list[tuple[Fraction, Circuit]]]
    scales: dict[tuple[Atom, ...], Fraction]

    @classmethod
    def from_certificate(cls, cert: Certificate) -> "GroupedCert":
        groups: dict[tuple[Atom, ...], list[tuple[Fraction, Circuit]]] = {}
        scales: dict[tuple[Atom, ...], Fraction] = {}
        for t in cert.terms:
            scales.setdefault(t.product, t.scale)
            groups.setdefault(t.product, []).append((t.coefficient, t.circuit))
        return cls(groups, scales)

    def terms(self) -> list[CertTerm]:
        out = []
        for product, items in self.groups.items():
            s = self.scales[product]
            out += [CertTerm(w / s, c, product, s) for w, c in items]
        out.sort(key=CertTerm.sort_key)
        return out


def shorten_certificate(cert: Certificate, n: int | None = None, d: int | None = None) -> Certificate:
    """Prune every constraint-product group independently.

    ``d`` is the certificate degree (defaults to the declared one); each
    group's circuits are bounded by it, so the group keeps at most
    C(n + d, d) + 1 terms.
    """
    n = cert.n if n is None else n
    d = cert.degree if d is None else d
    grouped = GroupedCert.from_certificate(cert)
    for product, items in grouped.groups.items():
        positive = [(w, c) for w, c in items if w > 0]
        pruned = caratheodory_prune(positive, d)
        assert len(pruned) <= monomial_space_dim(n, d) + 1
        grouped.groups[product] = pruned
    return Certificate(cert.n, grouped.terms(), cert.degree, cert.seed, cert.degree_claim, dict(cert.meta))
