"""Independent certificate checker.

Nothing from the constructor is reused: constraint atoms are expanded
here from the hypercube and constraint data, and circuits are re-derived
from their raw coefficients.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .circuit import CircuitError, is_nonnegative, validate
from .hypercube import DEFAULT_CAP, ConstraintSet, Hypercube, DimensionTooLarge
from .poly import Poly

DEFAULT_TERM_CAP = 2_000_000


class TermCapExceeded(RuntimeError):
    pass


@dataclass
class VerifyReport:
    identity_ok: bool = False
    circuits_ok: bool = False
    first_bad_circuit: Optional[int] = None
    weights_ok: bool = False
    degree_ok: bool = False
    recomputed_degree: Optional[int] = None
    vertex_spotcheck_ok: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return (
            self.identity_ok
            and self.circuits_ok
            and self.weights_ok
            and self.degree_ok
            and self.vertex_spotcheck_ok
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["overall"] = self.overall
        return out

    def __str__(self):
        return json.dumps(self.to_json(), indent=2)


def _raw_terms(cert_json: dict):
    """(weight, scale, circuit poly, atoms) straight from the file data."""
    n = int(cert_json["n"])
    for t in cert_json["terms"]:
        circ = t["circuit"]
        pieces = [(x["exp"], Fraction(x["coef"])) for x in circ["outer"]]
        if circ.get("inner") is not None:
            pieces.append((circ["inner"]["exp"], Fraction(circ["inner"]["coef"])))
        atoms = []
        for a in t.get("product", []):
            if a["kind"] == "P":
                atoms.append(("P", int(a["i"])))
            else:
                atoms.append((a["kind"], int(a["j"]) - 1))
        yield Fraction(t["weight"]), Fraction(t.get("scale", "1")), Poly(n, pieces), atoms


def _atom(kind: str, idx: int, cube: Hypercube, constraints: ConstraintSet) -> Poly:
    n = cube.n
    if kind == "P":
        if not 0 <= idx < len(constraints.polys):
            raise IndexError(f"constraint index {idx} out of range")
        return constraints.polys[idx]
    if not 0 <= idx < n:
        raise IndexError(f"coordinate index {idx} out of range")
    a, b = cube.roots[idx]
    x = Poly.variable(n, idx)
    if kind == "G":
        return x * x - (a + b) * x + a * b
    if kind == "NEG_G":
        return -(x * x) + (a + b) * x - a * b
    if kind == "BOXPLUS":
        return x - a
    if kind == "BOXMINUS":
        return b - x
    bound = max(max(abs(r), abs(s)) for r, s in cube.roots)
    N = constraints.box_constant if constraints.box_constant is not None else 1 + bound
    if N < bound:
        raise ValueError("box constant below the hypercube radius")
    if kind == "LPLUS":
        return N + x
    if kind == "LMINUS":
        return N - x
    raise ValueError(f"unknown atom kind {kind!r}")


def _accumulate(acc: dict, p: Poly, factor: Fraction, cap: int):
    for e, c in p.terms.items():
        acc[e] = acc.get(e, 0) + c * factor
    if len(acc) > cap:
        raise TermCapExceeded(f"expansion exceeds {cap} terms")


def verify_certificate(
    f: Poly,
    cert_json: dict,
    cube: Hypercube,
    constraints: ConstraintSet | None = None,
    cap: int = DEFAULT_CAP,
    term_cap: int = DEFAULT_TERM_CAP,
) -> VerifyReport:
    """Check a certificate given in its JSON form.

    Takes the serialized certificate so that nothing cached by the
    constructor (lambdas, merged products) is trusted.  Failures are
    reported in the returned fields, never raised.
    """
    constraints = constraints or ConstraintSet()
    report = VerifyReport()
    n = cube.n
    try:
        if int(cert_json["n"]) != n or f.n != n:
            report.notes.append("dimension mismatch")
            return report
        terms = list(_raw_terms(cert_json))
        declared = int(cert_json["degree"])
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        report.notes.append(f"malformed certificate: {exc}")
        return report

    # (b) circuits and weights
    report.circuits_ok = True
    report.weights_ok = True
    for k, (w, s, circ, _) in enumerate(terms):
        if w < 0 or s <= 0:
            report.weights_ok = False
            report.notes.append(f"term {k}: negative weight or nonpositive scale")
        try:
            ok = is_nonnegative(validate(circ))
        except CircuitError as exc:
            ok = False
            report.notes.append(f"term {k}: {type(exc).__name__}: {exc}")
        if not ok and report.circuits_ok:
            report.circuits_ok = False
            report.first_bad_circuit = k

    # (a) identity and (c) degree
    try:
        acc: dict = {}
        max_deg = 0
        products = []
        for k, (w, s, circ, atoms) in enumerate(terms):
            prod = Poly.constant(n, 1)
            for kind, idx in atoms:
                prod = prod * _atom(kind, idx, cube, constraints)
            products.append(prod)
            full = circ * prod
            if full and w:
                max_deg = max(max_deg, int(full.degree()))
            _accumulate(acc, full, w * s, term_cap)
        diff = Poly(n, acc) - f
        report.identity_ok = diff.is_zero()
        if not report.identity_ok:
            report.notes.append(f"identity fails: difference has {len(diff)} terms")
        report.recomputed_degree = max_deg
        d = max((int(p.degree()) for p in constraints.polys if p), default=0)
        report.degree_ok = max_deg <= declared
        if cert_json.get("degree_claim", True):
            report.degree_ok = report.degree_ok and declared <= n + d
        if not report.degree_ok:
            report.notes.append(f"degree: recomputed {max_deg}, declared {declared}, n + d = {n + d}")
    except (IndexError, ValueError) as exc:
        report.identity_ok = False
        report.notes.append(f"expansion failed: {exc}")
        return report
    except TermCapExceeded as exc:
        report.identity_ok = False
        report.notes.append(str(exc))
        return report

    # (d) every term is nonnegative at every feasible vertex
    try:
        report.vertex_spotcheck_ok = True
        for v in cube.vertices(cap):
            if not all(p.evaluate(v) >= 0 for p in constraints.polys):
                continue
            for k, ((w, s, circ, _), prod) in enumerate(zip(terms, products)):
                if w * s * circ.evaluate(v) * prod.evaluate(v) < 0:
                    report.vertex_spotcheck_ok = False
                    report.notes.append(f"term {k} negative at vertex {tuple(map(str, v))}")
                    break
            if not report.vertex_spotcheck_ok:
                break
    except DimensionTooLarge:
        # exponential check skipped above the cap; the other parts still decide
        report.notes.append("vertex check skipped: dimension above cap")
        report.vertex_spotcheck_ok = True
    return report
