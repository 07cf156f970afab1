"""Exact sparse multivariate polynomials over the rationals.

A polynomial in ``n`` variables is a map from exponent tuples to
:class:`fractions.Fraction` coefficients.  Zero coefficients are never
stored, so the zero polynomial is the empty map.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product as _cartesian
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]

# Degree of the zero polynomial.  Compares below every integer.
DEG_ZERO = -math.inf


class DimensionMismatch(ValueError):
    pass


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(PolySyntaxError):
    pass


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not accepted")
    return Fraction(value)


def glex_key(exp: Exponent) -> tuple:
    """Sort key for graded lexicographic order (total degree, then lex with x1 > x2 > ...)."""
    return (sum(exp), exp)


def is_even_point(exp: Sequence[int]) -> bool:
    return all(e % 2 == 0 for e in exp)


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        self.n = n
        clean: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise DimensionMismatch(f"exponent {exp} does not have length {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = clean.get(exp, 0) + to_fraction(coef)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Exponent, Fraction]) -> "Poly":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        c = to_fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "Poly":
        return cls(len(exp), {tuple(exp): coef})

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        """The variable x_{i+1} (0-based index ``i``)."""
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for n={n}")
        exp = [0] * n
        exp[i] = 1
        return cls._raw(n, {tuple(exp): Fraction(1)})

    # -- queries ------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        """Terms in descending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: glex_key(kv[0]), reverse=True)

    def support(self) -> frozenset[Exponent]:
        return frozenset(self._terms)

    def degree(self):
        if not self._terms:
            return DEG_ZERO
        return max(sum(e) for e in self._terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_multilinear(self) -> bool:
        return all(e <= 1 for exp in self._terms for e in exp)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=glex_key)
        return exp, self._terms[exp]

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise DimensionMismatch(f"point has length {len(point)}, expected {self.n}")
        pt: list = [to_fraction(x) for x in point]
        if all(x.denominator == 1 for x in pt):
            # integer points (every vertex of a +-1 cube) stay in int arithmetic
            pt = [x.numerator for x in pt]
        powers: dict = {}
        total = Fraction(0)
        for exp, c in self._terms.items():
            m = 1
            for i, e in enumerate(exp):
                if e:
                    p = powers.get((i, e))
                    if p is None:
                        p = powers[(i, e)] = pt[i] ** e
                    m *= p
            total += c * m
        return total

    __call__ = evaluate

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions differ: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Poly":
        c = to_fraction(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._raw(self.n, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, 0) + ca * cb
        return Poly._raw(self.n, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def compose(self, substitutions: Sequence["Poly"]) -> "Poly":
        """Substitute ``x_{i+1} -> substitutions[i]``; all substitutes share one dimension."""
        if len(substitutions) != self.n:
            raise DimensionMismatch(f"need {self.n} substitutes, got {len(substitutions)}")
        if not substitutions:
            return self
        m = substitutions[0].n
        for s in substitutions:
            if s.n != m:
                raise DimensionMismatch("substitutes must share a dimension")
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            if (i, e) not in cache:
                cache[(i, e)] = substitutions[i] ** e
            return cache[(i, e)]

        total = Poly.zero(m)
        for exp, c in self._terms.items():
            term = Poly.constant(m, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.n, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.n}, {render(self)!r})"

    def __str__(self):
        return render(self)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Poly":
        n = int(data["n"])
        terms = []
        for t in data["terms"]:
            terms.append((t["exp"], Fraction(int(t["num"]), int(t.get("den", 1)))))
        return cls(n, terms)


def sum_polys(polys: Iterable[Poly], n: int) -> Poly:
    """Sum many polynomials with a single accumulator dict."""
    out: dict[Exponent, Fraction] = {}
    for p in polys:
        if p.n != n:
            raise DimensionMismatch(f"dimensions differ: {p.n} vs {n}")
        for exp, c in p._terms.items():
            out[exp] = out.get(exp, 0) + c
    return Poly._raw(n, {e: c for e, c in out.items() if c})


def monomials_up_to(n: int, degree: int) -> list[Exponent]:
    """All exponent vectors in n variables of total degree <= degree."""
    out = [e for e in _cartesian(range(degree + 1), repeat=n) if sum(e) <= degree]
    out.sort(key=glex_key)
    return out


# --- text form ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|([A-Za-z_]\w*)|(\^)|(\*)|(/)|(\+)|(-))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("int", "var", "name", "^", "*", "/", "+", "-")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text: str, n: int | None = None) -> Poly:
    """Parse ``"1 - 2*x1 + 3/2*x1^2*x2"``.

    Without ``n`` the dimension is the largest variable index used (at
    least 1).  With ``n`` given, a variable beyond ``x{n}`` is an error.
    """
    tokens = _tokenize(text)
    k = 0
    terms: list[tuple[dict[int, int], Fraction]] = []

    def peek():
        return tokens[k]

    def take(kind):
        nonlocal k
        tok = tokens[k]
        if tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[1] or tok[0]!r}", tok[2])
        k += 1
        return tok

    def factor(coef: Fraction, powers: dict[int, int]) -> Fraction:
        nonlocal k
        tok = peek()
        if tok[0] == "int":
            k += 1
            value = Fraction(int(tok[1]))
            if peek()[0] == "/":
                k += 1
                den = take("int")
                if int(den[1]) == 0:
                    raise PolySyntaxError("division by zero", den[2])
                value /= int(den[1])
            if peek()[0] == "^":
                k += 1
                value **= int(take("int")[1])
            return coef * value
        if tok[0] == "var":
            k += 1
            idx = int(tok[1][1:])
            if idx < 1 or (n is not None and idx > n):
                raise UnknownVariable(f"unknown variable {tok[1]}", tok[2])
            e = 1
            if peek()[0] == "^":
                k += 1
                e = int(take("int")[1])
            powers[idx - 1] = powers.get(idx - 1, 0) + e
            return coef
        if tok[0] == "name":
            raise UnknownVariable(f"unknown variable {tok[1]}", tok[2])
        raise PolySyntaxError(f"unexpected {tok[1] or tok[0]!r}", tok[2])

    sign = 1
    if peek()[0] == "end":
        raise PolySyntaxError("empty polynomial", 0)
    if peek()[0] in "+-":
        sign = -1 if peek()[0] == "-" else 1
        k += 1
    while True:
        powers: dict[int, int] = {}
        coef = factor(Fraction(sign), powers)
        while peek()[0] == "*":
            k += 1
            coef = factor(coef, powers)
        terms.append((powers, coef))
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] not in "+-":
            raise PolySyntaxError(f"unexpected {tok[1]!r}", tok[2])
        sign = -1 if tok[0] == "-" else 1
        k += 1

    if n is None:
        n = max([max(p, default=-1) + 1 for p, _ in terms] + [1])
    out = []
    for powers, coef in terms:
        exp = [0] * n
        for i, e in powers.items():
            exp[i] += e
        out.append((exp, coef))
    return Poly(n, out)


def _render_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for exp, c in p.items():
        factors = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exp) if e]
        mag = abs(c)
        if not factors:
            body = _render_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_render_coef(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
