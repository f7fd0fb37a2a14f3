"""Sparse multivariate Laurent polynomials with exact rational coefficients.

Monomials are integer exponent tuples; for characters the layout is
``(z_1, ..., z_{n-1}, q)``.  Coefficients are ``int`` or ``Fraction``.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from typing import Mapping, NamedTuple, Sequence

from .errors import ResampleRequired

Exponent = tuple  # tuple[int, ...]


class LaurentMonomial(NamedTuple):
    z: tuple
    q: int

    @classmethod
    def from_exponent(cls, e: Sequence[int]) -> "LaurentMonomial":
        return cls(tuple(e[:-1]), e[-1])

    @property
    def exponent(self) -> tuple:
        return (*self.z, self.q)

    def inverse(self) -> "LaurentMonomial":
        return LaurentMonomial(tuple(-x for x in self.z), -self.q)

    def __str__(self) -> str:
        return format_monomial(self.exponent)


def format_monomial(e: Sequence[int], names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"z{k + 1}" for k in range(len(e) - 1)] + ["q"]
    parts = []
    for name, x in zip(names, e):
        if x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts) or "1"


def _add_into(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _canonical(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def monomial_sort_key(e: Sequence[int]) -> tuple:
    """Presentation order: q exponent first, then the z exponents."""
    return (e[-1], *e[:-1])


class LaurentPolynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Rational] | None = None):
        self.nvars = nvars
        self.terms: dict = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if c:
                    _add_into(self.terms, e, _canonical(c))

    @classmethod
    def monomial(cls, e: Sequence[int], coeff: Rational = 1) -> "LaurentPolynomial":
        return cls(len(e), {tuple(e): coeff})

    @classmethod
    def constant(cls, nvars: int, c: Rational = 1) -> "LaurentPolynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "LaurentPolynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            _add_into(out, e, c)
        return LaurentPolynomial._raw(self.nvars, out)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            out: dict = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    _add_into(out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
            return LaurentPolynomial._raw(self.nvars, out)
        if not other:
            return LaurentPolynomial(self.nvars)
        return LaurentPolynomial._raw(self.nvars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def shift(self, e: Sequence[int], coeff: Rational = 1) -> "LaurentPolynomial":
        """Multiply by ``coeff * x^e``."""
        return LaurentPolynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(k, e)): c * coeff for k, c in self.terms.items()},
        )

    def divide_one_minus(self, m: Sequence[int]) -> "LaurentPolynomial | None":
        """Exact quotient by ``1 - x^m``, or ``None`` if the remainder is nonzero."""
        m = tuple(m)
        p = next((k for k, x in enumerate(m) if x), None)
        if p is None:
            raise ZeroDivisionError("division by 1 - x^0 = 0")
        if m[p] < 0:
            # P / (1 - x^m) = -x^{-m} P / (1 - x^{-m})
            minv = tuple(-x for x in m)
            q = self.divide_one_minus(minv)
            return None if q is None else q.shift(minv, -1)
        step = m[p]
        strings: dict = defaultdict(dict)
        for e, c in self.terms.items():
            k = e[p] // step
            rep = tuple(a - k * b for a, b in zip(e, m))
            strings[rep][k] = c
        out: dict = {}
        for rep, entries in strings.items():
            ks = sorted(entries)
            acc = 0
            for k in range(ks[0], ks[-1] + 1):
                acc += entries.get(k, 0)
                if k == ks[-1]:
                    if acc:
                        return None
                elif acc:
                    out[tuple(a + k * b for a, b in zip(rep, m))] = acc
        return LaurentPolynomial._raw(self.nvars, out)

    # queries ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, Rational):
            return self == LaurentPolynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[tuple, Rational]]:
        """Terms in presentation order."""
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def coefficient(self, e: Sequence[int]) -> Rational:
        return self.terms.get(tuple(e), 0)

    def evaluate(self, point: Sequence[Rational]) -> Fraction:
        point = [Fraction(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError("point has wrong number of coordinates")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    if x == 0 and k < 0:
                        raise ResampleRequired("negative power of a zero coordinate")
                    v *= x ** k
            total += v
        return total

    def substitute_last(self, value: int = 1) -> "LaurentPolynomial":
        """Set the last variable to a constant and drop it."""
        out: dict = {}
        for e, c in self.terms.items():
            _add_into(out, e[:-1], c * Fraction(value) ** e[-1] if value != 1 else c)
        return LaurentPolynomial._raw(self.nvars - 1, {k: _canonical(v) for k, v in out.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.items():
            mono = format_monomial(e) if self.nvars and len(e) >= 1 else "1"
            out.append(f"{c}*{mono}" if mono != "1" else f"{c}")
        return " + ".join(out)


def monomial_value(e: Sequence[int], point: Sequence[Fraction]) -> Fraction:
    v = Fraction(1)
    for x, k in zip(point, e):
        if k:
            if x == 0 and k < 0:
                raise ResampleRequired("negative power of a zero coordinate")
            v *= x ** k
    return v


def fraction_str(c: Rational) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
