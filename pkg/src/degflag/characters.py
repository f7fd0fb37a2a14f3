"""PBW-graded characters from the fixed points of R_n.

Every admissible collection ``S`` contributes

    e^{gamma_lambda(S)} / prod_{(i,j)} (1 - e^{gamma(S'_ij) - gamma(S_ij)})

where ``S'_ij`` swaps the chosen candidate ``a`` for the other one ``b``.
Weights live in the basis ``omega_1..omega_{n-1}, d``; their exponentials are
monomials in ``z_1..z_{n-1}, q``.

The exact sum is organised along the tower of P^1-fibrations: the two
children of a node in the enumeration tree differ only at that node's slot,
where their factors are ``1 - m`` and ``1 - m^{-1}``.  Each node therefore
collapses to ``(P_a - m P_b) / (1 - m)``, which is a Laurent polynomial; a
nonzero remainder at any node is reported as an internal error.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .combinatorics import (
    AdmissibleCollection, IndexSet, RootIndex, _candidates, ab_pair, beta_order,
    enumerate_admissible,
)
from .errors import (
    CapacityError, InternalConsistencyError, ResampleRequired, StructuralError,
)
from .laurent import (
    LaurentMonomial, LaurentPolynomial, fraction_str, monomial_value,
)

EXACT_MAX_N = 5


@dataclass(frozen=True)
class ExtendedWeight:
    """``sum_k m_k omega_k + degree * d`` with ``omega_0 = omega_n = 0``."""

    fundamental: tuple
    degree: int = 0

    @classmethod
    def zero(cls, n: int) -> "ExtendedWeight":
        return cls((0,) * (n - 1), 0)

    @classmethod
    def omega(cls, n: int, k: int) -> "ExtendedWeight":
        """``omega_k``; zero for ``k = 0`` or ``k = n``."""
        v = [0] * (n - 1)
        if 1 <= k <= n - 1:
            v[k - 1] = 1
        return cls(tuple(v), 0)

    def __add__(self, other: "ExtendedWeight") -> "ExtendedWeight":
        return ExtendedWeight(
            tuple(a + b for a, b in zip(self.fundamental, other.fundamental)),
            self.degree + other.degree,
        )

    def __neg__(self) -> "ExtendedWeight":
        return ExtendedWeight(tuple(-a for a in self.fundamental), -self.degree)

    def __sub__(self, other: "ExtendedWeight") -> "ExtendedWeight":
        return self + (-other)

    def __mul__(self, k: int) -> "ExtendedWeight":
        return ExtendedWeight(tuple(k * a for a in self.fundamental), k * self.degree)

    __rmul__ = __mul__

    def monomial(self) -> LaurentMonomial:
        return LaurentMonomial(self.fundamental, self.degree)


@dataclass(frozen=True)
class DominantWeight:
    ell: tuple

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(int(x) for x in self.ell))
        if any(x < 0 for x in self.ell):
            raise StructuralError(f"dominant weight needs nonnegative labels, got {self.ell}")

    @classmethod
    def parse(cls, text: str) -> "DominantWeight":
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def n(self) -> int:
        return len(self.ell) + 1

    def __str__(self) -> str:
        return ",".join(map(str, self.ell))


@dataclass(frozen=True)
class RationalTerm:
    """``x^numerator / prod (1 - x^f)`` over the listed factor monomials."""

    numerator: LaurentMonomial
    denominator_factors: tuple

    def evaluate(self, point: Sequence[Rational]) -> Fraction:
        point = [Fraction(x) for x in point]
        den = Fraction(1)
        for f in self.denominator_factors:
            v = 1 - monomial_value(f.exponent, point)
            if v == 0:
                raise ResampleRequired(f"factor 1 - {f} vanishes at {point}")
            den *= v
        return monomial_value(self.numerator.exponent, point) / den

    def same_as(self, other: "RationalTerm") -> bool:
        """Equality up to the order of the denominator factors."""
        return (self.numerator == other.numerator
                and Counter(self.denominator_factors) == Counter(other.denominator_factors))

    def __str__(self) -> str:
        den = "".join(f"(1 - {f})" for f in self.denominator_factors)
        return f"{self.numerator} / {den}"


# ---------------------------------------------------------------------------
# weights


def _gamma_vec(n: int, mask: int, i: int) -> tuple:
    v = [0] * n  # z_1..z_{n-1}, q
    for l in range(1, n + 1):
        if mask >> (l - 1) & 1:
            if l <= n - 1:
                v[l - 1] += 1
            if l >= 2:
                v[l - 2] -= 1
            if l > i:
                v[n - 1] += 1
    return tuple(v)


def gamma(S: IndexSet, slot: tuple[int, int]) -> ExtendedWeight:
    """Extended weight of the coordinate point ``p(S)`` in slot ``(i, j)``."""
    i, j = slot
    if not S.fits_slot(i, j):
        raise StructuralError(f"{S} does not fit slot {slot}")
    v = _gamma_vec(S.n, S.mask, i)
    return ExtendedWeight(v[:-1], v[-1])


def gamma_lambda(c: AdmissibleCollection, lam: DominantWeight) -> ExtendedWeight:
    n = c.n
    _check_lambda(n, lam)
    total = ExtendedWeight.zero(n)
    for i, l in enumerate(lam.ell, start=1):
        if l:
            total = total + l * gamma(c[i, i], (i, i))
    return total


def _check_lambda(n: int, lam: DominantWeight) -> None:
    if len(lam.ell) != n - 1:
        raise StructuralError(f"lambda needs {n - 1} labels for n={n}, got {lam.ell}")


def abl_term(c: AdmissibleCollection, lam: DominantWeight) -> RationalTerm:
    """The fixed-point contribution of ``c``; factors listed in beta order."""
    n = c.n
    factors = []
    for s in beta_order(n):
        ab = ab_pair(c, s)
        S = c.masks[s]
        S_swapped = (S & ~(1 << (ab.a - 1))) | (1 << (ab.b - 1))
        diff = [x - y for x, y in zip(_gamma_vec(n, S_swapped, s.i), _gamma_vec(n, S, s.i))]
        factors.append(LaurentMonomial.from_exponent(diff))
    return RationalTerm(gamma_lambda(c, lam).monomial(), tuple(factors))


# ---------------------------------------------------------------------------
# q-characters


class QCharacter:
    """A PBW-graded character; validates positivity and grading on construction."""

    def __init__(self, n: int, polynomial: LaurentPolynomial, lam: DominantWeight | None = None,
                 check: bool = True):
        self.n = n
        self.polynomial = polynomial
        if check:
            self.validate(lam)

    def validate(self, lam: DominantWeight | None = None) -> None:
        for e, c in self.polynomial.terms.items():
            if not (isinstance(c, int) or Fraction(c).denominator == 1) or c <= 0:
                raise InternalConsistencyError(f"coefficient {c} at {e} is not a positive integer")
            if e[-1] < 0:
                raise InternalConsistencyError(f"negative q-degree at {e}")
        top = {e: c for e, c in self.polynomial.terms.items() if e[-1] == 0}
        if lam is not None:
            if top != {(*lam.ell, 0): 1}:
                raise InternalConsistencyError(f"degree-0 part {top} is not e^lambda")
        elif len(top) != 1 or next(iter(top.values())) != 1:
            raise InternalConsistencyError(f"degree-0 part {top} is not a single monomial")

    def __eq__(self, other) -> bool:
        return isinstance(other, QCharacter) and self.polynomial == other.polynomial

    def to_json(self) -> list[dict]:
        return character_to_json(self.polynomial)

    def __repr__(self) -> str:
        return f"QCharacter(n={self.n}: {self.polynomial!r})"


def character_to_json(p: LaurentPolynomial) -> list[dict]:
    return [{"z": list(e[:-1]), "q": e[-1], "coeff": fraction_str(c)} for e, c in p.items()]


def character_from_json(data: Iterable[dict]) -> LaurentPolynomial:
    terms = {}
    nvars = None
    for item in data:
        e = (*item["z"], item["q"])
        nvars = len(e)
        terms[e] = Fraction(item["coeff"])
    return LaurentPolynomial(nvars or 1, terms)


def _tree_sum(n: int, ell: tuple) -> LaurentPolynomial:
    slots = beta_order(n)
    M = len(slots)
    masks: dict = {}
    nv = n

    def leaf() -> LaurentPolynomial:
        e = [0] * nv
        for i, l in enumerate(ell, start=1):
            if l:
                g = _gamma_vec(n, masks[RootIndex(i, i)], i)
                for k in range(nv):
                    e[k] += l * g[k]
        return LaurentPolynomial.monomial(e)

    def rec(k: int) -> LaurentPolynomial:
        if k == M:
            return leaf()
        s = slots[k]
        lower, upper = _candidates(n, masks, s.i, s.j)
        cand = upper & ~lower
        x = cand & -cand
        y = cand ^ x
        masks[s] = lower | x
        pa = rec(k + 1)
        masks[s] = lower | y
        pb = rec(k + 1)
        del masks[s]
        # factor of the x-branch is 1 - m with m = gamma(y) - gamma(x)
        m = [a - b for a, b in zip(_gamma_vec(n, lower | y, s.i), _gamma_vec(n, lower | x, s.i))]
        # pa/(1-m) + pb/(1-m^{-1}) = (pa - m pb)/(1-m)
        q = (pa - pb.shift(m)).divide_one_minus(m)
        if q is None:
            raise InternalConsistencyError(
                f"partial sum at slot {tuple(s)} is not a Laurent polynomial")
        return q

    return rec(0)


def abl_character_exact(n: int, lam: DominantWeight, max_n: int = EXACT_MAX_N,
                        method: str = "tree") -> QCharacter:
    """Exact q-character of ``V_lambda^a`` as a sum over all fixed points of R_n.

    ``method="tree"`` folds sibling pairs along the enumeration tree;
    ``method="common"`` accumulates all terms over a common denominator.
    Both end in exact divisions that must leave no remainder.
    """
    _check_lambda(n, lam)
    if n > max_n:
        raise CapacityError(
            f"exact summation is limited to n <= {max_n}; use abl_character_eval for n={n}")
    if method == "tree":
        p = _tree_sum(n, lam.ell)
    elif method == "common":
        p = sum_terms((abl_term(c, lam) for c in enumerate_admissible(n)), n)
    else:
        raise ValueError(f"unknown summation method {method!r}")
    return QCharacter(n, p, lam)


class RationalSum:
    """Order-independent accumulator of :class:`RationalTerm` values.

    Keeps ``numerator / prod (1 - x^f)^k`` over canonical factors (first
    nonzero exponent positive).  ``merge`` is associative and commutative up
    to the represented value; :meth:`finalize` divides out the denominator and
    fails loudly if the result is not a Laurent polynomial.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.numerator = LaurentPolynomial(nvars)
        self.denominator: Counter = Counter()

    @staticmethod
    def _canonical_term(term: RationalTerm) -> tuple[LaurentPolynomial, Counter]:
        num = LaurentPolynomial.monomial(term.numerator.exponent)
        den: Counter = Counter()
        for f in term.denominator_factors:
            e = f.exponent
            first = next(x for x in e if x)
            if first < 0:
                # 1/(1 - x^e) = -x^{-e} / (1 - x^{-e})
                e = tuple(-x for x in e)
                num = num.shift(e, -1)
            den[e] += 1
        return num, den

    def _absorb(self, num: LaurentPolynomial, den: Counter) -> None:
        lcm = self.denominator | den
        a = self.numerator
        for f, k in (lcm - self.denominator).items():
            a = a * _one_minus_power(self.nvars, f, k)
        b = num
        for f, k in (lcm - den).items():
            b = b * _one_minus_power(self.nvars, f, k)
        self.numerator = a + b
        self.denominator = lcm

    def add(self, term: RationalTerm) -> "RationalSum":
        self._absorb(*self._canonical_term(term))
        return self

    def merge(self, other: "RationalSum") -> "RationalSum":
        out = RationalSum(self.nvars)
        out.numerator, out.denominator = self.numerator, Counter(self.denominator)
        out._absorb(other.numerator, other.denominator)
        return out

    def finalize(self) -> LaurentPolynomial:
        p = self.numerator
        for f, k in sorted(self.denominator.items()):
            for _ in range(k):
                p = p.divide_one_minus(f)
                if p is None:
                    raise InternalConsistencyError("fixed-point sum is not a Laurent polynomial")
        return p


def _one_minus_power(nvars: int, f: tuple, k: int) -> LaurentPolynomial:
    base = LaurentPolynomial(nvars, {(0,) * nvars: 1, f: -1})
    out = LaurentPolynomial.constant(nvars)
    for _ in range(k):
        out = out * base
    return out


def sum_terms(terms: Iterable[RationalTerm], nvars: int) -> LaurentPolynomial:
    acc = RationalSum(nvars)
    for t in terms:
        acc.add(t)
    return acc.finalize()


def abl_character_eval(n: int, lam: DominantWeight, point: Sequence[Rational]) -> Fraction:
    """Exact value of the fixed-point sum at ``point = (z_1, ..., z_{n-1}, q)``.

    Raises :class:`ResampleRequired` when any denominator factor vanishes.
    """
    _check_lambda(n, lam)
    point = [Fraction(x) for x in point]
    if len(point) != n:
        raise StructuralError(f"point needs {n} coordinates (z_1..z_{n - 1}, q)")
    if any(x == 0 for x in point):
        raise ResampleRequired("coordinates must be nonzero")
    total = Fraction(0)
    for c in enumerate_admissible(n):
        total += abl_term(c, lam).evaluate(point)
    return total


def random_point(n: int, rng: random.Random, low: int = 2, high: int = 9) -> list[Fraction]:
    return [Fraction(rng.randint(low, high)) for _ in range(n)]


def abl_character_eval_random(n: int, lam: DominantWeight, rng: random.Random,
                              attempts: int = 50) -> tuple[list[Fraction], Fraction]:
    """Evaluate at a random integer point, resampling on vanishing denominators."""
    for _ in range(attempts):
        point = random_point(n, rng)
        try:
            return point, abl_character_eval(n, lam, point)
        except ResampleRequired:
            continue
    raise ResampleRequired(f"no valid point found in {attempts} attempts")


def specialize_q1(ch: QCharacter | LaurentPolynomial) -> LaurentPolynomial:
    p = ch.polynomial if isinstance(ch, QCharacter) else ch
    return p.substitute_last(1)


def graded_dimensions(ch: QCharacter | LaurentPolynomial) -> list[int]:
    p = ch.polynomial if isinstance(ch, QCharacter) else ch
    if not p.terms:
        return []
    top = max(e[-1] for e in p.terms)
    dims = [0] * (top + 1)
    for e, c in p.terms.items():
        dims[e[-1]] += c
    return [int(x) for x in dims]


def weyl_reflect(p: LaurentPolynomial, r: int, has_q: bool = True) -> LaurentPolynomial:
    """Apply the simple reflection ``s_r`` to the z-part of every exponent.

    Exponents are in the fundamental-weight basis, so
    ``s_r(mu) = mu - mu_r (2 omega_r - omega_{r-1} - omega_{r+1})``.
    """
    nz = p.nvars - 1 if has_q else p.nvars
    if not 1 <= r <= nz:
        raise StructuralError(f"no simple reflection s_{r} for {nz} fundamental weights")
    out: dict = {}
    for e, c in p.terms.items():
        e = list(e)
        k = e[r - 1]
        e[r - 1] -= 2 * k
        if r >= 2:
            e[r - 2] += k
        if r < nz:
            e[r] += k
        out[tuple(e)] = c
    return LaurentPolynomial(p.nvars, out)


def dumps(p: LaurentPolynomial) -> str:
    return json.dumps(character_to_json(p), separators=(",", ":"))
