"""Brute-force PBW oracle.

V_lambda is built as the cyclic span of the tensor product of highest-weight
vectors inside  (x)_d (Lambda^d C^n)^{(x) l_d}.  Vectors are sparse dicts keyed
by tuples of wedge indices; all arithmetic is over ``Fraction``.

The PBW filtration is grown one step at a time,

    F_k = F_{k-1} + sum_alpha f_alpha F_{k-1},

which is enough because a PBW monomial of length k is ``f * (length k-1)``.
Since f_alpha F_{k-2} is already inside F_{k-1}, only the vectors that were new
at level k-1 need to be acted on.  Everything is done weight space by weight
space, since f_alpha maps weight spaces to weight spaces.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import prod

from .characters import DominantWeight, QCharacter, character_to_json
from .combinatorics import RootIndex, _check_rank
from .errors import CapacityError, InternalConsistencyError, StructuralError
from .laurent import LaurentPolynomial

DEFAULT_DIM_CAP = 5000


@dataclass(frozen=True)
class LieOperator:
    kind: str  # "f", "e" or "h"
    index: object  # RootIndex for f/e, int for h
    matrix: tuple  # rows of Fractions, ambient basis order

    def apply(self, v: list) -> list:
        return [sum(a * b for a, b in zip(row, v)) for row in self.matrix]


@dataclass
class ModuleBasis:
    n: int
    ambient_dim: int
    vectors: list  # sparse dicts over ambient keys
    weights: list  # fundamental-weight coordinates of each vector
    highest_index: int = 0
    labels: list | None = None
    degrees: list | None = None  # PBW degree at which each vector appeared
    operators: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def weight_multiset(self) -> Counter:
        return Counter(self.weights)


@dataclass(frozen=True)
class FiltrationLevel:
    k: int
    dim: int
    new: tuple  # weights of the vectors added at this level


@dataclass
class GradedCharacter:
    n: int
    degrees: dict  # k -> Counter of z-exponent tuples

    def to_polynomial(self) -> LaurentPolynomial:
        terms = {}
        for k, ws in self.degrees.items():
            for w, m in ws.items():
                terms[(*w, k)] = m
        return LaurentPolynomial(self.n, terms)

    def to_qcharacter(self, lam: DominantWeight | None = None) -> QCharacter:
        return QCharacter(self.n, self.to_polynomial(), lam)

    def to_json(self) -> list[dict]:
        return character_to_json(self.to_polynomial())

    def graded_dimensions(self) -> list[int]:
        top = max(self.degrees, default=-1)
        return [sum(self.degrees.get(k, Counter()).values()) for k in range(top + 1)]


# ---------------------------------------------------------------------------
# fundamental modules


def _epsilon_to_omega(c) -> tuple:
    return tuple(c[k] - c[k + 1] for k in range(len(c) - 1))


def wedge_weight(n: int, S) -> tuple:
    """Weight of ``w_S`` in fundamental-weight coordinates."""
    c = [0] * n
    for s in S:
        c[s - 1] = 1
    return _epsilon_to_omega(c)


def _elementary_on_wedge(S: tuple, a: int, b: int):
    """``E_{a,b} w_S`` as ``(sign, S')`` or ``None``; ``S`` sorted, 1-based."""
    if b not in S:
        return None
    if a == b:
        return 1, S
    if a in S:
        return None
    lo, hi = min(a, b), max(a, b)
    between = sum(1 for s in S if lo < s < hi)
    T = tuple(sorted((set(S) - {b}) | {a}))
    return (-1) ** between, T


@lru_cache(maxsize=None)
def _wedge_basis(n: int, d: int) -> tuple:
    return tuple(combinations(range(1, n + 1), d))


@lru_cache(maxsize=None)
def _f_action(n: int, d: int) -> dict:
    """``(basis index, (i, j)) -> (sign, basis index)`` for f_{i,j} = E_{j+1,i}."""
    basis = _wedge_basis(n, d)
    pos = {S: k for k, S in enumerate(basis)}
    out = {}
    for k, S in enumerate(basis):
        for i in range(1, n):
            for j in range(i, n):
                r = _elementary_on_wedge(S, j + 1, i)
                if r is not None:
                    out[k, (i, j)] = (r[0], pos[r[1]])
    return out


def fundamental_module(n: int, d: int) -> ModuleBasis:
    """``Lambda^d C^n`` with the f, e and h operators as explicit matrices."""
    _check_rank(n)
    if not 1 <= d <= n - 1:
        raise StructuralError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    basis = _wedge_basis(n, d)
    pos = {S: k for k, S in enumerate(basis)}
    N = len(basis)

    def matrix_of(a: int, b: int, a2: int | None = None, b2: int | None = None) -> tuple:
        m = [[Fraction(0)] * N for _ in range(N)]
        for k, S in enumerate(basis):
            r = _elementary_on_wedge(S, a, b)
            if r is not None:
                m[pos[r[1]]][k] += r[0]
            if a2 is not None:
                r = _elementary_on_wedge(S, a2, b2)
                if r is not None:
                    m[pos[r[1]]][k] -= r[0]
        return tuple(tuple(row) for row in m)

    ops = {}
    for i in range(1, n):
        for j in range(i, n):
            ops["f", RootIndex(i, j)] = LieOperator("f", RootIndex(i, j), matrix_of(j + 1, i))
            ops["e", RootIndex(i, j)] = LieOperator("e", RootIndex(i, j), matrix_of(i, j + 1))
        ops["h", i] = LieOperator("h", i, matrix_of(i, i, i + 1, i + 1))
    vectors = [{(k,): Fraction(1)} for k in range(N)]
    return ModuleBasis(
        n=n, ambient_dim=N, vectors=vectors,
        weights=[wedge_weight(n, S) for S in basis],
        highest_index=pos[tuple(range(1, d + 1))],
        labels=list(basis), operators=ops,
    )


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def bracket_check(mod: ModuleBasis) -> bool:
    """``[e_{i,i}, f_{i,i}] = h_i``, with h_i acting on w by ``<wt(w), alpha_i^vee>``."""
    for i in range(1, mod.n):
        e = mod.operators["e", RootIndex(i, i)].matrix
        f = mod.operators["f", RootIndex(i, i)].matrix
        h = mod.operators["h", i].matrix
        ef, fe = _matmul(e, f), _matmul(f, e)
        N = mod.ambient_dim
        for r in range(N):
            for c in range(N):
                want = mod.weights[c][i - 1] if r == c else 0
                if ef[r][c] - fe[r][c] != want or h[r][c] != want:
                    return False
    return True


def highest_vector_killed(mod: ModuleBasis) -> bool:
    N = mod.ambient_dim
    v = [Fraction(int(k == mod.highest_index)) for k in range(N)]
    return all(not any(op.apply(v)) for (kind, _), op in mod.operators.items() if kind == "e")


# ---------------------------------------------------------------------------
# highest-weight modules


def weyl_dimension(n: int, lam: DominantWeight) -> int:
    ell = lam.ell
    num = prod(sum(ell[i:j]) + j - i for i in range(n - 1) for j in range(i + 1, n))
    den = prod(j - i for i in range(n - 1) for j in range(i + 1, n))
    return num // den


def _factors(lam: DominantWeight) -> list[int]:
    return [d for d, l in enumerate(lam.ell, start=1) for _ in range(l)]


def _apply_f(n: int, factors: list[int], v: dict, root: tuple) -> dict:
    """Leibniz rule for f_root on a sparse tensor vector."""
    out: dict = {}
    acts = [_f_action(n, d) for d in factors]
    for key, c in v.items():
        for t, k in enumerate(key):
            r = acts[t].get((k, root))
            if r is None:
                continue
            sign, k2 = r
            nk = key[:t] + (k2,) + key[t + 1:]
            val = out.get(nk, 0) + sign * c
            if val:
                out[nk] = val
            else:
                out.pop(nk, None)
    return out


class _Echelon:
    """Incrementally reduced row set in one weight space."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: list = []  # (pivot key, row with pivot coefficient 1)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p, row in self.rows:
            c = v.get(p)
            if c:
                for k, x in row.items():
                    val = v.get(k, 0) - c * x
                    if val:
                        v[k] = val
                    else:
                        v.pop(k, None)
        return v

    def insert(self, v: dict) -> dict | None:
        v = self.reduce(v)
        if not v:
            return None
        p = min(v)
        c = v[p]
        v = {k: Fraction(x) / c for k, x in v.items()}
        self.rows.append((p, v))
        return v


def _weight_of_key(n: int, factors: list[int], key: tuple) -> tuple:
    w = [0] * (n - 1)
    for d, k in zip(factors, key):
        for t, x in enumerate(wedge_weight(n, _wedge_basis(n, d)[k])):
            w[t] += x
    return tuple(w)


def _filtration(n: int, lam: DominantWeight, cap: int):
    _check_rank(n)
    if len(lam.ell) != n - 1:
        raise StructuralError(f"lambda needs {n - 1} labels for n={n}, got {lam.ell}")
    expected = weyl_dimension(n, lam)
    if expected > cap:
        raise CapacityError(f"dim V_lambda = {expected} exceeds the oracle cap {cap}")
    factors = _factors(lam)
    roots = [(i, j) for i in range(1, n) for j in range(i, n)]
    hw_key = tuple(_wedge_basis(n, d).index(tuple(range(1, d + 1))) for d in factors)
    spaces: dict = defaultdict(_Echelon)
    v0 = {hw_key: Fraction(1)}
    w0 = tuple(lam.ell)
    spaces[w0].insert(v0)
    vectors, weights, degrees = [v0], [w0], [0]
    levels = [FiltrationLevel(0, 1, (w0,))]
    frontier = [(v0, w0)]
    k = 0
    while frontier:
        k += 1
        new = []
        for v, _ in frontier:
            for root in roots:
                u = _apply_f(n, factors, v, root)
                if not u:
                    continue
                w = _weight_of_key(n, factors, next(iter(u)))
                r = spaces[w].insert(u)
                if r is not None:
                    new.append((r, w))
                    vectors.append(r)
                    weights.append(w)
                    degrees.append(k)
                    if len(vectors) > cap:
                        raise CapacityError(f"module dimension exceeded the cap {cap}")
        if new:
            levels.append(FiltrationLevel(k, len(vectors), tuple(w for _, w in new)))
        frontier = new
    if len(vectors) != expected:
        raise InternalConsistencyError(
            f"cyclic span has dimension {len(vectors)}, Weyl dimension is {expected}")
    mod = ModuleBasis(n=n, ambient_dim=prod(len(_wedge_basis(n, d)) for d in factors),
                      vectors=vectors, weights=weights, highest_index=0, degrees=degrees)
    return mod, levels


def highest_weight_module(n: int, lam: DominantWeight, cap: int = DEFAULT_DIM_CAP) -> ModuleBasis:
    return _filtration(n, lam, cap)[0]


def filtration_levels(n: int, lam: DominantWeight, cap: int = DEFAULT_DIM_CAP) -> list[FiltrationLevel]:
    return _filtration(n, lam, cap)[1]


def graded_character(n: int, lam: DominantWeight, cap: int = DEFAULT_DIM_CAP) -> GradedCharacter:
    mod, _ = _filtration(n, lam, cap)
    degrees: dict = defaultdict(Counter)
    for w, k in zip(mod.weights, mod.degrees):
        degrees[k][w] += 1
    return GradedCharacter(n, dict(degrees))


def degenerate_fundamental_wedge(n: int, d: int) -> GradedCharacter:
    """Graded character of the degenerate fundamental module on d-subsets.

    ``w(S)`` sits in degree ``#{s in S : s > d}``.
    """
    _check_rank(n)
    if not 1 <= d <= n - 1:
        raise StructuralError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    degrees: dict = defaultdict(Counter)
    for S in _wedge_basis(n, d):
        degrees[sum(1 for s in S if s > d)][wedge_weight(n, S)] += 1
    return GradedCharacter(n, dict(degrees))


def classical_character(mod: ModuleBasis) -> LaurentPolynomial:
    return LaurentPolynomial(mod.n - 1, dict(mod.weight_multiset()))
