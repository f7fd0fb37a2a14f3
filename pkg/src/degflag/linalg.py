"""Exact rational linear algebra on lists of row vectors.

A thin layer over sympy's ``DomainMatrix`` over QQ; inputs and outputs are
tuples of ``Fraction`` so the rest of the package never sees sympy types.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple  # tuple[Fraction, ...]


def _to_dm(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in r] for r in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _from_q(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Nonzero rows of the reduced row-echelon form, and the pivot columns."""
    if not rows:
        return (), ()
    r, pivots = _to_dm(rows, ncols).rref()
    out = tuple(tuple(_from_q(x) for x in row) for row in r.to_list()[:len(pivots)])
    return out, tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return _to_dm(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> tuple[Vector, ...]:
    """Basis of ``{x : M x = 0}`` for ``M`` given by its rows."""
    if not rows:
        return tuple(tuple(Fraction(int(k == c)) for k in range(ncols)) for c in range(ncols))
    ns = _to_dm(rows, ncols).nullspace().to_list()
    return tuple(tuple(_from_q(x) for x in r) for r in ns)


def transpose(rows: Sequence[Sequence], ncols: int) -> list[list]:
    return [[r[c] for r in rows] for c in range(ncols)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in A]


def solve(A: Sequence[Sequence], B: Sequence[Sequence], ncols_a: int) -> list[list] | None:
    """``X`` with ``A X = B`` when ``A`` has independent columns; ``None`` if inconsistent."""
    m = len(A)
    k = len(B[0]) if B else 0
    aug = [list(A[r]) + list(B[r]) for r in range(m)]
    R, piv = rref(aug, ncols_a + k)
    if any(p >= ncols_a for p in piv) or len(piv) < ncols_a:
        return None
    return [list(R[c][ncols_a:]) for c in range(ncols_a)]
