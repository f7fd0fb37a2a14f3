"""Exact models of points of Fl^a_n, R_n, Y_d and the quiver scheme Q_n.

Vectors are tuples of ``Fraction`` in the basis ``w_1..w_n`` (index 0 is w_1).
Subspaces are kept in reduced row-echelon form, so two SubspacePoints are
equal exactly when they span the same space.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .combinatorics import (
    AdmissibleCollection, IndexSet, ParabolicShape, RootIndex, _check_rank, all_slots,
    beta_order, is_admissible, num_roots,
)
from .errors import PreconditionError, StructuralError
from .linalg import matmul, nullspace, rank, rref, solve, transpose

ZERO, ONE = Fraction(0), Fraction(1)


# ---------------------------------------------------------------------------
# projections


@dataclass(frozen=True)
class CoordinateProjection:
    """Linear map on W that zeroes the coordinates listed in ``killed``."""

    n: int
    killed: frozenset

    def __call__(self, v: Sequence) -> tuple:
        return tuple(ZERO if k + 1 in self.killed else Fraction(x) for k, x in enumerate(v))

    def matrix(self) -> list[list[Fraction]]:
        return [[ONE if r == c and r + 1 not in self.killed else ZERO for c in range(self.n)]
                for r in range(self.n)]

    def subspace(self, V: "SubspacePoint") -> "SubspacePoint":
        return SubspacePoint.span(self.n, [self(v) for v in V.basis])


def projection_pr(n: int, d: int) -> CoordinateProjection:
    """``pr_d``: forget the ``w_d`` coordinate."""
    _check_rank(n)
    if not 1 <= d <= n:
        raise StructuralError(f"pr_{d} needs 1 <= d <= {n}")
    return CoordinateProjection(n, frozenset({d}))


def projection_pr_range(n: int, p: int, q: int) -> CoordinateProjection:
    """``pr_{p,q}``: keep coordinates ``< p`` and ``>= q``."""
    _check_rank(n)
    if not 1 <= p <= q <= n:
        raise StructuralError(f"pr_{{{p},{q}}} needs 1 <= p <= q <= {n}")
    return CoordinateProjection(n, frozenset(range(p, q)))


# ---------------------------------------------------------------------------
# points


def _support(n: int, ambient) -> frozenset:
    if ambient is None:
        return frozenset(range(1, n + 1))
    i, j = ambient
    return frozenset(range(1, i + 1)) | frozenset(range(j + 1, n + 1))


@dataclass(frozen=True)
class SubspacePoint:
    n: int
    basis: tuple  # RREF rows
    ambient: tuple | None = None  # (i, j) for W_ij, None for W

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence], ambient=None) -> "SubspacePoint":
        vectors = [tuple(Fraction(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise StructuralError(f"vector of length {len(v)} in a {n}-dimensional space")
        basis, _ = rref(vectors, n)
        p = cls(n, basis, tuple(ambient) if ambient is not None else None)
        if not p.within_ambient():
            raise StructuralError(f"span leaves its ambient W_{ambient}")
        return p

    @classmethod
    def coordinate(cls, n: int, S: Iterable[int], ambient=None) -> "SubspacePoint":
        return cls.span(n, [_unit(n, s) for s in sorted(S)], ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def within_ambient(self) -> bool:
        sup = _support(self.n, self.ambient)
        return all(x == 0 for v in self.basis for k, x in enumerate(v) if k + 1 not in sup)

    def contains(self, other: "SubspacePoint") -> bool:
        if other.dim == 0:
            return True
        return rank(list(self.basis) + list(other.basis), self.n) == self.dim

    def contains_vector(self, v: Sequence) -> bool:
        return rank(list(self.basis) + [tuple(v)], self.n) == self.dim

    def with_ambient(self, ambient) -> "SubspacePoint":
        return SubspacePoint.span(self.n, self.basis, ambient)

    def intersect_coordinates(self, keep: Iterable[int]) -> "SubspacePoint":
        """Intersection with the coordinate subspace spanned by ``w_k``, k in ``keep``."""
        keep = set(keep)
        outside = [k for k in range(self.n) if k + 1 not in keep]
        if not outside:
            return SubspacePoint.span(self.n, self.basis)
        # coefficient vectors c with (c . basis) zero on the outside coordinates
        M = [[row[k] for row in self.basis] for k in outside]
        cs = nullspace(M, self.dim)
        vecs = [tuple(sum((c * row[k] for c, row in zip(cv, self.basis)), ZERO)
                      for k in range(self.n)) for cv in cs]
        return SubspacePoint.span(self.n, vecs)

    def __add__(self, other: "SubspacePoint") -> "SubspacePoint":
        return SubspacePoint.span(self.n, list(self.basis) + list(other.basis))

    def __eq__(self, other) -> bool:
        return isinstance(other, SubspacePoint) and (self.n, self.basis) == (other.n, other.basis)

    def __hash__(self):
        return hash((self.n, self.basis))

    def to_json(self) -> list[list[str]]:
        return [[f"{x.numerator}/{x.denominator}" for x in v] for v in self.basis]

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in v) for v in self.basis)
        return f"<{rows}>"


def _unit(n: int, s: int) -> tuple:
    return tuple(ONE if k == s - 1 else ZERO for k in range(n))


@dataclass(frozen=True)
class FlagPoint:
    """``(V_1, ..., V_{n-1})`` or, for a parabolic shape, ``(V_{d_1}, ..., V_{d_k})``."""

    n: int
    subspaces: tuple
    dims: tuple | None = None

    def __post_init__(self):
        if self.dims is None:
            object.__setattr__(self, "dims", tuple(range(1, self.n)))

    def __getitem__(self, d: int) -> SubspacePoint:
        return self.subspaces[self.dims.index(d)]

    def to_json(self) -> dict:
        return {str(d): V.to_json() for d, V in zip(self.dims, self.subspaces)}


@dataclass(frozen=True)
class RPoint:
    n: int
    spaces: Mapping  # RootIndex -> SubspacePoint

    def __getitem__(self, slot) -> SubspacePoint:
        return self.spaces[RootIndex(*slot)]

    def restrict(self, slots: Iterable) -> "RPoint":
        return RPoint(self.n, {RootIndex(*s): self.spaces[RootIndex(*s)] for s in slots})

    def __eq__(self, other) -> bool:
        return isinstance(other, RPoint) and self.n == other.n and dict(self.spaces) == dict(other.spaces)

    def to_json(self) -> dict:
        return {f"{s.i},{s.j}": V.to_json() for s, V in sorted(self.spaces.items())}


# ---------------------------------------------------------------------------
# membership


def _check_flag_dims(x: FlagPoint) -> None:
    for d, V in zip(x.dims, x.subspaces):
        if V.n != x.n or V.dim != d:
            raise StructuralError(f"V_{d} has dimension {V.dim}, expected {d}")


def is_degenerate_flag(x: FlagPoint) -> bool:
    """``pr_{d+1} V_d`` inside ``V_{d+1}`` for every consecutive pair."""
    if x.dims != tuple(range(1, x.n)):
        raise StructuralError("complete flag expected; use is_degenerate_flag_parabolic")
    _check_flag_dims(x)
    for d in range(1, x.n - 1):
        if not x[d + 1].contains(projection_pr(x.n, d + 1).subspace(x[d])):
            return False
    return True


def _parabolic_pr(n: int, a: int, b: int) -> CoordinateProjection:
    # pr_{a+1} ... pr_b: forget w_{a+1}, ..., w_b
    return projection_pr_range(n, a + 1, b + 1)


def is_degenerate_flag_parabolic(x: FlagPoint, shape: ParabolicShape) -> bool:
    if tuple(x.dims) != tuple(shape.d):
        raise StructuralError(f"flag dimensions {x.dims} do not match shape {shape.d}")
    _check_flag_dims(x)
    d = shape.d
    for a, b in zip(d, d[1:]):
        if not x[b].contains(_parabolic_pr(x.n, a, b).subspace(x[a])):
            return False
    return True


def is_R_point(p: RPoint) -> bool:
    """Dimension, support and containment conditions defining R_n."""
    n = p.n
    try:
        for s in all_slots(n):
            V = p.spaces.get(s)
            if V is None or V.n != n or V.dim != s.i:
                return False
            if not SubspacePoint(n, V.basis, (s.i, s.j)).within_ambient():
                return False
        for i in range(1, n - 1):
            for j in range(i, n - 1):
                right = p[i, j + 1]
                if not right.contains(projection_pr(n, j + 1).subspace(p[i, j])):
                    return False
                if not p[i + 1, j + 1].contains(right):
                    return False
    except StructuralError:
        return False
    return True


def is_R_point_oplus(p: RPoint) -> bool:
    """The equivalent form ``V_ij`` inside ``V_{i,j+1} + C w_{j+1}`` of the first containment."""
    n = p.n
    if not all(s in p.spaces and p.spaces[s].dim == s.i
               and SubspacePoint(n, p.spaces[s].basis, (s.i, s.j)).within_ambient()
               for s in all_slots(n)):
        return False
    for i in range(1, n - 1):
        for j in range(i, n - 1):
            big = p[i, j + 1] + SubspacePoint.coordinate(n, [j + 1])
            if not big.contains(p[i, j]) or not p[i + 1, j + 1].contains(p[i, j + 1]):
                return False
    return True


def is_Y_point(p: Mapping, shape: ParabolicShape) -> bool:
    """Conditions defining Y_d on entries ``V_{d_a, d_b}``, ``a <= b``."""
    n, d = shape.n, shape.d
    k = len(d)
    for a in range(k):
        for b in range(a, k):
            V = p.get((d[a], d[b]))
            if V is None:
                raise StructuralError(f"missing entry V_{d[a]},{d[b]}")
            if V.dim != d[a]:
                raise StructuralError(f"V_{d[a]},{d[b]} has dimension {V.dim}, expected {d[a]}")
            if not SubspacePoint(n, V.basis, (d[a], d[b])).within_ambient():
                return False
    for a in range(k):
        for b in range(a, k):
            V = p[d[a], d[b]]
            if a + 1 <= b and not p[d[a + 1], d[b]].contains(V):
                return False
            if b + 1 < k and not p[d[a], d[b + 1]].contains(_parabolic_pr(n, d[b], d[b + 1]).subspace(V)):
                return False
    return True


# ---------------------------------------------------------------------------
# pi, lift, fixed points


def project_pi(p: RPoint) -> FlagPoint:
    return FlagPoint(p.n, tuple(SubspacePoint(p.n, p[i, i].basis) for i in range(1, p.n)))


def lift(x: FlagPoint) -> RPoint:
    """A point of R_n over ``x``, built in increasing ``j - i``.

    ``V_{i,j+1}`` must sit between ``pr_{j+1} V_ij`` and ``V_{i+1,j+1}``
    intersected with ``W_{i,j+1}``.  When the lower bound already has
    dimension ``i`` it is the only choice.  Otherwise we add the first
    coordinate vector ``w_m`` of the upper bound (``m`` running over
    ``1..i`` and then ``j+2..n``) that is not yet in the lower bound; if no
    coordinate vector fits, the first echelon basis vector of the upper bound
    not in the lower bound is used.
    """
    n = x.n
    if not is_degenerate_flag(x):
        raise PreconditionError("lift needs a point of the degenerate flag variety")
    V: dict = {RootIndex(i, i): SubspacePoint(n, x[i].basis, (i, i)) for i in range(1, n)}
    for diff in range(1, n - 1):
        for i in range(1, n - diff):
            j = i + diff - 1  # build V_{i,j+1}
            amb = (i, j + 1)
            keep = _support(n, amb)
            lower = projection_pr(n, j + 1).subspace(V[RootIndex(i, j)])
            if lower.dim == i:
                V[RootIndex(i, j + 1)] = SubspacePoint(n, lower.basis, amb)
                continue
            upper = V[RootIndex(i + 1, j + 1)].intersect_coordinates(keep)
            if upper.dim == i:
                V[RootIndex(i, j + 1)] = SubspacePoint(n, upper.basis, amb)
                continue
            order = [m for m in range(1, n + 1) if m in keep]
            extra = next((_unit(n, m) for m in order
                          if upper.contains_vector(_unit(n, m)) and not lower.contains_vector(_unit(n, m))),
                         None)
            if extra is None:
                extra = next(v for v in upper.basis if not lower.contains_vector(v))
            V[RootIndex(i, j + 1)] = SubspacePoint.span(n, list(lower.basis) + [extra], amb)
    return RPoint(n, V)


def fixed_point(c: AdmissibleCollection) -> RPoint:
    if not is_admissible(c):
        raise PreconditionError(f"{c} is not admissible")
    n = c.n
    return RPoint(n, {s: SubspacePoint.coordinate(n, c[s].elements, (s.i, s.j))
                      for s in all_slots(n)})


def cell_label(V: SubspacePoint, slot: tuple | None = None) -> IndexSet:
    """Label of the cell of Gr(i, W_ij) containing ``V``.

    Coordinates are restricted to the support of W_ij and renumbered
    ``1..n'``; the rotation ``T(k) = k + i (mod n')`` is undone, the pivots of
    the echelon form read from the right are taken, and mapped back through
    ``T``.
    """
    n = V.n
    amb = tuple(slot) if slot is not None else V.ambient
    if amb is None:
        amb = (V.dim, V.dim)
    i = amb[0]
    if V.dim != i:
        raise StructuralError(f"subspace of dimension {V.dim} in slot {amb}")
    sup = sorted(_support(n, amb))
    npr = len(sup)

    def T(k: int) -> int:
        return (k + i - 1) % npr + 1

    # U_k = coefficient of w_{T(k)} in V; read columns in reverse
    rows = [[v[sup[T(k) - 1] - 1] for k in range(npr, 0, -1)] for v in V.basis]
    _, piv = rref(rows, npr)
    return IndexSet.of(n, [sup[T(npr - p) - 1] for p in piv])


def collection_of(p: RPoint) -> AdmissibleCollection:
    """Slotwise cell labels of an R-point."""
    masks = {s: cell_label(V, s).mask for s, V in p.spaces.items()}
    return AdmissibleCollection(p.n, masks)


# ---------------------------------------------------------------------------
# sections and divisors


def section_value(n: int, slot: tuple, earlier: Mapping) -> SubspacePoint:
    """The subspace ``s_l`` puts in ``slot``, given the earlier slots."""
    i, j = slot
    amb = (i, j)
    if i == 1:
        return SubspacePoint.coordinate(n, [j + 1], amb)
    if j == n - 1:
        return SubspacePoint.coordinate(n, [n, *range(1, i)], amb)
    prev = earlier[RootIndex(i - 1, j + 1)]
    return SubspacePoint.span(n, list(prev.basis) + [_unit(n, j + 1)], amb)


def section_s(l: int, p: Mapping, n: int | None = None) -> dict:
    """Extend a point over beta_1..beta_{l-1} by the section value at beta_l (1-based)."""
    if n is None:
        n = _infer_n(p)
    order = beta_order(n)
    if set(p) != set(order[:l - 1]):
        raise StructuralError(f"expected entries for the first {l - 1} slots of the beta order")
    out = dict(p)
    out[order[l - 1]] = section_value(n, order[l - 1], p)
    return out


def _infer_n(p: Mapping) -> int:
    for V in p.values():
        return V.n
    raise StructuralError("cannot infer n from an empty point; pass n")


def z_divisor_membership(p: RPoint, slot: tuple) -> bool:
    """Whether ``p`` lies in Z_l for the slot ``beta_l``."""
    s = RootIndex(*slot)
    return p[s] == section_value(p.n, s, p.spaces)


def divisor_set(p: RPoint) -> list[RootIndex]:
    return [s for s in beta_order(p.n) if z_divisor_membership(p, s)]


def section_set(n: int, slot: tuple, masks: Mapping) -> int:
    """Combinatorial section value at a fixed point, as a mask."""
    i, j = slot
    if i == 1:
        return 1 << j
    if j == n - 1:
        return (1 << (n - 1)) | ((1 << (i - 1)) - 1)
    return masks[RootIndex(i - 1, j + 1)] | (1 << j)


# ---------------------------------------------------------------------------
# quiver description


@dataclass(frozen=True)
class QuiverPoint:
    n: int
    A: tuple  # A_i: n x i
    B: tuple  # B_i: (i+1) x i, i = 1..n-2
    dims: tuple | None = None

    def __post_init__(self):
        if self.dims is None:
            object.__setattr__(self, "dims", tuple(range(1, self.n)))


def _relation_pr(n: int, dims: tuple, i: int) -> CoordinateProjection:
    return _parabolic_pr(n, dims[i - 1], dims[i])


def is_quiver_point(p: QuiverPoint, open_part: bool = False) -> bool:
    n, dims = p.n, p.dims
    for k, A in enumerate(p.A):
        if len(A) != n or any(len(r) != dims[k] for r in A):
            raise StructuralError(f"A_{k + 1} has the wrong shape")
    for k, B in enumerate(p.B):
        if len(B) != dims[k + 1] or any(len(r) != dims[k] for r in B):
            raise StructuralError(f"B_{k + 1} has the wrong shape")
    for k in range(len(dims) - 1):
        lhs = matmul(p.A[k + 1], p.B[k])
        pr = _relation_pr(n, dims, k + 1)
        rhs = [[ZERO if r + 1 in pr.killed else x for x in row] for r, row in enumerate(p.A[k])]
        if lhs != rhs:
            return False
    if open_part:
        return all(rank(A, dims[k]) == dims[k] for k, A in enumerate(p.A))
    return True


def quiver_from_flag(x: FlagPoint) -> QuiverPoint:
    """``A_i`` = echelon basis of ``V_i`` as columns, ``B_i`` = the unique solution of the relation."""
    n, dims = x.n, tuple(x.dims)
    if dims == tuple(range(1, n)):
        ok = is_degenerate_flag(x)
    else:
        ok = is_degenerate_flag_parabolic(x, ParabolicShape(n, dims))
    if not ok:
        raise PreconditionError("quiver_from_flag needs a degenerate flag")
    A = tuple(tuple(tuple(r) for r in transpose(V.basis, n)) for V in x.subspaces)
    B = []
    for k in range(len(dims) - 1):
        pr = _relation_pr(n, dims, k + 1)
        rhs = [[ZERO if r + 1 in pr.killed else v for v in row] for r, row in enumerate(A[k])]
        X = solve(A[k + 1], rhs, dims[k + 1])
        if X is None:
            raise PreconditionError("projection of V_i is not inside V_{i+1}")
        B.append(tuple(tuple(r) for r in X))
    return QuiverPoint(n, A, tuple(B), dims)


def flag_from_quiver(p: QuiverPoint) -> FlagPoint:
    subs = tuple(SubspacePoint.span(p.n, transpose(A, p.dims[k])) for k, A in enumerate(p.A))
    return FlagPoint(p.n, subs, p.dims)


def gamma_act(p: QuiverPoint, g: Sequence) -> QuiverPoint:
    """Change of basis: ``A_i -> A_i g_i``, ``B_i -> g_{i+1}^{-1} B_i g_i``."""
    A = tuple(tuple(tuple(r) for r in matmul(A, gi)) for A, gi in zip(p.A, g))
    B = []
    for k, Bk in enumerate(p.B):
        inv = solve(g[k + 1], _identity(p.dims[k + 1]), p.dims[k + 1])
        B.append(tuple(tuple(r) for r in matmul(matmul(inv, Bk), g[k])))
    return QuiverPoint(p.n, A, tuple(B), p.dims)


def _identity(k: int) -> list[list[Fraction]]:
    return [[ONE if r == c else ZERO for c in range(k)] for r in range(k)]


def relation_jacobian(p: QuiverPoint) -> list[list[Fraction]]:
    """Jacobian of ``(A, B) -> (A_{i+1} B_i - pr A_i)_i`` at ``p``.

    Columns: entries of A_1..A_k then B_1..B_{k-1}, row-major.
    Rows: entries of each relation, row-major.
    """
    n, dims = p.n, p.dims
    offs, col = {}, 0
    for k, d in enumerate(dims):
        offs["A", k] = col
        col += n * d
    for k in range(len(dims) - 1):
        offs["B", k] = col
        col += dims[k + 1] * dims[k]
    rows = []
    for k in range(len(dims) - 1):
        a, b = dims[k], dims[k + 1]
        pr = _relation_pr(n, dims, k + 1)
        for r in range(n):
            for c in range(a):
                row = [ZERO] * col
                for t in range(b):
                    row[offs["A", k + 1] + r * b + t] += p.B[k][t][c]
                    row[offs["B", k] + t * a + c] += p.A[k + 1][r][t]
                if r + 1 not in pr.killed:
                    row[offs["A", k] + r * a + c] -= 1
                rows.append(row)
    return rows


@dataclass
class QuiverDimensionReport:
    n: int
    samples: int
    ambient_dim: int
    equations: int
    ranks: list
    expected_dim: int

    @property
    def dims(self) -> list[int]:
        return [self.ambient_dim - r for r in self.ranks]

    @property
    def full_rank(self) -> bool:
        return all(r == self.equations for r in self.ranks)

    @property
    def ok(self) -> bool:
        return self.full_rank and all(d == self.expected_dim for d in self.dims)

    def to_json(self) -> dict:
        return {
            "n": self.n, "samples": self.samples, "ambient_dim": self.ambient_dim,
            "equations": self.equations, "ranks": self.ranks, "dims": self.dims,
            "expected_dim": self.expected_dim, "full_rank": self.full_rank, "ok": self.ok,
        }


def expected_quiver_dimension(n: int) -> int:
    return num_roots(n) + sum(i * i for i in range(1, n))


def quiver_dimension_check(n: int, samples: int = 20, seed: int = 0) -> QuiverDimensionReport:
    """Jacobian rank of the relations at random points of Q°_n.

    Points come from dense random flags, i.e. the generic part of Q°_n; at
    special (sparse) flags the rank can drop, since Fl^a_n is singular there.
    """
    _check_rank(n)
    rng = random.Random(seed)
    ranks = []
    ambient = equations = 0
    for _ in range(samples):
        x = random_flag(n, rng, density=1.0)
        g = [random_invertible(d, rng) for d in range(1, n)]
        p = gamma_act(quiver_from_flag(x), g)
        if not is_quiver_point(p, open_part=True):
            raise PreconditionError("sampled quiver point fails its relations")
        J = relation_jacobian(p)
        ambient = sum(n * d for d in range(1, n)) + sum((d + 1) * d for d in range(1, n - 1))
        equations = len(J)
        ranks.append(rank(J, ambient) if J else 0)
    if samples == 0:
        ambient = sum(n * d for d in range(1, n)) + sum((d + 1) * d for d in range(1, n - 1))
        equations = sum(n * d for d in range(1, n - 1))
    return QuiverDimensionReport(n, samples, ambient, equations, ranks, expected_quiver_dimension(n))


# ---------------------------------------------------------------------------
# random points


def random_rational(rng: random.Random, bound: int = 10, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def random_vector(n: int, rng: random.Random, support: Iterable[int] | None = None,
                  density: float = 0.5) -> tuple:
    sup = set(range(1, n + 1)) if support is None else set(support)
    while True:
        v = tuple(random_rational(rng, nonzero=True) if k + 1 in sup and rng.random() < density
                  else ZERO for k in range(n))
        if any(v):
            return v


def random_flag(n: int, rng: random.Random, density: float | None = None) -> FlagPoint:
    """A random point of Fl^a_n; sparse vectors make special positions likely.

    ``V_{d+1}`` is ``pr_{d+1} V_d`` plus random vectors until it has
    dimension ``d + 1``.  ``density`` 1 gives generic points.
    """
    _check_rank(n)
    dens = rng.choice([0.3, 0.5, 1.0]) if density is None else density
    subs = []
    V = SubspacePoint.span(n, [random_vector(n, rng, density=dens)])
    subs.append(V)
    for d in range(1, n - 1):
        W = projection_pr(n, d + 1).subspace(V)
        while W.dim < d + 1:
            W = SubspacePoint.span(n, list(W.basis) + [random_vector(n, rng, density=dens)])
        V = W
        subs.append(V)
    return FlagPoint(n, tuple(subs))


def random_invertible(d: int, rng: random.Random) -> list[list[Fraction]]:
    while True:
        g = [[random_rational(rng) for _ in range(d)] for _ in range(d)]
        if rank(g, d) == d:
            return g


def random_R_point(n: int, rng: random.Random, density: float | None = None) -> RPoint:
    """A random point of R_n chosen fibre by fibre along the beta order.

    At slot ``(i, j)`` the subspace contains ``V_{i-1,j}`` and lies in
    ``(V_{i,j+1} + C w_{j+1})`` intersected with ``W_ij``, a P^1 of choices.
    """
    _check_rank(n)
    dens = rng.choice([0.3, 0.6, 1.0]) if density is None else density
    V: dict = {}
    for s in beta_order(n):
        i, j = s
        keep = _support(n, (i, j))
        lower = V[RootIndex(i - 1, j)] if i > 1 else SubspacePoint(n, ())
        if j == n - 1:
            upper = SubspacePoint.coordinate(n, keep)
        else:
            upper = (V[RootIndex(i, j + 1)] + SubspacePoint.coordinate(n, [j + 1])).intersect_coordinates(keep)
        while True:
            coeffs = [random_rational(rng, nonzero=True) if rng.random() < dens else ZERO
                      for _ in upper.basis]
            v = tuple(sum((c * row[k] for c, row in zip(coeffs, upper.basis)), ZERO) for k in range(n))
            W = SubspacePoint.span(n, list(lower.basis) + [v], (i, j))
            if W.dim == i:
                V[s] = W
                break
    return RPoint(n, V)


def is_partial_R_point(n: int, p: Mapping) -> bool:
    """The R_n conditions among the slots present in ``p``."""
    for s, V in p.items():
        if V.dim != s[0] or not SubspacePoint(n, V.basis, tuple(s)).within_ambient():
            return False
    for (i, j), V in p.items():
        right = p.get(RootIndex(i, j + 1))
        if right is not None and not right.contains(projection_pr(n, j + 1).subspace(V)):
            return False
        up = p.get(RootIndex(i + 1, j))
        if up is not None and j >= i + 1 and not up.contains(V):
            return False
    return True
