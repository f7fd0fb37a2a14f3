"""Roots, index sets and admissible collections labelling the cells of R_n.

Index sets are stored as bitmasks: element ``l`` (1-based) is bit ``l - 1``.
A collection assigns to every positive root ``(i, j)``, ``1 <= i <= j <= n-1``,
a set ``S_ij`` of size ``i`` inside ``{1..i} u {j+1..n}``; it is admissible when

    S_{i-1,j}  c  S_ij  c  S_{i,j+1} u {j+1}.

Collections are built slot by slot along :func:`beta_order`; at every slot the
two conditions above leave exactly two candidates, which gives the
``2 ** (n(n-1)/2)`` fixed points of R_n.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import InvalidRankError, PreconditionError, StructuralError

__all__ = [
    "RootIndex", "IndexSet", "AdmissibleCollection", "BaseCellLabel",
    "ParabolicShape", "ABPair", "beta_order", "is_admissible",
    "enumerate_admissible", "enumerate_admissible_parabolic",
    "enumerate_base_cells", "ab_pair", "cell_dimension", "relative_dimension",
    "base_cell_dimension", "codim_one_cells", "wrap", "num_roots",
]


class RootIndex(NamedTuple):
    i: int
    j: int


def num_roots(n: int) -> int:
    return n * (n - 1) // 2


def wrap(x: int, n: int) -> int:
    """``x`` if positive, else ``x + n``; maps ``-n < x <= n`` into ``1..n``."""
    return x if x > 0 else x + n


def _bit(l: int) -> int:
    return 1 << (l - 1)


def _elem(mask: int) -> int:
    # single-element mask -> its element
    return mask.bit_length()


def _mask(elements: Iterable[int]) -> int:
    m = 0
    for l in elements:
        m |= _bit(l)
    return m


def _range_mask(lo: int, hi: int) -> int:
    """Mask of ``{lo..hi}`` (empty when ``lo > hi``)."""
    if lo > hi:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << (lo - 1)


def support_mask(n: int, i: int, j: int) -> int:
    """Mask of ``{1..i} u {j+1..n}``, the coordinate support of W_ij."""
    return _range_mask(1, i) | _range_mask(j + 1, n)


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise InvalidRankError(f"rank parameter n must be an integer >= 2, got {n!r}")


@lru_cache(maxsize=None)
def beta_order(n: int) -> tuple[RootIndex, ...]:
    """Positive roots ordered by decreasing ``j - i``, then increasing ``i``.

    >>> beta_order(3)
    (RootIndex(i=1, j=2), RootIndex(i=1, j=1), RootIndex(i=2, j=2))
    """
    _check_rank(n)
    order = []
    for diff in range(n - 2, -1, -1):
        for i in range(1, n - diff):
            order.append(RootIndex(i, i + diff))
    return tuple(order)


@lru_cache(maxsize=None)
def all_slots(n: int) -> tuple[RootIndex, ...]:
    _check_rank(n)
    return tuple(RootIndex(i, j) for i in range(1, n) for j in range(i, n))


@dataclass(frozen=True, order=True)
class IndexSet:
    """A subset of ``{1..n}`` stored as a bitmask."""

    n: int
    mask: int

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "IndexSet":
        elements = list(elements)
        if any(not 1 <= l <= n for l in elements):
            raise StructuralError(f"elements {elements} out of range 1..{n}")
        if len(set(elements)) != len(elements):
            raise StructuralError(f"repeated elements in {elements}")
        return cls(n, _mask(elements))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(l for l in range(1, self.n + 1) if self.mask >> (l - 1) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, l: int) -> bool:
        return bool(self.mask >> (l - 1) & 1) if l >= 1 else False

    def __iter__(self):
        return iter(self.elements)

    def fits_slot(self, i: int, j: int) -> bool:
        return len(self) == i and not self.mask & ~support_mask(self.n, i, j)

    def __repr__(self) -> str:
        return f"IndexSet{self.elements}"


class ParabolicShape:
    """Strictly increasing ``d_1 < ... < d_k`` inside ``1..n-1``."""

    def __init__(self, n: int, d: Sequence[int]):
        _check_rank(n)
        d = tuple(int(x) for x in d)
        if not d:
            raise StructuralError("parabolic shape must be non-empty")
        if any(b <= a for a, b in zip(d, d[1:])) or d[0] < 1 or d[-1] > n - 1:
            raise StructuralError(f"shape {d} is not strictly increasing inside 1..{n - 1}")
        self.n = n
        self.d = d

    @classmethod
    def full(cls, n: int) -> "ParabolicShape":
        return cls(n, range(1, n))

    @property
    def roots(self) -> tuple[RootIndex, ...]:
        """Roots ``(i, j)`` with ``i <= d_l <= j`` for some ``l``, in beta order."""
        return tuple(s for s in beta_order(self.n) if any(s.i <= x <= s.j for x in self.d))

    def __eq__(self, other):
        return isinstance(other, ParabolicShape) and (self.n, self.d) == (other.n, other.d)

    def __hash__(self):
        return hash((self.n, self.d))

    def __repr__(self):
        return f"ParabolicShape(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class ABPair:
    a: int
    b: int


class AdmissibleCollection:
    """Slot-indexed family of index sets (possibly only over a subset of roots).

    Use :meth:`from_sets` to build one from plain element lists; it validates
    structure and admissibility.  Look up entries with ``c[i, j]``.
    """

    __slots__ = ("n", "masks", "_hash")

    def __init__(self, n: int, masks: Mapping[tuple[int, int], int]):
        self.n = n
        self.masks = {RootIndex(*k): v for k, v in masks.items()}
        self._hash = None

    @classmethod
    def from_sets(cls, n: int, sets: Mapping[tuple[int, int], Iterable[int]],
                  check: bool = True) -> "AdmissibleCollection":
        _check_rank(n)
        c = cls(n, {k: IndexSet.of(n, v).mask for k, v in sets.items()})
        if check and not is_admissible(c):
            raise PreconditionError(f"collection {c} is not admissible")
        return c

    def __getitem__(self, slot: tuple[int, int]) -> IndexSet:
        return IndexSet(self.n, self.masks[RootIndex(*slot)])

    def __contains__(self, slot) -> bool:
        return RootIndex(*slot) in self.masks

    @property
    def slots(self) -> tuple[RootIndex, ...]:
        return tuple(s for s in beta_order(self.n) if s in self.masks)

    def diagonal(self) -> "BaseCellLabel":
        return BaseCellLabel(self.n, tuple(self.masks[RootIndex(i, i)] for i in range(1, self.n)))

    def as_lists(self) -> dict[str, list[int]]:
        return {f"{s.i},{s.j}": list(self[s].elements) for s in self.slots}

    def _key(self):
        return (self.n, tuple(sorted(self.masks.items())))

    def __eq__(self, other):
        return isinstance(other, AdmissibleCollection) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        body = ", ".join(f"S{s.i}{s.j}={self[s].elements}" for s in self.slots)
        return f"AdmissibleCollection(n={self.n}: {body})"


@dataclass(frozen=True)
class BaseCellLabel:
    """Chain ``S_1, ..., S_{n-1}`` labelling a cell of the degenerate flag variety."""

    n: int
    masks: tuple[int, ...]

    @classmethod
    def of(cls, n: int, sets: Sequence[Iterable[int]]) -> "BaseCellLabel":
        label = cls(n, tuple(IndexSet.of(n, s).mask for s in sets))
        label.validate()
        return label

    def validate(self) -> None:
        n = self.n
        if len(self.masks) != n - 1:
            raise StructuralError(f"expected {n - 1} sets, got {len(self.masks)}")
        for i, m in enumerate(self.masks, start=1):
            if bin(m).count("1") != i or m >> n:
                raise StructuralError(f"S_{i} must be an {i}-subset of 1..{n}")
        for i in range(1, n - 1):
            if self.masks[i - 1] & ~(self.masks[i] | _bit(i + 1)):
                raise StructuralError(f"S_{i} is not inside S_{i + 1} u {{{i + 1}}}")

    @property
    def sets(self) -> tuple[IndexSet, ...]:
        return tuple(IndexSet(self.n, m) for m in self.masks)

    def __repr__(self):
        return f"BaseCellLabel({[s.elements for s in self.sets]})"


# ---------------------------------------------------------------------------
# candidate sets


def _candidates(n: int, masks: Mapping, i: int, j: int) -> tuple[int, int]:
    """``(lower, upper)`` masks bracketing S_ij; the candidates are ``upper & ~lower``."""
    lower = masks[RootIndex(i - 1, j)] if i > 1 else 0
    if j < n - 1:
        upper = masks[RootIndex(i, j + 1)] | _bit(j + 1)
    else:
        upper = support_mask(n, i, n - 1)
    return lower, upper


def ab_pair(c: AdmissibleCollection, slot: tuple[int, int]) -> ABPair:
    """Return ``a`` (the candidate chosen at ``slot``) and ``b`` (the other one)."""
    n = c.n
    i, j = slot
    try:
        lower, upper = _candidates(n, c.masks, i, j)
        s = c.masks[RootIndex(i, j)]
    except KeyError as exc:
        raise StructuralError(f"missing entry {exc} needed for slot {slot}") from None
    cand = upper & ~lower
    if lower & ~upper or bin(cand).count("1") != 2:
        raise StructuralError(f"slot {slot}: bracketing sets are inconsistent")
    x = cand & -cand
    y = cand ^ x
    for a, b in ((x, y), (y, x)):
        if s == lower | a:
            return ABPair(_elem(a), _elem(b))
    raise StructuralError(f"slot {slot}: entry {IndexSet(n, s)} matches neither candidate")


def is_admissible(c, n: int | None = None) -> bool:
    """Check the chain conditions at every slot where both sides are present.

    ``c`` may be an :class:`AdmissibleCollection` or a mapping from ``(i, j)``
    to element iterables.  Wrong sizes or supports raise :class:`StructuralError`.
    """
    if not isinstance(c, AdmissibleCollection):
        if n is None:
            n = max(j for _, j in c) + 1
        c = AdmissibleCollection(n, {k: IndexSet.of(n, v).mask for k, v in c.items()})
    n = c.n
    masks = c.masks
    for (i, j), m in masks.items():
        if not 1 <= i <= j <= n - 1:
            raise StructuralError(f"slot {(i, j)} out of range for n={n}")
        if not IndexSet(n, m).fits_slot(i, j):
            raise StructuralError(f"S_{i},{j}={IndexSet(n, m)} has wrong size or support")
    for (i, j), m in masks.items():
        below = masks.get(RootIndex(i - 1, j))
        if below is not None and below & ~m:
            return False
        right = masks.get(RootIndex(i, j + 1))
        if right is not None and m & ~(right | _bit(j + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration


def _dfs(n: int, slots: Sequence[RootIndex], prefix: Sequence[int] = ()) -> Iterator[dict]:
    """Depth-first walk over the two candidates per slot (smaller element first).

    ``prefix`` fixes the first choices (0 = smaller candidate, 1 = larger),
    which carves the stream into independent chunks.
    """
    masks: dict = {}
    depth_total = len(slots)
    if len(prefix) > depth_total:
        raise StructuralError("prefix longer than the number of slots")

    def rec(k: int):
        if k == depth_total:
            yield masks
            return
        i, j = slots[k]
        lower, upper = _candidates(n, masks, i, j)
        cand = upper & ~lower
        x = cand & -cand
        choices = (x, cand ^ x)
        if k < len(prefix):
            choices = (choices[prefix[k]],)
        for ch in choices:
            masks[slots[k]] = lower | ch
            yield from rec(k + 1)
        del masks[slots[k]]

    yield from rec(0)


def enumerate_admissible(n: int, prefix: Sequence[int] = ()) -> Iterator[AdmissibleCollection]:
    """Yield every admissible collection for rank ``n`` exactly once.

    The order is depth-first along :func:`beta_order`, trying the smaller
    candidate element first at every slot.  Passing ``prefix`` restricts the
    stream to the collections whose first ``len(prefix)`` choices are fixed.
    """
    _check_rank(n)
    for masks in _dfs(n, beta_order(n), prefix):
        yield AdmissibleCollection(n, dict(masks))


def enumerate_admissible_parabolic(shape: ParabolicShape) -> Iterator[AdmissibleCollection]:
    """Yield all ``d``-admissible collections, with entries only on the roots of ``shape``."""
    for masks in _dfs(shape.n, shape.roots):
        yield AdmissibleCollection(shape.n, dict(masks))


def enumerate_base_cells(n: int) -> Iterator[BaseCellLabel]:
    """Yield every chain ``S_i c S_{i+1} u {i+1}`` with ``#S_i = i``."""
    _check_rank(n)
    chain = [0] * (n - 1)

    def rec(i: int):
        # choose S_i given S_{i+1}
        if i == 0:
            yield BaseCellLabel(n, tuple(chain))
            return
        if i == n - 1:
            pool = list(range(1, n + 1))
        else:
            pool = [l for l in range(1, n + 1) if (chain[i] | _bit(i + 1)) >> (l - 1) & 1]
        for sub in combinations(pool, i):
            chain[i - 1] = _mask(sub)
            yield from rec(i - 1)

    yield from rec(n - 1)


# ---------------------------------------------------------------------------
# dimensions


def _g(n: int, masks: Mapping, i: int, j: int) -> int:
    s = masks[RootIndex(i, j)]
    if i == 1:
        return int(_elem(s) != j + 1)
    if j == n - 1:
        return int(_elem(s & ~masks[RootIndex(i - 1, j)]) == i)
    if not s & _bit(j + 1):
        return 1
    l = _elem(s & ~masks[RootIndex(i - 1, j)])
    m = _elem(masks[RootIndex(i, j + 1)] & ~s)
    return int(wrap(l - j, n) > wrap(m - j, n))


def _h(n: int, masks: Mapping, i: int, j: int) -> int:
    # h = 1 iff j in S_{i,j-1} and wrap(m - j) < wrap(l - j)
    left = masks[RootIndex(i, j - 1)]
    if not left & _bit(j):
        return 0
    s = masks[RootIndex(i, j)]
    l = _elem(s & ~left)
    m = _elem(masks[RootIndex(i + 1, j)] & ~s)
    return int(wrap(m - j, n) < wrap(l - j, n))


def cell_dimension(c: AdmissibleCollection) -> int:
    """Dimension of the cell C(S): one 0/1 term per slot present in ``c``."""
    return sum(_g(c.n, c.masks, i, j) for i, j in c.masks)


def relative_dimension(c: AdmissibleCollection) -> int:
    """Dimension of C(S) minus the dimension of the cell of its diagonal."""
    n, masks = c.n, c.masks
    return sum(_h(n, masks, i, j) for i in range(1, n - 1) for j in range(i + 1, n))


def _first_completion(label: BaseCellLabel) -> AdmissibleCollection | None:
    n = label.n
    slots = beta_order(n)
    diag = label.masks
    masks: dict = {}

    def rec(k: int):
        if k == len(slots):
            return True
        i, j = slots[k]
        lower, upper = _candidates(n, masks, i, j)
        cand = upper & ~lower
        x = cand & -cand
        target = diag[i - 1]
        for ch in (x, cand ^ x):
            s = lower | ch
            if i == j:
                if s != target:
                    continue
            elif target & ~(s | _range_mask(i + 1, j)):
                continue  # S_ii could no longer be reached from S_ij
            masks[slots[k]] = s
            if rec(k + 1):
                return True
        masks.pop(slots[k], None)
        return False

    return AdmissibleCollection(n, masks) if rec(0) else None


def base_cell_dimension(label: BaseCellLabel) -> int:
    """Dimension of the cell of Fl^a_n labelled by a chain.

    Computed from the first admissible completion of the chain in enumeration
    order, as cell dimension minus relative dimension.
    """
    label.validate()
    c = _first_completion(label)
    if c is None:
        raise StructuralError(f"{label} has no admissible completion")
    return cell_dimension(c) - relative_dimension(c)


def codim_one_cells(n: int) -> list[AdmissibleCollection]:
    """The collections indexed by pairs ``1 <= a <= b <= n-1``, in lexicographic order."""
    _check_rank(n)
    out = []
    for a in range(1, n):
        for b in range(a, n):
            masks = {}
            for s in all_slots(n):
                base = _range_mask(1, s.i)
                if s.i < a or s.j > b:
                    masks[s] = base
                else:
                    masks[s] = (base & ~_bit(a)) | _bit(b + 1)
            out.append(AdmissibleCollection(n, masks))
    return out
