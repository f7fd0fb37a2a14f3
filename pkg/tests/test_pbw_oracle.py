from collections import Counter
from math import comb

import pytest

from degflag.characters import DominantWeight, QCharacter
from degflag.errors import CapacityError, StructuralError
from degflag.laurent import LaurentPolynomial
from degflag.pbw_oracle import (
    bracket_check, classical_character, degenerate_fundamental_wedge, filtration_levels,
    fundamental_module, graded_character, highest_vector_killed, highest_weight_module,
    weyl_dimension,
)


def omega(n, d):
    return DominantWeight(tuple(int(k == d) for k in range(1, n)))


def test_fundamental_modules():
    m = fundamental_module(2, 1)
    assert m.dim == 2 and sorted(m.weights) == [(-1,), (1,)]
    m = fundamental_module(3, 2)
    assert m.dim == 3 and m.weights[m.highest_index] == (0, 1)
    assert fundamental_module(4, 2).dim == 6
    with pytest.raises(StructuralError):
        fundamental_module(4, 4)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bracket_sanity(n):
    for d in range(1, n):
        m = fundamental_module(n, d)
        assert bracket_check(m)
        assert highest_vector_killed(m)
        for i in range(1, n):
            h = m.operators["h", i].matrix
            assert all(h[r][c] == 0 for r in range(m.dim) for c in range(m.dim) if r != c)


def test_f_lowers_weight():
    n = 4
    m = fundamental_module(n, 2)
    for (kind, (i, j)), op in ((k, v) for k, v in m.operators.items() if k[0] == "f"):
        # alpha_{i,j} = eps_i - eps_{j+1}, in fundamental-weight coordinates
        eps = [0] * n
        eps[i - 1], eps[j] = 1, -1
        alpha = [eps[k] - eps[k + 1] for k in range(n - 1)]
        for c in range(m.dim):
            for r in range(m.dim):
                if op.matrix[r][c]:
                    assert [a - b for a, b in zip(m.weights[c], m.weights[r])] == alpha


def test_highest_weight_modules():
    assert highest_weight_module(3, DominantWeight((0, 0))).dim == 1
    assert highest_weight_module(3, DominantWeight((1, 1))).dim == 8
    m = highest_weight_module(4, DominantWeight((0, 1, 0)))
    assert m.dim == 6
    assert classical_character(m) == LaurentPolynomial(3, dict(Counter(fundamental_module(4, 2).weights)))


def test_capacity():
    with pytest.raises(CapacityError):
        highest_weight_module(4, DominantWeight((3, 3, 3)), cap=100)


def test_filtration_levels():
    lv = filtration_levels(3, DominantWeight((1, 1)))
    dims = [l.dim for l in lv]
    assert dims == [1, 4, 8]
    assert all(a < b for a, b in zip(dims, dims[1:]))


@pytest.mark.parametrize("m", range(5))
def test_graded_character_n2(m):
    g = graded_character(2, DominantWeight((m,)))
    assert g.degrees == {k: Counter({(m - 2 * k,): 1}) for k in range(m + 1)}


def test_graded_character_examples():
    g = graded_character(3, DominantWeight((0, 0)))
    assert g.degrees == {0: Counter({(0, 0): 1})}
    g = graded_character(3, DominantWeight((1, 0)))
    # three weights, one each: z1 in degree 0, z1^-1 z2 and z2^-1 in degree 1
    assert g.degrees == {0: Counter({(1, 0): 1}), 1: Counter({(-1, 1): 1, (0, -1): 1})}
    assert g.graded_dimensions() == [1, 2]


def test_wedge_examples():
    assert degenerate_fundamental_wedge(2, 1).graded_dimensions() == [1, 1]
    assert degenerate_fundamental_wedge(4, 2).graded_dimensions() == [1, 4, 1]
    for n in range(2, 8):
        for d in range(1, n):
            dims = degenerate_fundamental_wedge(n, d).graded_dimensions()
            assert dims == [comb(d, d - k) * comb(n - d, k) for k in range(len(dims))]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_wedge_equals_oracle(n):
    for d in range(1, n):
        assert (degenerate_fundamental_wedge(n, d).to_polynomial()
                == graded_character(n, omega(n, d)).to_polynomial())


@pytest.mark.parametrize("n,ell", [(3, (2, 1)), (4, (1, 1, 0)), (4, (0, 2, 0))])
def test_q1_is_classical_character(n, ell):
    lam = DominantWeight(ell)
    g = graded_character(n, lam)
    assert g.to_polynomial().substitute_last(1) == classical_character(highest_weight_module(n, lam))
    assert sum(g.graded_dimensions()) == weyl_dimension(n, lam)
    assert isinstance(g.to_qcharacter(lam), QCharacter)


def test_weyl_dimension():
    assert weyl_dimension(3, DominantWeight((1, 1))) == 8
    assert weyl_dimension(4, DominantWeight((2, 2, 2))) == 729
    assert weyl_dimension(5, DominantWeight((0, 0, 0, 0))) == 1
