import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from cuspkit.intmat import (
    smith_normal_form as snf, mat_mul, det, invariant_factors,
    solve_in_row_span, mat_inverse_unimodular, identity_matrix,
)


def _is_diag(m):
    return all(m[i][j] == 0 for i in range(len(m))
               for j in range(len(m[0])) if i != j)


@pytest.mark.parametrize("seed", range(25))
def test_snf_transforms_random(seed):
    rng = random.Random(seed)
    rows = rng.randint(1, 4)
    cols = rng.randint(1, 4)
    a = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
    d, u, v = snf(a)
    prod = mat_mul(mat_mul(u, a), v)
    assert _is_diag(prod)
    assert [prod[i][i] for i in range(min(rows, cols))] == d
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    for i in range(len(d) - 1):
        if d[i] != 0:
            assert d[i + 1] % d[i] == 0 or d[i + 1] == 0
        else:
            assert d[i + 1] == 0
    assert all(x >= 0 for x in d)


@pytest.mark.parametrize("seed", range(15))
def test_snf_matches_sympy(seed):
    rng = random.Random(1000 + seed)
    rows = rng.randint(1, 4)
    cols = rng.randint(1, 4)
    a = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
    d, _, _ = snf(a)
    ref = smith_normal_form(sympy.Matrix(a))
    ref_d = [abs(ref[i, i]) for i in range(min(rows, cols))]
    assert d == ref_d


def test_invariant_factors():
    # Z x Z/4 presented on two generators
    torsion, rank = invariant_factors([[0, 0], [0, 4]], 2)
    assert (torsion, rank) == ([4], 1)
    torsion, rank = invariant_factors([], 3)
    assert (torsion, rank) == ([], 3)
    # Z/2 x Z/6 ~ invariant factors 2, 6
    torsion, rank = invariant_factors([[2, 0], [0, 6]], 2)
    assert (torsion, rank) == ([2, 6], 0)


def test_solve_in_row_span():
    rows = [[2, 0], [0, 3]]
    assert solve_in_row_span(rows, [2, 3])
    assert solve_in_row_span(rows, [4, -3])
    assert not solve_in_row_span(rows, [1, 0])
    assert solve_in_row_span([], [0, 0])
    assert not solve_in_row_span([], [1, 0])


def test_unimodular_inverse():
    m = [[1, 2], [1, 3]]
    inv = mat_inverse_unimodular(m)
    assert mat_mul(m, inv) == identity_matrix(2)
    with pytest.raises(ValueError):
        mat_inverse_unimodular([[2, 0], [0, 1]])


def test_big_integers_exact():
    big = 3 * 2 ** 200 + 7
    d, u, v = snf([[big, big * 2], [0, big * 5]])
    prod = mat_mul(mat_mul(u, [[big, big * 2], [0, big * 5]]), v)
    assert [prod[i][i] for i in range(2)] == d
    assert d[0] == big
