from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricvanish.linalg import (
    adapted_basis,
    coords_in_basis,
    det_int,
    int_kernel,
    int_rank,
    invert_unimodular,
    mat_mul,
    primitive,
    smith_normal_form,
    solve_integer,
    solve_rational,
)


def check_snf(A):
    S, U, V = smith_normal_form(A)
    assert mat_mul(mat_mul(U, A), V) == S
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert S[i][j] == 0
    diag = [S[i][i] for i in range(min(m, n))]
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    assert all(d >= 0 for d in diag)
    assert abs(det_int(U)) == 1
    assert abs(det_int(V)) == 1
    return diag


def test_snf_identity():
    A = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    S, U, V = smith_normal_form(A)
    assert S == A


def test_snf_hand_example():
    diag = check_snf([[2, 4], [6, 8]])
    assert diag == [2, 4]
    assert abs(det_int([[2, 4], [6, 8]])) == 8


def test_snf_zero_matrix():
    S, U, V = smith_normal_form([[0, 0], [0, 0]])
    assert S == [[0, 0], [0, 0]]
    assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1


@given(st.lists(st.lists(st.integers(-9, 9), min_size=1, max_size=4),
                min_size=1, max_size=4).filter(lambda rows: len({len(r) for r in rows}) == 1))
@settings(max_examples=200, deadline=None)
def test_snf_random(rows):
    diag = check_snf(rows)
    assert len(diag) >= 1 or all(all(x == 0 for x in r) for r in rows) or True
    assert len([d for d in diag if d]) == int_rank(rows)


def test_primitive():
    assert primitive((2, 4, -6)) == (1, 2, -3)
    assert primitive((1, 1, 0)) == (1, 1, 0)
    assert primitive((0, 0, 5)) == (0, 0, 1)
    with pytest.raises(ValueError, match="not a direction"):
        primitive((0, 0, 0))


def test_solve_rational_identity():
    sol = solve_rational([[1, 0], [0, 1]], [1, 2])
    assert sol is not None
    particular, kernel = sol
    assert particular == (1, 2)
    assert kernel == []


def test_solve_rational_inconsistent():
    # the non-Cartier witness pattern: rows sum to zero, constants do not
    assert solve_rational([[1, 0], [0, 1], [-1, -1]], [-1, 0, 0]) is None


def test_solve_rational_underdetermined():
    particular, kernel = solve_rational([[1, 1]], [0])
    assert particular == (0, 0)
    assert len(kernel) == 1
    v = kernel[0]
    assert v[0] + v[1] == 0 and v != (0, 0)


def test_int_kernel():
    ker = int_kernel([[1, 1, -2]])
    assert len(ker) == 2
    for v in ker:
        assert v[0] + v[1] - 2 * v[2] == 0


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == (2, 3)
    assert solve_integer([[2]], [3]) is None


def test_adapted_basis_plane():
    W, r = adapted_basis([(1, 0, 0), (0, 1, 0)], 3)
    assert r == 2
    assert abs(det_int(W)) == 1
    for v in [(1, 0, 0), (0, 1, 0), (3, -2, 0)]:
        c = coords_in_basis(W, v)
        assert c[2] == 0
        assert tuple(sum(c[j] * W[j][i] for j in range(3)) for i in range(3)) == v


def test_invert_unimodular():
    M = [[1, 2], [0, 1]]
    assert mat_mul(M, invert_unimodular(M)) == [[1, 0], [0, 1]]
