from hypothesis import given, settings, strategies as st

from cofibred.homology import smith, smith_normal_form
from cofibred.homology.snf import determinant_pm1, invariant_factors, is_smith_form, matmul
from cofibred.verify import snf_postconditions


def test_two_three_becomes_one_six():
    S = smith([[2, 0], [0, 3]])
    assert S.diagonal == [1, 6]
    assert matmul(matmul(S.U, [[2, 0], [0, 3]]), S.V) == S.D


def test_zero_matrix():
    S = smith([[0, 0, 0], [0, 0, 0]])
    assert S.rank == 0
    assert all(x == 0 for row in S.D for x in row)


def test_identity_matrix():
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert smith_normal_form(I).D == I


def test_divisibility_chain():
    assert invariant_factors([[4, 0], [0, 6]]) == [2, 12]
    assert is_smith_form([[2, 0], [0, 12]])
    assert not is_smith_form([[4, 0], [0, 6]])


def test_inverses_are_inverses():
    A = [[3, 5, -1], [7, 2, 9]]
    S = smith(A)
    I2 = [[1, 0], [0, 1]]
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert matmul(S.U, S.Uinv) == I2
    assert matmul(S.V, S.Vinv) == I3
    assert determinant_pm1(S.U) and determinant_pm1(S.V)


matrices = st.integers(0, 12).flatmap(
    lambda r: st.integers(0, 12).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_postconditions_random(A):
    assert snf_postconditions(A)
