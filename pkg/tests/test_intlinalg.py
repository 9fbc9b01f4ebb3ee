import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcontact.intlinalg import (
    AbelianGroupInvariants,
    IntMatrix,
    cokernel,
    kernel,
    rank,
    rational_rank,
    smith_normal_form,
    vector_gcd,
)
from oracles import bareiss_rank, invariant_factors_by_minors

small_ints = st.integers(-6, 6)


@st.composite
def matrices(draw, max_dim=4):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m))
    return IntMatrix(m, n, tuple(x for r in rows for x in r))


def unimodular(M: IntMatrix) -> bool:
    return abs(M.det()) == 1


def test_snf_small_example():
    snf = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert snf.S.to_rows() == [[2, 0], [0, 4]]
    assert snf.invariant_factors == [2, 4]


def test_snf_empty_shape():
    snf = smith_normal_form(IntMatrix.zeros(0, 3))
    assert snf.U.shape == (0, 0)
    assert snf.V == IntMatrix.identity(3)
    assert snf.rank == 0


def test_kernel_of_row():
    k, basis = kernel(IntMatrix.from_rows([[2, -1]]))
    assert k == 1
    assert basis.column_vectors() == [(1, 2)]


def test_cokernel_cyclic():
    assert cokernel(IntMatrix.from_rows([[3]])) == AbelianGroupInvariants(0, (3,))
    assert cokernel(IntMatrix.from_rows([[1, 0], [0, 0]])) == AbelianGroupInvariants(1)


def test_group_normalization():
    g = AbelianGroupInvariants.from_cyclic_orders(1, [6, 4])
    assert g.torsion == (2, 12)
    assert str(g) == "Z + Z_2 + Z_12"
    with pytest.raises(ValueError):
        AbelianGroupInvariants(0, (4, 6))
    assert AbelianGroupInvariants.from_json(g.to_json()) == g


def test_vector_gcd():
    assert vector_gcd([4, -6, 10]) == 2
    assert vector_gcd([]) == 0


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_certificate(A):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.S
    assert snf.S.is_diagonal()
    assert unimodular(snf.U) and unimodular(snf.V)
    d = snf.S.diagonal()
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=200, deadline=None)
@given(matrices(max_dim=3))
def test_snf_matches_minors_oracle(A):
    if A.rows and A.cols:
        expected = invariant_factors_by_minors([list(r) for r in A.to_rows()])[0]
    else:
        expected = []
    assert smith_normal_form(A).invariant_factors == expected


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_kernel_basis_is_summand(A):
    k, K = kernel(A)
    assert k == A.cols - rank(A)
    assert (A @ K).is_zero()
    if k:
        # a direct summand: the basis extends to Z^n, i.e. its k x k minors have gcd 1
        assert smith_normal_form(K).invariant_factors == [1] * k


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_agrees_across_methods(A):
    r = rank(A)
    assert r == rational_rank(A)
    if A.rows and A.cols:
        assert r == bareiss_rank([list(x) for x in A.to_rows()])


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_cokernel_rank_and_order(A):
    C = cokernel(A)
    assert C.free_rank == A.rows - rank(A)
    if A.rows == A.cols and A.rows and A.det() != 0:
        order = 1
        for t in C.torsion:
            order *= t
        assert order == abs(A.det())


def test_random_6x6_rank_against_bareiss():
    rng = random.Random(7)
    for _ in range(50):
        r = rng.randint(1, 6)
        L = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(6)]
        R = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(r)]
        rows = [[sum(L[i][k] * R[k][j] for k in range(r)) for j in range(6)] for i in range(6)]
        assert rank(IntMatrix.from_rows(rows)) == bareiss_rank(rows)


def test_matrix_validation():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(TypeError):
        IntMatrix(1, 1, (1.5,))
    A = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert A.det() == -2
    assert A.transpose().to_rows() == [[1, 3], [2, 4]]
