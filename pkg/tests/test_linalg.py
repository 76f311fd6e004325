import random

import pytest
from hypothesis import given, strategies as st

from qshuffle.braidwords import Braiding, Content, total_symmetrizer
from qshuffle.exact.field import CyclotomicField, GenericField
from qshuffle.exact.linalg import (
    SparseMatrix,
    kernel_basis,
    naive_kernel,
    naive_rank,
    rank,
    rank_kernel_image,
    solve_left_inverse,
)


def _random_dense(field, rng, m, n, rank_hint=None, density=0.6):
    rows = [[field.random_element(rng) if rng.random() < density else field.zero for _ in range(n)] for _ in range(m)]
    if rank_hint is not None and m > rank_hint:
        # make the trailing rows combinations of the leading ones
        for i in range(rank_hint, m):
            c = [field.random_element(rng) for _ in range(rank_hint)]
            rows[i] = [sum((c[k] * rows[k][j] for k in range(rank_hint)), field.zero) for j in range(n)]
    return rows


def test_all_ones_2x2(F):
    M = SparseMatrix.from_dense(F, [[1, 1], [1, 1]])
    res = rank_kernel_image(M)
    assert res.rank == 1
    assert len(res.kernel) == 1
    assert M.matvec(res.kernel[0]) == {}


def test_empty_matrix(F):
    M = SparseMatrix(0, 0, F)
    assert rank(M) == 0
    assert kernel_basis(M) == []
    M = SparseMatrix(0, 3, F)
    assert rank(M) == 0 and len(kernel_basis(M)) == 3


def test_rank_uses_function_field(F):
    q = F.q
    # singular only at q = 1, so full rank over Q(q)
    M = SparseMatrix.from_dense(F, [[q, 1], [1, q]])
    assert rank(M) == 2
    M = SparseMatrix.from_dense(F, [[q, q * q], [1, q]])
    assert rank(M) == 1


def test_rank_at_root_of_unity(K3):
    q = K3.q
    # det = q^3 - 1 = 0 at a primitive cube root of unity
    M = SparseMatrix.from_dense(K3, [[q, 1], [1, q * q]])
    assert rank(M) == 1


@pytest.mark.parametrize("regime", ["generic", 3, 5])
def test_bareiss_matches_gauss_jordan(regime):
    field = GenericField() if regime == "generic" else CyclotomicField(regime)
    rng = random.Random(17)
    for trial in range(40):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        dense = _random_dense(field, rng, m, n, rank_hint=rng.randint(0, min(m, n)))
        M = SparseMatrix.from_dense(field, dense)
        res = rank_kernel_image(M)
        assert res.rank == naive_rank(field, dense)
        assert len(res.kernel) == n - res.rank == len(naive_kernel(field, dense))
        for v in res.kernel:
            assert M.matvec(v) == {}


@given(st.integers(0, 2**32))
def test_kernel_vectors_are_annihilated(seed):
    field = GenericField()
    rng = random.Random(seed)
    m, n = rng.randint(1, 6), rng.randint(1, 6)
    dense = _random_dense(field, rng, m, n, rank_hint=rng.randint(0, min(m, n)))
    M = SparseMatrix.from_dense(field, dense)
    for v in kernel_basis(M):
        assert M.matvec(v) == {}


def test_matmul_and_transpose(F):
    rng = random.Random(1)
    A = SparseMatrix.from_dense(F, _random_dense(F, rng, 3, 4))
    B = SparseMatrix.from_dense(F, _random_dense(F, rng, 4, 2))
    AB = A @ B
    assert (B.transpose() @ A.transpose()) == AB.transpose()
    assert rank(AB) <= min(rank(A), rank(B))


def test_left_inverse(F):
    rng = random.Random(4)
    while True:
        B = _random_dense(F, rng, 4, 4, density=1.0)
        if naive_rank(F, B) == 4:
            break
    inv = solve_left_inverse(F, B)
    prod = [[sum((inv[i][k] * B[k][j] for k in range(4)), F.zero) for j in range(4)] for i in range(4)]
    assert prod == [[F.one if i == j else F.zero for j in range(4)] for i in range(4)]
    with pytest.raises(ZeroDivisionError):
        solve_left_inverse(F, [[F.one, F.one], [F.one, F.one]])


def test_sl3_serre_symmetrizer_rank(F, sl3):
    br = Braiding(sl3, F)
    for c in ((2, 1), (1, 2)):
        S = total_symmetrizer(Content(c, 0), br)
        assert S.shape == (3, 3)
        assert rank(S) == 2
