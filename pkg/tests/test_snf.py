import random

from hypothesis import given, settings, strategies as st

from oracles import determinantal_divisors, det, naive_smith_diagonal
from unicover.snf import dense_elementary_divisors, matmul, smith_normal_form, sparse_elementary_divisors


def random_matrix(rng, max_rows=8, max_cols=9, lo=-9, hi=9):
    m, n = rng.randint(1, max_rows), rng.randint(1, max_cols)
    density = rng.random()
    return [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def check_snf(A):
    r = smith_normal_form(A)
    assert matmul(matmul(r.U, r.D), r.V) == A
    assert abs(det(r.U)) == 1 and abs(det(r.V)) == 1
    assert matmul(r.U, r.U_inv) == [[int(i == j) for j in range(len(A))] for i in range(len(A))]
    for i, row in enumerate(r.D):
        for j, x in enumerate(row):
            assert i == j or x == 0
    divs = r.elementary_divisors
    assert all(d > 0 for d in divs)
    assert all(divs[k + 1] % divs[k] == 0 for k in range(len(divs) - 1))
    return divs


def test_snf_against_naive_oracle_500():
    rng = random.Random(20240517)
    for _ in range(500):
        A = random_matrix(rng)
        divs = check_snf(A)
        assert divs == naive_smith_diagonal(A)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_matches_determinantal_divisors(A):
    assert check_snf(A) == determinantal_divisors(A)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_sparse_equals_dense(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, 10, 10, -3, 3)
    rows = [{j: x for j, x in enumerate(r) if x} for r in A]
    assert sparse_elementary_divisors(rows) == dense_elementary_divisors(A)


def test_edge_shapes():
    assert smith_normal_form([[0, 0], [0, 0]]).elementary_divisors == []
    assert smith_normal_form([[6]]).elementary_divisors == [6]
    assert smith_normal_form([[2, 0], [0, 3]]).elementary_divisors == [1, 6]
    assert sparse_elementary_divisors([]) == []
