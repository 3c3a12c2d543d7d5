import itertools

import numpy as np
from hypothesis import given, strategies as st

from cosine_sine import linalg, make_field
from cosine_sine.oracle import all_vectors


def _matvec(F, M, x):
    return np.array([F.dot(F.asarray(row), F.asarray(x)) for row in M])


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_nullspace_matches_enumeration_gf9(rows, cols, data):
    F = make_field("gf:3^2")
    M = np.array(data.draw(st.lists(st.integers(0, 8), min_size=rows * cols,
                                    max_size=rows * cols))).reshape(rows, cols)
    kernel = {tuple(x) for x in all_vectors(F, cols).tolist()
              if F.all_zero(_matvec(F, M, x))}
    B = linalg.nullspace(F, M)
    assert len(kernel) == 9 ** len(B)
    for b in B:
        assert tuple(int(v) for v in b) in kernel
    assert linalg.rank(F, M) == cols - len(B)


def test_solve_affine_gf5():
    F = make_field("gf:5")
    A = [[1, 2, 0], [0, 1, 1]]
    part, basis = linalg.solve(F, A, [3, 4])
    assert F.all_eq(_matvec(F, A, part), F.asarray([3, 4]))
    assert len(basis) == 1
    none, _ = linalg.solve(F, [[1, 1], [1, 1]], [0, 1])
    assert none is None


def test_fit_and_dependency():
    F = make_field("gf:7")
    basis = [[1, 0, 2], [0, 1, 3]]
    c = linalg.fit(F, [2, 5, F.from_int(4 + 15)], basis)
    assert c is not None and [int(v) for v in c] == [2, 5]
    assert linalg.fit(F, [0, 0, 1], basis) is None
    d = linalg.dependency(F, [[1, 2, 3], [2, 4, 6]])
    assert d is not None and int(d[-1]) == 6
    assert linalg.dependency(F, basis) is None


def test_complex_rank_tolerance():
    F = make_field("complex:1e-9")
    v = np.array([1 + 1j, 2.0, -1j])
    assert linalg.rank(F, [v, v * (3 - 2j) + 1e-13]) == 1
    assert linalg.rank(F, [v, v + np.array([0, 1e-3, 0])]) == 2


def test_rank_exhaustive_small_gf3():
    F = make_field("gf:3")
    for flat in itertools.product(range(3), repeat=4):
        M = np.array(flat).reshape(2, 2)
        det = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]) % 3
        expect = 2 if det else (0 if not M.any() else 1)
        assert linalg.rank(F, M) == expect
