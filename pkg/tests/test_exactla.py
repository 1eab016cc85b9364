import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from fano_forge.exactla import (
    IntMatrix,
    det,
    hnf,
    hnf_pivots,
    inverse_rational,
    kernel_basis,
    rank,
    same_row_lattice,
    smith_invariants,
    snf,
    solve_rational,
)


def random_matrix(rng, m, n, lo=-6, hi=6):
    return IntMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)])


def is_hnf(H):
    last = -1
    seen_zero = False
    for i, row in enumerate(H.rows):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero, "zero row above a nonzero row"
        j = nz[0]
        assert j > last
        assert row[j] > 0
        for k in range(i):
            assert 0 <= H[k, j] < row[j]
        last = j
    return True


def test_matrix_basics():
    M = IntMatrix([[1, 2], [3, 4]])
    assert M.T.tolist() == [[1, 3], [2, 4]]
    assert (M @ (1, 1)) == (3, 7)
    assert det(M) == -2
    assert M @ IntMatrix.identity(2) == M
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])


def test_hnf_small_known():
    H, U = hnf([[2, 4], [3, 5]])
    assert H.tolist() == [[1, 1], [0, 2]]
    assert U @ IntMatrix([[2, 4], [3, 5]]) == H


def test_snf_known():
    S, U, V = snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [S[i, i] for i in range(3)] == [2, 6, 12]
    assert U @ IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) @ V == S


@pytest.mark.parametrize("seed", range(100))
def test_hnf_snf_random_unimodular(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    M = random_matrix(rng, m, n)
    H, U = hnf(M)
    assert abs(det(U)) == 1
    assert U @ M == H
    assert is_hnf(H)
    S, U2, V2 = snf(M)
    assert abs(det(U2)) == 1 and abs(det(V2)) == 1
    assert U2 @ M @ V2 == S
    d = [S[i, i] for i in range(min(m, n))]
    assert all(x >= 0 for x in d)
    assert all(S[i, j] == 0 for i in range(m) for j in range(n) if i != j)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # sympy oracle for the invariant factors
    ref = smith_normal_form(sympy.Matrix(M.tolist()), domain=sympy.ZZ)
    ref_d = sorted(abs(int(ref[i, i])) for i in range(min(m, n)) if ref[i, i] != 0)
    assert sorted(nz) == ref_d
    assert rank(M) == sympy.Matrix(M.tolist()).rank() == len(hnf_pivots(H))


@pytest.mark.parametrize("seed", range(30))
def test_kernel_basis_random(seed):
    rng = random.Random(1000 + seed)
    m, n = rng.randint(1, 4), rng.randint(2, 6)
    M = random_matrix(rng, m, n, -3, 3)
    ker = kernel_basis(M)
    assert len(ker) == n - rank(M)
    for v in ker:
        assert M @ v == (0,) * m
    if ker:
        # saturated: the kernel lattice has trivial torsion in Z^n
        assert all(x == 1 for x in smith_invariants(IntMatrix(ker)))


def test_solve_and_inverse():
    A = IntMatrix([[2, 1], [1, 1]])
    assert solve_rational(A, (3, 2)) == (1, 1)
    assert solve_rational([[1, 1], [2, 2]], (1, 3)) is None
    inv = inverse_rational(A)
    assert inv == [[1, -1], [-1, 2]]
    assert inverse_rational([[1, 2], [2, 4]]) is None


def test_same_row_lattice():
    A = [[1, 0, -1], [0, 1, 1]]
    B = [[1, 1, 0], [0, 1, 1]]
    assert same_row_lattice(A, B)
    assert not same_row_lattice(A, [[2, 0, -2], [0, 1, 1]])
