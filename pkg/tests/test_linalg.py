import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from gradext import linalg as la
from gradext.errors import DimensionMismatch

from conftest import matrices


def oracle(a: np.ndarray, p: int) -> DomainMatrix:
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in a.tolist()], a.shape, GF(p))


def test_is_prime_small():
    assert [n for n in range(30) if la.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(matrices(min_rows=1, min_cols=1))
def test_rank_matches_sympy(pm):
    p, a = pm
    assert la.rank(a, p) == oracle(a, p).rank()


@given(matrices(min_rows=1, min_cols=1))
def test_rref_matches_sympy(pm):
    p, a = pm
    red, r, piv = la.rref(a, p)
    ored, opiv = oracle(a, p).rref()
    assert list(piv) == list(opiv)
    got = [[int(x) % p for x in row] for row in ored.to_Matrix().tolist()]
    assert red.tolist() == got


@given(matrices(min_rows=1, min_cols=1))
def test_nullspace_is_kernel_of_right_size(pm):
    p, a = pm
    ns = la.nullspace(a, p)
    assert ns.shape == (a.shape[1], a.shape[1] - la.rank(a, p))
    assert not np.any((a @ ns) % p)
    assert la.rank(ns, p) == ns.shape[1]


@given(matrices(min_rows=1, min_cols=1), st.data())
def test_solve_roundtrip(pm, data):
    p, a = pm
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = (a @ x) % p
    y = la.solve(a, b, p)
    assert y is not None
    assert np.array_equal((a @ y) % p, b)


def test_solve_inconsistent():
    a = np.array([[1, 0], [1, 0]])
    assert la.solve(a, np.array([0, 1]), 2) is None


def test_solve_shape_error():
    with pytest.raises(DimensionMismatch):
        la.solve(np.eye(2, dtype=int), np.zeros(3, dtype=int), 3)


@given(matrices(min_rows=3, max_rows=3, min_cols=3, max_cols=3))
def test_inverse_exists_iff_full_rank(pm):
    p, a = pm
    inv = la.inverse(a, p)
    if la.rank(a, p) < 3:
        assert inv is None
    else:
        assert np.array_equal((a @ inv) % p, la.eye(3))
        assert np.array_equal((inv @ a) % p, la.eye(3))


def test_invertible_2x2_over_f2_counts():
    # |GL_2(F_2)| = 6
    mats = [np.array(v).reshape(2, 2) for v in itertools.product(range(2), repeat=4)]
    assert sum(la.inverse(m, 2) is not None for m in mats) == 6


@given(matrices(min_rows=1, min_cols=1))
def test_col_basis_is_canonical(pm):
    p, a = pm
    perm = a[:, ::-1]
    assert np.array_equal(la.col_basis(a, p), la.col_basis(perm, p))


@given(matrices(min_rows=1, max_rows=4, min_cols=1, max_cols=4))
def test_complement_projection_kills_subspace(pm):
    p, sub = pm
    n = sub.shape[0]
    proj, comp = la.complement_data(sub, n, p)
    assert not np.any((proj @ sub) % p)
    assert len(comp) == n - la.rank(sub, p)


@given(matrices(min_rows=3, max_rows=3, min_cols=3, max_cols=3))
def test_min_poly_annihilates_and_divides_char(pm):
    p, a = pm
    mp = la.min_poly(a, p)
    assert mp[-1] == 1
    assert not np.any(la.poly_eval(mp, a, p))
    # no smaller degree polynomial kills a: powers below deg are independent
    powers = np.stack([la.mat_pow(a, k, p).reshape(-1) for k in range(len(mp) - 1)], axis=1)
    assert la.rank(powers, p) == len(mp) - 1


@given(matrices(min_rows=4, max_rows=4, min_cols=4, max_cols=4))
def test_fitting_power_stabilises(pm):
    p, a = pm
    f = la.fitting_power(a, p)
    assert la.rank(f, p) == la.rank((f @ a) % p, p)


def test_mul_reduces():
    assert la.mul(np.array([[2]]), np.array([[2]]), 3).tolist() == [[1]]


def test_block_diag_shape():
    out = la.block_diag([la.eye(1), la.zeros(2, 1)])
    assert out.shape == (3, 2) and out[0, 0] == 1
