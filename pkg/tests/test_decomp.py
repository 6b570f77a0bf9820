import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import conjugate
from gradext import linalg as la
from gradext.algebra import (
    GradedAlgebra,
    GradeGroup,
    field_algebra,
    group_algebra,
    matrix_algebra,
    path_algebra_quotient,
    product_algebra,
    skew_group_algebra,
)
from gradext.decomp import (
    are_isomorphic,
    decompose,
    enumerate_indecomposables,
    enumerate_modules,
    indecomposable_catalogue,
    is_indecomposable,
    summand_witness,
)
from gradext.errors import BudgetExceeded
from gradext.modules import direct_sum, hom_dim, regular_module, suspension

C2 = GradeGroup.cyclic(2)
F2C2 = group_algebra(C2, 2)
V4 = skew_group_algebra(F2C2.algebra, C2, {0: np.eye(2, dtype=int), 1: np.eye(2, dtype=int)})
NAK = path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0, 0))]], p=2)
KRON = path_algebra_quotient(2, [(0, 1), (0, 1)], p=2)
T2 = path_algebra_quotient(2, [(0, 1)], p=2)

# classical counts of indecomposables of dimension <= d
KNOWN = [
    ("F2[C2]", F2C2.algebra, 2, 2),
    ("F2[x]/x^3", NAK.algebra, 3, 3),
    ("T2(F2)", T2.algebra, 3, 3),
    ("F2xF2", product_algebra(field_algebra(2), field_algebra(2)), 2, 2),
    ("M2(F2)", matrix_algebra(field_algebra(2), 2), 2, 1),
    ("F3[C3]", group_algebra(GradeGroup.cyclic(3), 3).algebra, 3, 3),
    ("F2[C3]", group_algebra(GradeGroup.cyclic(3), 2).algebra, 3, 2),
    # simples, then the P^1(F2) family at (1,1)
    ("Kronecker d2", KRON.algebra, 2, 5),
    ("Kronecker d3", KRON.algebra, 3, 7),
    # 1 + 3 + 2 + (3 + 1 + 1): Omega^{+-n}(k), the P^1 families and the projective
    ("F2[V4] d4", V4.algebra, 4, 11),
]


@pytest.mark.parametrize("name,alg,d,count", KNOWN, ids=[k[0] for k in KNOWN])
def test_catalogue_counts(name, alg, d, count):
    cat = indecomposable_catalogue(alg, d)
    assert len(cat.indecomposables) == count
    for m in cat.indecomposables:
        assert m.validate() == []
        assert is_indecomposable(m).yes


def test_catalogue_classes_are_distinct():
    inds = indecomposable_catalogue(V4.algebra, 4).indecomposables
    for i, x in enumerate(inds):
        for y in inds[i + 1:]:
            assert not are_isomorphic(x, y)


def test_enumerate_modules_counts_multisets():
    # F2[C2] up to dim 2: k, k+k, F2[C2]
    assert len(enumerate_modules(F2C2, 2)) == 3


def test_graded_catalogue_of_c2_group_algebra():
    # strongly graded with R_e = F2: R is the only graded indecomposable,
    # and the trivial module admits no C2-grading
    inds = enumerate_indecomposables(F2C2, 2, graded=True)
    assert [m.dim for m in inds] == [2]
    assert all(m.graded and m.validate() == [] for m in inds)


def test_graded_catalogue_of_m2_is_two_shifts():
    g = GradedAlgebra(matrix_algebra(field_algebra(2), 2), C2, [0, 1, 1, 0])
    inds = enumerate_indecomposables(g, 2, graded=True)
    assert len(inds) == 2
    assert are_isomorphic(suspension(inds[0], 1), inds[1], graded=True)


def _sums(draw, alg, d):
    cat = indecomposable_catalogue(alg, d)
    idx = draw(st.lists(st.integers(0, len(cat.indecomposables) - 1), min_size=1, max_size=3))
    return cat, sorted(idx)


@given(st.sampled_from([F2C2.algebra, NAK.algebra, T2.algebra, KRON.algebra]), st.data(), st.integers(0, 10**6))
def test_decompose_recovers_multiplicities(alg, data, seed):
    cat, idx = _sums(data.draw, alg, 3)
    y, _ = conjugate(direct_sum(*[cat.indecomposables[i] for i in idx]), seed)
    dec = decompose(y)
    assert sum(k for _, k in dec.parts) == len(idx)
    got = sorted(cat.identify(m) for m in dec.flat())
    assert got == idx
    Q = dec.basis_change
    assert la.inverse(Q, alg.p) is not None
    for s in dec.summands:
        assert s.module.validate() == []


@given(st.sampled_from([F2C2.algebra, NAK.algebra, KRON.algebra]), st.data(), st.integers(0, 10**6))
def test_summand_witness_identities(alg, data, seed):
    cat, idx = _sums(data.draw, alg, 3)
    y, _ = conjugate(direct_sum(*[cat.indecomposables[i] for i in idx]), seed)
    x = cat.indecomposables[idx[0]]
    w = summand_witness(x, y)
    p = alg.p
    assert w is not None
    assert np.array_equal((w.retract @ w.embed) % p, la.eye(x.dim))
    for a, b in zip(x.action, y.action):
        assert np.array_equal((b @ w.embed) % p, (w.embed @ a) % p)
        assert np.array_equal((w.retract @ b) % p, (a @ w.retract) % p)


def test_summand_witness_rejects_non_summand():
    cat = indecomposable_catalogue(NAK.algebra, 3)
    s, p3 = cat.indecomposables[0], cat.indecomposables[2]
    assert summand_witness(s, p3) is None


@given(st.integers(0, 10**6))
def test_isomorphism_witness_is_invertible_intertwiner(seed):
    m = regular_module(KRON.algebra)
    c, _ = conjugate(m, seed)
    v = are_isomorphic(m, c)
    assert v and la.inverse(v.witness, 2) is not None
    assert hom_dim(m, c) == hom_dim(m, m)


def test_budget_is_enforced():
    from gradext import decomp
    decomp._CATALOGUES.pop(V4.algebra.digest, None)
    with pytest.raises(BudgetExceeded):
        indecomposable_catalogue(V4.algebra, 4, budget=5)
    with pytest.raises(BudgetExceeded):
        indecomposable_catalogue(V4.algebra, 99)
