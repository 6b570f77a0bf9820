import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradext import linalg as la
from gradext.algebra import (
    Bimodule,
    GradedAlgebra,
    GradeGroup,
    field_algebra,
    group_algebra,
    matrix_algebra,
    path_algebra_quotient,
    product_algebra,
    skew_group_algebra,
    truncated_polynomial,
)
from gradext.decomp import are_isomorphic, enumerate_indecomposables
from gradext.equivalences import (
    MoritaContextData,
    context_check,
    corner_context,
    dade_degree_functor,
    dade_inverse,
    faithfully_flat_check,
    identity_context,
    matrix_context,
    separable_equivalence_check,
    verify_dade_equivalence,
)
from gradext.errors import NotAlgebraMorphism, NotStronglyGraded
from gradext.modules import get_covering, hom_dim, regular_module, to_covering

C2 = GradeGroup.cyclic(2)
F2C2 = group_algebra(C2, 2)
M2C2 = GradedAlgebra(matrix_algebra(field_algebra(2), 2), C2, [0, 1, 1, 0])
SKEW = skew_group_algebra(truncated_polynomial(3, 2).algebra, C2, {0: np.eye(2, dtype=int), 1: np.diag([1, 2])})
T2 = path_algebra_quotient(2, [(0, 1)], p=2)
STRONG = [F2C2, M2C2, SKEW, group_algebra(GradeGroup.cyclic(3), 2)]


@pytest.mark.parametrize("ga", STRONG, ids=["f2c2", "m2", "skew", "f2c3"])
def test_dade_equivalence_small(ga):
    rep = verify_dade_equivalence(ga, 3)
    assert rep.fully_faithful and rep.dense and rep.counterexample is None
    assert rep.hom_pairs == rep.graded_members ** 2


@pytest.mark.parametrize("ga", STRONG, ids=["f2c2", "m2", "skew", "f2c3"])
def test_degree_e_part_of_regular_module(ga):
    re, _ = ga.identity_component
    r = regular_module(ga)
    part = dade_degree_functor(ga, ga.group.identity, r)
    assert are_isomorphic(part, regular_module(re))
    back = dade_inverse(ga, regular_module(re))
    assert back.validate() == []
    cov = get_covering(ga)
    assert are_isomorphic(to_covering(back, cov), to_covering(r, cov))


@given(st.sampled_from(STRONG), st.data())
def test_dade_preserves_hom_dimensions(ga, data):
    inds = enumerate_indecomposables(ga, 3, graded=True)
    m = data.draw(st.sampled_from(inds))
    n = data.draw(st.sampled_from(inds))
    cov = get_covering(ga)
    e = ga.group.identity
    assert hom_dim(to_covering(m, cov), to_covering(n, cov)) == \
        hom_dim(dade_degree_functor(ga, e, m), dade_degree_functor(ga, e, n))


def test_dade_refuses_non_strong_grading():
    with pytest.raises(NotStronglyGraded):
        verify_dade_equivalence(T2, 2)
    with pytest.raises(NotStronglyGraded):
        dade_degree_functor(truncated_polynomial(2, 2, C2), 0, regular_module(truncated_polynomial(2, 2, C2)))


@pytest.mark.parametrize("a", [field_algebra(2), F2C2, M2C2], ids=["f2", "f2c2", "m2"])
def test_matrix_and_identity_contexts_are_equivalences(a):
    for c in (matrix_context(a, 2), identity_context(a)):
        rep = context_check(c)
        assert rep["axioms"]["ok"] and rep["equivalence"]
        if isinstance(a, GradedAlgebra):
            assert rep["graded"] and rep["pairings_graded"]["ok"]


def test_zero_pairing_is_not_an_equivalence():
    c = matrix_context(F2C2, 2)
    bad = MoritaContextData(c.r, c.s, c.m, c.n, np.zeros_like(c.phi), np.zeros_like(c.psi),
                            c.r_grading, c.s_grading)
    rep = context_check(bad)
    assert rep["axioms"]["ok"]
    assert not rep["phi_surjective"]["ok"] and not rep["equivalence"]


def test_perturbed_pairing_breaks_axioms():
    c = matrix_context(field_algebra(2), 2)
    phi = np.array(c.phi)
    phi[0, 0, 0] ^= 1
    rep = context_check(MoritaContextData(c.r, c.s, c.m, c.n, phi, c.psi))
    assert not rep["axioms"]["ok"] and not rep["equivalence"]


@pytest.mark.parametrize("a", [field_algebra(2), F2C2.algebra], ids=["f2", "f2c2"])
def test_morita_context_is_separable(a):
    rep = separable_equivalence_check(matrix_context(a, 2))
    assert rep["r_side"]["verdict"] and rep["s_side"]["verdict"]
    emb = np.array(rep["r_side"]["embed"])
    ret = np.array(rep["r_side"]["retract"])
    assert np.array_equal((ret @ emb) % 2, la.eye(a.dim))


def test_group_algebra_in_characteristic_two_is_not_separable_over_the_field():
    r, k = F2C2.algebra, field_algebra(2)
    one = np.eye(2, dtype=np.int64).reshape(1, 2, 2)
    m = Bimodule(r, k, r.left_mats, one)
    n = Bimodule(k, r, one, r.right_mats)
    rep = separable_equivalence_check(r=r, s=k, m=m, n=n)
    assert not rep["r_side"]["verdict"]
    assert rep["s_side"]["verdict"]


def test_graded_separable_check():
    rep = separable_equivalence_check(matrix_context(F2C2, 2), graded=True)
    assert rep["graded"] and rep["r_side"]["verdict"] and rep["s_side"]["verdict"]


def test_faithfully_flat_unit_map():
    k = field_algebra(2)
    ff = faithfully_flat_check(k, F2C2.algebra, F2C2.algebra.unit.reshape(2, 1))
    assert ff == {"flat": True, "faithful": True, "killed_simples": []}


def test_projection_is_flat_but_not_faithful():
    ss = product_algebra(field_algebra(2), field_algebra(2))
    k = field_algebra(2)
    # projection onto the first factor
    phi = np.array([[1, 0]])
    ff = faithfully_flat_check(ss, k, phi)
    assert ff["flat"] and not ff["faithful"] and len(ff["killed_simples"]) == 1


def test_non_morphism_rejected():
    with pytest.raises(NotAlgebraMorphism):
        faithfully_flat_check(field_algebra(2), F2C2.algebra, np.zeros((2, 1), dtype=np.int64))


def test_corner_context_of_graded_matrix_algebra():
    rep = corner_context(M2C2, np.array([1, 0, 0, 0]))
    assert rep["RwR_is_R"] and rep["R1wR_is_R"] and rep["ok"]
    assert rep["corner_dims"] == [1, 1]


def test_corner_context_of_triangular_algebra_fails():
    a = T2.algebra
    e = next(i for i in range(a.dim) if np.array_equal(a.multiply(a.basis_vector(i), a.basis_vector(i)),
                                                       a.basis_vector(i)))
    rep = corner_context(a, a.basis_vector(e))
    assert not (rep["RwR_is_R"] and rep["R1wR_is_R"])
    assert not rep["ok"]
