import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradext.algebra import (
    GradedAlgebra,
    GradeGroup,
    corner_algebra,
    covering_algebra,
    enveloping_algebra,
    field_algebra,
    group_algebra,
    homogeneous_component,
    is_strongly_graded,
    matrix_algebra,
    path_algebra_quotient,
    product_algebra,
    skew_group_algebra,
    truncated_polynomial,
)
from gradext.errors import (
    ModulusMismatch,
    NotAutomorphism,
    NotHomogeneous,
    NotIdempotent,
    UnboundedSupport,
    ValidationError,
)

PRIMES = (2, 3, 5)


@st.composite
def algebras(draw):
    """Small algebras from the builders, graded or not."""
    p = draw(st.sampled_from(PRIMES))
    kind = draw(st.sampled_from(["group", "trunc", "matrix", "product", "path"]))
    if kind == "group":
        return group_algebra(GradeGroup.cyclic(draw(st.integers(1, 4))), p)
    if kind == "trunc":
        return truncated_polynomial(p, draw(st.integers(1, 4)))
    if kind == "matrix":
        return matrix_algebra(truncated_polynomial(p, draw(st.integers(1, 2))), 2)
    if kind == "product":
        return product_algebra(field_algebra(p), truncated_polynomial(p, 2).algebra)
    return path_algebra_quotient(2, [(0, 1)], p=p)


def plain(a):
    return a.algebra if isinstance(a, GradedAlgebra) else a


def elements(a, draw):
    return [np.array(draw(st.lists(st.integers(0, a.p - 1), min_size=a.dim, max_size=a.dim)))
            for _ in range(3)]


@given(algebras(), st.data())
def test_builders_are_associative_and_unital(ga, data):
    a = plain(ga)
    assert a.validate() == []
    x, y, z = elements(a, data.draw)
    assert np.array_equal(a.multiply(a.multiply(x, y), z), a.multiply(x, a.multiply(y, z)))
    assert np.array_equal(a.multiply(a.unit, x), x % a.p)
    assert np.array_equal(a.multiply(x, a.unit), x % a.p)


@given(algebras(), st.data())
def test_opposite_reverses_products(ga, data):
    a = plain(ga)
    x, y, _ = elements(a, data.draw)
    assert np.array_equal(a.opposite().multiply(x, y), a.multiply(y, x))
    assert a.opposite().opposite().digest == a.digest


@given(algebras())
def test_gradings_of_builders_are_valid(ga):
    if isinstance(ga, GradedAlgebra):
        assert ga.validate() == []


@given(algebras())
def test_structure_constant_roundtrip(ga):
    a = plain(ga)
    from gradext.algebra import Algebra
    b = Algebra.from_structure_constants(a.p, a.dim, a.structure_constants(), a.unit)
    assert b.digest == a.digest


def test_broken_associativity_is_reported():
    a = plain(matrix_algebra(field_algebra(2), 2))
    mult = np.array(a.mult)
    mult[1, 2, 0] ^= 1
    from gradext.algebra import Algebra
    issues = Algebra(2, mult, a.unit).validate()
    assert any(i["kind"] == "associativity" for i in issues)


def test_bad_cayley_table():
    with pytest.raises(ValidationError):
        GradeGroup([[0, 1], [1, 1]])
    with pytest.raises(ValidationError):
        GradeGroup([[1, 0], [0, 1]], identity=0)


def test_group_product_order():
    g = GradeGroup.product(GradeGroup.cyclic(2), GradeGroup.cyclic(3))
    assert g.order == 6 and g.is_abelian()
    assert all(g.mul(a, g.inv(a)) == g.identity for a in g.elements)


def test_dimensions_of_constructions():
    f2c2 = group_algebra(GradeGroup.cyclic(2), 2)
    assert f2c2.dim == 2
    assert plain(matrix_algebra(f2c2, 2)).dim == 8
    assert product_algebra(field_algebra(3), field_algebra(3)).dim == 2
    assert enveloping_algebra(f2c2.algebra, f2c2.algebra).dim == 4
    assert covering_algebra(f2c2).algebra.dim == 4
    assert path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0, 0))]], p=2).dim == 3
    assert path_algebra_quotient(2, [(0, 1), (0, 1)], p=2).dim == 4


def test_product_of_different_primes():
    with pytest.raises(ModulusMismatch):
        product_algebra(field_algebra(2), field_algebra(3))


def test_strong_grading_verdicts():
    assert is_strongly_graded(group_algebra(GradeGroup.cyclic(3), 2)).strongly_graded
    m = matrix_algebra(field_algebra(2), 2)
    assert is_strongly_graded(GradedAlgebra(m, GradeGroup.cyclic(2), [0, 1, 1, 0])).strongly_graded
    t2 = path_algebra_quotient(2, [(0, 1)], p=2)
    v = is_strongly_graded(t2)
    assert not v.strongly_graded and v.witness == (1, -1)


def test_trivial_grading_of_nonunital_component_is_not_strong():
    # F2[x]/(x^2) graded by C2 with x odd: R_1 R_1 = 0 misses 1
    a = truncated_polynomial(2, 2, GradeGroup.cyclic(2))
    v = is_strongly_graded(a)
    assert not v.strongly_graded and v.deficient_span_dim == 0


def test_skew_group_algebra_checks_action():
    c2 = GradeGroup.cyclic(2)
    x2 = truncated_polynomial(3, 2).algebra
    sk = skew_group_algebra(x2, c2, {0: np.eye(2, dtype=int), 1: np.diag([1, 2])})
    assert sk.dim == 4 and sk.validate() == [] and sk.algebra.validate() == []
    with pytest.raises(NotAutomorphism):
        skew_group_algebra(x2, c2, {0: np.eye(2, dtype=int), 1: np.diag([2, 1])})


def test_homogeneous_components_partition_basis():
    sk = skew_group_algebra(truncated_polynomial(3, 2).algebra, GradeGroup.cyclic(2),
                            {0: np.eye(2, dtype=int), 1: np.diag([1, 2])})
    parts = [homogeneous_component(sk, s) for s in sk.group.elements]
    assert sorted(sum(parts, [])) == list(range(sk.dim))


def test_corner_of_matrix_algebra():
    m = matrix_algebra(field_algebra(2), 2)
    e11 = np.array([1, 0, 0, 0])
    assert corner_algebra(plain(m), e11).algebra.dim == 1
    with pytest.raises(NotIdempotent):
        corner_algebra(plain(m), np.array([0, 1, 0, 0]))
    graded = GradedAlgebra(plain(m), GradeGroup.cyclic(2), [0, 1, 1, 0])
    assert corner_algebra(graded, e11).grading is not None
    # E11 + E12 is idempotent but not of degree e
    with pytest.raises(NotHomogeneous):
        corner_algebra(graded, np.array([1, 1, 0, 0]))


def test_integer_covering_needs_window():
    t2 = path_algebra_quotient(2, [(0, 1)], p=2)
    with pytest.raises(UnboundedSupport):
        covering_algebra(t2)
    cov = covering_algebra(t2, range(0, 2))
    assert cov.algebra.validate() == []
