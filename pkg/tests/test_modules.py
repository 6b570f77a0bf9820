import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradext import linalg as la
from gradext.algebra import GradeGroup, field_algebra, group_algebra, path_algebra_quotient, product_algebra
from gradext.errors import AlgebraMismatch, DimensionMismatch, ValidationError
from conftest import conjugate
from gradext.modules import (
    Module,
    Morphism,
    composition_factors,
    direct_sum,
    ext1,
    ext1_dim,
    hom_basis,
    hom_dim,
    image,
    is_simple,
    kernel,
    projective_cover,
    projective_indecomposables,
    quotient,
    regular_module,
    simple_modules,
    spin,
    submodule,
    suspension,
)

F2C2 = group_algebra(GradeGroup.cyclic(2), 2)
NAK = path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0, 0))]], p=2)
KRON = path_algebra_quotient(2, [(0, 1), (0, 1)], p=2)
T2 = path_algebra_quotient(2, [(0, 1)], p=2)
C3_P3 = group_algebra(GradeGroup.cyclic(3), 3)
ALGEBRAS = [F2C2, NAK, KRON, T2, C3_P3]


@st.composite
def modules(draw, algebras=ALGEBRAS):
    """Subquotients of free modules of rank <= 2, cut out by random vectors."""
    ga = draw(st.sampled_from(algebras))
    a = ga.algebra
    free = direct_sum(*[regular_module(a)] * draw(st.integers(1, 2)))
    p = a.p

    def vec():
        return np.array(draw(st.lists(st.integers(0, p - 1), min_size=free.dim, max_size=free.dim)))

    top_gen = np.stack([vec() for _ in range(draw(st.integers(1, 2)))], axis=1)
    sub = submodule(free, spin(free, top_gen))
    m = sub.module
    if m.dim == 0:
        m = regular_module(a)
    if draw(st.booleans()) and m.dim > 1:
        w = np.array(draw(st.lists(st.integers(0, p - 1), min_size=m.dim, max_size=m.dim))).reshape(-1, 1)
        q = quotient(m, spin(m, w)).module
        if q.dim:
            m = q
    return m


def brute_hom_dim(m: Module, n: Module) -> int:
    p = m.p
    count = 0
    for vals in itertools.product(range(p), repeat=m.dim * n.dim):
        f = np.array(vals).reshape(n.dim, m.dim)
        if all(np.array_equal((y @ f) % p, (f @ x) % p) for x, y in zip(m.action, n.action)):
            count += 1
    return round(np.log(count) / np.log(p))


@given(modules())
def test_random_modules_validate(m):
    assert m.validate() == []


@given(modules(), modules())
def test_hom_basis_is_basis_of_intertwiners(m, n):
    if m.algebra.digest != n.algebra.digest:
        with pytest.raises(AlgebraMismatch):
            hom_basis(m, n)
        return
    basis = hom_basis(m, n)
    for f in basis:
        assert Morphism(m, n, f).intertwines()
    flat = basis.reshape(basis.shape[0], m.dim * n.dim).T
    assert la.rank(flat, m.p) == basis.shape[0]


def test_hom_dim_matches_brute_force():
    for a in (F2C2.algebra, T2.algebra):
        mods = simple_modules(a) + [regular_module(a)]
        for m, n in itertools.product(mods, repeat=2):
            if m.dim * n.dim <= 8:
                assert hom_dim(m, n) == brute_hom_dim(m, n)


@given(modules())
def test_hom_from_regular_is_the_module(m):
    assert hom_dim(regular_module(m.algebra), m) == m.dim


@given(modules(), st.integers(0, 1000))
def test_invariants_under_change_of_basis(m, seed):
    c, _ = conjugate(m, seed)
    assert c.validate() == []
    for s in simple_modules(m.algebra):
        assert hom_dim(c, s) == hom_dim(m, s)
        assert ext1_dim(c, s) == ext1_dim(m, s)


@given(modules(), st.data())
def test_rank_nullity_for_endomorphisms(m, data):
    basis = hom_basis(m, m)
    coeffs = data.draw(st.lists(st.integers(0, m.p - 1), min_size=len(basis), max_size=len(basis)))
    f = Morphism(m, m, np.tensordot(np.array(coeffs, dtype=np.int64), basis, axes=1) % m.p
                 if len(basis) else la.zeros(m.dim, m.dim))
    k, i = kernel(f), image(f)
    assert k.module.dim + i.module.dim == m.dim
    assert k.module.validate() == [] and i.module.validate() == []


@given(modules())
def test_composition_factors_are_simple(m):
    facs = composition_factors(m)
    assert sum(f.dim for f in facs) == m.dim
    assert all(is_simple(f) for f in facs)


@given(modules())
def test_projective_cover_is_onto_with_projective_source(m):
    c = projective_cover(m)
    assert c.map.is_surjective() and c.map.intertwines()
    for s in simple_modules(m.algebra):
        assert ext1_dim(c.module, s) == 0
        # minimal: P and M have the same top
        assert hom_dim(c.module, s) == hom_dim(m, s)


@given(modules(), modules(algebras=[F2C2, NAK, T2]))
def test_ext1_long_exact_sequence(m, n):
    if m.algebra.digest != n.algebra.digest:
        return
    c = projective_cover(m)
    # 0 -> Hom(M,N) -> Hom(P,N) -> Hom(Omega M,N) -> Ext^1(M,N) -> 0
    lhs = ext1_dim(m, n)
    rhs = hom_dim(c.syzygy.module, n) - hom_dim(c.module, n) + hom_dim(m, n)
    assert lhs == rhs


@given(modules(algebras=[F2C2, NAK, T2]), modules(algebras=[F2C2, NAK, T2]), st.data())
def test_middle_terms_are_exact(m, n, data):
    if m.algebra.digest != n.algebra.digest:
        return
    sp = ext1(m, n)
    if sp.dim == 0:
        return
    c = data.draw(st.lists(st.integers(0, m.p - 1), min_size=sp.dim, max_size=sp.dim))
    e = sp.cls(c).middle_term()
    assert e.middle.dim == m.dim + n.dim
    assert e.verify() == []


def test_known_ext_dimensions():
    s = simple_modules(F2C2.algebra)[0]
    assert ext1_dim(s, s) == 1
    s0, s1 = sorted(simple_modules(KRON.algebra), key=lambda x: hom_dim(regular_module(KRON.algebra), x))[:2]
    assert sorted([ext1_dim(s0, s1), ext1_dim(s1, s0)]) == [0, 2]
    ss = product_algebra(field_algebra(2), field_algebra(2))
    assert all(ext1_dim(x, y) == 0 for x in simple_modules(ss) for y in simple_modules(ss))


def test_projective_indecomposables_of_known_algebras():
    assert sorted(p.dim for p in projective_indecomposables(NAK.algebra).modules) == [3]
    assert sorted(p.dim for p in projective_indecomposables(KRON.algebra).modules) == [1, 3]
    assert sorted(p.dim for p in projective_indecomposables(T2.algebra).modules) == [1, 2]


def test_bad_action_is_reported():
    a = F2C2.algebra
    bad = Module(a, np.array([[[1]], [[0]]]))
    assert bad.validate()
    with pytest.raises(DimensionMismatch):
        Module(a, np.zeros((3, 1, 1)))


def test_graded_module_and_suspension():
    r = regular_module(F2C2)
    assert r.graded and r.validate() == []
    s = suspension(r, 1)
    assert s.validate() == [] and sorted(s.degrees) == sorted(r.degrees)
    assert hom_dim(r, s, graded_only=True) <= hom_dim(r.forget(), s.forget())
    with pytest.raises(ValidationError):
        Module(F2C2.algebra, r.action, degrees=[0, 1])
