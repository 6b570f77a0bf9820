import copy
import functools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradext.algebra import GradedAlgebra, GradeGroup, field_algebra, group_algebra, matrix_algebra, path_algebra_quotient
from gradext.extdim import (
    Universe,
    bracket_n,
    certify_all,
    ext_dim_bounded,
    forgetful_compare,
    gen_time_bounded,
    loewy_generator,
    loewy_generator_certificate,
    loewy_length,
    replay,
)
from gradext.errors import BudgetExceeded, ValidationError
from gradext.modules import direct_sum, regular_module, simple_modules

NAK = path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0, 0))]], p=2)
KRON = path_algebra_quotient(2, [(0, 1), (0, 1)], p=2)
T2 = path_algebra_quotient(2, [(0, 1)], p=2)
F2C2 = group_algebra(GradeGroup.cyclic(2), 2)
M2C2 = GradedAlgebra(matrix_algebra(field_algebra(2), 2), GradeGroup.cyclic(2), [0, 1, 1, 0])


@functools.cache
def _nak3():
    return Universe.ungraded(NAK, 3)


@pytest.fixture
def nak3():
    return _nak3()


def test_simple_of_truncated_polynomial_needs_two_steps(nak3):
    # [S]_n holds exactly the modules of Loewy length <= n
    s = simple_modules(NAK.algebra)[0]
    for slack in (0, 1, 2):
        r = gen_time_bounded(s, nak3, slack)
        assert r.value == 2 == loewy_length(NAK.algebra) - 1
        assert r.ledger.levels[1:] == [(0,), (0, 1), (0, 1, 2)]


def test_additive_generator_is_instant(nak3):
    r = ext_dim_bounded(nak3)
    assert r.value == 0 and len(r.witness) == 3


def test_projective_generator_stalls(nak3):
    r = gen_time_bounded(regular_module(NAK.algebra), nak3)
    assert r.value is None


def test_simple_projective_of_kronecker_stalls():
    U = Universe.ungraded(KRON, 3)
    assert all(gen_time_bounded(s, U).value is None for s in simple_modules(KRON.algebra))


@pytest.mark.parametrize("ga,D", [(NAK, 3), (T2, 2), (KRON, 3), (F2C2, 2)])
def test_levels_increase_and_certificates_replay(ga, D):
    U = Universe.ungraded(ga, D)
    for m in simple_modules(ga.algebra) + [regular_module(ga.algebra)]:
        r = gen_time_bounded(m, U)
        L = r.ledger
        for n in range(1, 4):
            assert set(L.level(n)) <= set(L.level(n + 1))
        if r.value is not None:
            ids = certify_all(r)
            assert ids and replay(L.store) == []


def test_bracket_members_are_multisets_of_level_support(nak3):
    s = simple_modules(NAK.algebra)[0]
    mem = bracket_n(s, 2, nak3)
    assert all(set(c) <= {0, 1} for c in mem)
    # everything of dimension <= 3 built from S and its length-2 extension
    assert sorted(mem) == [(0,), (0, 0), (0, 0, 0), (0, 1), (1,)]


def test_tampered_certificate_fails_replay(nak3):
    s = simple_modules(NAK.algebra)[0]
    r = gen_time_bounded(s, nak3, 0)
    certify_all(r)
    store = copy.deepcopy(r.ledger.store)
    hit = next(i for i, n in enumerate(store.nodes) if n["kind"] == "ext")
    node = dict(store.nodes[hit])
    node["f"] = np.zeros_like(np.asarray(node["f"]))
    store.nodes[hit] = node
    assert replay(store)


def test_loewy_certificate_bound_and_replay(nak3):
    c = loewy_generator_certificate(nak3)
    assert c.bound == 2 and c.loewy_length == 3
    assert replay(c.store) == []
    assert set(c.members) == set(nak3.members)
    assert loewy_generator(NAK.algebra).dim == 1 + 2 + 3


def test_graded_universe_needs_window_for_integers():
    from gradext.errors import UnboundedSupport
    with pytest.raises(UnboundedSupport):
        Universe.graded(T2, 2)
    U = Universe.graded(T2, 2, window=(0, 1))
    assert len(U.indecomposables) > 0


def test_forgetful_compare_on_strongly_graded():
    out = forgetful_compare(regular_module(M2C2), 2)
    assert out["graded_replay_failures"] == 0 and out["forgotten_replay_failures"] == 0
    assert out["graded_universe_size"] == 2 and out["ungraded_universe_size"] == 1


def test_forgetful_compare_needs_graded_module():
    with pytest.raises(ValidationError):
        forgetful_compare(regular_module(F2C2.algebra), 2)


@settings(max_examples=15)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_gen_time_never_grows_with_more_summands(idx):
    # add(M) grows with M, so every level does too
    U = _nak3()
    m = U.build(tuple(sorted(idx)))
    big = direct_sum(m, U.indecomposables[0])
    a, b = gen_time_bounded(m, U).value, gen_time_bounded(big, U).value
    if a is not None:
        assert b is not None and b <= a


def test_budget_exceeded_in_extension_search():
    U = Universe.ungraded(KRON, 3)
    s = simple_modules(KRON.algebra)
    gen = direct_sum(*s)
    with pytest.raises(BudgetExceeded):
        gen_time_bounded(gen, U, budget=0).ledger.level(3)
