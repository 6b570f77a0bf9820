"""Exact two-sided bounds for the invariants the claims compare.

A :class:`Bound` ``[lo, hi]`` encloses the true value of an invariant (not a
value at a dimension bound).  The ingredients are exact:

* a finite-type certificate gives ``ext.dim = 0`` and a complete universe;
* certificates replayed in a complete universe are genuine upper bounds;
* the radical-layer generator gives ``ext.dim <= LL - 1``;
* if ``M`` is projective or injective every extension with ends in ``add M``
  splits, so ``[M]_n = add M`` for all ``n``;
* for an infinite grading group every generator has finite degree support,
  which extensions and summands never enlarge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..algebra import Algebra, GradedAlgebra
from ..decomp import indecomposable_catalogue
from ..errors import GradextError
from ..extdim import DEFAULT_SLACK, Universe, ext_dim_bounded, gen_time_bounded, loewy_length
from ..modules import (
    Module,
    get_covering,
    is_simple,
    projective_cover,
    projective_indecomposables,
    radical_series,
    submodule,
    to_covering,
    top,
)
from ..decomp import DEFAULT_BUDGET

INF = math.inf


def _num(x):
    return "inf" if x == INF else int(x)


@dataclass(frozen=True)
class Bound:
    lo: float
    hi: float
    basis: str

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        return {"lo": _num(self.lo), "hi": _num(self.hi), "basis": self.basis}


def compare_equal(*bounds: Bound) -> tuple[str, str]:
    if all(b.exact for b in bounds) and len({b.lo for b in bounds}) == 1:
        return "consistent", "exact values agree"
    lo = max(b.lo for b in bounds)
    hi = min(b.hi for b in bounds)
    if lo > hi:
        return "violated", "exact intervals are disjoint"
    return "undecided", "interval-overlap"


def compare_leq(a: Bound, b: Bound) -> tuple[str, str]:
    if a.hi <= b.lo:
        return "consistent", "upper bound of the left side is at most the lower bound of the right"
    if a.lo > b.hi:
        return "violated", "lower bound of the left side exceeds the upper bound of the right"
    return "undecided", "interval-overlap"


# ---------------------------------------------------------------- finite-type certificates


@dataclass(frozen=True)
class Certificate:
    method: str
    indecomposables: int
    max_dim: int

    def to_json(self) -> dict:
        return {"method": self.method, "indecomposables": self.indecomposables, "max_dim": self.max_dim}


def is_uniserial(m: Module) -> bool:
    series, ll = radical_series(m)
    return all(is_simple(top(submodule(m, series[i]).module).module) for i in range(ll))


def nakayama_data(a: Algebra) -> tuple[int, int] | None:
    """``(count, max dim)`` of the indecomposables if every indecomposable projective
    left and right module is uniserial, else None."""
    left = projective_indecomposables(a).modules
    right = projective_indecomposables(a.opposite()).modules
    if not all(is_uniserial(p) for p in left + right):
        return None
    lengths = [radical_series(p)[1] for p in left]
    return sum(lengths), max(p.dim for p in left)


_CERTS: dict = {}


def finite_type_certificate(a: Algebra, declared: dict | None = None,
                            budget: int = DEFAULT_BUDGET) -> Certificate | None:
    """A declared certificate or the Nakayama test, cross-checked by enumeration."""
    key = (a.digest, None if declared is None else (declared["indecomposables"], declared["max_dim"]))
    if key in _CERTS:
        return _CERTS[key]
    cert = None
    if declared is not None:
        cert = Certificate("declared", int(declared["indecomposables"]), int(declared["max_dim"]))
    else:
        nak = nakayama_data(a)
        if nak is not None:
            cert = Certificate("nakayama", *nak)
    if cert is not None:
        found = len(indecomposable_catalogue(a, cert.max_dim, budget).indecomposables)
        if found != cert.indecomposables:
            raise GradextError(f"certificate {cert} disagrees with enumeration ({found})")
    _CERTS[key] = cert
    return cert


def complete_universe(a: Algebra, cert: Certificate, budget: int = DEFAULT_BUDGET) -> Universe:
    return Universe(a, cert.max_dim, budget)


# ---------------------------------------------------------------- extension dimension


@dataclass
class Evaluated:
    bound: Bound
    evidence: dict


def ext_dim_bound(a: Algebra, declared: dict | None = None, budget: int = DEFAULT_BUDGET,
                  slack: int = DEFAULT_SLACK, evidence_dim: int | None = None) -> Evaluated:
    cert = finite_type_certificate(a, declared, budget)
    ev: dict = {"algebra_dim": a.dim}
    if cert is not None:
        U = complete_universe(a, cert, budget)
        r = ext_dim_bounded(U, slack=slack, budget=budget)
        ev.update(certificate=cert.to_json(), bounded_value=r.value,
                  witness_summands=None if r.witness is None else len(r.witness),
                  universe_members=len(U.members))
        if r.value != 0:
            raise GradextError(f"complete universe gives ext.dim {r.value}, expected 0")
        return Evaluated(Bound(0, 0, f"finite-type certificate ({cert.method})"), ev)
    ll = loewy_length(a)
    ev["loewy_length"] = ll
    if evidence_dim is not None:
        ev["enumeration_dim"] = evidence_dim
        ev["indecomposables_enumerated"] = len(indecomposable_catalogue(a, evidence_dim, budget).indecomposables)
    return Evaluated(Bound(0, max(ll - 1, 0), "Loewy length bound, no finite-type certificate"), ev)


def gr_ext_dim_bound(ga: GradedAlgebra, declared: dict | None = None, budget: int = DEFAULT_BUDGET,
                     slack: int = DEFAULT_SLACK, evidence_dim: int | None = None) -> Evaluated:
    """Graded extension dimension: through the covering algebra for finite groups."""
    if not ga.group.is_finite:
        return Evaluated(Bound(INF, INF, "infinite grading group: generators have bounded degree support"),
                         {"group": "Z"})
    cov = get_covering(ga).algebra
    res = ext_dim_bound(cov, declared, budget, slack, evidence_dim)
    res.evidence["covering_dim"] = cov.dim
    return res


def relative_ext_dim_bound(a: Algebra, declared: dict | None = None, budget: int = DEFAULT_BUDGET) -> Evaluated:
    """``inf{n : R-gr inside [M]_(n+1) for some R-module M}`` lies below ext.dim(R)."""
    full = ext_dim_bound(a, declared, budget)
    return Evaluated(Bound(0, full.bound.hi, "bounded above by ext.dim(R)"), full.evidence)


# ---------------------------------------------------------------- generation time


def is_projective(m: Module) -> bool:
    return projective_cover(m.forget() if m.graded else m).module.dim == m.dim


def is_injective(m: Module) -> bool:
    dual = Module(m.algebra.opposite(), np.ascontiguousarray(m.action.transpose(0, 2, 1)))
    return is_projective(dual)


def gen_time_bound(m: Module, cert: Certificate | None, budget: int = DEFAULT_BUDGET,
                   slack: int = DEFAULT_SLACK) -> Evaluated:
    a = m.algebra
    m = m.forget() if m.graded else m
    if cert is None:
        return Evaluated(Bound(0, INF, "no finite-type certificate"), {})
    if m.dim == 0:
        return Evaluated(Bound(INF, INF, "the zero module generates only itself"), {})
    U = complete_universe(a, cert, budget)
    sup = U.support(m)
    n = len(U.indecomposables)
    ev = {"support": list(sup), "indecomposables": n}
    if len(sup) == n:
        return Evaluated(Bound(0, 0, "add(M) contains every indecomposable"), ev)
    if is_projective(m) or is_injective(m):
        return Evaluated(Bound(INF, INF, "M projective or injective and add(M) is proper"), ev)
    r = gen_time_bounded(m, U, slack, budget=budget)
    ev["bounded_value"] = r.value
    hi = INF if r.value is None else r.value
    return Evaluated(Bound(1, hi, "complete universe: replayable upper bound, add(M) proper"), ev)


def gr_gen_time_bound(m: Module, budget: int = DEFAULT_BUDGET, slack: int = DEFAULT_SLACK) -> Evaluated:
    ga = m.grading
    if not ga.group.is_finite:
        return Evaluated(Bound(INF, INF, "infinite grading group: bounded degree support"), {"group": "Z"})
    cov = get_covering(ga)
    cert = finite_type_certificate(cov.algebra, None, budget)
    return gen_time_bound(to_covering(m, cov), cert, budget, slack)
