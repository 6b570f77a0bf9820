"""Registry of executable claims.

Each claim compares exact :class:`~gradext.lab.exact.Bound` intervals, so a
``consistent`` or ``violated`` verdict is a statement about true invariants.
Anything short of that is ``undecided`` with a reason: the hypothesis check
failed, the intervals overlap, or a budget ran out.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import linalg as la
from ..algebra import (
    Algebra,
    Bimodule,
    GradedAlgebra,
    homogeneous_component,
    is_strongly_graded,
)
from ..decomp import DEFAULT_BUDGET, indecomposable_catalogue
from ..equivalences import (
    context_check,
    corner_context,
    faithfully_flat_check,
    separable_equivalence_check,
    verify_dade_equivalence,
)
from ..errors import BudgetExceeded, GradextError, NotProjectiveOneSided, UnknownClaim, ValidationError
from ..extdim import DEFAULT_SLACK, Universe
from ..modules import Module, direct_sum, from_covering, get_covering, regular_module, tensor_with_module
from . import exact as ex
from . import fixtures as fx

CONSISTENT, VIOLATED, UNDECIDED = "consistent", "violated", "undecided"
HYPOTHESIS = "hypothesis-not-satisfied"
BUDGET = "budget-exceeded"


@dataclass
class ClaimParams:
    D: int = 4
    slack: int = DEFAULT_SLACK
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def to_json(self) -> dict:
        return {"D": self.D, "slack": self.slack, "budget": self.budget, "seed": self.seed}


@dataclass
class ClaimVerdict:
    claim: str
    instance: str
    params: dict
    verdict: str
    reason: str
    evidence: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_json(self, with_runtime: bool = False) -> dict:
        out = {"claim": self.claim, "instance": self.instance, "params": self.params,
               "verdict": self.verdict, "reason": self.reason, "evidence": self.evidence}
        if with_runtime:
            out["runtime"] = round(self.runtime, 3)
        return out


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    fixtures: tuple
    check: Callable


class Outcome(Exception):
    """Early exit from a check with a verdict."""

    def __init__(self, verdict: str, reason: str, evidence: dict):
        super().__init__(reason)
        self.verdict, self.reason, self.evidence = verdict, reason, evidence


# ---------------------------------------------------------------- helpers


def _split(obj):
    return (obj.algebra, obj) if isinstance(obj, GradedAlgebra) else (obj, None)


def _algebra_instance(name: str):
    inst = fx.load(name)
    if inst.kind != "algebra":
        raise ValidationError(f"{name} is not an algebra instance")
    alg, ga = _split(inst.obj)
    return inst, alg, ga


def _context_instance(name: str):
    inst = fx.load(name)
    if inst.kind != "context":
        raise ValidationError(f"{name} is not a context instance")
    return inst.obj


def _strong(ga: GradedAlgebra | None) -> dict:
    if ga is None:
        return {"strongly_graded": False, "reason": "ungraded"}
    v = is_strongly_graded(ga)
    out = {"strongly_graded": bool(v.strongly_graded), "reason": v.reason}
    if v.witness is not None:
        out["witness"] = [int(x) for x in v.witness]
    return out


def _components_unital(ga: GradedAlgebra) -> bool:
    """``R_e R_s = R_s = R_s R_e`` for every degree."""
    p, mult = ga.p, ga.algebra.mult
    e = homogeneous_component(ga, ga.group.identity)
    for s in sorted(set(ga.degrees)):
        idx = homogeneous_component(ga, s)
        for prods in (mult[np.ix_(e, idx)], mult[np.ix_(idx, e)]):
            if la.rank(prods.reshape(-1, ga.dim), p) != len(idx):
                return False
    return True


def _combine(parts: list[tuple[str, str]]) -> tuple[str, str]:
    verdicts = [v for v, _ in parts]
    if VIOLATED in verdicts:
        return VIOLATED, next(r for v, r in parts if v == VIOLATED)
    if all(v == CONSISTENT for v in verdicts):
        return CONSISTENT, parts[0][1] if len(parts) == 1 else "all comparisons agree"
    return UNDECIDED, next(r for v, r in parts if v == UNDECIDED)


def _aggregate(rows: list[dict]) -> tuple[str, str, dict]:
    counts = {CONSISTENT: 0, VIOLATED: 0, UNDECIDED: 0}
    for r in rows:
        counts[r["verdict"]] += 1
    summary = {"instances": len(rows), "counts": counts}
    bad = [r for r in rows if r["verdict"] == VIOLATED]
    if bad:
        summary["first_violation"] = bad[0]
        return VIOLATED, "a module violates the relation", summary
    if counts[UNDECIDED]:
        summary["first_undecided"] = next(r for r in rows if r["verdict"] == UNDECIDED)
        return UNDECIDED, "interval-overlap", summary
    return CONSISTENT, "every module satisfies the relation", summary


def _finite_type(b: ex.Bound):
    """True / False / None for finite representation type, from an ext.dim bound."""
    if b.hi == 0:
        return True
    if b.lo >= 1:
        return False
    return None


def _eq_sides(r, s, p: ClaimParams, graded: bool) -> tuple[str, str, dict]:
    (ra, rg), (sa, sg) = r, s
    er, es = ex.ext_dim_bound(ra, budget=p.budget), ex.ext_dim_bound(sa, budget=p.budget)
    parts = [ex.compare_equal(er.bound, es.bound)]
    ev = {"ext_dim": {"R": er.bound.to_json(), "S": es.bound.to_json()}}
    if graded:
        gr, gs = ex.gr_ext_dim_bound(rg, budget=p.budget), ex.gr_ext_dim_bound(sg, budget=p.budget)
        parts.append(ex.compare_equal(gr.bound, gs.bound))
        ev["gr_ext_dim"] = {"R": gr.bound.to_json(), "S": gs.bound.to_json()}
    v, why = _combine(parts)
    return v, why, ev


# ---------------------------------------------------------------- claims


def check_separable_ext_dim(name: str, p: ClaimParams):
    """Separably equivalent algebras have equal extension dimension."""
    c = _context_instance(name)
    try:
        sep = separable_equivalence_check(c)
    except NotProjectiveOneSided as exc:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"separable": str(exc)})
    hyp = {"r_side": sep["r_side"]["verdict"], "s_side": sep["s_side"]["verdict"]}
    if not all(hyp.values()):
        raise Outcome(UNDECIDED, HYPOTHESIS, {"separable": hyp})
    v, why, ev = _eq_sides((c.r, None), (c.s, None), p, graded=False)
    ev["separable"] = hyp
    return v, why, ev


def _exact_functor(name: str):
    """``(source algebra, target algebra, functor, description)`` for an instance."""
    inst = fx.load(name)
    if inst.kind == "context":
        c = inst.obj
        right = Module(c.r.opposite(), c.n.right)
        if not ex.is_projective(right):
            raise Outcome(UNDECIDED, HYPOTHESIS, {"functor": "N is not projective over R"})

        def F(m):
            return tensor_with_module(c.n, m)[0]
        return c.r, c.s, F, "N (x)_R -"
    alg, _ = _split(inst.obj)
    if name == "semisimple_product_p2":
        b = alg
        target = Algebra(alg.p, np.ones((1, 1, 1), dtype=la.DTYPE), [1], ["1"], name=f"F{alg.p}")
        phi = np.zeros((1, alg.dim), dtype=la.DTYPE)
        phi[0, 0] = 1
        ff = faithfully_flat_check(b, target, phi)
        if not ff["flat"]:
            raise Outcome(UNDECIDED, HYPOTHESIS, {"functor": "not flat"})
        right = np.stack([np.array([[int(v)]]) for v in phi[0]])
        bim = Bimodule(target, b, target.left_mats, right)

        def F(m):
            return tensor_with_module(bim, m)[0]
        return b, target, F, "B (x)_A - along the projection onto the first factor"
    raise ValidationError(f"no exact functor registered for {name}")


def check_exact_functor(name: str, p: ClaimParams):
    """gen.time(M) <= gen.time(F(M)) for an exact functor F."""
    src, dst, F, desc = _exact_functor(name)
    cs = ex.finite_type_certificate(src, None, p.budget)
    cd = ex.finite_type_certificate(dst, None, p.budget)
    if cs is None:
        raise Outcome(UNDECIDED, "interval-overlap", {"functor": desc, "note": "source not certified"})
    U = ex.complete_universe(src, cs, p.budget)
    rows = []
    for combo in U.members:
        m = U.build(combo)
        a = ex.gen_time_bound(m, cs, p.budget, p.slack)
        b = ex.gen_time_bound(F(m), cd, p.budget, p.slack)
        v, why = ex.compare_leq(a.bound, b.bound)
        rows.append({"module": list(combo), "dim": m.dim, "verdict": v,
                     "gen_time": a.bound.to_json(), "gen_time_image": b.bound.to_json()})
    v, why, summary = _aggregate(rows)
    summary["functor"] = desc
    return v, why, summary


def _graded_test_modules(ga: GradedAlgebra, alg: Algebra, cert, p: ClaimParams):
    """Graded modules to test: graded indecomposables, the regular module, and a
    graded lift of the additive generator when every indecomposable lifts."""
    window = None
    if not ga.group.is_finite:
        ll = ex.loewy_length(alg)
        window = tuple(range(0, ll + 1))
    cov = get_covering(ga, window)
    D = cert.max_dim if cert is not None else p.D
    U = Universe.graded(ga, D, window=window, budget=p.budget)
    graded = [from_covering(x, cov)[0] for x in U.indecomposables]
    out = [(f"indecomposable {i}", g) for i, g in enumerate(graded)]
    out.append(("regular", regular_module(ga)))
    lifts = None
    if cert is not None:
        Uu = ex.complete_universe(alg, cert, p.budget)
        found = {}
        for g in graded:
            sup = Uu.support(g.forget())
            if len(sup) == 1:
                found.setdefault(sup[0], g)
        lifts = {"ungraded": len(Uu.indecomposables), "lifted": len(found)}
        if len(found) == len(Uu.indecomposables):
            out.append(("graded additive generator", direct_sum(*[found[k] for k in sorted(found)])))
    return out, lifts


def check_graded_gen_time(name: str, p: ClaimParams):
    """gr.gen.time(M) = gen.time(M) for graded M."""
    inst, alg, ga = _algebra_instance(name)
    if ga is None:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"graded": False})
    cert = ex.finite_type_certificate(alg, inst.finite_type, p.budget)
    mods, lifts = _graded_test_modules(ga, alg, cert, p)
    rows = []
    for label, m in mods:
        a = ex.gr_gen_time_bound(m, p.budget, p.slack)
        b = ex.gen_time_bound(m.forget(), cert, p.budget, p.slack)
        v, _ = ex.compare_equal(a.bound, b.bound)
        rows.append({"module": label, "dim": m.dim, "degrees": list(m.degrees), "verdict": v,
                     "gr_gen_time": a.bound.to_json(), "gen_time": b.bound.to_json()})
    v, why, summary = _aggregate(rows)
    if lifts is not None:
        summary["graded_lifts"] = lifts
    return v, why, summary


def check_relative_ext_dim(name: str, p: ClaimParams):
    """gr.ext.dim(R) <= ext.dim of R-gr inside R-mod."""
    inst, alg, ga = _algebra_instance(name)
    if ga is None:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"graded": False})
    lhs = ex.gr_ext_dim_bound(ga, budget=p.budget)
    rhs = ex.relative_ext_dim_bound(alg, inst.finite_type, p.budget)
    v, why = ex.compare_leq(lhs.bound, rhs.bound)
    return v, why, {"gr_ext_dim": lhs.bound.to_json(), "relative_ext_dim": rhs.bound.to_json()}


def check_strong_theorem(name: str, p: ClaimParams):
    """ext.dim(R) = gr.ext.dim(R) = ext.dim(R_e) for strongly graded R."""
    inst, alg, ga = _algebra_instance(name)
    strong = _strong(ga)
    if not strong["strongly_graded"]:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"strong": strong})
    re, _ = ga.identity_component
    a = ex.ext_dim_bound(alg, inst.finite_type, p.budget, p.slack, evidence_dim=p.D)
    g = ex.gr_ext_dim_bound(ga, budget=p.budget, slack=p.slack)
    e = ex.ext_dim_bound(re, None, p.budget, p.slack, evidence_dim=p.D)
    v, why = ex.compare_equal(a.bound, g.bound, e.bound)
    dade = verify_dade_equivalence(ga, p.D)

    def count(side):
        c = side.evidence.get("certificate")
        return {"indecomposables": c["indecomposables"], "complete": True} if c else \
            {"indecomposables": side.evidence.get("indecomposables_enumerated"), "complete": False,
             "max_dim": p.D}

    ev = {"ext_dim": a.bound.to_json(), "gr_ext_dim": g.bound.to_json(), "ext_dim_identity": e.bound.to_json(),
          "counts": {"R": count(a), "R_e": count(e), "covering": count(g)},
          "dade": {"fully_faithful": dade.fully_faithful, "dense": dade.dense, "D": p.D}}
    return v, why, ev


def check_nonstrong_example(name: str, p: ClaimParams):
    """A graded algebra that is not strongly graded, with R_0 of finite type and R without
    a finite-type certificate."""
    inst, alg, ga = _algebra_instance(name)
    strong = _strong(ga)
    r0, _ = ga.identity_component
    b0 = ex.ext_dim_bound(r0, None, p.budget)
    cert = ex.finite_type_certificate(alg, inst.finite_type, p.budget)
    cat = indecomposable_catalogue(alg, max(p.D, 2), p.budget)
    verts = homogeneous_component(ga, 0)
    vectors: dict = {}
    for m in cat.indecomposables:
        vec = tuple(la.rank(m.act(alg.basis_vector(i)), alg.p) for i in verts)
        vectors[vec] = vectors.get(vec, 0) + 1
    ones = vectors.get(tuple([1] * len(verts)), 0)
    ev = {"strong": strong, "ext_dim_R0": b0.bound.to_json(), "R_certified": cert is not None,
          "indecomposables_by_dimension_vector": {",".join(map(str, k)): v for k, v in sorted(vectors.items())},
          "enumeration_dim": max(p.D, 2), "loewy_length": ex.loewy_length(alg)}
    if strong["strongly_graded"] or b0.bound.hi != 0 or cert is not None:
        return VIOLATED, "the instance does not follow the pattern", ev
    if ones < 3:
        return UNDECIDED, "fewer than three indecomposables at dimension vector (1, ..., 1)", ev
    return CONSISTENT, "not strongly graded; R_0 of finite type; R has no finite-type certificate", ev


_PAIRS = {
    "c2_group_algebra_p2+m2_f2_c2graded": ("c2_group_algebra_p2", "m2_f2_c2graded"),
    "c2_group_algebra_p2+v4_group_algebra_p2_c2graded": ("c2_group_algebra_p2", "v4_group_algebra_p2_c2graded"),
}


def check_flat_corollary(name: str, p: ClaimParams):
    """A faithfully flat map R_e -> S_e between strongly graded algebras over a finite
    group forces the same representation type."""
    if name not in _PAIRS:
        raise ValidationError(f"{name} is not a registered pair")
    (ia, aa, ga), (ib, ab, gb) = (_algebra_instance(x) for x in _PAIRS[name])
    sa, sb = _strong(ga), _strong(gb)
    if not (sa["strongly_graded"] and sb["strongly_graded"] and ga.group.is_finite and ga.group == gb.group):
        raise Outcome(UNDECIDED, HYPOTHESIS, {"strong": [sa, sb]})
    re, _ = ga.identity_component
    se, _ = gb.identity_component
    if re.dim != 1:
        raise ValidationError("pairs are registered with R_e the ground field")
    phi = se.unit.reshape(se.dim, 1)
    ff = faithfully_flat_check(re, se, phi)
    if not (ff["flat"] and ff["faithful"]):
        raise Outcome(UNDECIDED, HYPOTHESIS, {"faithfully_flat": ff})
    br = ex.ext_dim_bound(aa, ia.finite_type, p.budget, evidence_dim=p.D)
    bs = ex.ext_dim_bound(ab, ib.finite_type, p.budget, evidence_dim=p.D)
    tr, ts = _finite_type(br.bound), _finite_type(bs.bound)
    ev = {"faithfully_flat": ff, "ext_dim": {"R": br.bound.to_json(), "S": bs.bound.to_json()},
          "finite_type": {"R": tr, "S": ts},
          "ext_dim_finite": {"R": br.bound.hi != ex.INF, "S": bs.bound.hi != ex.INF}}
    if tr is None or ts is None:
        return UNDECIDED, "interval-overlap", ev
    if tr != ts:
        return VIOLATED, "representation types differ", ev
    return CONSISTENT, "same representation type", ev


def _graded_context(name: str):
    c = _context_instance(name)
    if not c.graded:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"graded": False})
    return c


def check_graded_morita(name: str, p: ClaimParams):
    """Graded equivalent strongly graded algebras with unital components share
    extension dimension and graded extension dimension."""
    c = _graded_context(name)
    strong = [_strong(c.r_grading), _strong(c.s_grading)]
    unital = [_components_unital(c.r_grading), _components_unital(c.s_grading)]
    rep = context_check(c)
    hyp = {"strong": strong, "unital_components": unital, "graded_equivalence": bool(rep["equivalence"])}
    if not (all(s["strongly_graded"] for s in strong) and all(unital) and rep["equivalence"]):
        raise Outcome(UNDECIDED, HYPOTHESIS, hyp)
    v, why, ev = _eq_sides((c.r, c.r_grading), (c.s, c.s_grading), p, graded=True)
    ev["hypotheses"] = hyp
    return v, why, ev


def check_graded_separable(name: str, p: ClaimParams):
    """Graded separably equivalent algebras over a finite group share extension
    dimension and graded extension dimension."""
    c = _graded_context(name)
    if not c.r_grading.group.is_finite:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"finite_group": False})
    try:
        sep = separable_equivalence_check(c, graded=True)
    except NotProjectiveOneSided as exc:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"separable": str(exc)})
    hyp = {"r_side": sep["r_side"]["verdict"], "s_side": sep["s_side"]["verdict"],
           "complements": [sep["r_side"].get("complement_dims"), sep["s_side"].get("complement_dims")]}
    if not (hyp["r_side"] and hyp["s_side"]):
        raise Outcome(UNDECIDED, HYPOTHESIS, hyp)
    v, why, ev = _eq_sides((c.r, c.r_grading), (c.s, c.s_grading), p, graded=True)
    ev["graded_separable"] = hyp
    return v, why, ev


def check_triangular(name: str, p: ClaimParams):
    """For a triangular context ring: strongly graded, and ext.dim(L) = ext.dim(L_0) = ext.dim(L^op)."""
    inst, alg, ga = _algebra_instance(name)
    strong = _strong(ga)
    l0, _ = ga.identity_component
    ev = {"strong": strong,
          "ext_dim": ex.ext_dim_bound(alg, inst.finite_type, p.budget).bound.to_json(),
          "ext_dim_degree_zero": ex.ext_dim_bound(l0, None, p.budget).bound.to_json(),
          "ext_dim_opposite": ex.ext_dim_bound(alg.opposite(), None, p.budget).bound.to_json()}
    if not strong["strongly_graded"]:
        return UNDECIDED, HYPOTHESIS, ev
    b = [ex.ext_dim_bound(x, None, p.budget).bound for x in (alg, l0, alg.opposite())]
    v, why = ex.compare_equal(*b)
    return v, why, ev


_CORNER_IDEMPOTENT = {"m2_f2_c2graded": 0, "m2_f2c2_c2graded": 0}


def check_corner(name: str, p: ClaimParams):
    """Corners wRw and (1-w)R(1-w) of a strongly graded algebra with RwR = R = R(1-w)R."""
    inst, alg, ga = _algebra_instance(name)
    if name not in _CORNER_IDEMPOTENT:
        raise ValidationError(f"no idempotent registered for {name}")
    w = alg.basis_vector(_CORNER_IDEMPOTENT[name])
    strong = _strong(ga)
    rep = corner_context(ga, w)
    ctx = rep.pop("_context")
    hyp = {"strong": strong, "RwR": rep["RwR_is_R"], "R1wR": rep["R1wR_is_R"],
           "unital_components": _components_unital(ga)}
    if not (strong["strongly_graded"] and hyp["RwR"] and hyp["R1wR"] and hyp["unital_components"]):
        raise Outcome(UNDECIDED, HYPOTHESIS, hyp)
    claims_ok = all(all(x["unital"] for x in rows) for rows in rep["claims"].values())
    ba = ex.ext_dim_bound(ctx.r, None, p.budget)
    bb = ex.ext_dim_bound(ctx.s, None, p.budget)
    ev = {"hypotheses": hyp, "spans": rep["claims"], "corner_dims": rep["corner_dims"],
          "context_equivalence": bool(rep["context"].get("equivalence")),
          "ext_dim": {"wRw": ba.bound.to_json(), "(1-w)R(1-w)": bb.bound.to_json()}}
    if not claims_ok:
        return VIOLATED, "a corner component is not unital over its identity component", ev
    if not ev["context_equivalence"]:
        return VIOLATED, "the corner context is not an equivalence", ev
    v, why = ex.compare_equal(ba.bound, bb.bound)
    return v, why, ev


# ---------------------------------------------------------------- sanity checks


def check_finite_type_sanity(name: str, p: ClaimParams):
    """A declared finite-type certificate is reproduced by enumeration and gives
    bounded extension dimension 0 with replayable certificates."""
    from ..extdim import certify_all, ext_dim_bounded, replay

    inst, alg, _ = _algebra_instance(name)
    if inst.finite_type is None:
        raise Outcome(UNDECIDED, HYPOTHESIS, {"certificate": None})
    fx.verify_certificate(inst)
    nak = ex.nakayama_data(alg)
    D = max(p.D, inst.finite_type["max_dim"])
    U = Universe(alg, D, p.budget)
    r = ext_dim_bounded(U, slack=p.slack, budget=p.budget)
    certs = certify_all(r.result) if r.result is not None else {}
    fails = replay(r.result.ledger.store) if r.result is not None else ["no result"]
    ev = {"certificate": inst.finite_type, "nakayama": None if nak is None else list(nak),
          "ext_dim_bounded": r.value, "D": D, "certificates": len(certs), "replay_failures": len(fails)}
    ok = r.value == 0 and not fails and (nak is None or nak[0] == inst.finite_type["indecomposables"])
    return (CONSISTENT, "certificate reproduced", ev) if ok else (VIOLATED, "certificate not reproduced", ev)


# ---------------------------------------------------------------- registry


_GRADED = ("c2_group_algebra_p2", "c3_group_algebra_p2", "kronecker_p2_zgraded", "m2_f2_c2graded",
           "nakayama_x3_p2", "skew_f3_x2_c2", "t2_f2_zgraded", "v4_group_algebra_p2_c2graded")
_STRONG = ("c2_group_algebra_p2", "c3_group_algebra_p2", "m2_f2_c2graded", "m2_f2c2_c2graded",
           "skew_f3_x2_c2", "v4_group_algebra_p2_c2graded")

CLAIMS: dict[str, Claim] = {c.id: c for c in (
    Claim("CLM-L2.3", "separably equivalent algebras have equal extension dimension",
          ("morita_f2", "morita_f2c2"), check_separable_ext_dim),
    Claim("CLM-L3.3", "an exact functor F satisfies gen.time(M) <= gen.time(F(M))",
          ("morita_f2", "morita_f2c2", "semisimple_product_p2"), check_exact_functor),
    Claim("CLM-L3.4", "graded and ungraded generation times of a graded module agree",
          ("c2_group_algebra_p2", "m2_f2_c2graded", "nakayama_x3_p2", "t2_f2_zgraded"), check_graded_gen_time),
    Claim("CLM-L3.5", "gr.ext.dim(R) is at most the extension dimension of R-gr inside R-mod",
          _GRADED, check_relative_ext_dim),
    Claim("CLM-T3.5", "for strongly graded R: ext.dim(R) = gr.ext.dim(R) = ext.dim(R_e)",
          _STRONG, check_strong_theorem),
    Claim("CLM-EX3.6", "a graded algebra that is not strongly graded with R_0 of finite type",
          ("kronecker_p2_zgraded",), check_nonstrong_example),
    Claim("CLM-C3.6", "a faithfully flat map of identity components preserves representation type",
          tuple(sorted(_PAIRS)), check_flat_corollary),
    Claim("CLM-T3.9", "graded equivalent algebras share (graded) extension dimension",
          ("morita_f2", "morita_f2c2"), check_graded_morita),
    Claim("CLM-T3.12", "graded separably equivalent algebras share (graded) extension dimension",
          ("morita_f2", "morita_f2c2"), check_graded_separable),
    Claim("CLM-EQ4.1", "triangular context rings are strongly graded with equal extension dimensions",
          ("kronecker_p2_zgraded", "t2_f2_zgraded"), check_triangular),
    Claim("CLM-C4.1", "corners of a strongly graded algebra at a full idempotent are graded equivalent",
          tuple(sorted(_CORNER_IDEMPOTENT)), check_corner),
)}

SANITY: dict[str, Claim] = {c.id: c for c in (
    Claim("FT-SANITY", "declared finite-type certificates are reproduced",
          ("c2_group_algebra_p2", "m2_f2_c2graded", "nakayama_x3_p2", "semisimple_product_p2", "t2_f2_zgraded"),
          check_finite_type_sanity),
)}


def get_claim(claim_id: str) -> Claim:
    if claim_id in CLAIMS:
        return CLAIMS[claim_id]
    if claim_id in SANITY:
        return SANITY[claim_id]
    raise UnknownClaim(f"unknown claim {claim_id!r}")


def run_claim(claim_id: str, instance: str, params: ClaimParams | None = None) -> ClaimVerdict:
    claim = get_claim(claim_id)
    params = params or ClaimParams()
    np.random.seed(params.seed)
    t = time.perf_counter()
    try:
        verdict, reason, evidence = claim.check(instance, params)
    except Outcome as out:
        verdict, reason, evidence = out.verdict, out.reason, out.evidence
    except BudgetExceeded as exc:
        verdict, reason = UNDECIDED, BUDGET
        evidence = {"budget": params.budget, "message": str(exc),
                    "estimate": getattr(exc, "estimate", None)}
    return ClaimVerdict(claim_id, instance, params.to_json(), verdict, reason, evidence,
                        time.perf_counter() - t)


def registry_coverage() -> list[str]:
    """Problems with the registry: claims without fixtures, fixtures that do not exist."""
    issues = []
    known = set(fx.FIXTURES) | set(_PAIRS)
    for reg in (CLAIMS, SANITY):
        for c in reg.values():
            if not c.fixtures:
                issues.append(f"{c.id} has no fixture")
            issues += [f"{c.id}: unknown instance {f}" for f in c.fixtures if f not in known]
    return issues


__all__ = ["CLAIMS", "SANITY", "ClaimParams", "ClaimVerdict", "GradextError", "get_claim", "registry_coverage",
           "run_claim"]
