"""Equivalence checks: the degree functor of a strongly graded algebra,
Morita contexts, separable equivalences, flatness and corner contexts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    Bimodule,
    GradedAlgebra,
    bimodule_to_module_actions,
    check_context_axioms,
    corner_algebra,
    enveloping_algebra,
    homogeneous_component,
    is_strongly_graded,
    matrix_algebra,
    regular_bimodule,
    two_sided_span,
)
from .decomp import are_isomorphic, summand_witness
from .errors import (
    ContextAxiomViolation,
    NotAlgebraMorphism,
    NotProjectiveOneSided,
    NotStronglyGraded,
    ValidationError,
)
from .extdim import Universe
from .modules import (
    Module,
    Morphism,
    from_covering,
    hom_dim,
    projective_cover,
    simple_modules,
    tensor_over_algebra,
    tensor_with_module,
    to_covering,
)


def _require_strong(ga: GradedAlgebra):
    v = is_strongly_graded(ga)
    if not v.strongly_graded:
        raise NotStronglyGraded(f"not strongly graded: witness {v.witness} ({v.reason})")


# ---------------------------------------------------------------- degree functor


def identity_component(ga: GradedAlgebra):
    return ga.identity_component


def dade_degree_functor(ga: GradedAlgebra, sigma: int, m: Module, check: bool = True) -> Module:
    """The degree-``sigma`` part of a graded module, as an R_e-module."""
    if check:
        _require_strong(ga)
    re, idx = ga.identity_component
    pos = [i for i, d in enumerate(m.degrees) if d == sigma]
    act = m.action[np.ix_(idx, pos, pos)] if pos else np.zeros((len(idx), 0, 0))
    return Module(re, act, name=f"{m.name}_{sigma}")


def dade_on_morphism(ga: GradedAlgebra, sigma: int, f: Morphism) -> np.ndarray:
    src = [i for i, d in enumerate(f.source.degrees) if d == sigma]
    dst = [i for i, d in enumerate(f.target.degrees) if d == sigma]
    return f.matrix[np.ix_(dst, src)]


def ring_as_bimodule_over_identity(ga: GradedAlgebra) -> Bimodule:
    re, idx = ga.identity_component
    a = ga.algebra
    return Bimodule(a, re, a.left_mats, a.right_mats[idx], degrees=ga.degrees, left_grading=ga)


def dade_inverse(ga: GradedAlgebra, n: Module, check: bool = True) -> Module:
    """``R (x)_{R_e} n`` graded by the degree of the R factor."""
    if check:
        _require_strong(ga)
    bim = ring_as_bimodule_over_identity(ga)
    mod, _, comp = tensor_with_module(bim, n)
    degrees = [ga.degrees[c // n.dim] for c in comp] if n.dim else []
    return Module(ga.algebra, mod.action, degrees, ga)


@dataclass
class DadeReport:
    fully_faithful: bool
    dense: bool
    counterexample: dict | None
    graded_members: int
    identity_members: int
    hom_pairs: int
    unit_checks: int
    counit_checks: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_dade_equivalence(ga: GradedAlgebra, D: int, D_identity: int | None = None) -> DadeReport:
    """Exhaustive check of the degree-e functor on the two bounded universes."""
    _require_strong(ga)
    e = ga.group.identity
    gu = Universe.graded(ga, D)
    re, _ = ga.identity_component
    eu = Universe.ungraded(re, D if D_identity is None else D_identity)
    cov = gu.covering
    graded = [from_covering(gu.build(c), cov)[0] for c in gu.members]
    comps = [dade_degree_functor(ga, e, m, check=False) for m in graded]
    bad = None
    pairs = 0
    for (i, m), (j, n) in itertools.product(enumerate(graded), repeat=2):
        pairs += 1
        a = hom_dim(to_covering(m, cov), to_covering(n, cov))
        b = hom_dim(comps[i], comps[j])
        if a != b:
            bad = bad or {"kind": "hom", "pair": [i, j], "graded_hom": a, "identity_hom": b}
    fully_faithful = bad is None
    dense = True
    counit = 0
    for i, m in enumerate(graded):
        back = dade_inverse(ga, comps[i], check=False)
        counit += 1
        if not are_isomorphic(to_covering(back, cov), to_covering(m, cov)):
            dense = False
            bad = bad or {"kind": "counit", "member": i}
    unit = 0
    for k, c in enumerate(eu.members):
        n = eu.build(c)
        lifted = dade_inverse(ga, n, check=False)
        unit += 1
        if not are_isomorphic(dade_degree_functor(ga, e, lifted, check=False), n):
            dense = False
            bad = bad or {"kind": "unit", "member": k}
        if lifted.dim <= D:
            if not any(are_isomorphic(comp, n) for comp in comps if comp.dim == n.dim):
                dense = False
                bad = bad or {"kind": "not-reached", "member": k}
    return DadeReport(fully_faithful, dense, bad, len(graded), len(eu.members), pairs, unit, counit)


# ---------------------------------------------------------------- Morita contexts


@dataclass
class MoritaContextData:
    r: Algebra
    s: Algebra
    m: Bimodule
    n: Bimodule
    phi: np.ndarray           # (dim m, dim n, dim r)
    psi: np.ndarray           # (dim n, dim m, dim s)
    r_grading: GradedAlgebra | None = None
    s_grading: GradedAlgebra | None = None
    name: str = ""

    @property
    def graded(self) -> bool:
        return self.r_grading is not None and self.s_grading is not None and self.m.graded and self.n.graded


def identity_context(a: Algebra | GradedAlgebra) -> MoritaContextData:
    ga = a if isinstance(a, GradedAlgebra) else None
    alg = ga.algebra if ga else a
    bm = regular_bimodule(a)
    return MoritaContextData(alg, alg, bm, bm, alg.mult, alg.mult, ga, ga, name="identity")


def matrix_context(a: Algebra | GradedAlgebra, k: int = 2) -> MoritaContextData:
    """The context between A and M_k(A) given by rows and columns of length k."""
    ga = a if isinstance(a, GradedAlgebra) else None
    A = ga.algebra if ga else a
    S = matrix_algebra(a, k)
    Sg = S if isinstance(S, GradedAlgebra) else None
    Sa = Sg.algebra if Sg else S
    p, d = A.p, A.dim
    dm = k * d

    def sidx(r, c, i):
        return (r * k + c) * d + i

    # row vector basis (c, i): a_i in column c; column vector basis (r, i): a_i in row r
    m_left = np.zeros((d, dm, dm), dtype=la.DTYPE)
    m_right = np.zeros((Sa.dim, dm, dm), dtype=la.DTYPE)
    n_left = np.zeros((Sa.dim, dm, dm), dtype=la.DTYPE)
    n_right = np.zeros((d, dm, dm), dtype=la.DTYPE)
    for t in range(d):
        for c in range(k):
            for i in range(d):
                v = A.mult[t, i]
                m_left[t][c * d:(c + 1) * d, c * d + i] = v
                w = A.mult[i, t]
                n_right[t][c * d:(c + 1) * d, c * d + i] = w
    for r, c, j in itertools.product(range(k), range(k), range(d)):
        s = sidx(r, c, j)
        for i in range(d):
            # row: (a_i at column r) * (E_rc a_j) = a_i a_j at column c
            m_right[s][c * d:(c + 1) * d, r * d + i] = A.mult[i, j]
            # column: (E_rc a_j) * (a_i at row c) = a_j a_i at row r
            n_left[s][r * d:(r + 1) * d, c * d + i] = A.mult[j, i]
    phi = np.zeros((dm, dm, d), dtype=la.DTYPE)
    psi = np.zeros((dm, dm, Sa.dim), dtype=la.DTYPE)
    for c, i, c2, j in itertools.product(range(k), range(d), range(k), range(d)):
        if c == c2:
            phi[c * d + i, c2 * d + j] = A.mult[i, j]
    for r, j, c, i in itertools.product(range(k), range(d), range(k), range(d)):
        # column (a_j at row r) times row (a_i at column c) = E_rc a_j a_i
        vec = A.mult[j, i]
        for t in np.flatnonzero(vec):
            psi[r * d + j, c * d + i, sidx(r, c, t)] = vec[t]
    degrees = None
    if ga is not None:
        degrees = [ga.degrees[i] for _ in range(k) for i in range(d)]
    m = Bimodule(A, Sa, m_left, m_right, degrees, ga, Sg, name="rows")
    n = Bimodule(Sa, A, n_left, n_right, degrees, Sg, ga, name="columns")
    return MoritaContextData(A, Sa, m, n, phi % p, psi % p, ga, Sg, name=f"rows/columns {k}")


def _span_dim(vecs, p) -> int:
    vecs = [np.asarray(v) for v in vecs]
    vecs = [v for v in vecs if v.size]
    return la.rank(np.array(vecs), p) if vecs else 0


def context_check(c: MoritaContextData) -> dict:
    """All context conditions, reported one by one."""
    p = c.r.p
    rep: dict = {}
    try:
        check_context_axioms(c.r, c.s, c.m, c.n, c.phi, c.psi)
        rep["axioms"] = {"ok": True}
    except ContextAxiomViolation as exc:
        rep["axioms"] = {"ok": False, "message": str(exc), "witness": list(map(str, exc.triple or ()))}
    ok_axioms = rep["axioms"]["ok"]
    phi = np.asarray(c.phi).reshape(c.m.dim, c.n.dim, c.r.dim) % p
    psi = np.asarray(c.psi).reshape(c.n.dim, c.m.dim, c.s.dim) % p

    def unital(b: Bimodule) -> bool:
        if b.dim == 0:
            return True
        vecs = [(b.left[i] @ b.right[j]) % p for i in range(b.left_algebra.dim) for j in range(b.right_algebra.dim)]
        return la.rank(np.hstack(vecs), p) == b.dim if vecs else False

    rep["unital"] = {"M": unital(c.m), "N": unital(c.n)}
    rank_phi = _span_dim(phi.reshape(-1, c.r.dim), p) if c.r.dim else 0
    rank_psi = _span_dim(psi.reshape(-1, c.s.dim), p) if c.s.dim else 0
    rep["phi_surjective"] = {"ok": rank_phi == c.r.dim and c.r.dim > 0, "rank": rank_phi, "target": c.r.dim}
    rep["psi_surjective"] = {"ok": rank_psi == c.s.dim and c.s.dim > 0, "rank": rank_psi, "target": c.s.dim}
    if c.graded:
        g = c.r_grading.group
        bad = []
        for i, j in itertools.product(range(c.m.dim), range(c.n.dim)):
            want = g.mul(c.m.degrees[i], c.n.degrees[j])
            if any(c.r_grading.degrees[t] != want for t in np.flatnonzero(phi[i, j])):
                bad.append(["phi", i, j])
        for j, i in itertools.product(range(c.n.dim), range(c.m.dim)):
            want = g.mul(c.n.degrees[j], c.m.degrees[i])
            if any(c.s_grading.degrees[t] != want for t in np.flatnonzero(psi[j, i])):
                bad.append(["psi", j, i])
        rep["pairings_graded"] = {"ok": not bad, "violations": bad[:5]}
        rep["strong"] = _strong_context_data(c, phi, psi)
    ok = ok_axioms and rep["phi_surjective"]["ok"] and rep["psi_surjective"]["ok"] \
        and rep["unital"]["M"] and rep["unital"]["N"]
    if c.graded:
        ok = ok and rep["pairings_graded"]["ok"]
    rep["equivalence"] = ok
    rep["graded"] = c.graded
    return rep


def _graded_elements(ga: GradedAlgebra):
    return ga.group.elements if ga.group.is_finite else sorted(set(ga.degrees))


def _strong_context_data(c: MoritaContextData, phi, psi) -> dict:
    """D_sigma = span(R_sigma R_sigma^-1), its idempotency, and surjectivity of the
    restricted pairing onto it."""
    out = {}
    p = c.r.p
    for name, ga, left, right, pair in (("R", c.r_grading, c.m, c.n, phi), ("S", c.s_grading, c.n, c.m, psi)):
        g = ga.group
        rows = []
        for s in _graded_elements(ga):
            a_idx = homogeneous_component(ga, s)
            b_idx = homogeneous_component(ga, g.inv(s))
            prods = ga.algebra.mult[np.ix_(a_idx, b_idx)].reshape(-1, ga.dim) if a_idx and b_idx else \
                la.zeros(0, ga.dim)
            Dsp = la.row_basis(prods, p) if prods.size else la.zeros(0, ga.dim)
            dd = Dsp.shape[0]
            if dd:
                sq = np.einsum("ai,bj,ijk->abk", Dsp, Dsp, ga.algebra.mult).reshape(-1, ga.dim) % p
                idem = la.rank(np.vstack([sq, Dsp]), p) == dd and la.rank(sq, p) == dd
            else:
                idem = True
            mi = [i for i, d in enumerate(left.degrees) if d == s]
            nj = [j for j, d in enumerate(right.degrees) if d == g.inv(s)]
            vals = pair[np.ix_(mi, nj)].reshape(-1, ga.dim) if mi and nj else la.zeros(0, ga.dim)
            reach = la.rank(np.vstack([vals, Dsp]), p) if (vals.size or Dsp.size) else 0
            onto = la.rank(vals, p) == dd and reach == dd if vals.size else dd == 0
            rows.append({"degree": int(s), "dim": dd, "idempotent": bool(idem), "pairing_onto": bool(onto)})
        out[name] = rows
    return out


# ---------------------------------------------------------------- separable equivalence


def _left_module(b: Bimodule) -> Module:
    return Module(b.left_algebra, b.left)


def _right_module(b: Bimodule) -> Module:
    return Module(b.right_algebra.opposite(), b.right)


def is_projective(m: Module) -> bool:
    return projective_cover(m).module.dim == m.dim


def _enveloping_module(b: Bimodule, env: Algebra, env_grading=None) -> Module:
    act = bimodule_to_module_actions(b)
    if env_grading is not None and b.graded:
        return Module(env, act, b.degrees, env_grading)
    return Module(env, act)


def _graded_enveloping(ga: GradedAlgebra, env: Algebra) -> GradedAlgebra:
    g = ga.group
    if not g.is_abelian():
        raise ValidationError("graded bimodule comparison needs an abelian grading group")
    degs = [g.mul(a, b) for a in ga.degrees for b in ga.degrees]
    return GradedAlgebra(env, g, degs)


def _side(a: Algebra, t: Bimodule, grading: GradedAlgebra | None, graded: bool) -> dict:
    env = enveloping_algebra(a, a)
    eg = _graded_enveloping(grading, env) if graded else None
    tm = _enveloping_module(t, env, eg)
    reg = regular_bimodule(grading if graded else a)
    rm = _enveloping_module(reg, env, eg)
    w = summand_witness(rm, tm, graded=graded)
    if w is None:
        return {"verdict": False, "tensor_dim": t.dim, "regular_dim": a.dim}
    return {"verdict": True, "tensor_dim": t.dim, "regular_dim": a.dim,
            "complement_dims": sorted(x.dim for x in w.complement),
            "embed": w.embed.tolist(), "retract": w.retract.tolist()}


def separable_equivalence_check(c: MoritaContextData | None = None, *, r=None, s=None, m=None, n=None,
                                graded: bool = False) -> dict:
    """Is R a summand of M (x)_S N and S a summand of N (x)_R M (as bimodules)?"""
    if c is not None:
        r, s, m, n = c.r, c.s, c.m, c.n
        rg, sg = c.r_grading, c.s_grading
    else:
        rg = r if isinstance(r, GradedAlgebra) else None
        sg = s if isinstance(s, GradedAlgebra) else None
        r = rg.algebra if rg else r
        s = sg.algebra if sg else s
    if graded and (rg is None or sg is None or not (m.graded and n.graded)):
        raise ValidationError("graded check needs graded algebras and bimodules")
    for name, b in (("M", m), ("N", n)):
        if not is_projective(_left_module(b)):
            raise NotProjectiveOneSided(f"{name} is not projective as a left module")
        if not is_projective(_right_module(b)):
            raise NotProjectiveOneSided(f"{name} is not projective as a right module")
    mn = tensor_over_algebra(m, n)
    nm = tensor_over_algebra(n, m)
    return {"r_side": _side(r, mn, rg, graded), "s_side": _side(s, nm, sg, graded), "graded": graded}


# ---------------------------------------------------------------- flatness


def faithfully_flat_check(a: Algebra, b: Algebra, phi) -> dict:
    """Flatness and faithfulness of an algebra map ``phi: a -> b`` (matrix b.dim x a.dim)."""
    p = a.p
    phi = np.asarray(phi, dtype=la.DTYPE).reshape(b.dim, a.dim) % p
    if not np.array_equal(phi @ a.unit % p, b.unit):
        raise NotAlgebraMorphism("unit is not preserved")
    for i, j in itertools.product(range(a.dim), repeat=2):
        if not np.array_equal(phi @ a.mult[i, j] % p, b.multiply(phi[:, i], phi[:, j])):
            raise NotAlgebraMorphism(f"not multiplicative at ({i}, {j})")
    left = np.stack([b.left_matrix(phi[:, i]) for i in range(a.dim)])
    bm = Module(a, left)
    flat = is_projective(bm)
    right = np.stack([b.right_matrix(phi[:, i]) for i in range(a.dim)])
    bb = Bimodule(b, a, b.left_mats, right)
    killed = []
    for k, smod in enumerate(simple_modules(a)):
        t, _, _ = tensor_with_module(bb, smod)
        if t.dim == 0:
            killed.append(k)
    return {"flat": bool(flat), "faithful": not killed, "killed_simples": killed}


# ---------------------------------------------------------------- corners


def _sub_bimodule(alg: Algebra, x, y, left: Algebra, left_inc, right: Algebra, right_inc) -> tuple:
    """``x A y`` as a (left, right)-bimodule; returns (Bimodule, basis columns in A)."""
    p = alg.p
    basis = two_sided_span(alg, x, y)
    k = basis.shape[1]
    L = np.zeros((left.dim, k, k), dtype=la.DTYPE)
    R = np.zeros((right.dim, k, k), dtype=la.DTYPE)
    for i in range(left.dim):
        L[i] = la.solve(basis, (alg.left_matrix(left_inc[:, i]) @ basis) % p, p) if k else L[i]
    for j in range(right.dim):
        R[j] = la.solve(basis, (alg.right_matrix(right_inc[:, j]) @ basis) % p, p) if k else R[j]
    return Bimodule(left, right, L, R), basis


def corner_context(a: Algebra | GradedAlgebra, w) -> dict:
    """Context between wAw and (1-w)A(1-w) with the span conditions checked."""
    ga = a if isinstance(a, GradedAlgebra) else None
    alg = ga.algebra if ga else a
    p = alg.p
    cw = corner_algebra(a, w)
    w = cw.idempotent
    v = (alg.unit - w) % p
    cv = corner_algebra(a, v)
    A, B = cw.algebra, cv.algebra
    M, mb = _sub_bimodule(alg, w, v, A, cw.inclusion, B, cv.inclusion)
    N, nb = _sub_bimodule(alg, v, w, B, cv.inclusion, A, cw.inclusion)
    phi = np.zeros((M.dim, N.dim, A.dim), dtype=la.DTYPE)
    psi = np.zeros((N.dim, M.dim, B.dim), dtype=la.DTYPE)
    for i, j in itertools.product(range(M.dim), range(N.dim)):
        phi[i, j] = la.solve(cw.inclusion, alg.multiply(mb[:, i], nb[:, j]), p)
    for j, i in itertools.product(range(N.dim), range(M.dim)):
        psi[j, i] = la.solve(cv.inclusion, alg.multiply(nb[:, j], mb[:, i]), p) if B.dim else psi[j, i]
    ctx = MoritaContextData(A, B, M, N, phi, psi, name="corner")

    def ideal_dim(x):
        if not np.any(x):
            return 0
        vecs = [alg.multiply(alg.multiply(alg.basis_vector(i), x), alg.basis_vector(j))
                for i in range(alg.dim) for j in range(alg.dim)]
        return la.rank(np.array(vecs), p)

    rep = {"RwR_is_R": ideal_dim(w) == alg.dim, "R1wR_is_R": ideal_dim(v) == alg.dim,
           "corner_dims": [A.dim, B.dim]}
    if ga is not None:
        rep["claims"] = {"A": _unital_components(cw), "B": _unital_components(cv)}
    rep["context"] = context_check(ctx) if A.dim and B.dim else {"equivalence": False,
                                                                   "reason": "a corner is zero"}
    ok_claims = all(all(x["unital"] for x in rows) for rows in rep.get("claims", {}).values())
    rep["ok"] = rep["RwR_is_R"] and rep["R1wR_is_R"] and ok_claims and rep["context"].get("equivalence", False)
    rep["_context"] = ctx
    return rep


def _unital_components(corner) -> list[dict]:
    """For each degree: span(A_e A_sigma A_e) = A_sigma."""
    ga = corner.grading
    if ga is None or corner.algebra.dim == 0:
        return []
    p = ga.p
    e_idx = homogeneous_component(ga, ga.group.identity)
    out = []
    for s in sorted(set(ga.degrees)):
        idx = homogeneous_component(ga, s)
        m = ga.algebra.mult
        left = m[np.ix_(e_idx, idx)].reshape(-1, ga.dim)
        left = la.row_basis(left, p)
        both = np.einsum("ak,kjl->ajl", left, m[:, e_idx]).reshape(-1, ga.dim) % p
        out.append({"degree": int(s), "dim": len(idx), "unital": la.rank(both, p) == len(idx)})
    return out
