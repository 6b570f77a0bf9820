"""Finite-dimensional left modules, morphisms and their homological plumbing.

A :class:`Module` is a tuple of action matrices, one per algebra basis
vector.  Graded modules carry a degree for every basis vector plus the
:class:`GradedAlgebra` they are graded over; graded questions are answered
over the covering algebra, whose modules are exactly the graded modules.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from . import linalg as la
from .algebra import Algebra, Bimodule, CoveringAlgebra, GradedAlgebra, covering_algebra
from .errors import AlgebraMismatch, BudgetExceeded, DimensionMismatch, UnboundedSupport, ValidationError


class Module:
    def __init__(self, algebra: Algebra, action, degrees=None, grading: GradedAlgebra | None = None,
                 name: str = ""):
        self.algebra = algebra
        p = algebra.p
        act = np.asarray(action, dtype=la.DTYPE)
        if act.size == 0:
            n = act.shape[1] if act.ndim == 3 else 0
            act = np.zeros((algebra.dim, n, n), dtype=la.DTYPE)
        act = act % p
        if act.ndim != 3 or act.shape[0] != algebra.dim or act.shape[1] != act.shape[2]:
            raise DimensionMismatch(f"action must have shape ({algebra.dim}, n, n), got {act.shape}")
        act.setflags(write=False)
        self.action = act
        self.dim = act.shape[1]
        if degrees is not None and grading is None:
            raise ValidationError("degrees need the graded algebra they refer to")
        if grading is not None and grading.algebra is not algebra and grading.algebra.digest != algebra.digest:
            raise AlgebraMismatch("grading belongs to another algebra")
        self.degrees = None if degrees is None else tuple(int(d) for d in degrees)
        if self.degrees is not None and len(self.degrees) != self.dim:
            raise DimensionMismatch("one degree per module basis vector required")
        self.grading = grading if degrees is not None else None
        self.name = name

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def graded(self) -> bool:
        return self.degrees is not None

    def act(self, x) -> np.ndarray:
        """Matrix of the algebra element with coordinates ``x``."""
        return np.tensordot(np.asarray(x, dtype=la.DTYPE), self.action, axes=1) % self.p

    def forget(self) -> "Module":
        return Module(self.algebra, self.action, name=self.name) if self.graded else self

    def with_degrees(self, degrees, grading: GradedAlgebra) -> "Module":
        return Module(self.algebra, self.action, degrees, grading, self.name)

    @cached_property
    def key(self) -> str:
        h = hashlib.sha256(self.algebra.digest.encode())
        h.update(np.ascontiguousarray(self.action).tobytes())
        h.update(repr(self.degrees).encode())
        return h.hexdigest()[:16]

    def validate(self) -> list[dict]:
        issues = []
        A, p, act = self.algebra, self.p, self.action
        for i in range(A.dim):
            prods = np.einsum("ab,jbc->jac", act[i], act) % p
            want = np.tensordot(A.mult[i], act, axes=1) % p
            for j in np.flatnonzero(np.any(prods != want, axis=(1, 2))):
                issues.append({"kind": "action", "pair": [i, int(j)]})
        if not np.array_equal(self.act(A.unit), la.eye(self.dim)):
            issues.append({"kind": "unit"})
        if self.graded:
            g, adeg = self.grading.group, self.grading.degrees
            for i in range(A.dim):
                for u, v in zip(*np.nonzero(act[i])):
                    if self.degrees[u] != g.mul(adeg[i], self.degrees[v]):
                        issues.append({"kind": "grading", "basis": [i, int(v)]})
                        break
        return issues

    def degree_dims(self) -> dict:
        out: dict = {}
        for d in self.degrees or ():
            out[d] = out.get(d, 0) + 1
        return out

    def __repr__(self) -> str:
        return f"Module({self.name or '?'}, dim={self.dim}{', graded' if self.graded else ''})"


def zero_module(a: Algebra, grading: GradedAlgebra | None = None) -> Module:
    return Module(a, np.zeros((a.dim, 0, 0)), () if grading else None, grading)


def regular_module(a: Algebra | GradedAlgebra) -> Module:
    if isinstance(a, GradedAlgebra):
        return Module(a.algebra, a.algebra.left_mats, a.degrees, a, name=f"{a.name} regular")
    return Module(a, a.left_mats, name=f"{a.name} regular")


def direct_sum(*mods: Module) -> Module:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    a = mods[0].algebra
    for m in mods:
        if m.algebra.digest != a.digest:
            raise AlgebraMismatch("summands over different algebras")
    act = np.stack([la.block_diag([m.action[i] for m in mods]) for i in range(a.dim)]) \
        if sum(m.dim for m in mods) else np.zeros((a.dim, 0, 0))
    graded = all(m.graded for m in mods)
    degrees = sum((list(m.degrees) for m in mods), []) if graded else None
    grading = next((m.grading for m in mods if m.grading is not None), None) if graded else None
    return Module(a, act, degrees, grading)


def suspension(m: Module, sigma: int) -> Module:
    """``M(sigma)`` with ``M(sigma)_tau = M_{tau sigma}``: degree ``d`` becomes ``d sigma^-1``."""
    if not m.graded:
        raise ValidationError("suspension needs a graded module")
    g = m.grading.group
    inv = g.inv(sigma)
    return Module(m.algebra, m.action, [g.mul(d, inv) for d in m.degrees], m.grading, m.name)


# ---------------------------------------------------------------- morphisms


class Morphism:
    """``matrix`` is target.dim x source.dim."""

    def __init__(self, source: Module, target: Module, matrix, graded: bool = False):
        if source.algebra.digest != target.algebra.digest:
            raise AlgebraMismatch("morphism between modules over different algebras")
        self.source = source
        self.target = target
        mat = np.asarray(matrix, dtype=la.DTYPE).reshape(target.dim, source.dim) % source.p
        mat.setflags(write=False)
        self.matrix = mat
        self.graded = graded

    @property
    def p(self) -> int:
        return self.source.p

    def intertwines(self) -> bool:
        s, t, f, p = self.source, self.target, self.matrix, self.p
        return bool(np.all((t.action @ f) % p == (f @ s.action) % p))

    def preserves_degrees(self) -> bool:
        s, t = self.source, self.target
        if not (s.graded and t.graded):
            return False
        return all(t.degrees[a] == s.degrees[b] for a, b in zip(*np.nonzero(self.matrix)))

    def validate(self) -> list[dict]:
        issues = [] if self.intertwines() else [{"kind": "intertwining"}]
        if self.graded and not self.preserves_degrees():
            issues.append({"kind": "degree"})
        return issues

    def compose(self, other: "Morphism") -> "Morphism":
        """``self o other``."""
        return Morphism(other.source, self.target, self.matrix @ other.matrix,
                        self.graded and other.graded)

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def __repr__(self) -> str:
        return f"Morphism({self.source.dim} -> {self.target.dim})"


def identity_morphism(m: Module) -> Morphism:
    return Morphism(m, m, la.eye(m.dim), m.graded)


def _check_same_algebra(m: Module, n: Module):
    if m.algebra.digest != n.algebra.digest:
        raise AlgebraMismatch("modules over different algebras")


def hom_basis(m: Module, n: Module, graded_only: bool = False) -> np.ndarray:
    """Basis of Hom(m, n) as an array of shape ``(k, n.dim, m.dim)``."""
    _check_same_algebra(m, n)
    p, dm, dn = m.p, m.dim, n.dim
    if dm == 0 or dn == 0:
        return np.zeros((0, dn, dm), dtype=la.DTYPE)
    if graded_only:
        if not (m.graded and n.graded):
            raise ValidationError("graded Hom needs graded modules")
        free = [(a, b) for a in range(dn) for b in range(dm) if n.degrees[a] == m.degrees[b]]
    else:
        free = None
    gens = m.algebra.generators
    rows = []
    for g in gens:
        rows.append(np.kron(n.action[g], la.eye(dm)) - np.kron(la.eye(dn), m.action[g].T))
    system = np.vstack(rows) % p if rows else la.zeros(0, dn * dm)
    if free is not None:
        cols = [a * dm + b for a, b in free]
        if not cols:
            return np.zeros((0, dn, dm), dtype=la.DTYPE)
        ns = la.nullspace(system[:, cols], p)
        full = la.zeros(dn * dm, ns.shape[1])
        full[cols] = ns
        ns = full
    else:
        ns = la.nullspace(system, p)
    return np.ascontiguousarray(ns.T.reshape(-1, dn, dm))


def hom_space(m: Module, n: Module, graded_only: bool = False) -> list[Morphism]:
    return [Morphism(m, n, f, graded_only) for f in hom_basis(m, n, graded_only)]


def hom_dim(m: Module, n: Module, graded_only: bool = False) -> int:
    return hom_basis(m, n, graded_only).shape[0]


def hom_graded_decomposition(m: Module, n: Module, window=None) -> dict:
    """``sigma -> dim Hom_gr(m, n(sigma))``, zero entries dropped."""
    if not (m.graded and n.graded):
        raise ValidationError("graded modules required")
    g = m.grading.group
    if n.dim == 0 or m.dim == 0:
        return {}
    if g.is_finite:
        shifts = g.elements
    else:
        if window is None:
            raise UnboundedSupport("integer gradings need an explicit shift window")
        shifts = list(window)
    out = {}
    for s in shifts:
        d = hom_dim(m, suspension(n, s), graded_only=True)
        if d:
            out[s] = d
    return out


# ---------------------------------------------------------------- sub and quotient


@dataclass
class Sub:
    """A submodule with its inclusion (columns = basis inside the ambient module)."""

    module: Module
    inclusion: np.ndarray


@dataclass
class Quot:
    """A quotient: ``projection`` maps ambient coordinates onto the quotient basis."""

    module: Module
    projection: np.ndarray
    section: list            # ambient basis indices representing the quotient basis


def spin(m: Module, vecs) -> np.ndarray:
    """Column basis (RREF) of the submodule generated by the given vectors."""
    p = m.p
    vecs = np.asarray(vecs, dtype=la.DTYPE).reshape(m.dim, -1) % p
    basis = la.col_basis(vecs, p)
    gens = m.algebra.generators
    frontier = basis
    while frontier.shape[1]:
        imgs = [basis] + [(m.action[g] @ frontier) % p for g in gens]
        nxt = la.col_basis(np.hstack(imgs), p)
        if nxt.shape[1] == basis.shape[1]:
            break
        frontier = nxt
        basis = nxt
    return basis


def submodule(m: Module, cols) -> Sub:
    """Submodule on an invariant subspace (columns); the basis is put in RREF."""
    p = m.p
    cols = np.asarray(cols, dtype=la.DTYPE)
    basis = la.col_basis(cols.reshape(m.dim, -1), p) if m.dim else la.zeros(0, 0)
    k = basis.shape[1]
    pivots = [int(np.flatnonzero(basis[:, j])[0]) for j in range(k)]
    img = (m.action @ basis) % p
    act = img[:, pivots, :]
    if not np.array_equal((basis @ act) % p, img):
        raise ValidationError("subspace is not invariant under the action")
    degrees = [m.degrees[i] for i in pivots] if m.graded else None
    return Sub(Module(m.algebra, act, degrees, m.grading), basis)


def submodule_closure(m: Module, generators) -> Sub:
    return submodule(m, spin(m, generators))


def quotient(m: Module, sub_cols) -> Quot:
    p = m.p
    sub_cols = np.asarray(sub_cols, dtype=la.DTYPE).reshape(m.dim, -1)
    proj, comp = la.complement_data(sub_cols, m.dim, p)
    act = (proj @ m.action[:, :, comp]) % p
    degrees = [m.degrees[i] for i in comp] if m.graded else None
    return Quot(Module(m.algebra, act, degrees, m.grading), proj % p, comp)


def kernel(f: Morphism) -> Sub:
    ns = la.nullspace(f.matrix, f.p) if f.source.dim else la.zeros(0, 0)
    if f.graded and f.source.graded:
        ns = _homogenize(ns, f.source.degrees, f.p)
    return submodule(f.source, ns)


def image(f: Morphism) -> Sub:
    cols = la.col_basis(f.matrix, f.p)
    if f.graded and f.target.graded:
        cols = _homogenize(cols, f.target.degrees, f.p)
    return submodule(f.target, cols)


def cokernel(f: Morphism) -> Quot:
    return quotient(f.target, la.col_basis(f.matrix, f.p))


def _homogenize(cols: np.ndarray, degrees, p: int) -> np.ndarray:
    """Column basis of the span of the homogeneous parts (equal span for graded subspaces)."""
    parts = []
    for d in sorted(set(degrees)):
        mask = np.array([x == d for x in degrees])
        part = cols * mask[:, None]
        parts.append(part)
    return la.col_basis(np.hstack(parts), p) if parts else cols


# ---------------------------------------------------------------- simples and radical

_SEED = 20240611


def _dual_spin(m: Module, w) -> np.ndarray:
    """Spin ``w`` under the transposed action (the dual module)."""
    p = m.p
    basis = la.col_basis(np.asarray(w).reshape(m.dim, -1), p)
    gens = m.algebra.generators
    while True:
        imgs = [basis] + [(m.action[g].T @ basis) % p for g in gens]
        nxt = la.col_basis(np.hstack(imgs), p)
        if nxt.shape[1] == basis.shape[1]:
            return basis
        basis = nxt


def _projective_points(basis: np.ndarray, p: int):
    """One representative per line in the column span of ``basis``."""
    k = basis.shape[1]
    for lead in range(k):
        for tail in np.ndindex(*([p] * (k - lead - 1))):
            c = np.zeros(k, dtype=la.DTYPE)
            c[lead] = 1
            c[lead + 1:] = tail
            yield (basis @ c) % p


def _irreducible_factors(coeffs, p):
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    out = []
    for f, _ in poly.factor_list()[1]:
        c = [int(v) % p for v in reversed(f.all_coeffs())]
        out.append(c)
    return out


POINT_BUDGET = 1 << 14


def proper_submodule(m: Module, rng=None):
    """Column basis of a nonzero proper submodule, or ``None`` when ``m`` is simple.

    The answer is exact: for an element ``a`` and an irreducible factor ``f``
    of its minimal polynomial, every proper nonzero submodule ``U`` meets
    ``ker f(a)`` or has annihilator meeting ``ker f(a)^T``.  Spinning every
    line of both kernels therefore finds ``U`` whenever it exists.
    """
    n, p = m.dim, m.p
    if n <= 1:
        return None
    for j in range(n):
        e = np.zeros(n, dtype=la.DTYPE)
        e[j] = 1
        s = spin(m, e)
        if s.shape[1] < n:
            return s
    rng = rng or np.random.default_rng(_SEED)
    best = None
    candidates = [m.action[i] for i in m.algebra.generators]
    tries = 0
    while tries < 40:
        if tries < len(candidates):
            a = candidates[tries]
        else:
            coef = rng.integers(0, p, size=m.algebra.dim)
            a = m.act(coef)
        tries += 1
        mp = la.min_poly(a, p)
        for f in _irreducible_factors(mp, p):
            fa = la.poly_eval(f, a, p)
            K = la.nullspace(fa, p)
            Kt = la.nullspace(fa.T, p)
            cost = (p ** K.shape[1] + p ** Kt.shape[1])
            if best is None or cost < best[0]:
                best = (cost, K, Kt)
        if best[0] <= 2 * (p + 1):
            break
    cost, K, Kt = best
    if cost > POINT_BUDGET:
        raise BudgetExceeded(f"simplicity test needs about {cost} spins", cost)
    for v in _projective_points(K, p):
        s = spin(m, v)
        if s.shape[1] < n:
            return s
    for w in _projective_points(Kt, p):
        s = _dual_spin(m, w)
        if s.shape[1] < n:
            return la.nullspace(s.T, p)
    return None


def is_simple(m: Module) -> bool:
    return m.dim > 0 and proper_submodule(m) is None


def simple_submodule(m: Module) -> Sub:
    """A simple submodule of a nonzero module."""
    cur = m
    inc = la.eye(m.dim)
    while True:
        u = proper_submodule(cur)
        if u is None:
            return Sub(cur, inc)
        sub = submodule(cur, u)
        inc = (inc @ sub.inclusion) % m.p
        cur = sub.module


def composition_factors(m: Module) -> list[Module]:
    out = []
    cur = m
    while cur.dim:
        s = simple_submodule(cur)
        out.append(s.module)
        cur = quotient(cur, s.inclusion).module
    return out


def annihilator(m: Module) -> np.ndarray:
    """Column basis (in algebra coordinates) of ``{x : x m = 0}``."""
    a = m.algebra
    if m.dim == 0:
        return la.eye(a.dim)
    vecs = m.action.reshape(a.dim, -1).T
    return la.nullspace(vecs, m.p)


_RADICAL: dict = {}
_SIMPLES: dict = {}


def algebra_radical(a: Algebra) -> np.ndarray:
    """Column basis of the Jacobson radical."""
    if a.digest in _RADICAL:
        return _RADICAL[a.digest]
    factors = composition_factors(regular_module(a))
    rows = [m.action.reshape(a.dim, -1).T for m in factors]
    j = la.nullspace(np.vstack(rows) % a.p, a.p) if rows else la.eye(a.dim)
    j = la.col_basis(j, a.p)
    _RADICAL[a.digest] = j
    uniq: list[Module] = []
    for s in factors:
        if not any(x.dim == s.dim and hom_dim(x, s) for x in uniq):
            uniq.append(s)
    _SIMPLES[a.digest] = uniq
    return j


def simple_modules(a: Algebra) -> list[Module]:
    """Pairwise non-isomorphic simple modules, one per class."""
    algebra_radical(a)
    return _SIMPLES[a.digest]


def radical(m: Module) -> np.ndarray:
    """Column basis of ``J m``."""
    j = algebra_radical(m.algebra)
    if m.dim == 0 or j.shape[1] == 0:
        return la.zeros(m.dim, 0)
    mats = np.tensordot(j.T, m.action, axes=1) % m.p
    cols = np.hstack(list(mats))
    cols = la.col_basis(cols, m.p)
    if m.graded:
        cols = _homogenize(cols, m.degrees, m.p)
    return cols


def radical_series(m: Module):
    """``([rad^0 m, rad^1 m, ...] as column bases, Loewy length)``."""
    p = m.p
    j = algebra_radical(m.algebra)
    mats = np.tensordot(j.T, m.action, axes=1) % p if j.shape[1] else np.zeros((0, m.dim, m.dim), dtype=la.DTYPE)
    series = [la.eye(m.dim)]
    cur = series[0]
    while cur.shape[1]:
        nxt = la.col_basis(np.hstack([mt @ cur % p for mt in mats]), p) if len(mats) else la.zeros(m.dim, 0)
        series.append(nxt)
        cur = nxt
    return series, len(series) - 1


def top(m: Module) -> Quot:
    return quotient(m, radical(m))


# ---------------------------------------------------------------- projective covers


@dataclass
class Projectives:
    """Indecomposable projectives ``A e_i`` with their idempotents."""

    modules: list            # Module A e_i
    bases: list              # column basis of A e_i inside A
    idempotents: list        # e_i as algebra vectors


_PROJ: dict = {}


def projective_indecomposables(a: Algebra) -> Projectives:
    if a.digest in _PROJ:
        return _PROJ[a.digest]
    from .decomp import decompose_full

    reg = regular_module(a)
    parts = decompose_full(reg)       # list of (Sub) with inclusions into A
    incs = [s.inclusion for s in parts]
    full = np.hstack(incs)
    coords = la.solve(full, a.unit, a.p)
    mods, bases, idems = [], [], []
    off = 0
    seen = []
    for s in parts:
        k = s.inclusion.shape[1]
        e = (s.inclusion @ coords[off:off + k]) % a.p
        off += k
        # keep one representative per isomorphism class: tops decide
        dup = False
        for t in seen:
            if t.dim == s.module.dim and _iso_projective(t, s.module):
                dup = True
                break
        if dup:
            continue
        seen.append(s.module)
        mods.append(s.module)
        bases.append(s.inclusion)
        idems.append(e)
    out = Projectives(mods, bases, idems)
    _PROJ[a.digest] = out
    return out


def _iso_projective(p1: Module, p2: Module) -> bool:
    """Indecomposable projectives are isomorphic iff their tops are."""
    t1, t2 = top(p1).module, top(p2).module
    return t1.dim == t2.dim and hom_dim(t1, t2) > 0


@dataclass
class Cover:
    module: Module           # P, the projective cover
    map: Morphism            # P -> m
    syzygy: Sub              # kernel (Omega m) inside P
    summands: list           # (projective index, chosen vector)


def projective_cover(m: Module) -> Cover:
    """Projective cover of an ungraded module (graded covers go through the covering algebra)."""
    if m.graded:
        return graded_projective_cover(m)
    a, p = m.algebra, m.p
    proj = projective_indecomposables(a)
    W = radical(m)
    chosen = []
    blocks, maps = [], []
    while W.shape[1] < m.dim:
        progressed = False
        for idx, e in enumerate(proj.idempotents):
            img = la.col_basis(m.act(e), p)
            for c in range(img.shape[1]):
                v = img[:, c]
                if la.in_span(W, v, p) if W.shape[1] else not v.any():
                    continue
                chosen.append((idx, v))
                rv = np.einsum("iab,b->ai", m.action, v) % p      # columns e_i v
                maps.append((rv @ proj.bases[idx]) % p)
                blocks.append(proj.modules[idx])
                W = la.col_basis(np.hstack([W, spin(m, v)]), p)
                progressed = True
                break
            if W.shape[1] == m.dim:
                break
        if not progressed:
            raise ValidationError("projective cover construction stalled")
    P = direct_sum(*blocks) if blocks else zero_module(a)
    cover = Morphism(P, m, np.hstack(maps) if maps else la.zeros(m.dim, 0))
    return Cover(P, cover, kernel(cover), chosen)


# ---------------------------------------------------------------- covering algebra bridge


def cover_window(modules, grading: GradedAlgebra, window=None):
    g = grading.group
    if g.is_finite:
        return None
    if window is None:
        raise UnboundedSupport("integer gradings need an explicit support window")
    sup = {d for m in modules for d in m.degrees}
    if not sup <= set(window):
        raise UnboundedSupport(f"module degrees {sorted(sup)} leave the window {sorted(window)}")
    return tuple(window)


_COVERS: dict = {}


def get_covering(grading: GradedAlgebra, window=None) -> CoveringAlgebra:
    key = (grading.digest, None if window is None else tuple(sorted(window)))
    if key not in _COVERS:
        _COVERS[key] = covering_algebra(grading, window)
    return _COVERS[key]


def to_covering(m: Module, cov: CoveringAlgebra) -> Module:
    """Same vector space, acted on by the covering algebra."""
    p = m.p
    masks = {x: np.array([d == x for d in m.degrees], dtype=la.DTYPE) for x in cov.window}
    act = np.zeros((cov.algebra.dim, m.dim, m.dim), dtype=la.DTYPE)
    for k, (i, x) in enumerate(cov.basis):
        act[k] = m.action[i] * masks[x][None, :]
    return Module(cov.algebra, act % p)


def from_covering(v: Module, cov: CoveringAlgebra):
    """``(graded module, basis change)``: columns of the change matrix are the new basis in ``v``."""
    p, ga = v.p, cov.graded
    index = cov.symbol_index()
    unit = ga.algebra.unit
    cols, degrees = [], []
    for x in cov.window:
        px = np.zeros(len(cov.symbols), dtype=la.DTYPE)
        for i in np.flatnonzero(unit):
            px[index[(int(i), x)]] = unit[i]
        proj_x = v.act(cov.proj @ px % p)
        b = la.col_basis(proj_x, p)
        cols.append(b)
        degrees += [x] * b.shape[1]
    Q = np.hstack(cols) if cols else la.zeros(v.dim, 0)
    Qi = la.inverse(Q, p)
    act = np.zeros((ga.dim, v.dim, v.dim), dtype=la.DTYPE)
    for (i, x), k in index.items():
        act[i] += v.act(cov.proj[:, k])
    act = (Qi @ act @ Q) % p
    return Module(ga.algebra, act, degrees, ga), Q


def graded_projective_cover(m: Module, window=None) -> Cover:
    cov = get_covering(m.grading, cover_window([m], m.grading, window))
    c = projective_cover(to_covering(m, cov))
    P, Q = from_covering(c.module, cov)
    f = Morphism(P, m, (c.map.matrix @ Q) % m.p, graded=True)
    return Cover(P, f, kernel(f), c.summands)


# ---------------------------------------------------------------- Ext


@dataclass
class ExtSpace:
    m: Module
    n: Module
    cover: Cover
    omega: Module
    cocycles: np.ndarray      # (k, n.dim, omega.dim): the class basis
    reduce: np.ndarray        # Hom(omega, n) coordinates -> class coordinates
    hom_omega: np.ndarray     # basis of Hom(omega, n)
    graded: bool = False

    @property
    def dim(self) -> int:
        return self.cocycles.shape[0]

    def cls(self, coeffs) -> "ExtClass":
        c = np.asarray(coeffs, dtype=la.DTYPE) % self.m.p
        mat = np.tensordot(c, self.cocycles, axes=1) % self.m.p if self.dim else \
            la.zeros(self.n.dim, self.omega.dim)
        return ExtClass(self, mat)

    def class_of(self, cocycle) -> np.ndarray:
        p = self.m.p
        k = self.hom_omega.shape[0]
        if k == 0:
            return np.zeros(0, dtype=la.DTYPE)
        coords = la.solve(self.hom_omega.reshape(k, -1).T, np.asarray(cocycle).reshape(-1), p)
        if coords is None:
            raise ValidationError("not a morphism from the syzygy")
        return (self.reduce @ coords) % p


@dataclass
class ExtClass:
    space: ExtSpace
    cocycle: np.ndarray       # n.dim x omega.dim
    _middle: object = field(default=None, repr=False)

    def is_zero(self) -> bool:
        return not self.space.class_of(self.cocycle).any()

    def middle_term(self):
        if self._middle is None:
            self._middle = middle_term(self)
        return self._middle


def ext1(m: Module, n: Module, graded_only: bool = False) -> ExtSpace:
    _check_same_algebra(m, n)
    p = m.p
    if graded_only and not (m.graded and n.graded):
        raise ValidationError("graded Ext needs graded modules")
    cover = graded_projective_cover(m) if graded_only else projective_cover(m.forget())
    om = cover.syzygy
    omega = om.module
    n_ = n if graded_only else n.forget()
    H = hom_basis(omega, n_, graded_only)
    k = H.shape[0]
    if k == 0:
        empty = np.zeros((0, n.dim, omega.dim), dtype=la.DTYPE)
        return ExtSpace(m, n, cover, omega, empty, la.zeros(0, 0), H, graded_only)
    G = hom_basis(cover.module, n_, graded_only)
    restr = [(g @ om.inclusion) % p for g in G]
    Hm = H.reshape(k, -1).T
    if restr:
        coords = la.solve(Hm, np.stack([r.reshape(-1) for r in restr], axis=1), p)
    else:
        coords = la.zeros(k, 0)
    reduce, comp = la.complement_data(coords, k, p)
    return ExtSpace(m, n, cover, omega, H[comp], reduce % p, H, graded_only)


def ext1_dim(m: Module, n: Module, graded_only: bool = False) -> int:
    return ext1(m, n, graded_only).dim


def ext2_dim(m: Module, n: Module, graded_only: bool = False) -> int:
    cover = graded_projective_cover(m) if graded_only else projective_cover(m.forget())
    return ext1(cover.syzygy.module, n if graded_only else n.forget(), graded_only).dim


@dataclass
class Extension:
    """``0 -> n --f--> y --g--> m -> 0``."""

    middle: Module
    f: Morphism
    g: Morphism

    def verify(self) -> list[str]:
        bad = []
        for name, h in (("f", self.f), ("g", self.g)):
            if not h.intertwines():
                bad.append(f"{name} is not a homomorphism")
        if not self.f.is_injective():
            bad.append("f is not injective")
        if not self.g.is_surjective():
            bad.append("g is not surjective")
        if np.any((self.g.matrix @ self.f.matrix) % self.f.p):
            bad.append("g o f != 0")
        if self.f.rank() + self.g.rank() != self.middle.dim:
            bad.append("not exact in the middle")
        return bad


def middle_term(xi: ExtClass) -> Extension:
    """Pushout of the cover sequence along the cocycle."""
    sp = xi.space
    m, n, p = sp.m, sp.n, sp.m.p
    P = sp.cover.module
    inc = sp.cover.syzygy.inclusion
    n_ = n if sp.graded else n.forget()
    ambient = direct_sum(n_, P)
    rel = np.vstack([xi.cocycle, (-inc) % p]) % p
    q = quotient(ambient, rel)
    Y = q.module
    inj = la.zeros(ambient.dim, n.dim)
    inj[:n.dim] = la.eye(n.dim)
    f = Morphism(n_, Y, (q.projection @ inj) % p, sp.graded)
    pi = np.hstack([la.zeros(m.dim, n.dim), sp.cover.map.matrix])
    m_ = m if sp.graded else m.forget()
    g = Morphism(Y, m_, pi[:, q.section] % p, sp.graded)
    return Extension(Y, f, g)


# ---------------------------------------------------------------- tensor products


def _balanced(mr: np.ndarray, nl: np.ndarray, gens, p: int):
    """Quotient data of ``M (x)_k N`` by ``(m s) (x) n - m (x) (s n)`` over the generators."""
    dm, dn = mr.shape[1], nl.shape[1]
    rel = [np.kron(mr[t], la.eye(dn)) - np.kron(la.eye(dm), nl[t]) for t in gens]
    rel = la.col_basis(np.hstack(rel) % p, p) if rel else la.zeros(dm * dn, 0)
    return la.complement_data(rel, dm * dn, p)


def tensor_over_algebra(m: Bimodule, n: Bimodule) -> Bimodule:
    """``M (x)_S N`` for an (A, S)-bimodule M and an (S, B)-bimodule N."""
    if m.right_algebra.digest != n.left_algebra.digest:
        raise AlgebraMismatch("middle algebras differ")
    p = m.p
    S = m.right_algebra
    proj, comp = _balanced(m.right, n.left, S.generators, p)
    dm, dn = m.dim, n.dim
    left = np.stack([(proj @ np.kron(x, la.eye(dn))[:, comp]) % p for x in m.left]) \
        if m.left_algebra.dim else None
    right = np.stack([(proj @ np.kron(la.eye(dm), y)[:, comp]) % p for y in n.right]) \
        if n.right_algebra.dim else None
    degrees = None
    lg = rg = None
    if m.graded and n.graded:
        grp = (m.left_grading or n.right_grading).group
        full = [grp.mul(a, b) for a in m.degrees for b in n.degrees]
        degrees = [full[c] for c in comp]
        lg, rg = m.left_grading, n.right_grading
    return Bimodule(m.left_algebra, n.right_algebra, left, right, degrees, lg, rg)


def tensor_with_module(m: Bimodule, n: Module):
    """``M (x)_S N`` as a left module over the left algebra of ``M``.

    Returns ``(module, projection, kept)`` where ``kept`` lists the pairs
    ``u * dim N + v`` of the k-tensor basis that form the quotient basis.
    """
    if m.right_algebra.digest != n.algebra.digest:
        raise AlgebraMismatch("bimodule and module disagree on the middle algebra")
    p = m.p
    proj, comp = _balanced(m.right, n.action, n.algebra.generators, p)
    act = np.stack([(proj @ np.kron(x, la.eye(n.dim))[:, comp]) % p for x in m.left])
    return Module(m.left_algebra, act), proj, comp


def module_as_bimodule(n: Module, base: Algebra) -> Bimodule:
    """A left module viewed as an (A, base)-bimodule with the scalar right action."""
    right = np.stack([la.eye(n.dim) * int(c) for c in base.unit]) if base.dim == 1 else None
    if right is None:
        raise ValidationError("only the ground field is supported as the trivial right algebra")
    return Bimodule(n.algebra, base, n.action, right, n.degrees, n.grading, None)
