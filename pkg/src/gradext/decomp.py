"""Krull-Schmidt machinery: endomorphism rings, indecomposability,
decomposition, isomorphism and enumeration of isomorphism classes."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, GradedAlgebra
from .errors import BudgetExceeded
from .modules import (
    Module,
    Sub,
    _projective_points,
    _SEED,
    algebra_radical,
    direct_sum,
    ext1,
    from_covering,
    get_covering,
    hom_basis,
    proper_submodule,
    regular_module,
    simple_modules,
    submodule,
    to_covering,
)

DEFAULT_BUDGET = 1 << 20
HARD_CAP = 6


# ---------------------------------------------------------------- endomorphisms


@dataclass
class EndRing:
    module: Module
    basis: np.ndarray        # (k, n, n)
    algebra: Algebra

    def element(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=la.DTYPE), self.basis, axes=1) % self.module.p


def endomorphism_ring(m: Module, graded: bool = False) -> EndRing:
    p = m.p
    H = hom_basis(m, m, graded)
    k = H.shape[0]
    flat = H.reshape(k, -1).T
    prods = np.einsum("aij,bjl->abil", H, H) % p
    coords = la.solve(flat, prods.reshape(k * k, -1).T, p)
    mult = coords.T.reshape(k, k, k)
    unit = la.solve(flat, la.eye(m.dim).reshape(-1), p)
    names = [f"f{i}" for i in range(k)]
    return EndRing(m, H, Algebra(p, mult, unit, names, name="End"))


def endomorphism_algebra(m: Module, graded: bool = False) -> Algebra:
    return endomorphism_ring(m, graded).algebra


# ---------------------------------------------------------------- indecomposability


@dataclass
class Verdict:
    kind: str                           # "yes" | "no" | "budget-exceeded"
    idempotent: np.ndarray | None = None
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.kind == "yes"


def _fitting_idempotent(f: np.ndarray, p: int):
    """Projection onto im f^N along ker f^N, or None when f is nilpotent or invertible."""
    fn = la.fitting_power(f, p)
    r = la.rank(fn, p)
    n = f.shape[0]
    if r == 0 or r == n:
        return None
    im = la.col_basis(fn, p)
    ker = la.nullspace(fn, p)
    Q = np.hstack([im, ker])
    D = np.zeros((n, n), dtype=la.DTYPE)
    D[:r, :r] = la.eye(r)
    return (Q @ D @ la.inverse(Q, p)) % p


def _search_idempotent(end: EndRing, rng, tries: int = 24):
    p, H = end.module.p, end.basis
    k = H.shape[0]
    cands = [H[i] for i in range(k)]
    cands += [(H[i] + H[j]) % p for i, j in itertools.combinations(range(k), 2)][:64]
    for f in cands:
        e = _fitting_idempotent(f, p)
        if e is not None:
            return e
    for _ in range(tries):
        e = _fitting_idempotent(end.element(rng.integers(0, p, size=k)), p)
        if e is not None:
            return e
    return None


def is_indecomposable(m: Module, budget: int = DEFAULT_BUDGET, graded: bool = False,
                      method: str = "radical") -> Verdict:
    """Exact indecomposability test.

    ``method="radical"`` decides locality of End via its top End/J: the module
    is indecomposable iff End/J is a division ring, i.e. its regular module is
    simple.  ``method="scan"`` enumerates all p^(dim End) endomorphisms.
    """
    if m.dim == 0:
        return Verdict("no", reason="zero module")
    p = m.p
    end = endomorphism_ring(m, graded)
    k = end.basis.shape[0]
    if k == 1:
        return Verdict("yes", reason="End is the ground field")
    if method == "scan":
        if p ** k > budget:
            e = _search_idempotent(end, np.random.default_rng(_SEED))
            if e is not None:
                return Verdict("no", e)
            return Verdict("budget-exceeded", reason=f"scan of {p}^{k} endomorphisms over budget")
        eye = la.eye(m.dim)
        for c in itertools.product(range(p), repeat=k):
            e = end.element(c)
            if np.array_equal(e @ e % p, e) and e.any() and not np.array_equal(e, eye):
                return Verdict("no", e)
        return Verdict("yes", reason=f"no idempotent among {p}^{k} endomorphisms")
    rng = np.random.default_rng(_SEED)
    e = _search_idempotent(end, rng)
    if e is not None:
        return Verdict("no", e)
    A = end.algebra
    J = algebra_radical(A)
    q = k - J.shape[1]
    if q == 1:
        return Verdict("yes", reason="End/J is the ground field")
    # End/J as a module over End: its simplicity decides locality
    from .modules import quotient
    top = quotient(regular_module(A), J).module
    u = proper_submodule(top)
    if u is None:
        return Verdict("yes", reason=f"End/J is a division ring of dimension {q}")
    # a proper left ideal of End/J contains a non-nilpotent element; lift it
    proj, comp = la.complement_data(J, k, p)
    cols = u
    if p ** cols.shape[1] > budget:
        return Verdict("budget-exceeded", reason="idempotent lift search over budget")
    for v in _projective_points(cols, p):
        lift = np.zeros(k, dtype=la.DTYPE)
        lift[comp] = v
        e = _fitting_idempotent(end.element(lift), p)
        if e is not None:
            return Verdict("no", e)
    return Verdict("budget-exceeded", reason="no idempotent lift found")


# ---------------------------------------------------------------- decomposition


@dataclass
class Decomposition:
    module: Module
    summands: list                   # Sub objects, inclusions into module
    kinds: list                      # summand -> index into parts
    parts: list                      # [(indecomposable Module, multiplicity)]
    witnesses: list = field(default_factory=list)

    @property
    def basis_change(self) -> np.ndarray:
        if not self.summands:
            return la.zeros(self.module.dim, 0)
        return np.hstack([s.inclusion for s in self.summands])

    def flat(self) -> list[Module]:
        return [self.parts[k][0] for k in self.kinds]


def _split(m: Module, e: np.ndarray):
    p = m.p
    im = la.col_basis(e, p)
    ker = la.col_basis((la.eye(m.dim) - e) % p, p)
    if m.graded:
        from .modules import _homogenize
        im = _homogenize(im, m.degrees, m.p)
        ker = _homogenize(ker, m.degrees, m.p)
    return submodule(m, im), submodule(m, ker)


def decompose_full(m: Module, graded: bool | None = None, budget: int = DEFAULT_BUDGET) -> list[Sub]:
    """Indecomposable summands as submodules, unsorted."""
    graded = m.graded if graded is None else graded
    if m.dim == 0:
        return []
    v = is_indecomposable(m, budget, graded)
    if v.kind == "budget-exceeded":
        raise BudgetExceeded(f"indecomposability undecided for a {m.dim}-dim module: {v.reason}")
    if v.yes:
        return [Sub(m, la.eye(m.dim))]
    out = []
    for part in _split(m, v.idempotent):
        for s in decompose_full(part.module, graded, budget):
            out.append(Sub(s.module, (part.inclusion @ s.inclusion) % m.p))
    return out


def profile(m: Module, graded: bool = False) -> tuple:
    """Isomorphism invariants used for ordering and prefiltering."""
    p = m.p
    ranks = []
    eye = la.eye(m.dim)
    for g in m.algebra.generators:
        for c in range(min(p, 3)):
            a = (m.action[g] - c * eye) % p
            ranks += [la.rank(a, p), la.rank(a @ a % p, p)]
    deg = tuple(sorted(m.degree_dims().items())) if (graded and m.graded) else ()
    return (m.dim, deg, tuple(ranks), hom_basis(m, m, graded).shape[0])


def profile_digest(prof: tuple) -> str:
    return hashlib.sha256(repr(prof).encode()).hexdigest()[:12]


def iso_indecomposables(x: Module, y: Module, graded: bool = False):
    """An isomorphism x -> y between indecomposables, or None (exact)."""
    if x.dim != y.dim:
        return None
    if graded and x.degree_dims() != y.degree_dims():
        return None
    p = x.p
    F = hom_basis(x, y, graded)
    if F.shape[0] == 0:
        return None
    G = hom_basis(y, x, graded)
    for f in F:
        if la.rank(f, p) == x.dim:
            return f
    for f in F:
        for g in G:
            if not la.is_nilpotent((g @ f) % p, p):
                return f
    return None


def decompose(m: Module, graded: bool | None = None, budget: int = DEFAULT_BUDGET) -> Decomposition:
    graded = m.graded if graded is None else graded
    subs = decompose_full(m, graded, budget)
    keyed = sorted(((profile(s.module, graded), i, s) for i, s in enumerate(subs)),
                   key=lambda t: (t[0][0], profile_digest(t[0]), t[1]))
    parts, kinds, ordered, profs = [], [], [], []
    for prof, _, s in keyed:
        hit = None
        for k, (rep, _) in enumerate(parts):
            if profs[k] == prof and iso_indecomposables(rep, s.module, graded) is not None:
                hit = k
                break
        if hit is None:
            parts.append([s.module, 0])
            profs.append(prof)
            hit = len(parts) - 1
        parts[hit][1] += 1
        kinds.append(hit)
        ordered.append(s)
    return Decomposition(m, ordered, kinds, [tuple(x) for x in parts])


@dataclass
class IsoVerdict:
    value: bool
    witness: np.ndarray | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.value


def are_isomorphic(m: Module, n: Module, graded: bool = False, budget: int = DEFAULT_BUDGET) -> IsoVerdict:
    p = m.p
    if m.dim != n.dim:
        return IsoVerdict(False, reason="dimensions differ")
    if graded and m.degree_dims() != n.degree_dims():
        return IsoVerdict(False, reason="graded dimensions differ")
    if m.dim == 0:
        return IsoVerdict(True, la.zeros(0, 0))
    F = hom_basis(m, n, graded)
    if F.shape[0] != hom_basis(m, m, graded).shape[0] or F.shape[0] != hom_basis(n, n, graded).shape[0]:
        return IsoVerdict(False, reason="Hom dimensions differ")
    for f in F:
        if la.rank(f, p) == m.dim:
            return IsoVerdict(True, f, "basis morphism is invertible")
    rng = np.random.default_rng(_SEED)
    for _ in range(8):
        f = np.tensordot(rng.integers(0, p, size=F.shape[0]), F, axes=1) % p
        if la.rank(f, p) == m.dim:
            return IsoVerdict(True, f, "random morphism is invertible")
    dm, dn = decompose(m, graded, budget), decompose(n, graded, budget)
    used = [False] * len(dn.summands)
    Qm_inv = la.inverse(dm.basis_change, p)
    W = la.zeros(n.dim, m.dim)
    off = 0
    for s in dm.summands:
        k = s.module.dim
        rows = Qm_inv[off:off + k]
        off += k
        match = None
        for j, t in enumerate(dn.summands):
            if used[j]:
                continue
            phi = iso_indecomposables(s.module, t.module, graded)
            if phi is not None:
                match = (j, phi)
                break
        if match is None:
            return IsoVerdict(False, reason="indecomposable summands differ")
        j, phi = match
        used[j] = True
        W = (W + dn.summands[j].inclusion @ phi @ rows) % p
    return IsoVerdict(True, W, "summand-wise isomorphism")


# ---------------------------------------------------------------- enumeration


@dataclass
class Catalogue:
    """Indecomposables of dimension <= max_dim, plus all modules as multisets."""

    algebra: Algebra
    max_dim: int
    indecomposables: list          # Module, sorted by (dim, profile digest)
    profiles: list
    work: int = 0

    def modules(self) -> list[tuple]:
        """All nonzero isomorphism classes as sorted tuples of indecomposable indices."""
        dims = [m.dim for m in self.indecomposables]
        out = []

        def rec(start, remaining, acc):
            if acc:
                out.append(tuple(acc))
            for i in range(start, len(dims)):
                if dims[i] <= remaining:
                    rec(i, remaining - dims[i], acc + [i])

        rec(0, self.max_dim, [])
        out.sort(key=lambda t: (sum(dims[i] for i in t), t))
        return out

    def build(self, combo) -> Module:
        if not combo:
            from .modules import zero_module
            return zero_module(self.algebra)
        return direct_sum(*[self.indecomposables[i] for i in combo])

    def identify(self, x: Module) -> int | None:
        prof = profile(x)
        for i, (m, pr) in enumerate(zip(self.indecomposables, self.profiles)):
            if pr == prof and iso_indecomposables(m, x) is not None:
                return i
        return None


_CATALOGUES: dict = {}


def ext_cost(space_dim: int, p: int) -> int:
    return (p ** space_dim - 1) // (p - 1) + 1


def indecomposable_catalogue(a: Algebra, d: int, budget: int = DEFAULT_BUDGET,
                             cap: int = HARD_CAP) -> Catalogue:
    """All indecomposables of dimension <= d, complete by construction.

    Every indecomposable Y of dimension > dim S with simple top summand S is a
    non-split extension of S by a module K of dimension dim Y - dim S, so
    running through all simples, all smaller modules and all Ext classes up
    to scalars reaches every class.
    """
    if d > cap:
        raise BudgetExceeded(f"dimension bound {d} above the hard cap {cap}", None)
    key = a.digest
    cached = _CATALOGUES.get(key)
    if cached is not None and cached.max_dim >= d:
        inds = [(m, pr) for m, pr in zip(cached.indecomposables, cached.profiles) if m.dim <= d]
        return Catalogue(a, d, [m for m, _ in inds], [pr for _, pr in inds], cached.work)
    p = a.p
    simples = [s for s in simple_modules(a) if s.dim <= d]
    cat = Catalogue(a, 0, [], [])
    work = 0
    for s in simples:
        cat.indecomposables.append(s)
        cat.profiles.append(profile(s))
    for k in range(2, d + 1):
        cat.max_dim = k - 1
        combos = [c for c in cat.modules()]
        found = []
        for s in simples:
            rest = k - s.dim
            if rest < 1:
                continue
            for combo in combos:
                if sum(cat.indecomposables[i].dim for i in combo) != rest:
                    continue
                K = cat.build(combo)
                sp = ext1(s, K)
                if sp.dim == 0:
                    continue
                work += ext_cost(sp.dim, p)
                if work > budget:
                    raise BudgetExceeded(
                        f"module enumeration up to dimension {d} needs more than {budget} extensions", work)
                for c in _projective_points(la.eye(sp.dim), p):
                    y = sp.cls(c).middle_term().middle
                    if not is_indecomposable(y, budget).yes:
                        continue
                    prof = profile(y)
                    if any(pr == prof and iso_indecomposables(m, y) is not None
                           for m, pr in zip(cat.indecomposables + [f[0] for f in found],
                                            cat.profiles + [f[1] for f in found])):
                        continue
                    found.append((y, prof))
        for y, prof in found:
            cat.indecomposables.append(y)
            cat.profiles.append(prof)
    cat.max_dim = d
    order = sorted(range(len(cat.indecomposables)),
                   key=lambda i: (cat.indecomposables[i].dim, profile_digest(cat.profiles[i]), i))
    cat.indecomposables = [cat.indecomposables[i] for i in order]
    cat.profiles = [cat.profiles[i] for i in order]
    cat.work = work
    if cached is None or cached.max_dim < d:
        _CATALOGUES[key] = cat
    return cat


def enumerate_modules(a: Algebra | GradedAlgebra, d: int, graded=False, window=None,
                      budget: int = DEFAULT_BUDGET, cap: int = HARD_CAP) -> list[Module]:
    """Representatives of all isomorphism classes of nonzero modules of dimension <= d."""
    if graded:
        return [m for m in _graded_modules(a, d, window, budget, cap)]
    alg = a.algebra if isinstance(a, GradedAlgebra) else a
    cat = indecomposable_catalogue(alg, d, budget, cap)
    return [cat.build(c) for c in cat.modules()]


def enumerate_indecomposables(a: Algebra | GradedAlgebra, d: int, graded=False, window=None,
                              budget: int = DEFAULT_BUDGET, cap: int = HARD_CAP) -> list[Module]:
    if graded:
        cov = get_covering(a, window)
        cat = indecomposable_catalogue(cov.algebra, d, budget, cap)
        return [from_covering(m, cov)[0] for m in cat.indecomposables]
    alg = a.algebra if isinstance(a, GradedAlgebra) else a
    return list(indecomposable_catalogue(alg, d, budget, cap).indecomposables)


def _graded_modules(a: GradedAlgebra, d, window, budget, cap):
    cov = get_covering(a, window)
    cat = indecomposable_catalogue(cov.algebra, d, budget, cap)
    return [from_covering(cat.build(c), cov)[0] for c in cat.modules()]


def graded_to_covering(m: Module, window=None) -> Module:
    return to_covering(m, get_covering(m.grading, window))


@dataclass
class SummandWitness:
    embed: np.ndarray         # x -> y
    retract: np.ndarray       # y -> x, retract @ embed = id
    complement: list          # indecomposable summands of y left over


def summand_witness(x: Module, y: Module, graded: bool = False) -> SummandWitness | None:
    """Split embedding of ``x`` as a direct summand of ``y``, or None if it is not one."""
    p = x.p
    if x.dim > y.dim:
        return None
    dx, dy = decompose(x, graded), decompose(y, graded)
    Qx, Qy = dx.basis_change, dy.basis_change
    Qxi = la.inverse(Qx, p) if x.dim else la.zeros(0, 0)
    Qyi = la.inverse(Qy, p)
    yoff = np.cumsum([0] + [s.module.dim for s in dy.summands])
    used = [False] * len(dy.summands)
    embed = la.zeros(y.dim, x.dim)
    retract = la.zeros(x.dim, y.dim)
    off = 0
    for s in dx.summands:
        d = s.module.dim
        hit = None
        for j, t in enumerate(dy.summands):
            if used[j]:
                continue
            phi = iso_indecomposables(s.module, t.module, graded)
            if phi is not None:
                hit = (j, phi)
                break
        if hit is None:
            return None
        j, phi = hit
        used[j] = True
        rows, cols = Qxi[off:off + d], Qx[:, off:off + d]
        embed = (embed + dy.summands[j].inclusion @ phi @ rows) % p
        retract = (retract + cols @ la.inverse(phi, p) @ Qyi[yoff[j]:yoff[j + 1]]) % p
        off += d
    rest = [t.module for j, t in enumerate(dy.summands) if not used[j]]
    return SummandWitness(embed, retract, rest)
