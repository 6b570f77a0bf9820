"""Extension closures [M]_n on a bounded universe, with replayable certificates.

Everything is relative to a *universe*: all isomorphism classes of modules of
dimension <= D, stored as multisets of indecomposables.  Since [M]_n is closed
under summands, the computed [M]_n is determined by the set ``I_n`` of
indecomposables occurring in it.

Level n is computed by running through the extensions ``0 -> A -> Y -> B -> 0``
with A in [M]_{n-1}, B in [M]_1 and ``dim Y <= D + slack``, one class per line
of Ext^1(B, A).  ``X`` is a member of the middle layer whenever ``X + X'`` is
such a ``Y`` for a padding ``X'`` of dimension at most ``slack``.  This is the
same set that enumerating submodules of every ``X + X'`` would produce.
Graded universes live over the covering algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import Algebra, GradedAlgebra
from .decomp import (
    DEFAULT_BUDGET,
    HARD_CAP,
    Catalogue,
    Decomposition,
    decompose,
    ext_cost,
    indecomposable_catalogue,
    iso_indecomposables,
)
from .errors import AlgebraMismatch, BudgetExceeded, ValidationError
from .modules import (
    Module,
    Sub,
    _projective_points,
    direct_sum,
    ext1,
    from_covering,
    get_covering,
    quotient,
    radical_series,
    regular_module,
    submodule,
    to_covering,
    zero_module,
)

LEVEL_CAP = 8
DEFAULT_SLACK = 2


# ---------------------------------------------------------------- universe


class Universe:
    """All modules of dimension <= D over ``algebra`` (a covering algebra when graded)."""

    def __init__(self, algebra: Algebra, D: int, budget: int = DEFAULT_BUDGET, cap: int = HARD_CAP,
                 grading: GradedAlgebra | None = None, window=None):
        self.algebra = algebra
        self.D = D
        self.grading = grading
        self.window = window
        self.covering = get_covering(grading, window) if grading is not None else None
        self.catalogue: Catalogue = indecomposable_catalogue(algebra, D, budget, cap)
        self.members = self.catalogue.modules()
        self._modules: dict = {}
        self._combo_of: dict = {}
        self._ext: dict = {}

    @classmethod
    def ungraded(cls, a: Algebra | GradedAlgebra, D: int, **kw) -> "Universe":
        alg = a.algebra if isinstance(a, GradedAlgebra) else a
        return cls(alg, D, **kw)

    @classmethod
    def graded(cls, a: GradedAlgebra, D: int, window=None, **kw) -> "Universe":
        cov = get_covering(a, window)
        return cls(cov.algebra, D, grading=a, window=window, **kw)

    @property
    def is_graded(self) -> bool:
        return self.grading is not None

    @property
    def indecomposables(self) -> list[Module]:
        return self.catalogue.indecomposables

    @property
    def dims(self) -> list[int]:
        return [m.dim for m in self.catalogue.indecomposables]

    def combo_dim(self, combo) -> int:
        d = self.dims
        return sum(d[i] for i in combo)

    def build(self, combo) -> Module:
        combo = tuple(combo)
        if combo not in self._modules:
            m = self.catalogue.build(combo)
            self._modules[combo] = m
            self._combo_of[id(m)] = combo
        return self._modules[combo]

    def combo_of(self, m: Module) -> tuple | None:
        """The combo ``m`` was built from, if it came out of :meth:`build`."""
        c = self._combo_of.get(id(m))
        return c if c is not None and self._modules.get(c) is m else None

    def decomposition(self, m: Module) -> Decomposition:
        """Decomposition of ``m``; read off the blocks for modules built here."""
        combo = self.combo_of(m)
        if combo is None:
            return decompose(m, graded=False)
        subs, kinds, parts, off = [], [], [], 0
        for i in combo:
            x = self.indecomposables[i]
            inc = la.zeros(m.dim, x.dim)
            inc[off:off + x.dim] = la.eye(x.dim)
            subs.append(Sub(x, inc))
            off += x.dim
            if parts and parts[-1][0] is x:
                parts[-1] = (x, parts[-1][1] + 1)
            else:
                parts.append((x, 1))
            kinds.append(len(parts) - 1)
        return Decomposition(m, subs, kinds, parts)

    def lift(self, m: Module) -> Module:
        """Bring a module (graded R-module when graded) over the universe algebra."""
        if self.is_graded:
            if m.algebra.digest == self.algebra.digest:
                return m
            if not m.graded:
                raise ValidationError("graded universe needs graded modules")
            return to_covering(m, self.covering)
        if m.algebra.digest != self.algebra.digest:
            raise AlgebraMismatch("module over another algebra")
        return m.forget()

    def normal_form(self, y: Module):
        """``(combo, phi)`` with ``phi: y -> build(combo)`` an isomorphism; ``(None, None)``
        if some summand lies outside the universe."""
        p = y.p
        if y.dim == 0:
            return (), la.zeros(0, 0)
        dec = decompose(y, graded=False)
        found = []
        for s in dec.summands:
            idx = self.catalogue.identify(s.module)
            if idx is None:
                return None, None
            found.append(idx)
        order = sorted(range(len(found)), key=lambda k: (found[k], k))
        combo = tuple(found[k] for k in order)
        target = self.build(combo)
        Qi = la.inverse(dec.basis_change, p)
        offs = np.cumsum([0] + [s.module.dim for s in dec.summands])
        slot_off = {}
        pos = 0
        for k in order:
            slot_off[k] = pos
            pos += dec.summands[k].module.dim
        phi = la.zeros(target.dim, y.dim)
        for k, s in enumerate(dec.summands):
            rep = self.indecomposables[found[k]]
            iso = iso_indecomposables(s.module, rep)
            rows = Qi[offs[k]:offs[k + 1]]
            d = s.module.dim
            phi[slot_off[k]:slot_off[k] + d] = (iso @ rows) % p
        return combo, phi % p

    def support(self, m: Module) -> tuple:
        """Indecomposable summands of ``m`` inside the universe (sorted, distinct)."""
        if m.dim == 0:
            return ()
        combo = self.combo_of(m)
        if combo is not None:
            return tuple(sorted(set(combo)))
        dec = decompose(m, graded=False)
        out = set()
        for s in dec.summands:
            idx = self.catalogue.identify(s.module) if s.module.dim <= self.D else None
            if idx is not None:
                out.add(idx)
        return tuple(sorted(out))

    def ext_space(self, b: tuple, a: tuple):
        key = (b, a)
        if key not in self._ext:
            self._ext[key] = ext1(self.build(b), self.build(a))
        return self._ext[key]

    def digest_list(self) -> list[str]:
        return [m.key for m in self.indecomposables]


def members_from(universe: Universe, support) -> list[tuple]:
    s = set(support)
    return [c for c in universe.members if set(c) <= s]


# ---------------------------------------------------------------- certificates


class CertStore:
    """A DAG of certificates plus the modules they mention."""

    def __init__(self, universe: Universe):
        self.universe = universe
        self.nodes: list[dict] = []
        self.modules: dict[str, Module] = {}
        self._index: dict = {}

    def module_id(self, m: Module) -> str:
        self.modules.setdefault(m.key, m)
        return m.key

    def add(self, node: dict, key=None) -> int:
        if key is not None and key in self._index:
            return self._index[key]
        self.nodes.append(node)
        i = len(self.nodes) - 1
        if key is not None:
            self._index[key] = i
        return i

    def lookup(self, key):
        return self._index.get(key)

    def to_json(self) -> dict:
        mods = {k: {"dim": m.dim, "action": m.action.tolist()} for k, m in sorted(self.modules.items())}
        nodes = []
        for n in self.nodes:
            out = {}
            for k, v in n.items():
                out[k] = v.tolist() if isinstance(v, np.ndarray) else v
            nodes.append(out)
        return {"modules": mods, "certificates": nodes}


def add_witness(x: Module, gen: Module, gen_parts):
    """Embedding ``x -> gen^r`` and retraction with ``retract @ embed = id``.

    ``gen_parts`` is the decomposition of ``gen``.  Returns ``None`` if some
    summand of ``x`` is not a summand of ``gen``.
    """
    p = x.p
    if x.dim == 0:
        return 0, la.zeros(0, 0), la.zeros(0, 0)
    dec = decompose(x, graded=False)
    Qi = la.inverse(dec.basis_change, p)
    Q = dec.basis_change
    gQ = gen_parts.basis_change
    gQi = la.inverse(gQ, p)
    goffs = np.cumsum([0] + [s.module.dim for s in gen_parts.summands])
    r = len(dec.summands)
    dg = gen.dim
    embed = la.zeros(r * dg, x.dim)
    retract = la.zeros(x.dim, r * dg)
    off = 0
    for k, s in enumerate(dec.summands):
        d = s.module.dim
        hit = None
        for j, t in enumerate(gen_parts.summands):
            phi = iso_indecomposables(s.module, t.module)
            if phi is not None:
                hit = (j, phi)
                break
        if hit is None:
            return None
        j, phi = hit
        phi_inv = la.inverse(phi, p)
        inc_j = gen_parts.summands[j].inclusion          # t -> gen
        proj_j = gQi[goffs[j]:goffs[j + 1]]              # gen -> t
        rows = Qi[off:off + d]                           # x -> s
        cols = Q[:, off:off + d]                         # s -> x
        embed[k * dg:(k + 1) * dg] = (inc_j @ phi @ rows) % p
        retract[:, k * dg:(k + 1) * dg] = (cols @ phi_inv @ proj_j) % p
        off += d
    return r, embed % p, retract % p


def power(m: Module, r: int) -> Module:
    return direct_sum(*([m] * r)) if r else zero_module(m.algebra)


# ---------------------------------------------------------------- the *-step


def _pair_middles(U: Universe, a: tuple, b: tuple, pair_cache: dict, counter: list, budget: int):
    """Distinct middle terms of extensions of ``b`` by ``a``: {combo: class coefficients}."""
    key = (a, b)
    if key in pair_cache:
        return pair_cache[key]
    sp = U.ext_space(b, a)
    out = {}
    if sp.dim:
        counter[0] += ext_cost(sp.dim, U.algebra.p)
        if counter[0] > budget:
            raise BudgetExceeded(f"extension search needs more than {budget} middle terms", counter[0])
        for c in _projective_points(la.eye(sp.dim), U.algebra.p):
            y = sp.cls(c).middle_term().middle
            combo, _ = U.normal_form(y)
            if combo is not None and combo not in out:
                out[combo] = tuple(int(v) for v in c)
    pair_cache[key] = out
    return out


def splits(U: Universe, combo: tuple, slack: int):
    """All (X, X') with X + X' = combo, dim X <= D and X' a universe module of dim <= slack."""
    n = len(combo)
    seen = set()
    for r in range(n + 1):
        for pad_pos in itertools.combinations(range(n), r):
            pad = tuple(combo[i] for i in pad_pos)
            if pad in seen:
                continue
            seen.add(pad)
            rest = list(combo)
            for i in pad:
                rest.remove(i)
            x = tuple(rest)
            dp = U.combo_dim(pad)
            if dp <= min(slack, U.D) and U.combo_dim(x) <= U.D:
                yield x, pad


def ext_step(U: Universe, prev, base, slack: int = DEFAULT_SLACK, budget: int = DEFAULT_BUDGET,
             pair_cache: dict | None = None):
    """Support of add(prev * base) on the universe.

    ``prev`` and ``base`` are supports (sets of indecomposable indices) of
    add-closed member sets.  Returns ``(support, witnesses, work)``.
    """
    pair_cache = {} if pair_cache is None else pair_cache
    prev, base = tuple(sorted(prev)), tuple(sorted(base))
    witnesses = {}
    for t in base:
        witnesses[t] = ("base",)
    for t in prev:
        witnesses[t] = ("lift",)     # X in prev: 0 -> X -> X -> 0 -> 0
    found = set(prev) | set(base)
    target = set(range(len(U.indecomposables)))
    counter = [0]
    if found != target and prev and base:
        limit = U.D + slack
        a_list = members_from(U, prev)
        b_list = members_from(U, base)
        for a in a_list:
            da = U.combo_dim(a)
            for b in b_list:
                if da + U.combo_dim(b) > limit:
                    continue
                for combo, coeffs in _pair_middles(U, a, b, pair_cache, counter, budget).items():
                    for x, pad in splits(U, combo, slack):
                        for t in sorted(set(x) - found):
                            found.add(t)
                            witnesses[t] = ("ext", a, b, coeffs, combo, x, pad)
                if found == target:
                    break
            if found == target:
                break
    return tuple(sorted(found)), witnesses, counter[0]


# ---------------------------------------------------------------- the ledger


@dataclass
class Params:
    D: int
    slack: int = DEFAULT_SLACK
    gen_bound: int | None = None
    cap: int = LEVEL_CAP
    budget: int = DEFAULT_BUDGET

    def stamp(self) -> dict:
        return {"D": self.D, "slack": self.slack, "generator_bound": self.gen_bound,
                "level_cap": self.cap, "budget": self.budget}


class Ledger:
    """Levels [M]_0, [M]_1, ... of one generator on one universe."""

    def __init__(self, universe: Universe, generator: Module, slack: int = DEFAULT_SLACK,
                 budget: int = DEFAULT_BUDGET, cap: int = LEVEL_CAP, pair_cache=None):
        self.universe = universe
        self.generator = universe.lift(generator)
        self.slack = slack
        self.budget = budget
        self.cap = cap
        self.store = CertStore(universe)
        self.levels: list[tuple] = [()]             # I_n, with I_0 = {} ([M]_0 = {0})
        self.witness: dict = {}                      # (n, indec) -> construction data
        self.work = 0
        self.pair_cache = pair_cache if pair_cache is not None else {}
        self._gen_parts = universe.decomposition(self.generator) if self.generator.dim else None
        self.levels.append(universe.support(self.generator))

    @property
    def all_indecs(self) -> tuple:
        return tuple(range(len(self.universe.indecomposables)))

    def members(self, n: int) -> list[tuple]:
        if n == 0:
            return [()]
        return members_from(self.universe, self.level(n))

    def level(self, n: int) -> tuple:
        while len(self.levels) <= n:
            self._step()
        return self.levels[n]

    def _step(self):
        n = len(self.levels)
        prev = self.levels[n - 1]
        if n > self.cap:
            self.levels.append(prev)
            return
        new, wit, work = ext_step(self.universe, prev, self.levels[1], self.slack,
                                  budget=self.budget - self.work, pair_cache=self.pair_cache)
        self.work += work
        for t, w in wit.items():
            self.witness[(n, t)] = w
        self.levels.append(new)

    def gen_time(self):
        """Least n with the universe inside [M]_{n+1}, or None."""
        target = set(self.all_indecs)
        for n in range(0, self.cap + 1):
            lvl = self.level(n + 1)
            if set(lvl) >= target:
                return n
            if lvl == self.level(n):
                return None          # fixpoint: nothing new will ever appear
        return None

    # ------------------------------------------------ certificates

    def certify_member(self, combo: tuple, n: int) -> int:
        """Certificate id for ``combo`` in [M]_n (must be a computed member)."""
        combo = tuple(combo)
        st = self.store
        key = ("member", n, combo)
        got = st.lookup(key)
        if got is not None:
            return got
        U = self.universe
        if not set(combo) <= set(self.level(n)):
            raise ValidationError(f"{combo} is not a computed member of level {n}")
        x = U.build(combo)
        mid = st.module_id(x)
        if n == 0 or not combo:
            return st.add({"kind": "zero", "level": n, "module": mid}, key)
        if n == 1:
            r, emb, ret = add_witness(x, self.generator, self._gen_parts)
            return st.add({"kind": "add", "level": 1, "module": mid,
                           "generator": st.module_id(self.generator), "copies": r,
                           "embed": emb, "retract": ret}, key)
        if set(combo) <= set(self.level(n - 1)):
            return st.add({"kind": "lift", "level": n, "module": mid,
                           "of": self.certify_member(combo, n - 1)}, key)
        # X is a summand of the sum of the middle-layer members holding its summands
        parts, blocks = [], []
        for t in combo:
            cid, xcombo = self._certify_indec(t, n)
            parts.append(cid)
            blocks.append(xcombo)
        z_dim = sum(U.combo_dim(b) for b in blocks)
        emb = la.zeros(z_dim, x.dim)
        ret = la.zeros(x.dim, z_dim)
        zoff = 0
        xoff = 0
        for t, b in zip(combo, blocks):
            pos = 0
            for i in b:
                if i == t:
                    break
                pos += U.dims[i]
            d = U.dims[t]
            emb[zoff + pos:zoff + pos + d, xoff:xoff + d] = la.eye(d)
            ret[xoff:xoff + d, zoff + pos:zoff + pos + d] = la.eye(d)
            zoff += U.combo_dim(b)
            xoff += d
        return st.add({"kind": "sum", "level": n, "module": mid, "parts": parts,
                       "embed": emb, "retract": ret}, key)

    def _certify_indec(self, t: int, n: int):
        """Certificate of a middle-layer member X of level n with ``t`` among its summands."""
        U = self.universe
        w = self.witness.get((n, t))
        if w is None:
            self.level(n)
            w = self.witness[(n, t)]
        if w[0] in ("lift", "base"):
            x = (t,)
            return self.certify_member(x, n), x
        _, a, b, coeffs, combo, x, pad = w
        st = self.store
        key = ("ext", n, a, b, coeffs, x, pad)
        got = st.lookup(key)
        if got is not None:
            return got, x
        sp = U.ext_space(b, a)
        ext = sp.cls(coeffs).middle_term()
        got_combo, phi = U.normal_form(ext.middle)
        # phi: Y -> build(combo); reorder blocks to X + X'
        perm = _block_permutation(U, got_combo, list(x) + list(pad))
        iso = (perm @ phi) % U.algebra.p
        f = (iso @ ext.f.matrix) % U.algebra.p
        g = (ext.g.matrix @ la.inverse(iso, U.algebra.p)) % U.algebra.p
        node = {"kind": "ext", "level": n, "module": st.module_id(U.build(x)),
                "padding": st.module_id(U.build(pad)) if pad else None,
                "sub": st.module_id(U.build(a)), "quot": st.module_id(U.build(b)),
                "f": f, "g": g,
                "sub_cert": self.certify_member(a, n - 1),
                "quot_cert": self.certify_member(b, 1)}
        return st.add(node, key), x


def _block_permutation(U: Universe, src: tuple, dst: list) -> np.ndarray:
    """Permutation matrix from the block order ``src`` to the block order ``dst``."""
    dims = U.dims
    src_off, pos = [], 0
    for i in src:
        src_off.append(pos)
        pos += dims[i]
    used = [False] * len(src)
    P = la.zeros(pos, pos)
    row = 0
    for i in dst:
        k = next(k for k, s in enumerate(src) if s == i and not used[k])
        used[k] = True
        d = dims[i]
        P[row:row + d, src_off[k]:src_off[k] + d] = la.eye(d)
        row += d
    return P


# ---------------------------------------------------------------- replay


def _intertwines(src: Module, dst: Module, f: np.ndarray) -> bool:
    p = src.p
    if f.shape != (dst.dim, src.dim):
        return False
    return bool(np.all((dst.action @ f) % p == (f @ src.action) % p))


def _degrees_ok(src: Module, dst: Module, f: np.ndarray) -> bool:
    if not (src.graded and dst.graded):
        return True
    return all(dst.degrees[a] == src.degrees[b] for a, b in zip(*np.nonzero(f)))


def _map_ok(src, dst, f) -> bool:
    return _intertwines(src, dst, f) and _degrees_ok(src, dst, f)


def _sum(store: "CertStore", ids) -> Module:
    mods = [store.modules[i] for i in ids if i is not None]
    mods = [m for m in mods if m.dim]
    if not mods:
        any_mod = next(iter(store.modules.values()))
        return zero_module(any_mod.algebra, any_mod.grading if any_mod.graded else None)
    return direct_sum(*mods)


def replay(store: CertStore, node_id: int | None = None) -> list[str]:
    """Re-verify certificates from scratch; returns the failures (empty = all good)."""
    failures: list[str] = []
    done: dict[int, bool] = {}

    def check(i: int) -> bool:
        if i in done:
            return done[i]
        n = store.nodes[i]
        kind, lvl = n["kind"], n["level"]
        x = store.modules[n["module"]]
        ok = True

        def fail(msg):
            nonlocal ok
            ok = False
            failures.append(f"certificate {i} ({kind}, level {lvl}): {msg}")

        p = x.p
        if kind == "zero":
            if x.dim:
                fail("zero certificate for a nonzero module")
        elif kind == "add":
            if lvl != 1:
                fail("summand certificates live at level 1")
            g = store.modules[n["generator"]]
            gr = power(g, n["copies"])
            emb, ret = np.asarray(n["embed"]), np.asarray(n["retract"])
            if not (_map_ok(x, gr, emb) and _map_ok(gr, x, ret)):
                fail("embedding or retraction is not a module map")
            elif not np.array_equal((ret @ emb) % p, la.eye(x.dim)):
                fail("retraction o embedding != id")
        elif kind == "lift":
            sub = store.nodes[n["of"]]
            if sub["level"] != lvl - 1 or sub["module"] != n["module"]:
                fail("lift does not point one level down at the same module")
            elif not check(n["of"]):
                fail("lower certificate fails")
        elif kind == "sum":
            parts = [store.nodes[c] for c in n["parts"]]
            z = _sum(store, [c["module"] for c in parts])
            emb, ret = np.asarray(n["embed"]), np.asarray(n["retract"])
            if any(c["level"] != lvl for c in parts):
                fail("parts certified at the wrong level")
            if not (_map_ok(x, z, emb) and _map_ok(z, x, ret)):
                fail("embedding or retraction is not a module map")
            elif not np.array_equal((ret @ emb) % p, la.eye(x.dim)):
                fail("retraction o embedding != id")
            for c in n["parts"]:
                if not check(c):
                    fail(f"part {c} fails")
        elif kind == "ext":
            mid = _sum(store, [n["module"], n.get("padding")])
            a = store.modules[n["sub"]]
            b = store.modules[n["quot"]]
            f, g = np.asarray(n["f"]), np.asarray(n["g"])
            if not (_map_ok(a, mid, f) and _map_ok(mid, b, g)):
                fail("maps are not module maps")
            else:
                if la.rank(f, p) != a.dim:
                    fail("first map not injective")
                if la.rank(g, p) != b.dim:
                    fail("second map not surjective")
                if np.any((g @ f) % p):
                    fail("composite is not zero")
                if a.dim + b.dim != mid.dim:
                    fail("not exact in the middle")
            sc, qc = store.nodes[n["sub_cert"]], store.nodes[n["quot_cert"]]
            if sc["level"] != lvl - 1 or sc["module"] != n["sub"]:
                fail("submodule certificate mismatch")
            if qc["level"] != 1 or qc["module"] != n["quot"]:
                fail("quotient certificate mismatch")
            if not check(n["sub_cert"]) or not check(n["quot_cert"]):
                fail("end term certificates fail")
        else:
            fail("unknown certificate kind")
        done[i] = ok
        return ok

    ids = range(len(store.nodes)) if node_id is None else [node_id]
    for i in ids:
        check(i)
    return failures


def transport_store(store: CertStore, keep_degrees: bool = True) -> CertStore:
    """Rewrite a covering-algebra store in terms of graded modules, optionally forgetting degrees."""
    U = store.universe
    cov = U.covering
    if cov is None:
        raise ValidationError("store is not over a covering algebra")
    p = U.algebra.p
    new = CertStore(U)
    conv = {}
    for key, m in store.modules.items():
        g, Q = from_covering(m, cov)
        if not keep_degrees:
            g = g.forget()
        conv[key] = (g, Q, la.inverse(Q, p))
        new.modules[key] = g

    def Q_of(keys):
        blocks = [conv[k][1] for k in keys if k is not None and conv[k][0].dim]
        return la.block_diag(blocks) if blocks else la.zeros(0, 0)

    def T(mat, src_Q, dst_Q):
        return (la.inverse(dst_Q, p) @ np.asarray(mat) @ src_Q) % p if dst_Q.size or src_Q.size else \
            np.asarray(mat)

    for n in store.nodes:
        m = dict(n)
        kind = n["kind"]
        Qx = conv[n["module"]][1]
        if kind == "add":
            Qg = la.block_diag([conv[n["generator"]][1]] * n["copies"]) if n["copies"] else la.zeros(0, 0)
            m["embed"] = T(n["embed"], Qx, Qg)
            m["retract"] = T(n["retract"], Qg, Qx)
        elif kind == "sum":
            Qz = Q_of([store.nodes[c]["module"] for c in n["parts"]])
            m["embed"] = T(n["embed"], Qx, Qz)
            m["retract"] = T(n["retract"], Qz, Qx)
        elif kind == "ext":
            Qm = Q_of([n["module"], n.get("padding")])
            m["f"] = T(n["f"], conv[n["sub"]][1], Qm)
            m["g"] = T(n["g"], Qm, conv[n["quot"]][1])
        new.nodes.append(m)
    # module keys are kept so that references stay valid
    return new


# ---------------------------------------------------------------- results


@dataclass
class GenTimeResult:
    value: int | None
    ledger: Ledger
    params: Params
    relative: bool = True

    def to_json(self) -> dict:
        L = self.ledger
        U = L.universe
        return {
            "value": self.value,
            "semantics": "bounded: relative to universe, slack and level cap",
            "parameters": self.params.stamp(),
            "graded": U.is_graded,
            "universe": [{"digest": m.key, "dim": m.dim} for m in U.indecomposables],
            "generator_support": list(L.level(1)),
            "levels": [list(l) for l in L.levels],
        }


def gen_time_bounded(m: Module, universe: Universe, slack: int = DEFAULT_SLACK,
                     cap: int = LEVEL_CAP, budget: int = DEFAULT_BUDGET, pair_cache=None) -> GenTimeResult:
    ledger = Ledger(universe, m, slack, budget, cap, pair_cache)
    value = ledger.gen_time()
    return GenTimeResult(value, ledger, Params(universe.D, slack, None, cap, budget))


def add_closure(m: Module, universe: Universe) -> list[tuple]:
    return members_from(universe, universe.support(universe.lift(m)))


def bracket_n(m: Module, n: int, universe: Universe, slack: int = DEFAULT_SLACK,
              budget: int = DEFAULT_BUDGET) -> list[tuple]:
    return Ledger(universe, m, slack, budget).members(n)


def certify_all(result: GenTimeResult, n: int | None = None) -> dict:
    """Certificates for every universe member at level ``n`` (default: gen time + 1)."""
    L = result.ledger
    n = (result.value + 1) if n is None else n
    return {combo: L.certify_member(combo, n) for combo in L.members(n)}


@dataclass
class ExtDimResult:
    value: int | None
    witness: tuple | None            # support of the best generator
    result: GenTimeResult | None
    candidates: int
    params: Params


def _maximal_supports(dims: list[int], bound: int | None) -> list[tuple]:
    n = len(dims)
    if bound is None or sum(dims) <= bound:
        return [tuple(range(n))]
    out = []
    for r in range(n, 0, -1):
        for s in itertools.combinations(range(n), r):
            if sum(dims[i] for i in s) > bound:
                continue
            if any(set(s) < set(t) for t in out):
                continue
            if all(sum(dims[i] for i in s) + dims[j] > bound for j in range(n) if j not in s):
                out.append(s)
    return out


def ext_dim_bounded(universe: Universe, gen_bound: int | None = None, slack: int = DEFAULT_SLACK,
                    cap: int = LEVEL_CAP, budget: int = DEFAULT_BUDGET) -> ExtDimResult:
    """Least bounded generation time over generators with summands in the universe.

    Only maximal supports need checking: add(M), and with it every level,
    grows with the support of M.
    """
    cands = _maximal_supports(universe.dims, gen_bound)
    best = None
    cache: dict = {}
    for s in cands:
        gen = universe.build(s)
        r = gen_time_bounded(gen, universe, slack, cap, budget, cache)
        if r.value is not None and (best is None or r.value < best.value):
            best = r
            best_s = s
            if r.value == 0:
                break
    params = Params(universe.D, slack, gen_bound, cap, budget)
    if best is None:
        return ExtDimResult(None, None, None, len(cands), params)
    return ExtDimResult(best.value, best_s, best, len(cands), params)


# ---------------------------------------------------------------- Loewy certificate


@dataclass
class LoewyCertificate:
    bound: int
    loewy_length: int
    generator: Module
    store: CertStore
    members: dict                     # combo -> certificate id at level LL


def loewy_length(a: Algebra) -> int:
    return radical_series(regular_module(a))[1]


def loewy_generator(a: Algebra) -> Module:
    """The radical-layer generator: the sum of A/J^i for i = 1..LL."""
    reg = regular_module(a)
    series, LL = radical_series(reg)
    parts = [quotient(reg, series[i]).module for i in range(1, LL + 1)]
    return direct_sum(*parts)


def loewy_generator_certificate(universe: Universe) -> LoewyCertificate:
    a = universe.algebra
    LL = loewy_length(a)
    gen = loewy_generator(a)
    gparts = decompose(gen, graded=False)
    store = CertStore(universe)
    gid = store.module_id(gen)
    zero = zero_module(a)

    def add_node(x: Module) -> int:
        key = ("add", x.key)
        got = store.lookup(key)
        if got is not None:
            return got
        w = add_witness(x, gen, gparts)
        if w is None:
            raise ValidationError("semisimple layer is not a summand of the generator")
        r, emb, ret = w
        return store.add({"kind": "add", "level": 1, "module": store.module_id(x), "generator": gid,
                          "copies": r, "embed": emb, "retract": ret}, key)

    def chain(x: Module) -> tuple[int, int]:
        """(certificate id, level) certifying x in [gen]_{LL(x)}."""
        key = ("chain", x.key)
        got = store.lookup(key)
        if got is not None:
            return got, store.nodes[got]["level"]
        p = x.p
        rad = _radical_cols(x)
        if rad.shape[1] == 0:
            zid = store.add({"kind": "zero", "level": 0, "module": store.module_id(zero)}, ("zero",))
            node = {"kind": "ext", "level": 1, "module": store.module_id(x), "padding": None,
                    "sub": store.module_id(zero), "quot": store.module_id(x),
                    "f": la.zeros(x.dim, 0), "g": la.eye(x.dim),
                    "sub_cert": zid, "quot_cert": add_node(x)}
            return store.add(node, key), 1
        sub = submodule(x, rad)
        q = quotient(x, sub.inclusion)
        sid, slvl = chain(sub.module)
        node = {"kind": "ext", "level": slvl + 1, "module": store.module_id(x), "padding": None,
                "sub": store.module_id(sub.module), "quot": store.module_id(q.module),
                "f": sub.inclusion % p, "g": q.projection % p,
                "sub_cert": sid, "quot_cert": add_node(q.module)}
        return store.add(node, key), slvl + 1

    members = {}
    for combo in universe.members:
        x = universe.build(combo)
        cid, lvl = chain(x)
        while lvl < LL:
            cid = store.add({"kind": "lift", "level": lvl + 1, "module": store.module_id(x), "of": cid},
                            ("lift", x.key, lvl + 1))
            lvl += 1
        members[combo] = cid
    return LoewyCertificate(LL - 1, LL, gen, store, members)


def _radical_cols(x: Module) -> np.ndarray:
    from .modules import radical
    return radical(x)


# ---------------------------------------------------------------- graded vs ungraded


def forgetful_compare(m: Module, D: int, slack: int = DEFAULT_SLACK, window=None,
                      budget: int = DEFAULT_BUDGET, cap: int = LEVEL_CAP) -> dict:
    """Bounded gr.gen.time(m) and gen.time(m) side by side, with certificate replays."""
    if not m.graded:
        raise ValidationError("forgetful comparison needs a graded module")
    ga = m.grading
    ug = Universe.graded(ga, D, window=window, budget=budget)
    uu = Universe.ungraded(ga, D, budget=budget)
    rg = gen_time_bounded(m, ug, slack, cap, budget)
    ru = gen_time_bounded(m.forget(), uu, slack, cap, budget)
    out = {"gr_gen_time": rg.value, "gen_time": ru.value, "equal": rg.value == ru.value,
           "parameters": Params(D, slack, None, cap, budget).stamp()}
    for name, r in (("graded", rg), ("ungraded", ru)):
        if r.value is not None:
            certify_all(r)
            out[f"{name}_certificates"] = len(r.ledger.store.nodes)
            out[f"{name}_replay_failures"] = len(replay(r.ledger.store))
        else:
            out[f"{name}_certificates"] = 0
            out[f"{name}_replay_failures"] = 0
    if rg.value is not None:
        forgotten = transport_store(rg.ledger.store, keep_degrees=False)
        out["forgotten_replay_failures"] = len(replay(forgotten))
    out["graded_universe_size"] = len(ug.indecomposables)
    out["ungraded_universe_size"] = len(uu.indecomposables)
    return out
