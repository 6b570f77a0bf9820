"""The ``compute`` commands as functions from an instance and options to a JSON-ready dict."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..algebra import Algebra, GradedAlgebra, is_strongly_graded
from ..decomp import DEFAULT_BUDGET, decompose
from ..equivalences import MoritaContextData, verify_dade_equivalence
from ..errors import ValidationError
from ..extdim import (
    DEFAULT_SLACK,
    LEVEL_CAP,
    Universe,
    certify_all,
    ext_dim_bounded,
    gen_time_bounded,
    loewy_generator,
    replay,
)
from ..modules import (
    Module,
    direct_sum,
    ext1,
    get_covering,
    hom_dim,
    projective_indecomposables,
    regular_module,
    simple_modules,
    to_covering,
)
from . import cache, exact
from . import fixtures as fx
from .documents import Instance, parse_document


@dataclass
class Options:
    max_dim: int = 4
    slack: int = DEFAULT_SLACK
    gen_bound: int | None = None
    cap: int = LEVEL_CAP
    seed: int = 0
    graded: bool = False
    window: tuple | None = None
    budget: int = DEFAULT_BUDGET
    module: str = "regular"
    target: str | None = None

    def stamp(self) -> dict:
        d = asdict(self)
        d["window"] = None if self.window is None else list(self.window)
        return d


def parse_window(text: str | None) -> tuple | None:
    """``"w"`` means degrees 0..w, ``"a:b"`` means a..b."""
    if text is None:
        return None
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":", 1))
        else:
            lo, hi = 0, int(text)
    except ValueError:
        raise ValidationError(f"bad window {text!r}; use w or a:b") from None
    if hi < lo:
        raise ValidationError(f"empty window {text!r}")
    return tuple(range(lo, hi + 1))


def resolve_instance(ref: str) -> Instance:
    if ref in fx.FIXTURES:
        return fx.load(ref)
    path = Path(ref)
    if not path.exists():
        raise ValidationError(f"{ref!r} is neither a shipped fixture nor a file")
    return parse_document(path.read_text(encoding="utf-8"))


def algebras(inst: Instance) -> tuple[Algebra, GradedAlgebra | None]:
    obj = inst.obj
    if isinstance(obj, GradedAlgebra):
        return obj.algebra, obj
    if isinstance(obj, Algebra):
        return obj, None
    if isinstance(obj, Module):
        return obj.algebra, obj.grading
    raise ValidationError(f"instance {inst.name!r} of kind {inst.kind} is not an algebra")


class Context:
    """Algebra, optional grading and the universe an invocation works in."""

    def __init__(self, inst: Instance, opt: Options):
        self.inst, self.opt = inst, opt
        self.a, self.ga = algebras(inst)
        if opt.graded and self.ga is None:
            raise ValidationError(f"instance {inst.name!r} carries no grading")
        self.work = get_covering(self.ga, opt.window).algebra if opt.graded else self.a
        cache.load_catalogue(self.work)
        self._universe = None

    @property
    def universe(self) -> Universe:
        if self._universe is None:
            o = self.opt
            if o.graded:
                self._universe = Universe.graded(self.ga, o.max_dim, window=o.window, budget=o.budget)
            else:
                self._universe = Universe.ungraded(self.a, o.max_dim, budget=o.budget)
            cache.store_catalogue(self.work)
        return self._universe

    def module(self, spec: str) -> Module:
        """Comma-separated direct sum of ``regular``, ``loewy``, ``simple:i``,
        ``projective:i``, ``indec:i`` (universe index) or a module document path."""
        parts = [self._one(s.strip()) for s in spec.split(",") if s.strip()]
        if not parts:
            raise ValidationError("empty module specification")
        return parts[0] if len(parts) == 1 else direct_sum(*parts)

    def _one(self, s: str) -> Module:
        w = self.work
        if s == "regular":
            if self.opt.graded:
                return to_covering(regular_module(self.ga), get_covering(self.ga, self.opt.window))
            return regular_module(w)
        if s == "loewy":
            return loewy_generator(w)
        kind, _, idx = s.partition(":")
        pools = {"simple": lambda: simple_modules(w),
                 "projective": lambda: projective_indecomposables(w).modules,
                 "indec": lambda: self.universe.indecomposables}
        if kind in pools and idx.isdigit():
            pool = pools[kind]()
            if int(idx) >= len(pool):
                raise ValidationError(f"{s}: only {len(pool)} available")
            return pool[int(idx)]
        path = Path(s)
        if path.exists():
            m = parse_document(path.read_text(encoding="utf-8")).obj
            if not isinstance(m, Module):
                raise ValidationError(f"{s} is not a module document")
            if m.graded and self.opt.graded:
                return to_covering(m, get_covering(self.ga, self.opt.window))
            if m.algebra.digest != w.digest:
                raise ValidationError(f"{s} is a module over another algebra")
            return m
        raise ValidationError(f"unknown module specification {s!r}")


def _head(command: str, ctx: Context) -> dict:
    return {"command": command, "instance": ctx.inst.name, "parameters": ctx.opt.stamp()}


def _mod_json(m: Module) -> dict:
    return {"dim": m.dim, "digest": m.key}


def ext_dim(ctx: Context) -> dict:
    o, U = ctx.opt, ctx.universe
    r = ext_dim_bounded(U, o.gen_bound, o.slack, o.cap, o.budget)
    out = _head("ext-dim", ctx)
    out["value"] = r.value
    out["universe"] = {"indecomposables": len(U.indecomposables), "dims": U.dims}
    out["candidates"] = r.candidates
    out["witness"] = None if r.witness is None else {
        "support": list(r.witness), "summands": len(r.witness), "dims": [U.dims[i] for i in r.witness]}
    if r.result is not None:
        out["certificates"] = _replay_all(r.result)
    decl = ctx.inst.finite_type
    if not o.graded:
        b = exact.ext_dim_bound(ctx.a, decl, o.budget, o.slack)
        out["true_value_bound"] = b.bound.to_json()
    return out


def _replay_all(result) -> dict:
    ids = certify_all(result)
    fails = replay(result.ledger.store)
    return {"members": len(ids), "nodes": len(result.ledger.store.nodes), "replay_failures": fails}


def gen_time(ctx: Context) -> dict:
    o = ctx.opt
    m = ctx.module(o.module)
    r = gen_time_bounded(m, ctx.universe, o.slack, o.cap, o.budget)
    out = _head("gen-time", ctx)
    out["module"] = _mod_json(m)
    out.update(r.to_json())
    if r.value is not None:
        out["certificates"] = _replay_all(r)
    return out


def decompose_cmd(ctx: Context) -> dict:
    m = ctx.module(ctx.opt.module)
    d = decompose(m, graded=False, budget=ctx.opt.budget)
    out = _head("decompose", ctx)
    out["module"] = _mod_json(m)
    out["summands"] = [{"dim": pm.dim, "multiplicity": k, "digest": pm.key} for pm, k in d.parts]
    out["dims"] = [s.module.dim for s in d.summands]
    return out


def _pair(ctx: Context) -> tuple[Module, Module]:
    if ctx.opt.target is None:
        raise ValidationError("this command needs --target")
    return ctx.module(ctx.opt.module), ctx.module(ctx.opt.target)


def hom(ctx: Context) -> dict:
    m, n = _pair(ctx)
    out = _head("hom", ctx)
    out.update(source=_mod_json(m), target=_mod_json(n), dim=hom_dim(m, n))
    return out


def ext1_cmd(ctx: Context) -> dict:
    m, n = _pair(ctx)
    out = _head("ext1", ctx)
    out.update(source=_mod_json(m), target=_mod_json(n), dim=ext1(m, n).dim)
    return out


def dade(ctx: Context) -> dict:
    if ctx.ga is None:
        raise ValidationError("dade needs a graded algebra")
    out = _head("dade", ctx)
    out.update(verify_dade_equivalence(ctx.ga, ctx.opt.max_dim).to_json())
    return out


def strongcheck(ctx: Context) -> dict:
    if ctx.ga is None:
        raise ValidationError("strongcheck needs a graded algebra")
    v = is_strongly_graded(ctx.ga)
    out = _head("strongcheck", ctx)
    out.update(strongly_graded=v.strongly_graded, witness=None if v.witness is None else list(v.witness),
               product_span_dim=v.deficient_span_dim, component_dim=v.component_dim, reason=v.reason)
    return out


COMMANDS = {"ext-dim": ext_dim, "gen-time": gen_time, "decompose": decompose_cmd, "hom": hom,
            "ext1": ext1_cmd, "dade": dade, "strongcheck": strongcheck}


def compute(command: str, ref: str, opt: Options) -> dict:
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    np.random.seed(opt.seed)
    inst = resolve_instance(ref)
    if isinstance(inst.obj, MoritaContextData):
        raise ValidationError("compute works on algebras; contexts run through the claim suites")
    return COMMANDS[command](Context(inst, opt))


__all__ = ["COMMANDS", "Options", "compute", "parse_window"]
