"""JSON instance documents: canonical serialization and validated parsing.

Matrices are flat row-major residue arrays.  Structure constants are the
sorted sparse list ``[i, j, k, c]`` meaning ``b_i b_j`` has coefficient ``c``
on ``b_k``.  ``dumps`` is canonical, so a canonical document survives
``parse -> serialize`` byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .. import linalg as la
from ..algebra import Algebra, Bimodule, GradedAlgebra, GradeGroup
from ..equivalences import MoritaContextData
from ..errors import ContextAxiomViolation, GradextError, ParseError, ValidationError
from ..modules import Module

FORMAT = "gradext/1"
KINDS = ("algebra", "module", "bimodule", "context")


# ---------------------------------------------------------------- canonical JSON


def _flat(x) -> bool:
    return isinstance(x, list) and all(not isinstance(v, (list, dict)) for v in x)


def _enc(x, indent: int) -> str:
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_enc(x[k], indent + 2)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if _flat(x):
            return "[" + ", ".join(json.dumps(v) for v in x) + "]"
        return "[\n" + ",\n".join(inner + _enc(v, indent + 2) for v in x) + "\n" + pad + "]"
    return json.dumps(x)


def dumps(obj) -> str:
    """Canonical text: sorted keys, two-space indent, flat lists on one line."""
    return _enc(_plain(obj), 0) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", "") from exc


# ---------------------------------------------------------------- field readers


def _need(d: dict, key: str, ptr: str, kinds):
    if not isinstance(d, dict):
        raise ValidationError("expected an object", ptr)
    if key not in d:
        raise ValidationError(f"missing field {key!r}", ptr)
    v = d[key]
    if not isinstance(v, kinds) or (isinstance(v, bool) and kinds is int):
        raise ValidationError(f"wrong type for {key!r}", f"{ptr}/{key}")
    return v


def _int(d, key, ptr, lo=0) -> int:
    v = _need(d, key, ptr, int)
    if v < lo:
        raise ValidationError(f"{key!r} must be >= {lo}", f"{ptr}/{key}")
    return v


def _residues(v, p: int, length: int, ptr: str) -> np.ndarray:
    if not isinstance(v, list):
        raise ValidationError("expected an array", ptr)
    if len(v) != length:
        raise ValidationError(f"expected {length} entries, got {len(v)}", ptr)
    for i, x in enumerate(v):
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < p:
            raise ValidationError(f"entry is not a residue mod {p}", f"{ptr}/{i}")
    return np.array(v, dtype=la.DTYPE)


def _degrees(v, n: int, group: GradeGroup, ptr: str) -> list[int]:
    if not isinstance(v, list) or len(v) != n:
        raise ValidationError(f"expected {n} degrees", ptr)
    for i, x in enumerate(v):
        if not isinstance(x, int) or isinstance(x, bool):
            raise ValidationError("degree must be an integer", f"{ptr}/{i}")
        if group.is_finite and not 0 <= x < group.order:
            raise ValidationError("degree is not a group element", f"{ptr}/{i}")
    return list(v)


def _group(v, ptr: str) -> GradeGroup:
    if v == "Z":
        return GradeGroup.integers()
    table = _need(v, "table", ptr, list)
    ident = v.get("identity", 0)
    try:
        return GradeGroup(table, ident, v.get("names"))
    except (ValidationError, ValueError, TypeError) as exc:
        raise ValidationError(str(exc), f"{ptr}/table") from exc


def _issues(issues, ptr: str, what: str):
    if issues:
        first = issues[0]
        raise ValidationError(f"{what} fails validation: {first}", f"{ptr}/{first.get('kind', '')}")


# ---------------------------------------------------------------- parsing


@dataclass
class Instance:
    kind: str
    name: str
    obj: object
    metadata: dict = field(default_factory=dict)

    @property
    def finite_type(self):
        return self.metadata.get("finite_type")


def _algebra(d: dict, ptr: str):
    p = _int(d, "p", ptr, 2)
    if not la.is_prime(p) or p > la.MAX_PRIME:
        raise ValidationError(f"p = {p} is not a supported prime", f"{ptr}/p")
    n = _int(d, "dim", ptr)
    unit = _residues(_need(d, "unit", ptr, list), p, n, f"{ptr}/unit")
    consts = _need(d, "structure_constants", ptr, list)
    rows = []
    for pos, c in enumerate(consts):
        q = f"{ptr}/structure_constants/{pos}"
        if not isinstance(c, list) or len(c) != 4 or not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
            raise ValidationError("structure constant must be [i, j, k, c]", q)
        for slot, idx in enumerate(c[:3]):
            if not 0 <= idx < n:
                raise ValidationError(f"basis index {idx} out of range", f"{q}/{slot}")
        if not 0 <= c[3] < p:
            raise ValidationError("coefficient is not a residue", f"{q}/3")
        rows.append(c)
    names = d.get("basis_names")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        raise ValidationError(f"expected {n} basis names", f"{ptr}/basis_names")
    alg = Algebra.from_structure_constants(p, n, rows, unit, names, d.get("name", ""))
    _issues(alg.validate(), ptr, "algebra")
    g = d.get("grading")
    if g is None:
        return alg
    group = _group(_need(g, "group", f"{ptr}/grading", (str, dict)), f"{ptr}/grading/group")
    degs = _degrees(_need(g, "degrees", f"{ptr}/grading", list), n, group, f"{ptr}/grading/degrees")
    ga = GradedAlgebra(alg, group, degs)
    _issues(ga.validate(), f"{ptr}/grading", "grading")
    return ga


def _split(a):
    return (a.algebra, a) if isinstance(a, GradedAlgebra) else (a, None)


def _module(d: dict, ptr: str, a=None) -> Module:
    if a is None:
        a = _algebra(_need(d, "algebra", ptr, dict), f"{ptr}/algebra")
    alg, ga = _split(a)
    k = _int(d, "dim", ptr)
    act = _residues(_need(d, "action", ptr, list), alg.p, alg.dim * k * k, f"{ptr}/action")
    degs = d.get("degrees")
    if degs is not None:
        if ga is None:
            raise ValidationError("degrees given over an ungraded algebra", f"{ptr}/degrees")
        degs = _degrees(degs, k, ga.group, f"{ptr}/degrees")
    m = Module(alg, act.reshape(alg.dim, k, k), degs, ga if degs is not None else None, d.get("name", ""))
    _issues(m.validate(), ptr, "module")
    return m


def _bimodule(d: dict, ptr: str, left=None, right=None) -> Bimodule:
    if left is None:
        left = _algebra(_need(d, "left_algebra", ptr, dict), f"{ptr}/left_algebra")
    if right is None:
        right = _algebra(_need(d, "right_algebra", ptr, dict), f"{ptr}/right_algebra")
    la_, lg = _split(left)
    ra, rg = _split(right)
    k = _int(d, "dim", ptr)
    L = _residues(_need(d, "left", ptr, list), la_.p, la_.dim * k * k, f"{ptr}/left")
    R = _residues(_need(d, "right", ptr, list), ra.p, ra.dim * k * k, f"{ptr}/right")
    degs = d.get("degrees")
    if degs is not None:
        grp = (lg or rg)
        if grp is None:
            raise ValidationError("degrees given over ungraded algebras", f"{ptr}/degrees")
        degs = _degrees(degs, k, grp.group, f"{ptr}/degrees")
    b = Bimodule(la_, ra, L.reshape(la_.dim, k, k), R.reshape(ra.dim, k, k), degs,
                 lg if degs is not None else None, rg if degs is not None else None, d.get("name", ""))
    _issues(b.validate(), ptr, "bimodule")
    return b


def _context(d: dict, ptr: str) -> MoritaContextData:
    r = _algebra(_need(d, "r", ptr, dict), f"{ptr}/r")
    s = _algebra(_need(d, "s", ptr, dict), f"{ptr}/s")
    m = _bimodule(_need(d, "m", ptr, dict), f"{ptr}/m", r, s)
    n = _bimodule(_need(d, "n", ptr, dict), f"{ptr}/n", s, r)
    ra, rg = _split(r)
    sa, sg = _split(s)
    phi = _residues(_need(d, "phi", ptr, list), ra.p, m.dim * n.dim * ra.dim, f"{ptr}/phi")
    psi = _residues(_need(d, "psi", ptr, list), ra.p, n.dim * m.dim * sa.dim, f"{ptr}/psi")
    from ..algebra import check_context_axioms
    try:
        check_context_axioms(ra, sa, m, n, phi, psi)
    except ContextAxiomViolation as exc:
        raise ValidationError(f"context axioms fail: {exc}", f"{ptr}/phi") from exc
    return MoritaContextData(ra, sa, m, n, phi.reshape(m.dim, n.dim, ra.dim), psi.reshape(n.dim, m.dim, sa.dim),
                             rg, sg, d.get("name", ""))


def parse_document(text: str) -> Instance:
    doc = loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("document must be an object", "")
    fmt = doc.get("format")
    if fmt != FORMAT:
        raise ValidationError(f"unsupported format {fmt!r}", "/format")
    kind = _need(doc, "kind", "", str)
    if kind not in KINDS:
        raise ValidationError(f"unknown kind {kind!r}", "/kind")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ValidationError("metadata must be an object", "/metadata")
    body = _need(doc, "body", "", dict)
    reader = {"algebra": _algebra, "module": _module, "bimodule": _bimodule, "context": _context}[kind]
    try:
        obj = reader(body, "/body")
    except ValidationError:
        raise
    except GradextError as exc:
        raise ValidationError(str(exc), "/body") from exc
    return Instance(kind, doc.get("name", ""), obj, meta)


def parse_instance(text: str):
    return parse_document(text).obj


# ---------------------------------------------------------------- serialization


def _group_doc(g: GradeGroup):
    if not g.is_finite:
        return "Z"
    return {"table": g.table.tolist(), "identity": g.identity, "names": list(g.names)}


def algebra_doc(a) -> dict:
    alg, ga = _split(a)
    d = {"p": alg.p, "dim": alg.dim, "unit": alg.unit.tolist(), "name": alg.name,
         "basis_names": list(alg.names),
         "structure_constants": sorted([list(c) for c in alg.structure_constants()])}
    if ga is not None:
        d["grading"] = {"group": _group_doc(ga.group), "degrees": list(ga.degrees)}
    return d


def module_doc(m: Module, with_algebra: bool = True) -> dict:
    d = {"dim": m.dim, "action": m.action.reshape(-1).tolist(), "name": m.name}
    if m.graded:
        d["degrees"] = list(m.degrees)
    if with_algebra:
        d["algebra"] = algebra_doc(m.grading if m.graded else m.algebra)
    return d


def bimodule_doc(b: Bimodule, with_algebras: bool = True) -> dict:
    d = {"dim": b.dim, "left": b.left.reshape(-1).tolist(), "right": b.right.reshape(-1).tolist(),
         "name": b.name}
    if b.graded:
        d["degrees"] = list(b.degrees)
    if with_algebras:
        d["left_algebra"] = algebra_doc(b.left_grading or b.left_algebra)
        d["right_algebra"] = algebra_doc(b.right_grading or b.right_algebra)
    return d


def context_doc(c: MoritaContextData) -> dict:
    return {"r": algebra_doc(c.r_grading or c.r), "s": algebra_doc(c.s_grading or c.s),
            "m": bimodule_doc(c.m, False), "n": bimodule_doc(c.n, False),
            "phi": np.asarray(c.phi).reshape(-1).tolist(), "psi": np.asarray(c.psi).reshape(-1).tolist(),
            "name": c.name}


def kind_of(obj) -> str:
    if isinstance(obj, (Algebra, GradedAlgebra)):
        return "algebra"
    if isinstance(obj, Module):
        return "module"
    if isinstance(obj, Bimodule):
        return "bimodule"
    if isinstance(obj, MoritaContextData):
        return "context"
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def document(obj, name: str = "", metadata: dict | None = None) -> dict:
    kind = kind_of(obj)
    body = {"algebra": algebra_doc, "module": module_doc, "bimodule": bimodule_doc,
            "context": context_doc}[kind](obj)
    return {"format": FORMAT, "kind": kind, "name": name, "metadata": metadata or {}, "body": body}


def serialize(obj, name: str = "", metadata: dict | None = None) -> str:
    if isinstance(obj, Instance):
        return dumps(document(obj.obj, obj.name, obj.metadata))
    return dumps(document(obj, name, metadata))
