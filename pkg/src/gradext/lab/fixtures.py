"""Shipped instances.  ``build_all`` constructs them from scratch; the JSON
files under ``gradext/fixtures`` are its canonical output and ``load``
reads them back, re-checking any finite-type certificate by enumeration."""

from __future__ import annotations

import argparse
from importlib import resources
from pathlib import Path

import numpy as np

from ..algebra import (
    GradedAlgebra,
    GradeGroup,
    field_algebra,
    group_algebra,
    matrix_algebra,
    path_algebra_quotient,
    product_algebra,
    skew_group_algebra,
    trivially_graded,
)
from ..decomp import indecomposable_catalogue
from ..equivalences import matrix_context
from ..errors import ValidationError
from .documents import Instance, parse_document, serialize

PACKAGE = "gradext"


def _c2() -> GradeGroup:
    return GradeGroup.cyclic(2)


def _cert(n: int, d: int) -> dict:
    return {"indecomposables": n, "max_dim": d}


def _builders():
    c2 = _c2()
    f2c2 = group_algebra(c2, 2, name="F2[C2]")
    ident = np.eye(2, dtype=int)

    def v4():
        return skew_group_algebra(f2c2.algebra, c2, {0: ident, 1: ident}, name="F2[C2xC2]")

    def skew():
        x2 = path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0))]], p=3, name="F3[x]/(x^2)").algebra
        return skew_group_algebra(x2, c2, {0: ident, 1: np.diag([1, 2])}, name="F3[x]/(x^2)*C2")

    def m2c2():
        m = matrix_algebra(field_algebra(2), 2, name="M2(F2)")
        return GradedAlgebra(m, c2, [0, 1, 1, 0])

    def nak():
        return path_algebra_quotient(1, [(0, 0)], [[(1, (0, 0, 0))]], p=2, name="F2[x]/(x^3)")

    return {
        "c2_group_algebra_p2": (lambda: f2c2, _cert(2, 2), "group algebra of C2 over F2, graded by C2"),
        "c3_group_algebra_p2": (lambda: group_algebra(GradeGroup.cyclic(3), 2, name="F2[C3]"), None,
                                "group algebra of C3 over F2, graded by C3"),
        "v4_group_algebra_p2_c2graded": (v4, None,
                                         "F2[C2 x C2] as the skew group algebra of F2[C2] by a trivial "
                                         "C2 action, graded by the second factor"),
        "skew_f3_x2_c2": (skew, None, "F3[x]/(x^2) * C2 with x -> -x, graded by C2"),
        "m2_f2_c2graded": (m2c2, _cert(1, 2), "M2(F2) with E_ab in degree a + b mod 2"),
        "kronecker_p2_zgraded": (lambda: path_algebra_quotient(2, [(0, 1), (0, 1)], p=2, name="Kronecker"),
                                 None, "Kronecker algebra over F2, graded by path length"),
        "t2_f2_zgraded": (lambda: path_algebra_quotient(2, [(0, 1)], p=2, name="T2(F2)"), _cert(3, 2),
                          "lower triangular 2x2 matrices over F2, graded by path length"),
        "nakayama_x3_p2": (nak, _cert(3, 3), "F2[x]/(x^3), graded by path length"),
        "semisimple_product_p2": (lambda: product_algebra(field_algebra(2), field_algebra(2), name="F2xF2"),
                                  _cert(2, 1), "F2 x F2"),
        "m2_f2c2_c2graded": (lambda: matrix_algebra(f2c2, 2, name="M2(F2[C2])"), None,
                             "M2(F2[C2]) graded entrywise by C2"),
        "morita_f2": (lambda: matrix_context(trivially_graded(field_algebra(2)), 2), None,
                      "row and column context between F2 and M2(F2)"),
        "morita_f2c2": (lambda: matrix_context(f2c2, 2), None,
                        "row and column context between F2[C2] and M2(F2[C2]), graded by C2"),
    }


FIXTURES = tuple(sorted(_builders()))


def build(name: str) -> Instance:
    table = _builders()
    if name not in table:
        raise ValidationError(f"unknown fixture {name!r}")
    make, cert, text = table[name]
    obj = make()
    meta = {"provenance": "gradext.lab.fixtures", "description": text}
    if cert is not None:
        meta["finite_type"] = cert
    kind = "context" if hasattr(obj, "phi") else "algebra"
    return Instance(kind, name, obj, meta)


def build_all() -> dict[str, Instance]:
    return {n: build(n) for n in FIXTURES}


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise ValidationError(f"unknown fixture {name!r}")
    return resources.files(PACKAGE).joinpath("fixtures", f"{name}.json").read_text(encoding="utf-8")


def verify_certificate(inst: Instance) -> None:
    """Raise unless enumeration finds exactly the certified number of indecomposables."""
    cert = inst.finite_type
    if cert is None:
        return
    a = inst.obj.algebra if isinstance(inst.obj, GradedAlgebra) else inst.obj
    cat = indecomposable_catalogue(a, cert["max_dim"])
    found = len(cat.indecomposables)
    # one dimension past the bound must add nothing new
    beyond = len(indecomposable_catalogue(a, cert["max_dim"] + 1).indecomposables)
    if found != cert["indecomposables"] or beyond != found:
        raise ValidationError(f"finite-type certificate of {inst.name} fails: "
                              f"{found} (and {beyond}) indecomposables, certified "
                              f"{cert['indecomposables']}", "/metadata/finite_type")


_LOADED: dict[str, Instance] = {}


def load(name: str, verify: bool = True) -> Instance:
    if name not in _LOADED:
        inst = parse_document(fixture_text(name))
        if inst.name != name:
            raise ValidationError(f"fixture file names {inst.name!r}, expected {name!r}", "/name")
        if verify:
            verify_certificate(inst)
        _LOADED[name] = inst
    return _LOADED[name]


def write_all(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, inst in build_all().items():
        path = directory / f"{name}.json"
        path.write_text(serialize(inst), encoding="utf-8")
        out.append(path)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="regenerate the shipped fixture files")
    ap.add_argument("directory", nargs="?", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args(argv)
    for path in write_all(Path(args.directory)):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
