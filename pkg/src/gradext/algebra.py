"""Finite-dimensional unital F_p-algebras, group gradings and bimodules.

An :class:`Algebra` is stored as a dense structure-constant tensor
``mult[i, j] = e_i * e_j`` (a coordinate vector).  Gradings live on a
homogeneous basis: :class:`GradedAlgebra` attaches one group element per
basis vector.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import (
    ContextAxiomViolation,
    InfiniteDimensional,
    ModulusMismatch,
    NotAdmissible,
    NotAutomorphism,
    NotHomomorphism,
    NotIdempotent,
    NotHomogeneous,
    ValidationError,
)


class GradeGroup:
    """A finite group given by a Cayley table, or the integers under addition.

    Finite group elements are the indices ``0..n-1``.
    """

    def __init__(self, table=None, identity: int = 0, names=None, integer: bool = False):
        self.integer = integer
        if integer:
            self.table = None
            self.identity = 0
            self.inverse_table = None
            self.names = None
            return
        t = np.asarray(table, dtype=int)
        n = t.shape[0]
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise ValidationError("Cayley table must be a square table of element indices")
        self.table = t
        self.identity = int(identity)
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        for a in range(n):
            if t[self.identity, a] != a or t[a, self.identity] != a:
                raise ValidationError(f"element {identity} is not an identity (fails at {a})")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a, b], c] != t[a, t[b, c]]:
                raise ValidationError(f"table is not associative at ({a}, {b}, {c})")
        inv = []
        for a in range(n):
            row = [b for b in range(n) if t[a, b] == self.identity]
            if len(row) != 1 or t[row[0], a] != self.identity:
                raise ValidationError(f"element {a} has no two-sided inverse")
            inv.append(row[0])
        self.inverse_table = inv

    @classmethod
    def integers(cls) -> "GradeGroup":
        return cls(integer=True)

    @classmethod
    def cyclic(cls, n: int) -> "GradeGroup":
        return cls([[(a + b) % n for b in range(n)] for a in range(n)], 0,
                   names=["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)])

    @classmethod
    def trivial(cls) -> "GradeGroup":
        return cls([[0]], 0, names=["e"])

    @classmethod
    def product(cls, g: "GradeGroup", h: "GradeGroup") -> "GradeGroup":
        n, m = g.order, h.order
        table = [[g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(n * m)]
                 for a in range(n * m)]
        names = [f"({x},{y})" for x in g.names for y in h.names]
        return cls(table, g.identity * m + h.identity, names=names)

    @property
    def is_finite(self) -> bool:
        return not self.integer

    @property
    def order(self):
        return None if self.integer else self.table.shape[0]

    @property
    def elements(self):
        if self.integer:
            raise ValueError("the integer group has no finite element list")
        return list(range(self.order))

    def mul(self, a: int, b: int) -> int:
        if self.integer:
            return int(a) + int(b)
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        if self.integer:
            return -int(a)
        return self.inverse_table[a]

    def is_abelian(self) -> bool:
        return self.integer or bool(np.array_equal(self.table, self.table.T))

    def name(self, a: int) -> str:
        return str(a) if self.integer else self.names[a]

    def key(self):
        return ("Z",) if self.integer else ("finite", self.identity, self.table.tobytes())

    def __eq__(self, other) -> bool:
        return isinstance(other, GradeGroup) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return "GradeGroup(Z)" if self.integer else f"GradeGroup(order={self.order})"


class Algebra:
    """Associative unital algebra over F_p given by structure constants."""

    def __init__(self, p: int, mult, unit, names=None, name: str = ""):
        la.check_prime(p)
        self.p = int(p)
        mult = np.asarray(mult, dtype=la.DTYPE) % p
        n = mult.shape[0] if mult.ndim == 3 else 0
        if mult.size == 0:
            mult = np.zeros((n, n, n), dtype=la.DTYPE)
        if mult.shape != (n, n, n):
            raise ValidationError(f"structure tensor must have shape (n, n, n), got {mult.shape}")
        mult.setflags(write=False)
        self.mult = mult
        self.dim = n
        self.unit = np.asarray(unit, dtype=la.DTYPE).reshape(n) % p
        self.names = list(names) if names is not None else [f"b{i}" for i in range(n)]
        self.name = name

    @classmethod
    def from_structure_constants(cls, p, dim, constants, unit, names=None, name=""):
        mult = np.zeros((dim, dim, dim), dtype=la.DTYPE)
        for pos, (i, j, k, c) in enumerate(constants):
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise ValidationError(f"basis index {idx} out of range", f"/structure_constants/{pos}")
            mult[i, j, k] = (mult[i, j, k] + c) % p
        return cls(p, mult, unit, names, name)

    def structure_constants(self) -> list[tuple[int, int, int, int]]:
        return [(int(i), int(j), int(k), int(self.mult[i, j, k]))
                for i, j, k in zip(*np.nonzero(self.mult))]

    @cached_property
    def left_mats(self) -> np.ndarray:
        """``left_mats[i]`` is the matrix of ``x -> e_i x``."""
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right_mats(self) -> np.ndarray:
        """``right_mats[j]`` is the matrix of ``x -> x e_j``."""
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=la.DTYPE)
        y = np.asarray(y, dtype=la.DTYPE)
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def left_matrix(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=la.DTYPE), self.left_mats, axes=1) % self.p

    def right_matrix(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=la.DTYPE), self.right_mats, axes=1) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=la.DTYPE)
        v[i] = 1
        return v

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.p}:{self.dim}:".encode())
        h.update(np.ascontiguousarray(self.mult).tobytes())
        h.update(self.unit.tobytes())
        return h.hexdigest()[:16]

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra together with the unit."""
        p = self.p
        gens: list[int] = []
        span = la.row_basis(self.unit.reshape(1, -1), p)

        def close(span, gens):
            while True:
                new = [span]
                for g in gens:
                    new.append((span @ self.right_mats[g].T) % p)
                    new.append((span @ self.left_mats[g].T) % p)
                nxt = la.row_basis(np.vstack(new), p)
                if nxt.shape[0] == span.shape[0]:
                    return nxt
                span = nxt

        for i in range(self.dim):
            if span.shape[0] == self.dim:
                break
            if la.in_span(span.T, self.basis_vector(i), p):
                continue
            gens.append(i)
            span = close(span, gens)
        return tuple(gens)

    def validate(self) -> list[dict]:
        issues = []
        n, p, m = self.dim, self.p, self.mult
        for i in range(n):
            lhs = (m[i] @ m.reshape(n, n * n)).reshape(n, n, n) % p
            rhs = np.einsum("jkm,ml->jkl", m, m[i]) % p
            bad = np.argwhere(np.any(lhs != rhs, axis=2))
            for j, k in bad[:5]:
                issues.append({"kind": "associativity", "triple": [i, int(j), int(k)]})
        left = np.tensordot(self.unit, m, axes=([0], [0])) % p
        right = np.tensordot(self.unit, m, axes=([0], [1])) % p
        for i in range(n):
            if not np.array_equal(left[i], self.basis_vector(i)) or not np.array_equal(right[i], self.basis_vector(i)):
                issues.append({"kind": "unit", "basis": i})
        return issues

    def opposite(self) -> "Algebra":
        return Algebra(self.p, self.mult.transpose(1, 0, 2), self.unit, self.names, self.name + "^op")

    def sub_on_indices(self, idx, name="") -> "Algebra":
        """Subalgebra spanned by a subset of basis vectors (closure is the caller's job)."""
        idx = list(idx)
        sub = self.mult[np.ix_(idx, idx, idx)]
        return Algebra(self.p, sub, self.unit[idx], [self.names[i] for i in idx], name)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.transpose(1, 0, 2)))

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, p={self.p}, dim={self.dim})"


class GradedAlgebra:
    """An algebra with a degree (group element) for every basis vector."""

    def __init__(self, algebra: Algebra, group: GradeGroup, degrees):
        self.algebra = algebra
        self.group = group
        self.degrees = tuple(int(d) for d in degrees)
        if len(self.degrees) != algebra.dim:
            raise ValidationError("one degree per basis vector required", "/grading/degrees")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def support(self) -> list[int]:
        return sorted(set(self.degrees))

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha256(self.algebra.digest.encode())
        h.update(repr(self.group.key()).encode())
        h.update(repr(self.degrees).encode())
        return h.hexdigest()[:16]

    def validate(self) -> list[dict]:
        return validate_graded_algebra(self)

    def component(self, sigma: int) -> list[int]:
        return homogeneous_component(self, sigma)

    def component_elements(self) -> list[int]:
        """Group elements to range over: the whole finite group, or the Z-support."""
        return self.group.elements if self.group.is_finite else self.support

    @cached_property
    def identity_component(self):
        """``(R_e as an Algebra, basis indices of R_e)``."""
        idx = self.component(self.group.identity)
        return self.algebra.sub_on_indices(idx, name=f"{self.name}_e"), idx

    def __repr__(self) -> str:
        return f"GradedAlgebra({self.name or '?'}, dim={self.dim}, group={self.group!r})"


def trivially_graded(a: Algebra, group: GradeGroup | None = None) -> GradedAlgebra:
    group = group or GradeGroup.trivial()
    return GradedAlgebra(a, group, [group.identity] * a.dim)


def validate_graded_algebra(a: GradedAlgebra) -> list[dict]:
    """All violated associativity/unit/grading conditions; empty means valid."""
    issues = a.algebra.validate()
    g, deg, m = a.group, a.degrees, a.algebra.mult
    for i, j, k in zip(*np.nonzero(m)):
        if deg[k] != g.mul(deg[i], deg[j]):
            issues.append({"kind": "grading", "triple": [int(i), int(j), int(k)]})
    for i in np.flatnonzero(a.algebra.unit):
        if deg[i] != g.identity:
            issues.append({"kind": "unit-degree", "basis": int(i)})
    return issues


def homogeneous_component(a: GradedAlgebra, sigma: int) -> list[int]:
    return [i for i, d in enumerate(a.degrees) if d == sigma]


def _product_span(a: GradedAlgebra, left: list[int], right: list[int]) -> np.ndarray:
    m = a.algebra.mult
    if not left or not right:
        return la.zeros(0, a.dim)
    prods = m[np.ix_(left, right)].reshape(-1, a.dim)
    return la.row_basis(prods, a.p)


@dataclass
class StrongGradingVerdict:
    strongly_graded: bool
    witness: tuple | None = None
    deficient_span_dim: int | None = None
    component_dim: int | None = None
    reason: str = ""


def is_strongly_graded(a: GradedAlgebra) -> StrongGradingVerdict:
    g = a.group
    if g.integer:
        # finite support: some R_s or R_-s vanishes, so R_s R_-s misses 1
        support = set(a.degrees)
        s = 1 if (1 not in support or -1 not in support) else max(abs(d) for d in support) + 1
        return StrongGradingVerdict(
            False, (s, -s), 0, len(homogeneous_component(a, 0)),
            reason=f"integer grading with finite support {sorted(support)}",
        )
    for s in g.elements:
        for t in g.elements:
            target = homogeneous_component(a, g.mul(s, t))
            span = _product_span(a, homogeneous_component(a, s), homogeneous_component(a, t))
            if span.shape[0] != len(target):
                return StrongGradingVerdict(False, (s, t), int(span.shape[0]), len(target),
                                            reason="product of components is a proper subspace")
    return StrongGradingVerdict(True)


def unit_decomposition(a: GradedAlgebra, sigma: int):
    """Coefficients ``c`` with ``1 = sum c[i, j] u_i v_j``, ``u_i`` in R_sigma, ``v_j`` in R_{sigma^-1}."""
    left = homogeneous_component(a, sigma)
    right = homogeneous_component(a, a.group.inv(sigma))
    if not left or not right:
        return None
    prods = a.algebra.mult[np.ix_(left, right)].reshape(-1, a.dim)
    x = la.solve(prods.T, a.algebra.unit, a.p)
    if x is None:
        return None
    return {"left": left, "right": right, "coefficients": x.reshape(len(left), len(right)).tolist()}


# ---------------------------------------------------------------- bimodules


class Bimodule:
    """An (A, B)-bimodule: left action matrices for A, right action matrices for B.

    ``right[j]`` is the matrix of ``v -> v * f_j`` acting on column vectors, so
    ``right`` is an anti-representation of B.
    """

    def __init__(self, left_algebra: Algebra, right_algebra: Algebra, left, right,
                 degrees=None, left_grading: GradedAlgebra | None = None,
                 right_grading: GradedAlgebra | None = None, name: str = ""):
        if left_algebra.p != right_algebra.p:
            raise ModulusMismatch("bimodule algebras over different primes")
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        p = left_algebra.p
        self.left = np.asarray(left, dtype=la.DTYPE) % p
        self.right = np.asarray(right, dtype=la.DTYPE) % p
        self.dim = self.left.shape[1] if self.left.ndim == 3 else 0
        if self.left.size == 0:
            self.left = np.zeros((left_algebra.dim, self.dim, self.dim), dtype=la.DTYPE)
        if self.right.size == 0:
            self.right = np.zeros((right_algebra.dim, self.dim, self.dim), dtype=la.DTYPE)
        self.degrees = None if degrees is None else tuple(int(d) for d in degrees)
        self.left_grading = left_grading
        self.right_grading = right_grading
        self.name = name

    @property
    def p(self) -> int:
        return self.left_algebra.p

    @property
    def graded(self) -> bool:
        return self.degrees is not None

    def validate(self) -> list[dict]:
        issues = []
        p, n = self.p, self.dim
        A, B = self.left_algebra, self.right_algebra
        if self.left.shape != (A.dim, n, n) or self.right.shape != (B.dim, n, n):
            return [{"kind": "shape"}]
        for i, j in itertools.product(range(A.dim), repeat=2):
            want = np.tensordot(A.mult[i, j], self.left, axes=1) % p
            if not np.array_equal((self.left[i] @ self.left[j]) % p, want):
                issues.append({"kind": "left-action", "pair": [i, j]})
        if not np.array_equal(np.tensordot(A.unit, self.left, axes=1) % p, la.eye(n)):
            issues.append({"kind": "left-unit"})
        for i, j in itertools.product(range(B.dim), repeat=2):
            want = np.tensordot(B.mult[i, j], self.right, axes=1) % p
            if not np.array_equal((self.right[j] @ self.right[i]) % p, want):
                issues.append({"kind": "right-action", "pair": [i, j]})
        if not np.array_equal(np.tensordot(B.unit, self.right, axes=1) % p, la.eye(n)):
            issues.append({"kind": "right-unit"})
        for i, j in itertools.product(range(A.dim), range(B.dim)):
            if not np.array_equal((self.left[i] @ self.right[j]) % p, (self.right[j] @ self.left[i]) % p):
                issues.append({"kind": "commute", "pair": [i, j]})
        if self.graded and self.left_grading is not None and self.right_grading is not None:
            g = self.left_grading.group
            for i in range(A.dim):
                for v, u in zip(*np.nonzero(self.left[i].T)):
                    if self.degrees[u] != g.mul(self.left_grading.degrees[i], self.degrees[v]):
                        issues.append({"kind": "left-grading", "basis": [i, int(v)]})
            for j in range(B.dim):
                for v, u in zip(*np.nonzero(self.right[j].T)):
                    if self.degrees[u] != g.mul(self.degrees[v], self.right_grading.degrees[j]):
                        issues.append({"kind": "right-grading", "basis": [j, int(v)]})
        return issues

    def __repr__(self) -> str:
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_bimodule(a: Algebra | GradedAlgebra) -> Bimodule:
    ga = a if isinstance(a, GradedAlgebra) else None
    alg = a.algebra if ga else a
    return Bimodule(alg, alg, alg.left_mats, alg.right_mats,
                    degrees=ga.degrees if ga else None, left_grading=ga, right_grading=ga,
                    name=f"{alg.name} regular")


# ---------------------------------------------------------------- constructors


def field_algebra(p: int) -> Algebra:
    return Algebra(p, np.ones((1, 1, 1), dtype=la.DTYPE), [1], ["1"], name=f"F{p}")


def group_algebra(g: GradeGroup, p: int, name: str = "") -> GradedAlgebra:
    n = g.order
    mult = np.zeros((n, n, n), dtype=la.DTYPE)
    for s in range(n):
        for t in range(n):
            mult[s, t, g.mul(s, t)] = 1
    unit = np.zeros(n, dtype=la.DTYPE)
    unit[g.identity] = 1
    alg = Algebra(p, mult, unit, names=list(g.names), name=name or f"F{p}[G{n}]")
    return GradedAlgebra(alg, g, range(n))


def truncated_polynomial(p: int, n: int, degree_group: GradeGroup | None = None) -> GradedAlgebra:
    """``F_p[x]/(x^n)`` on the basis 1, x, ..., x^(n-1), Z-graded by ``deg x = 1``."""
    mult = np.zeros((n, n, n), dtype=la.DTYPE)
    for i in range(n):
        for j in range(n - i):
            mult[i, j, i + j] = 1
    unit = np.zeros(n, dtype=la.DTYPE)
    unit[0] = 1
    names = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, n)]
    alg = Algebra(p, mult, unit, names, name=f"F{p}[x]/(x^{n})")
    return GradedAlgebra(alg, degree_group or GradeGroup.integers(), range(n))


def product_algebra(*algebras: Algebra, name: str = "") -> Algebra:
    p = algebras[0].p
    n = sum(a.dim for a in algebras)
    mult = np.zeros((n, n, n), dtype=la.DTYPE)
    unit = np.zeros(n, dtype=la.DTYPE)
    names = []
    off = 0
    for a in algebras:
        if a.p != p:
            raise ModulusMismatch("product of algebras over different primes")
        sl = slice(off, off + a.dim)
        mult[sl, sl, sl] = a.mult
        unit[sl] = a.unit
        names += [f"{nm}@{len(names) and off}" for nm in a.names]
        off += a.dim
    return Algebra(p, mult, unit, names, name=name or " x ".join(a.name for a in algebras))


def matrix_algebra(a: Algebra | GradedAlgebra, n: int, name: str = "") -> GradedAlgebra | Algebra:
    """``M_n(A)`` on the basis ``E_rc (x) a_i``; a graded ``A`` grades entries entrywise."""
    ga = a if isinstance(a, GradedAlgebra) else None
    alg = ga.algebra if ga else a
    d = alg.dim
    N = n * n * d

    def idx(r, c, i):
        return (r * n + c) * d + i

    mult = np.zeros((N, N, N), dtype=la.DTYPE)
    for r, c, s in itertools.product(range(n), repeat=3):
        for i in range(d):
            for j in range(d):
                v = alg.mult[i, j]
                for k in np.flatnonzero(v):
                    mult[idx(r, c, i), idx(c, s, j), idx(r, s, k)] = v[k]
    unit = np.zeros(N, dtype=la.DTYPE)
    for r in range(n):
        for i in range(d):
            unit[idx(r, r, i)] = alg.unit[i]
    names = [f"E{r+1}{c+1}*{alg.names[i]}" for r in range(n) for c in range(n) for i in range(d)]
    out = Algebra(alg.p, mult, unit, names, name=name or f"M{n}({alg.name})")
    if ga is None:
        return out
    degrees = [ga.degrees[i] for r in range(n) for c in range(n) for i in range(d)]
    return GradedAlgebra(out, ga.group, degrees)


def skew_group_algebra(a: Algebra, g: GradeGroup, action, name: str = "") -> GradedAlgebra:
    """``A * G`` with basis ``e_i (x) s`` (index ``s * dim A + i``) and
    ``(x (x) s)(y (x) t) = x s(y) (x) st``.

    ``action`` maps each group element to the matrix of an automorphism of A.
    """
    if not g.is_finite:
        raise ValidationError("skew group algebras need a finite group")
    p, d, n = a.p, a.dim, g.order
    mats = {s: np.asarray(action[s], dtype=la.DTYPE) % p for s in g.elements}
    for s, m in mats.items():
        if m.shape != (d, d) or la.inverse(m, p) is None:
            raise NotAutomorphism(f"action of {g.name(s)} is not invertible")
        if not np.array_equal(m @ a.unit % p, a.unit):
            raise NotAutomorphism(f"action of {g.name(s)} does not fix the unit")
        for i, j in itertools.product(range(d), repeat=2):
            if not np.array_equal(m @ a.mult[i, j] % p, a.multiply(m[:, i], m[:, j])):
                raise NotAutomorphism(f"action of {g.name(s)} is not multiplicative at ({i}, {j})")
    if not np.array_equal(mats[g.identity], la.eye(d)):
        raise NotHomomorphism("identity element must act trivially")
    for s, t in itertools.product(g.elements, repeat=2):
        if not np.array_equal(mats[s] @ mats[t] % p, mats[g.mul(s, t)]):
            raise NotHomomorphism(f"action is not a homomorphism at ({g.name(s)}, {g.name(t)})")
    N = d * n
    mult = np.zeros((N, N, N), dtype=la.DTYPE)
    for s, t in itertools.product(g.elements, repeat=2):
        st = g.mul(s, t)
        for i, j in itertools.product(range(d), repeat=2):
            v = a.multiply(a.basis_vector(i), mats[s][:, j])
            mult[s * d + i, t * d + j, st * d: st * d + d] = v
    unit = np.zeros(N, dtype=la.DTYPE)
    unit[g.identity * d: g.identity * d + d] = a.unit
    names = [f"{a.names[i]}*{g.name(s)}" for s in g.elements for i in range(d)]
    alg = Algebra(p, mult, unit, names, name=name or f"{a.name}*G{n}")
    return GradedAlgebra(alg, g, [s for s in g.elements for _ in range(d)])


def enveloping_algebra(a: Algebra, b: Algebra) -> Algebra:
    """``A (x) B^op`` on basis ``(i, j) -> i * dim B + j``."""
    if a.p != b.p:
        raise ModulusMismatch("enveloping algebra of algebras over different primes")
    da, db = a.dim, b.dim
    # (a_i (x) b_j)(a_k (x) b_l) = a_i a_k (x) b_l b_j
    t = np.einsum("ikm,ljn->ijklmn", a.mult, b.mult) % a.p
    mult = t.reshape(da * db, da * db, da * db)
    unit = np.kron(a.unit, b.unit)
    names = [f"{x}(x){y}" for x in a.names for y in b.names]
    return Algebra(a.p, mult, unit, names, name=f"{a.name}(x){b.name}^op")


def bimodule_to_module_actions(m: Bimodule) -> np.ndarray:
    """Action matrices of ``m`` as a left module over ``enveloping_algebra(A, B)``."""
    p = m.p
    return np.einsum("iab,jbc->ijac", m.left, m.right).reshape(-1, m.dim, m.dim) % p


def module_actions_to_bimodule(a: Algebra, b: Algebra, actions) -> tuple[np.ndarray, np.ndarray]:
    acts = np.asarray(actions).reshape(a.dim, b.dim, *np.asarray(actions).shape[1:])
    left = np.tensordot(acts, b.unit, axes=([1], [0])) % a.p
    right = np.tensordot(acts, a.unit, axes=([0], [0])) % a.p
    return left, right


def _blocks(dims):
    off, out = 0, []
    for d in dims:
        out.append(slice(off, off + d))
        off += d
    return out


def check_context_axioms(r: Algebra, s: Algebra, m: Bimodule, n: Bimodule, phi, psi):
    """Raise :class:`ContextAxiomViolation` unless (r, s, m, n, phi, psi) is a Morita context.

    ``phi[i, j]`` is the R-vector ``phi(m_i (x) n_j)``; ``psi[j, i]`` is ``psi(n_j (x) m_i)``.
    """
    p = r.p
    phi = np.asarray(phi, dtype=la.DTYPE).reshape(m.dim, n.dim, r.dim) % p
    psi = np.asarray(psi, dtype=la.DTYPE).reshape(n.dim, m.dim, s.dim) % p
    for name, bim, la_, ra in (("M", m, r, s), ("N", n, s, r)):
        if bim.left_algebra.digest != la_.digest or bim.right_algebra.digest != ra.digest:
            raise ContextAxiomViolation(f"{name} is a bimodule over the wrong algebras")
        bad = bim.validate()
        if bad:
            raise ContextAxiomViolation(f"{name} is not a bimodule: {bad[0]}", bad[0])
    dm, dn = m.dim, n.dim
    # phi balanced over S and an R-bimodule map
    for i in range(dm):
        for j in range(dn):
            for t in range(s.dim):
                lhs = np.tensordot(m.right[t][:, i], phi[:, j], axes=1) % p
                rhs = np.tensordot(n.left[t][:, j], phi[i], axes=1) % p
                if not np.array_equal(lhs, rhs):
                    raise ContextAxiomViolation("phi not S-balanced", ("phi-balanced", i, j, t))
            for t in range(r.dim):
                lhs = np.tensordot(m.left[t][:, i], phi[:, j], axes=1) % p
                if not np.array_equal(lhs, r.multiply(r.basis_vector(t), phi[i, j])):
                    raise ContextAxiomViolation("phi not left R-linear", ("phi-left", i, j, t))
                lhs = np.tensordot(n.right[t][:, j], phi[i], axes=1) % p
                if not np.array_equal(lhs, r.multiply(phi[i, j], r.basis_vector(t))):
                    raise ContextAxiomViolation("phi not right R-linear", ("phi-right", i, j, t))
    for j in range(dn):
        for i in range(dm):
            for t in range(r.dim):
                lhs = np.tensordot(n.right[t][:, j], psi[:, i], axes=1) % p
                rhs = np.tensordot(m.left[t][:, i], psi[j], axes=1) % p
                if not np.array_equal(lhs, rhs):
                    raise ContextAxiomViolation("psi not R-balanced", ("psi-balanced", j, i, t))
            for t in range(s.dim):
                lhs = np.tensordot(n.left[t][:, j], psi[:, i], axes=1) % p
                if not np.array_equal(lhs, s.multiply(s.basis_vector(t), psi[j, i])):
                    raise ContextAxiomViolation("psi not left S-linear", ("psi-left", j, i, t))
                lhs = np.tensordot(m.right[t][:, i], psi[j], axes=1) % p
                if not np.array_equal(lhs, s.multiply(psi[j, i], s.basis_vector(t))):
                    raise ContextAxiomViolation("psi not right S-linear", ("psi-right", j, i, t))
    # m psi(n (x) m') = phi(m (x) n) m'   and   n phi(m (x) n') = psi(n (x) m) n'
    for i, j, k in itertools.product(range(dm), range(dn), range(dm)):
        lhs = np.tensordot(psi[j, k], m.right, axes=1)[:, i] % p
        rhs = np.tensordot(phi[i, j], m.left, axes=1)[:, k] % p
        if not np.array_equal(lhs, rhs):
            raise ContextAxiomViolation("associativity m.psi(n,m') = phi(m,n).m' fails", (i, j, k))
    for j, i, k in itertools.product(range(dn), range(dm), range(dn)):
        lhs = np.tensordot(phi[i, k], n.right, axes=1)[:, j] % p
        rhs = np.tensordot(psi[j, i], n.left, axes=1)[:, k] % p
        if not np.array_equal(lhs, rhs):
            raise ContextAxiomViolation("associativity n.phi(m,n') = psi(n,m).n' fails", (j, i, k))
    return phi, psi


def morita_context_ring(r: Algebra, s: Algebra, m: Bimodule, n: Bimodule, phi, psi,
                        name: str = "") -> GradedAlgebra:
    """The ring of matrices ``[[r, m], [n, s]]``, Z-graded with m in degree 1 and n in degree -1."""
    phi, psi = check_context_axioms(r, s, m, n, phi, psi)
    p = r.p
    dims = [r.dim, s.dim, m.dim, n.dim]
    R, S, M, N = _blocks(dims)
    D = sum(dims)
    mult = np.zeros((D, D, D), dtype=la.DTYPE)
    mult[R, R, R] = r.mult
    mult[S, S, S] = s.mult
    for i in range(r.dim):      # r * m
        mult[R.start + i, M, M] = m.left[i].T
        mult[N, R.start + i, N] = n.right[i].T
    for t in range(s.dim):      # m * s, s * n
        mult[M, S.start + t, M] = m.right[t].T
        mult[S.start + t, N, N] = n.left[t].T
    mult[M, N, R] = phi
    mult[N, M, S] = psi
    unit = np.concatenate([r.unit, s.unit, np.zeros(m.dim + n.dim, dtype=la.DTYPE)])
    names = ([f"r:{x}" for x in r.names] + [f"s:{x}" for x in s.names]
             + [f"m{i}" for i in range(m.dim)] + [f"n{j}" for j in range(n.dim)])
    alg = Algebra(p, mult % p, unit, names, name=name or f"Ctx({r.name},{s.name})")
    degrees = [0] * (r.dim + s.dim) + [1] * m.dim + [-1] * n.dim
    return GradedAlgebra(alg, GradeGroup.integers(), degrees)


@dataclass
class Corner:
    algebra: Algebra
    inclusion: np.ndarray      # columns: corner basis as elements of the ambient algebra
    idempotent: np.ndarray
    grading: GradedAlgebra | None = None


def _check_idempotent(a: Algebra, w) -> np.ndarray:
    w = np.asarray(w, dtype=la.DTYPE) % a.p
    if not np.array_equal(a.multiply(w, w), w):
        raise NotIdempotent("w*w != w")
    return w


def two_sided_span(a: Algebra, x, y) -> np.ndarray:
    """Column basis of ``span{x a y : a in A}`` (x, y elements)."""
    Lx = a.left_matrix(x)
    Ry = a.right_matrix(y)
    return la.col_basis((Lx @ Ry) % a.p, a.p)


def corner_algebra(a: Algebra | GradedAlgebra, w) -> Corner:
    """The corner ``wAw`` with unit ``w``; graded input gives a graded corner."""
    ga = a if isinstance(a, GradedAlgebra) else None
    alg = ga.algebra if ga else a
    p = alg.p
    w = _check_idempotent(alg, w)
    degrees = None
    if ga is not None:
        supp = {ga.degrees[i] for i in np.flatnonzero(w)}
        if supp - {ga.group.identity}:
            raise NotHomogeneous("idempotent must be homogeneous of degree e")
        cols, degrees = [], []
        proj = (alg.left_matrix(w) @ alg.right_matrix(w)) % p
        for sigma in sorted(set(ga.degrees)):
            idx = homogeneous_component(ga, sigma)
            b = la.col_basis(proj[:, idx], p)
            cols.append(b)
            degrees += [sigma] * b.shape[1]
        inc = np.hstack(cols) if cols else la.zeros(alg.dim, 0)
    else:
        inc = two_sided_span(alg, w, w)
    k = inc.shape[1]
    mult = np.zeros((k, k, k), dtype=la.DTYPE)
    for i in range(k):
        for j in range(k):
            prod = alg.multiply(inc[:, i], inc[:, j])
            mult[i, j] = la.solve(inc, prod, p)
    unit = la.solve(inc, w, p)
    sub = Algebra(p, mult, unit, [f"c{i}" for i in range(k)], name=f"corner({alg.name})")
    grading = GradedAlgebra(sub, ga.group, degrees) if ga is not None else None
    return Corner(sub, inc, w, grading)


def path_algebra_quotient(num_vertices: int, arrows, relations=(), p: int = 2,
                          degree_rule="path-length", group: GradeGroup | None = None,
                          name: str = "", max_power: int = 32, max_paths: int = 4096) -> GradedAlgebra:
    """Bound quiver algebra ``kQ / I``.

    ``arrows`` is a list of ``(source, target)``; a path is a tuple of arrow
    indices in traversal order; relations are lists of ``(coefficient, path)``.
    Multiplication follows composition: ``x * y`` is "y then x", so left
    modules are quiver representations.  ``degree_rule`` is ``"path-length"``
    or a list giving each arrow's degree in ``group``.
    """
    arrows = [tuple(a) for a in arrows]
    rels = [[(int(c) % p, tuple(path)) for c, path in r] for r in relations]
    for ri, r in enumerate(rels):
        for c, path in r:
            if c and len(path) < 2:
                raise NotAdmissible(f"relation {ri} has a term of length {len(path)} < 2")
            for x, y in zip(path, path[1:]):
                if arrows[x][1] != arrows[y][0]:
                    raise ValidationError(f"relation {ri} contains a non-path {path}")

    def head(path, v):
        return v if not path else arrows[path[-1]][1]

    def tail(path, v):
        return v if not path else arrows[path[0]][0]

    def all_paths(max_len):
        out = [((), v) for v in range(num_vertices)]
        frontier = [((a,), None) for a in range(len(arrows))]
        length = 1
        while frontier and length <= max_len:
            out += frontier
            if len(out) > max_paths:
                raise InfiniteDimensional(f"more than {max_paths} paths of length <= {length}")
            nxt = []
            for path, _ in frontier:
                for b, (src, _tgt) in enumerate(arrows):
                    if src == arrows[path[-1]][1]:
                        nxt.append((path + (b,), None))
            frontier = nxt
            length += 1
        return out

    def concat(x, y):
        """x * y = y then x, or None."""
        (px, vx), (py, vy) = x, y
        if head(py, vy) != tail(px, vx):
            return None
        if not py:
            return x
        if not px:
            return y
        return (py + px, None)

    for L in range(2, max_power + 2):
        paths = all_paths(L)
        paths.sort(key=lambda t: (-len(t[0]), t[0], t[1] if t[1] is not None else -1))
        index = {t: i for i, t in enumerate(paths)}
        P = len(paths)

        def vec(terms):
            v = np.zeros(P, dtype=la.DTYPE)
            for c, t in terms:
                if t is not None and len(t[0]) <= L:
                    v[index[t]] = (v[index[t]] + c) % p
            return v

        gens = []
        for r in rels:
            for u in paths:
                for w_ in paths:
                    terms = []
                    for c, path in r:
                        core = (path, None)
                        a = concat(u, core)
                        b = concat(a, w_) if a is not None else None
                        terms.append((c, b))
                    v = vec(terms)
                    if v.any():
                        gens.append(v)
        ideal = la.row_basis(np.array(gens), p) if gens else la.zeros(0, P)
        # J^(L-1) inside I + J^L ?
        low = [i for i, t in enumerate(paths) if len(t[0]) < L]
        ideal_low = ideal[:, low].T
        top = [t for t in paths if len(t[0]) == L - 1]
        if all(la.in_span(ideal_low, vec([(1, t)])[low], p) for t in top):
            N = L - 1
            break
    else:
        raise InfiniteDimensional(f"no power J^N with N <= {max_power} vanishes in the quotient")

    # work modulo J^N: everything of length >= N is zero
    keep = [t for t in paths if len(t[0]) < N]
    kidx = {t: i for i, t in enumerate(keep)}
    K = len(keep)
    red = []
    for row in ideal:
        v = np.array([row[index[t]] for t in keep], dtype=la.DTYPE)
        if v.any():
            red.append(v)
    sub = la.row_basis(np.array(red), p).T if red else la.zeros(K, 0)
    proj, comp = la.complement_data(sub, K, p)
    basis = [keep[c] for c in comp]
    order = sorted(range(len(basis)), key=lambda i: (len(basis[i][0]), basis[i][0], basis[i][1] or 0))
    basis = [basis[i] for i in order]
    proj = proj[order]
    B = len(basis)
    mult = np.zeros((B, B, B), dtype=la.DTYPE)
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            z = concat(x, y)
            if z is None or len(z[0]) >= N:
                continue
            e = np.zeros(K, dtype=la.DTYPE)
            e[kidx[z]] = 1
            mult[i, j] = proj @ e % p
    unit = np.zeros(B, dtype=la.DTYPE)
    for v in range(num_vertices):
        e = np.zeros(K, dtype=la.DTYPE)
        e[kidx[((), v)]] = 1
        unit = (unit + proj @ e) % p

    def pname(t):
        path, v = t
        return f"e{v + 1}" if not path else "".join(f"a{x}" for x in reversed(path))

    alg = Algebra(p, mult, unit, [pname(t) for t in basis], name=name or "kQ/I")
    if degree_rule == "path-length":
        return GradedAlgebra(alg, group or GradeGroup.integers(), [len(t[0]) for t in basis])
    grp = group or GradeGroup.integers()
    degs = []
    for path, _ in basis:
        d = grp.identity
        for a in path:
            d = grp.mul(int(degree_rule[a]), d)
        degs.append(d)
    return GradedAlgebra(alg, grp, degs)


# ---------------------------------------------------------------- covering algebra


@dataclass
class CoveringAlgebra:
    """Algebra whose modules are the graded modules supported in ``window``.

    Built from basis symbols ``(i, x)`` standing for "``e_i`` applied to the
    degree-``x`` part", with ``(i, x)(j, y) = [x = deg(j) y] sum_k c_ijk (k, y)``.
    Products that pass through a degree outside the window are divided out, so
    the category really is "graded modules with support in the window".
    """

    graded: GradedAlgebra
    window: tuple
    algebra: Algebra
    symbols: list            # all (i, x) with x and deg(i) x in the window
    proj: np.ndarray         # symbol coordinates -> algebra coordinates
    basis: list              # symbols kept as the algebra basis

    def symbol_index(self):
        return {s: k for k, s in enumerate(self.symbols)}


def covering_algebra(ga: GradedAlgebra, window=None) -> CoveringAlgebra:
    from .errors import UnboundedSupport

    g = ga.group
    if window is None:
        if not g.is_finite:
            raise UnboundedSupport("integer gradings need an explicit support window")
        window = g.elements
    window = tuple(sorted(set(int(x) for x in window)))
    win = set(window)
    p, deg, m = ga.p, ga.degrees, ga.algebra.mult
    symbols = [(i, x) for x in window for i in range(ga.dim) if g.mul(deg[i], x) in win]
    index = {s: k for k, s in enumerate(symbols)}
    F = len(symbols)

    def prod_vec(i, x, j, y):
        v = np.zeros(F, dtype=la.DTYPE)
        if x != g.mul(deg[j], y):
            return v
        for k in np.flatnonzero(m[i, j]):
            v[index[(int(k), y)]] = m[i, j, k]
        return v

    # products routed through a degree outside the window vanish on every module
    dead = []
    for (j, y) in [(j, y) for j in range(ga.dim) for y in window]:
        mid = g.mul(deg[j], y)
        if mid in win:
            continue
        for i in range(ga.dim):
            if g.mul(deg[i], mid) in win:
                v = np.zeros(F, dtype=la.DTYPE)
                for k in np.flatnonzero(m[i, j]):
                    v[index[(int(k), y)]] = m[i, j, k]
                if v.any():
                    dead.append(v % p)
    dead_basis = la.row_basis(np.array(dead), p) if dead else la.zeros(0, F)
    proj, keep = la.complement_data(dead_basis.T, F, p)
    basis = [symbols[k] for k in keep]
    B = len(basis)
    mult = np.zeros((B, B, B), dtype=la.DTYPE)
    for a, (i, x) in enumerate(basis):
        for b, (j, y) in enumerate(basis):
            mult[a, b] = proj @ prod_vec(i, x, j, y) % p
    unit_full = np.zeros(F, dtype=la.DTYPE)
    for x in window:
        for i in np.flatnonzero(ga.algebra.unit):
            unit_full[index[(int(i), x)]] = ga.algebra.unit[i]
    unit = proj @ unit_full % p
    names = [f"{ga.algebra.names[i]}@{g.name(x)}" for i, x in basis]
    alg = Algebra(p, mult, unit, names, name=f"cover({ga.name})")
    return CoveringAlgebra(ga, window, alg, symbols, proj, basis)
