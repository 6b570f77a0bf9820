"""Dense exact linear algebra over prime fields F_p.

The array-level functions (``rref``, ``nullspace``, ``solve`` ...) take an
``np.ndarray`` of residues plus the modulus and are what the rest of the
package uses internally.  :class:`FpMatrix` is the immutable public wrapper.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ModulusMismatch, ValidationError

DTYPE = np.int64
MAX_PRIME = 251


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def check_prime(p: int) -> None:
    if not (isinstance(p, (int, np.integer)) and 2 <= p <= MAX_PRIME and is_prime(int(p))):
        raise ValidationError(f"modulus must be a prime in [2, {MAX_PRIME}], got {p!r}")


def asmat(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=DTYPE) % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=DTYPE)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def inv_scalar(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form with leftmost-nonzero pivoting.

    Returns ``(reduced, rank, pivots)``.
    """
    m = np.array(a, dtype=DTYPE) % p
    if m.ndim != 2:
        raise DimensionMismatch("rref expects a 2-d array")
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        piv = int(m[r, c])
        if piv != 1:
            m[r] = (m[r] * inv_scalar(piv, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, r, pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return rref(a, p)[1]


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of the returned matrix."""
    a = np.asarray(a, dtype=DTYPE)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return eye(cols)
    red, r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-red[i, f]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Some ``x`` with ``a x = b`` (``b`` a vector or matrix), or ``None``."""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"solve: {a.shape[0]} rows vs rhs of length {b.shape[0]}")
    n = a.shape[1]
    red, _, pivots = rref(np.hstack([a, b]), p)
    if any(pc >= n for pc in pivots):
        return None
    x = zeros(n, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = red[i, n:]
    return x[:, 0] if vector else x


def inverse(a: np.ndarray, p: int):
    a = np.asarray(a, dtype=DTYPE)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    red, r, _ = rref(np.hstack([a, eye(n)]), p)
    if r < n or not np.array_equal(red[:, :n], eye(n)):
        return None
    return red[:, n:]


def row_basis(rows: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (as rows) of the span of the given rows."""
    rows = np.asarray(rows, dtype=DTYPE)
    if rows.size == 0:
        return zeros(0, rows.shape[1] if rows.ndim == 2 else 0)
    red, r, _ = rref(rows, p)
    return red[:r]


def col_basis(cols: np.ndarray, p: int) -> np.ndarray:
    """RREF-canonical basis (as columns) of the column span."""
    cols = np.asarray(cols, dtype=DTYPE)
    return row_basis(cols.T, p).T


def in_span(basis_cols: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis_cols.shape[1] == 0:
        return not np.any(np.asarray(v) % p)
    return solve(basis_cols, v, p) is not None


def complement_data(sub_cols: np.ndarray, n: int, p: int):
    """Quotient data for ``F_p^n / span(sub_cols)``.

    Returns ``(projection, complement_indices)``: the complement is spanned by
    standard basis vectors at the non-pivot positions of the RREF of the
    subspace, and ``projection`` maps a vector to its coordinates there.
    """
    if sub_cols.shape[1] == 0:
        return eye(n), list(range(n))
    red = row_basis(sub_cols.T, p)
    pivots = [int(np.flatnonzero(row)[0]) for row in red]
    comp = [j for j in range(n) if j not in set(pivots)]
    sel = zeros(len(pivots), n)
    for i, pc in enumerate(pivots):
        sel[i, pc] = 1
    reduce = (eye(n) - red.T @ sel) % p
    return reduce[comp], comp


def mat_pow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = eye(a.shape[0])
    base = a % p
    while k:
        if k & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        k >>= 1
    return result


def fitting_power(a: np.ndarray, p: int) -> np.ndarray:
    """``a^(2^k)`` with ``2^k >= n``: its image and kernel give the Fitting split."""
    n = a.shape[0]
    b = a % p
    k = 1
    while k < n:
        b = (b @ b) % p
        k *= 2
    return b


def is_nilpotent(a: np.ndarray, p: int) -> bool:
    return not np.any(fitting_power(a, p))


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.kron(a, b) % p


def block_diag(blocks) -> np.ndarray:
    blocks = list(blocks)
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = zeros(r, c)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def min_poly(a: np.ndarray, p: int) -> list[int]:
    """Monic minimal polynomial of a square matrix, coefficients low degree first."""
    n = a.shape[0]
    powers = [eye(n).reshape(-1)]
    cur = eye(n)
    while True:
        cur = (cur @ a) % p
        basis = np.stack(powers, axis=1)
        x = solve(basis, cur.reshape(-1), p)
        if x is not None:
            return [int(-c % p) for c in x] + [1]
        powers.append(cur.reshape(-1))


def poly_eval(coeffs, a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    out = zeros(n, n)
    for c in reversed(coeffs):
        out = (out @ a + c * eye(n)) % p
    return out


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("p", "_data")

    def __init__(self, entries, p: int):
        check_prime(p)
        data = np.array(entries, dtype=DTYPE)
        if data.ndim == 1 and data.size == 0:
            data = data.reshape(0, 0)
        if data.ndim != 2:
            raise DimensionMismatch("FpMatrix needs a 2-d array of entries")
        data %= p
        data.setflags(write=False)
        self.p = int(p)
        self._data = data

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(eye(n), p)

    @classmethod
    def zero(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(zeros(rows, cols), p)

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def array(self) -> np.ndarray:
        return self._data

    def tolist(self) -> list[list[int]]:
        return self._data.tolist()

    def _same_p(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise ModulusMismatch(f"moduli {self.p} and {other.p} differ")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_p(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return FpMatrix(self._data @ other._data, self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_p(other)
        return FpMatrix(self._data + other._data, self.p)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FpMatrix) and self.p == other.p
                and np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.p, self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self._data.tolist()}, p={self.p})"

    def rref(self):
        red, r, piv = rref(self._data, self.p)
        return FpMatrix(red, self.p), r, piv

    def rank(self) -> int:
        return rank(self._data, self.p)

    def nullspace(self) -> list[list[int]]:
        return nullspace(self._data, self.p).T.tolist()

    def solve(self, b):
        x = solve(self._data, np.asarray(b, dtype=DTYPE) % self.p, self.p)
        return None if x is None else [int(v) for v in x]

    def kron(self, other: "FpMatrix") -> "FpMatrix":
        self._same_p(other)
        return FpMatrix(np.kron(self._data, other._data), self.p)
