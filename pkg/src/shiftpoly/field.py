"""Prime-field arithmetic, binomials mod p and exact dense linear algebra.

Everything above this module works with plain ``int`` residues in
``range(p)``; :class:`FpElem` is the checked scalar type for callers that
want modulus tracking.  Matrices are stored as ``int64`` numpy arrays,
which is exact for every supported modulus (``p < 2**31`` keeps all
intermediate products below ``2**62``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CtxMismatch, DimensionMismatch, DivisionByZero, InvalidInput

MAX_MODULUS = 2**31 - 1

# Deterministic for n < 3.3e24, far past MAX_MODULUS.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _check_modulus(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise InvalidInput(f"modulus must be an integer, got {p!r}")
    if not 2 <= p <= MAX_MODULUS:
        raise InvalidInput(f"modulus {p} outside [2, 2^31-1]")
    if not is_prime(p):
        raise InvalidInput(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        _check_modulus(self.p)

    def __call__(self, value: int) -> FpElem:
        return FpElem(value % self.p, self)

    def elements(self) -> list[FpElem]:
        return [FpElem(v, self) for v in range(self.p)]

    def binom(self, n: int, k: int) -> FpElem:
        return FpElem(binom_mod_p(n, k, self.p), self)


@dataclass(frozen=True)
class FpElem:
    """A canonical residue tied to its field."""

    value: int
    ctx: FieldCtx

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.p:
            raise InvalidInput(f"{self.value} is not a canonical residue mod {self.ctx.p}")

    def _other(self, other) -> int:
        if isinstance(other, FpElem):
            if other.ctx.p != self.ctx.p:
                raise CtxMismatch(f"F_{self.ctx.p} vs F_{other.ctx.p}")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def _wrap(self, v: int) -> FpElem:
        return FpElem(v % self.ctx.p, self.ctx)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inv(self) -> FpElem:
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.ctx.p}")
        return self._wrap(pow(self.value, -1, self.ctx.p))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * self._wrap(o).inv()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        # Python's pow already gives 0**0 == 1.
        return self._wrap(pow(self.value, e, self.ctx.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p})"


def field_arith(a: FpElem, b: FpElem | None, op: str, e: int | None = None) -> FpElem:
    """Dispatch form of the scalar operations (``add sub mul div inv pow``)."""
    if op == "inv":
        return a.inv()
    if op == "pow":
        if e is None or e < 0:
            raise InvalidInput("pow needs an exponent e >= 0")
        return a**e
    if b is None:
        raise InvalidInput(f"{op} needs two operands")
    if b.ctx.p != a.ctx.p:
        raise CtxMismatch(f"F_{a.ctx.p} vs F_{b.ctx.p}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InvalidInput(f"unknown field op {op!r}")


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse in F_{p}")
    return pow(a, -1, p)


@functools.lru_cache(maxsize=1 << 16)
def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Lucas' theorem; 0 outside 0 <= k <= n.

    ``p`` may be a prime or a :class:`FieldCtx`.
    """
    p = getattr(p, "p", p)
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        result = result * math.comb(nd, kd) % p
        n //= p
        k //= p
    return result


def multi_binom(alpha: Sequence[int], beta: Sequence[int], p: int) -> int:
    """prod_i C(alpha_i, beta_i) mod p."""
    r = 1
    for a, b in zip(alpha, beta):
        r = r * binom_mod_p(a, b, p) % p
        if not r:
            return 0
    return r


@functools.lru_cache(maxsize=4096)
def binom_column(beta: int, length: int, p: int) -> np.ndarray:
    """Read-only vector ``[C(k, beta) mod p for k in range(length)]``."""
    v = np.fromiter((binom_mod_p(k, beta, p) for k in range(length)), dtype=np.int64, count=length)
    v.setflags(write=False)
    return v


# ---------------------------------------------------------------------------
# matrices


class FpMatrix:
    """Dense matrix over F_p with canonical int64 entries (treat as immutable)."""

    __slots__ = ("p", "data")

    def __init__(self, p: int, data, cols: int | None = None):
        _check_modulus(p)
        if isinstance(data, np.ndarray) and data.dtype != object:
            arr = data.astype(np.int64) % p
        else:
            rows = [[int(x) % p for x in row] for row in data]
            if any(len(r) != len(rows[0]) for r in rows):
                raise DimensionMismatch("ragged matrix rows")
            width = len(rows[0]) if rows else (cols or 0)
            arr = np.array(rows, dtype=np.int64).reshape(len(rows), width)
        if arr.ndim != 2:
            raise DimensionMismatch("matrix data must be two-dimensional")
        self.p = p
        self.data = arr

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> FpMatrix:
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            return FpMatrix(self.p, matmul_mod(self.data, other.data, self.p))
        vec = np.asarray(other, dtype=np.int64).reshape(-1, 1)
        return matmul_mod(self.data, vec % self.p, self.p).ravel().tolist()

    def __eq__(self, other):
        return isinstance(other, FpMatrix) and other.p == self.p and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.tolist()})"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` for int64 residue arrays."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # Chunk the inner dimension so partial sums stay below 2**63.
    chunk = max(1, (2**63 - 1) // ((p - 1) ** 2 + 1) - 1) if p > 2 else a.shape[1]
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], chunk):
        out = (out + a[:, s : s + chunk] @ b[s : s + chunk]) % p
    return out


@dataclass(frozen=True)
class RrefResult:
    rank: int
    pivots: tuple[int, ...]
    reduced: FpMatrix
    nullspace_basis: tuple[tuple[int, ...], ...]


def _rref_array(a: np.ndarray, p: int, max_col: int | None = None) -> tuple[np.ndarray, list[int]]:
    a = a.copy()
    rows, cols = a.shape
    limit = cols if max_col is None else max_col
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others, c:] = (a[others, c:] - np.outer(col[others], a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _normalize(v: list[int], p: int) -> tuple[int, ...]:
    for x in v:
        if x:
            s = pow(x, -1, p)
            return tuple(y * s % p for y in v)
    return tuple(v)


def rref(m: FpMatrix) -> RrefResult:
    """Reduced row-echelon form, rank, pivots and a deterministic nullspace basis.

    Pivots are taken as the first nonzero entry in column order.  Nullspace
    vectors are listed by ascending free column and scaled so their first
    nonzero entry is 1.
    """
    red, pivots = _rref_array(m.data, m.p)
    p = m.p
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [0] * m.cols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(red[i, f])) % p
        basis.append(_normalize(v, p))
    return RrefResult(len(pivots), tuple(pivots), FpMatrix(p, red, cols=m.cols), tuple(basis))


def rank(m: FpMatrix) -> int:
    return len(_rref_array(m.data, m.p)[1])


def rank_of_rows(rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> int:
    if not rows:
        return 0
    return len(_rref_array(np.asarray(rows, dtype=np.int64) % p, p)[1])


def nullspace(m: FpMatrix) -> list[tuple[int, ...]]:
    return list(rref(m).nullspace_basis)


def solve(m: FpMatrix, rhs: Sequence[int]) -> list[int] | None:
    """One solution of ``m x = rhs`` (free variables zero), or None if inconsistent."""
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"rhs has length {len(rhs)}, matrix has {m.rows} rows")
    p = m.p
    aug = np.concatenate([m.data, (np.asarray(list(rhs), dtype=object) % p).astype(np.int64).reshape(-1, 1)], axis=1)
    red, pivots = _rref_array(aug, p, max_col=m.cols)
    rk = len(pivots)
    if np.any(red[rk:, m.cols]):
        return None
    x = [0] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = int(red[i, m.cols])
    return x


def row_basis(rows: Iterable[Sequence[int]], p: int, cols: int) -> list[tuple[int, ...]]:
    """Canonical basis (nonzero rows of the RREF) of the span of ``rows``."""
    rows = list(rows)
    if not rows:
        return []
    red, pivots = _rref_array(np.asarray(rows, dtype=np.int64).reshape(len(rows), cols) % p, p)
    return [tuple(int(x) for x in red[i]) for i in range(len(pivots))]


def in_row_span(basis: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    """Whether ``v`` lies in the span of ``basis``."""
    if not any(x % p for x in v):
        return True
    if not basis:
        return False
    base = rank_of_rows(basis, p)
    return rank_of_rows(list(basis) + [list(v)], p) == base


class EchelonBasis:
    """Incrementally grown row space kept in reduced echelon form."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.pivots:
            coeffs = v[self.pivots].reshape(1, -1)
            v = (v - matmul_mod(coeffs, self.rows, self.p).ravel()) % self.p
        return v

    def add(self, v) -> bool:
        """Insert ``v``; True if it enlarged the span."""
        if self.rank == self.dim:
            return False
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = v * pow(int(v[pc]), -1, self.p) % self.p
        col = self.rows[:, pc].copy()
        hit = np.flatnonzero(col)
        if hit.size:
            self.rows[hit] = (self.rows[hit] - np.outer(col[hit], v) % self.p) % self.p
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(pc)
        return True

    def __contains__(self, v) -> bool:
        return not np.any(self.reduce(v))
