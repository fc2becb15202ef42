"""Linear combinations of (multi)shift operators and their Hasse expansions.

A combination ``l = sum c[a, beta] (T^a)^(beta)`` is stored as a
:class:`ShiftCombo` over a :class:`PointMultiset`.  Its expansion
coefficients are

    C_alpha = sum c[a, beta] * C(alpha, beta) * a^(alpha - beta)

(with ``0^0 = 1``).  Along each coordinate the factor
``C(k, beta_i) a_i^(k - beta_i)`` is eventually periodic in ``k``: Lucas makes
the binomial periodic with period ``p^L`` once ``p^L > beta_i``, Fermat makes
the power periodic with period ``p - 1`` for ``a_i != 0``, and for ``a_i = 0``
the factor vanishes past ``beta_i``.  So beyond ``beta_max`` every coordinate
is periodic with period ``p^L (p - 1)`` and the box
``[0, beta_max + p^L (p - 1)]`` per coordinate sees every coefficient value.
Degree scans over that box are exact; :func:`certified_bounds` returns it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    ArityMismatch,
    CtxMismatch,
    EmptyCombo,
    InternalContradiction,
    InvalidInput,
    OutOfRange,
    SingularMatrix,
)
from .field import (
    EchelonBasis,
    FpMatrix,
    _check_modulus,
    binom_column,
    matmul_mod,
    multi_binom,
    nullspace,
    rank_of_rows,
    row_basis,
)
from .poly import (
    Exps,
    Poly,
    add_exps,
    count_monomials,
    grlex_key,
    hasse_derivative,
    indices_up_to,
    shift_poly,
    unit,
    weight_indices,
)

Point = tuple[int, ...]
Key = tuple[Point, Exps]


# ---------------------------------------------------------------------------
# point multisets


class PointMultiset:
    """Points of F_p^n with positive multiplicities (the pair (A, m))."""

    __slots__ = ("p", "n", "mult", "_points")

    def __init__(self, p: int, n: int, mult: Mapping[Sequence[int], int] | Iterable[Sequence[int]] = ()):
        _check_modulus(p)
        if n < 0:
            raise InvalidInput("arity must be nonnegative")
        items = mult.items() if isinstance(mult, Mapping) else ((pt, 1) for pt in mult)
        clean: dict[Point, int] = {}
        for pt, m in items:
            pt = tuple(int(x) % p for x in pt)
            if len(pt) != n:
                raise ArityMismatch(f"point {pt} is not in F_{p}^{n}")
            if pt in clean:
                raise InvalidInput(f"point {pt} listed twice")
            if int(m) < 1:
                raise InvalidInput(f"multiplicity of {pt} must be >= 1, got {m}")
            clean[pt] = int(m)
        self.p = p
        self.n = n
        self.mult = clean
        self._points = tuple(sorted(clean))

    @classmethod
    def plain(cls, p: int, n: int, points: Iterable[Sequence[int]]) -> PointMultiset:
        """A set, silently dropping repeated points."""
        seen = {tuple(int(x) % p for x in pt) for pt in points}
        return cls(p, n, {pt: 1 for pt in seen})

    @classmethod
    def line(cls, p: int, values: Iterable[int], mult: Mapping[int, int] | None = None) -> PointMultiset:
        """One-dimensional multiset; ``mult`` defaults to all ones."""
        vals = sorted({v % p for v in values})
        mult = {v % p: m for v, m in (mult or {}).items()}
        return cls(p, 1, {(v,): mult.get(v, 1) for v in vals})

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    def size(self) -> int:
        """|(A, m)| = sum of multiplicities."""
        return sum(self.mult.values())

    def max_mult(self) -> int:
        return max(self.mult.values(), default=0)

    def is_plain(self) -> bool:
        return all(m == 1 for m in self.mult.values())

    def keys(self) -> list[Key]:
        """All (a, beta) in (A, m): points sorted, beta in graded order."""
        return [(a, beta) for a in self._points for beta in indices_up_to(self.n, self.mult[a] - 1)]

    def dim(self) -> int:
        """Number of multishift generators, sum_a C(m(a) + n - 1, n)."""
        return sum(math.comb(m + self.n - 1, self.n) for m in self.mult.values())

    def __contains__(self, key) -> bool:
        a, beta = key
        m = self.mult.get(tuple(a))
        return m is not None and len(beta) == self.n and min(beta, default=0) >= 0 and sum(beta) <= m - 1

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other):
        return isinstance(other, PointMultiset) and (self.p, self.n, self.mult) == (other.p, other.n, other.mult)

    def __hash__(self):
        return hash((self.p, self.n, frozenset(self.mult.items())))

    def __repr__(self):
        body = ", ".join(f"{a}" if m == 1 else f"{a}^{m}" for a, m in sorted(self.mult.items()))
        return f"PointMultiset(p={self.p}, n={self.n}, {{{body}}})"

    def union_max(self, other: PointMultiset) -> PointMultiset:
        _check_same_space(self, other)
        merged = dict(self.mult)
        for a, m in other.mult.items():
            merged[a] = max(merged.get(a, 0), m)
        return PointMultiset(self.p, self.n, merged)

    def reduce_hyperplane(self, i: int, eps: int) -> PointMultiset:
        """m_S for S = {x_j = eps} (``j`` 0-based): multiplicity on S drops by one."""
        eps %= self.p
        out = {}
        for a, m in self.mult.items():
            m2 = m - 1 if a[i] == eps else m
            if m2 > 0:
                out[a] = m2
        return PointMultiset(self.p, self.n, out)


def _check_same_space(x, y):
    if x.p != y.p:
        raise CtxMismatch(f"F_{x.p} vs F_{y.p}")
    if x.n != y.n:
        raise ArityMismatch(f"arity {x.n} vs {y.n}")


# ---------------------------------------------------------------------------
# combinations


class ShiftCombo:
    """A formal combination sum c[a, beta] (T^a)^(beta) in Lambda_(A, m)."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base: PointMultiset, coeffs: Mapping[tuple[Sequence[int], Sequence[int]], int] = ()):
        p = base.p
        clean: dict[Key, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for (a, beta), c in items:
            key = (tuple(int(x) % p for x in a), tuple(int(b) for b in beta))
            if key not in base:
                raise InvalidInput(f"term {key} is not in the base multiset {base}")
            clean[key] = (clean.get(key, 0) + int(c)) % p
        self.base = base
        self.coeffs = {k: c for k, c in clean.items() if c}

    @classmethod
    def _raw(cls, base: PointMultiset, coeffs: dict[Key, int]) -> ShiftCombo:
        obj = cls.__new__(cls)
        obj.base = base
        obj.coeffs = {k: c for k, c in coeffs.items() if c}
        return obj

    @classmethod
    def shift(cls, p: int, a: Sequence[int], c: int = 1) -> ShiftCombo:
        """c * T^a over the singleton base {a}."""
        a = tuple(x % p for x in a)
        base = PointMultiset(p, len(a), {a: 1})
        return cls(base, {(a, (0,) * len(a)): c})

    @classmethod
    def from_values(cls, base: PointMultiset, values: Sequence[int]) -> ShiftCombo:
        """Coefficients listed in ``base.keys()`` order."""
        keys = base.keys()
        if len(values) != len(keys):
            raise InvalidInput(f"{len(values)} coefficients for {len(keys)} generators")
        return cls._raw(base, {k: int(v) % base.p for k, v in zip(keys, values) if int(v) % base.p})

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def n(self) -> int:
        return self.base.n

    def is_zero(self) -> bool:
        return not self.coeffs

    def sorted_items(self) -> list[tuple[Key, int]]:
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0][0], grlex_key(kv[0][1])))

    def values(self) -> list[int]:
        return [self.coeffs.get(k, 0) for k in self.base.keys()]

    def scale(self, c: int) -> ShiftCombo:
        p = self.p
        return ShiftCombo._raw(self.base, {k: v * c % p for k, v in self.coeffs.items()})

    def __add__(self, other: ShiftCombo) -> ShiftCombo:
        base = self.base if self.base == other.base else self.base.union_max(other.base)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = (out.get(k, 0) + v) % self.p
        return ShiftCombo._raw(base, out)

    def __sub__(self, other: ShiftCombo) -> ShiftCombo:
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, ShiftCombo):
            return multiply(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, ShiftCombo) and self.base == other.base and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.base, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "ShiftCombo(0)"
        parts = []
        for (a, beta), c in self.sorted_items():
            t = f"T^{a}" if not any(beta) else f"(T^{a})^({beta})"
            parts.append(t if c == 1 else f"{c}*{t}")
        return f"ShiftCombo({' + '.join(parts)})"


# ---------------------------------------------------------------------------
# expansion engine


@lru_cache(maxsize=1 << 14)
def _factor(a_i: int, beta_i: int, length: int, p: int) -> np.ndarray:
    """k -> C(k, beta_i) a_i^(k - beta_i) for k < length (zero below beta_i)."""
    out = np.zeros(length, dtype=np.int64)
    if beta_i < length:
        span = length - beta_i
        powers = np.empty(span, dtype=np.int64)
        acc = 1
        for j in range(span):
            powers[j] = acc
            acc = acc * a_i % p
        out[beta_i:] = binom_column(beta_i, length, p)[beta_i:] * powers % p
    out.setflags(write=False)
    return out


def _key_tensor(keys: Sequence[Key], p: int, lengths: Sequence[int], weights: Sequence[int] | None = None) -> np.ndarray:
    """Rows = flattened expansion boxes of ``sum_k weights[k] * key_k``.

    With ``weights`` given the rows are summed into one box (returned with
    the box shape); otherwise one row per key, shape ``(len(keys), prod)``.
    """
    n = len(lengths)
    t = len(keys)
    if weights is None:
        g = np.ones((t, 1), dtype=np.int64)
    else:
        g = (np.asarray(weights, dtype=np.int64) % p).reshape(t, 1)
    if t == 0 or n == 0:
        if weights is None:
            return g if n == 0 else np.zeros((0, math.prod(lengths)), dtype=np.int64)
        return np.asarray(int(g.sum()) % p) if n == 0 else np.zeros(tuple(lengths), dtype=np.int64)
    tables = [np.stack([_factor(a[i], beta[i], lengths[i], p) for a, beta in keys]) for i in range(n)]
    last = n - 1 if weights is not None else n
    for i in range(last):
        g = (g[:, :, None] * tables[i][:, None, :] % p).reshape(t, -1)
    if weights is None:
        return g
    # sum over keys folded into one exact matmul on the final coordinate
    return matmul_mod(g.T.copy(), tables[-1], p).reshape(tuple(lengths))


def expansion_box(combo: ShiftCombo, bounds: Sequence[int]) -> np.ndarray:
    """Dense array of C_alpha for 0 <= alpha_i <= bounds[i]."""
    if len(bounds) != combo.n:
        raise ArityMismatch(f"{len(bounds)} bounds for arity {combo.n}")
    items = combo.sorted_items()
    keys = [k for k, _ in items]
    vals = [v for _, v in items]
    lengths = [b + 1 for b in bounds]
    # keep the intermediate tensor bounded
    chunk = max(1, 4_000_000 // max(1, math.prod(lengths[:-1]) if lengths else 1))
    total = np.zeros(tuple(lengths), dtype=np.int64)
    for s in range(0, max(len(keys), 1), chunk):
        part = _key_tensor(keys[s : s + chunk], combo.p, lengths, vals[s : s + chunk])
        total = (total + part) % combo.p
    return total


def coefficient(combo: ShiftCombo, alpha: Sequence[int]) -> int:
    """Single C_alpha by the defining sum (no window, no caching)."""
    p = combo.p
    alpha = tuple(alpha)
    total = 0
    for (a, beta), c in combo.coeffs.items():
        b = multi_binom(alpha, beta, p)
        if not b:
            continue
        term = c * b
        for ai, al, be in zip(a, alpha, beta):
            term = term * pow(ai, al - be, p) % p
        total += term
    return total % p


def _period_data(beta_max: int, p: int) -> tuple[int, int]:
    """(bound, period) of the certified window along one coordinate."""
    pl = 1
    while pl <= beta_max:
        pl *= p
    period = pl * (p - 1)
    return beta_max + period, period


def certified_bounds(combo: ShiftCombo) -> tuple[int, ...]:
    """Per-coordinate box that determines every expansion coefficient."""
    n = combo.n
    bmax = [0] * n
    for _, beta in combo.coeffs:
        for i, b in enumerate(beta):
            bmax[i] = max(bmax[i], b)
    return tuple(_period_data(b, combo.p)[0] for b in bmax)


def multiset_bounds(base: PointMultiset) -> tuple[int, ...]:
    """Certified box valid for every combination over ``base``."""
    bound, _ = _period_data(max(base.max_mult() - 1, 0), base.p)
    return (bound,) * base.n


def window_class(k: int, beta_max: int, p: int) -> int:
    """Representative inside the certified window of coordinate value ``k``."""
    bound, period = _period_data(beta_max, p)
    if k <= bound:
        return k
    return beta_max + 1 + (k - beta_max - 1) % period


# ---------------------------------------------------------------------------
# expansions


class DerivExpansion:
    """Truncated map alpha -> C_alpha, complete for every |alpha| <= W."""

    __slots__ = ("p", "n", "W", "coeffs")

    def __init__(self, p: int, n: int, W: int, coeffs: Mapping[Sequence[int], int] = ()):
        self.p, self.n, self.W = p, n, W
        clean = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for alpha, c in items:
            alpha = tuple(alpha)
            if sum(alpha) > W:
                raise InvalidInput(f"index {alpha} beyond truncation weight {W}")
            if c % p:
                clean[alpha] = c % p
        self.coeffs = clean

    def __getitem__(self, alpha: Sequence[int]) -> int:
        alpha = tuple(alpha)
        if sum(alpha) > self.W:
            raise KeyError(f"{alpha} lies outside the truncation window W={self.W}")
        return self.coeffs.get(alpha, 0)

    def component(self, d: int) -> DerivExpansion:
        return DerivExpansion(self.p, self.n, min(d, self.W), {a: c for a, c in self.coeffs.items() if sum(a) == d})

    def vector(self, d: int) -> list[int]:
        """Weight-d coordinates in graded order."""
        return [self.coeffs.get(a, 0) for a in weight_indices(self.n, d)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_weight(self):
        return min((sum(a) for a in self.coeffs), default=None)

    def __mul__(self, other: DerivExpansion) -> DerivExpansion:
        """Product of derivative operators: H^(a) H^(b) = C(a+b, a) H^(a+b)."""
        if (self.p, self.n) != (other.p, other.n):
            raise ArityMismatch("expansions over different spaces")
        p = self.p
        w = min(self.W + (other.min_weight() or 0), other.W + (self.min_weight() or 0))
        out: dict[Exps, int] = {}
        for a, c in self.coeffs.items():
            for b, d in other.coeffs.items():
                ab = add_exps(a, b)
                if sum(ab) > w:
                    continue
                v = c * d * multi_binom(ab, a, p) % p
                if v:
                    out[ab] = (out.get(ab, 0) + v) % p
        return DerivExpansion(p, self.n, w, out)

    def __eq__(self, other):
        return isinstance(other, DerivExpansion) and (self.p, self.n, self.coeffs) == (other.p, other.n, other.coeffs)

    def __repr__(self):
        body = ", ".join(f"H{a}: {c}" for a, c in sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0])))
        return f"DerivExpansion(W={self.W}, {{{body}}})"


def expand(combo: ShiftCombo, W: int) -> DerivExpansion:
    """All C_alpha with |alpha| <= W."""
    if W < 0:
        raise InvalidInput("truncation weight must be >= 0")
    n, p = combo.n, combo.p
    cert = certified_bounds(combo)
    lengths = [min(W, b) for b in cert]
    box = expansion_box(combo, lengths)
    if all(W <= b for b in cert):
        idx = np.argwhere(box)
        coeffs = {tuple(int(x) for x in a): int(box[tuple(a)]) for a in idx if sum(a) <= W}
        return DerivExpansion(p, n, W, coeffs)
    bmax = [0] * n
    for _, beta in combo.coeffs:
        for i, b in enumerate(beta):
            bmax[i] = max(bmax[i], b)
    coeffs = {}
    for alpha in indices_up_to(n, W):
        rep = tuple(window_class(k, bmax[i], p) for i, k in enumerate(alpha))
        v = int(box[rep])
        if v:
            coeffs[alpha] = v
    return DerivExpansion(p, n, W, coeffs)


def apply(combo: ShiftCombo, f: Poly) -> Poly:
    """l(f) = sum c * T^a H^(beta) f."""
    if f.n != combo.n:
        raise ArityMismatch(f"operator on F_{combo.p}^{combo.n} applied to a polynomial in {f.n} variables")
    if f.p != combo.p:
        raise CtxMismatch(f"F_{combo.p} vs F_{f.p}")
    out = Poly.zero(f.p, f.n)
    derivs: dict[Exps, Poly] = {}
    for (a, beta), c in combo.sorted_items():
        if beta not in derivs:
            derivs[beta] = hasse_derivative(f, beta)
        out = out + shift_poly(derivs[beta], a).scale(c)
    return out


def apply_expansion(expansion: DerivExpansion, f: Poly) -> Poly:
    """sum C_alpha H^(alpha) f over the stored coefficients."""
    out = Poly.zero(f.p, f.n)
    for alpha, c in expansion.coeffs.items():
        out = out + hasse_derivative(f, alpha).scale(c)
    return out


# ---------------------------------------------------------------------------
# degree


@dataclass(frozen=True)
class Degree:
    d: int
    leading: DerivExpansion


@dataclass(frozen=True)
class BoundExhausted:
    W: int


DegreeResult = Union[Degree, BoundExhausted]


def degree_and_leading(combo: ShiftCombo, W: int | None = None) -> DegreeResult:
    """deg(l) and the leading component delta(l).

    Without ``W`` the scan covers the certified window and always returns
    :class:`Degree`.  A smaller explicit ``W`` may yield :class:`BoundExhausted`.
    """
    if combo.is_zero():
        raise EmptyCombo("the combination has no nonzero coefficient")
    n, p = combo.n, combo.p
    cert = certified_bounds(combo)
    full = sum(cert)
    limit = full if W is None else min(W, full)
    box = expansion_box(combo, [min(limit, b) for b in cert])
    idx = np.argwhere(box)
    weights = idx.sum(axis=1) if idx.size else np.zeros(0, dtype=np.int64)
    ok = weights <= limit
    if not ok.any():
        if W is not None and W < full:
            return BoundExhausted(W)
        raise InternalContradiction(f"nonzero combination {combo} expands to zero over the certified window")
    d = int(weights[ok].min())
    lead = {tuple(int(x) for x in a): int(box[tuple(a)]) for a, w in zip(idx, weights) if w == d}
    return Degree(d, DerivExpansion(p, n, d, lead))


def degree(combo: ShiftCombo) -> int:
    res = degree_and_leading(combo)
    assert isinstance(res, Degree)
    return res.d


# ---------------------------------------------------------------------------
# transforms


def reduce(combo: ShiftCombo, i: int) -> ShiftCombo:
    """The combination whose expansion is alpha -> C_(alpha + e_i).

    Coefficient rule: c'[a, beta] = c[a, beta] a_i + c[a, beta + e_i].
    Coordinates are numbered 1..n.
    """
    n, p = combo.n, combo.p
    if not 1 <= i <= n:
        raise OutOfRange(f"coordinate {i} outside 1..{n}")
    e = unit(n, i - 1)
    out: dict[Key, int] = {}
    for a, beta in combo.base.keys():
        v = combo.coeffs.get((a, beta), 0) * a[i - 1] + combo.coeffs.get((a, add_exps(beta, e)), 0)
        if v % p:
            out[(a, beta)] = v % p
    return ShiftCombo._raw(combo.base, out)


def annihilate_hyperplane(combo: ShiftCombo, i: int, eps: int) -> ShiftCombo:
    """reduce(l, i) - eps * l; its top-multiplicity terms on {x_i = eps} vanish.

    The result is returned over the smaller base m_S (S the hyperplane).
    """
    out = reduce(combo, i) - combo.scale(eps)
    small = combo.base.reduce_hyperplane(i - 1, eps)
    leftover = {k: v for k, v in out.coeffs.items() if k not in small}
    if leftover:
        raise InternalContradiction(f"terms {sorted(leftover)} survive on the hyperplane x_{i} = {eps}")
    return ShiftCombo._raw(small, out.coeffs)


def multiply(l1: ShiftCombo, l2: ShiftCombo) -> ShiftCombo:
    """Operator product: (T^a)^(b) (T^c)^(g) = C(b+g, b) (T^(a+c))^(b+g)."""
    _check_same_space(l1.base, l2.base)
    p, n = l1.p, l1.n
    out: dict[Key, int] = {}
    for (a, beta), c in l1.coeffs.items():
        for (b, gamma), d in l2.coeffs.items():
            bg = add_exps(beta, gamma)
            v = c * d * multi_binom(bg, beta, p) % p
            if v:
                key = (tuple((x + y) % p for x, y in zip(a, b)), bg)
                out[key] = (out.get(key, 0) + v) % p
    out = {k: v for k, v in out.items() if v}
    mult: dict[Point, int] = {}
    for (a, beta) in out:
        mult[a] = max(mult.get(a, 1), sum(beta) + 1)
    return ShiftCombo._raw(PointMultiset(p, n, mult), out)


def affine_transform(A: PointMultiset, L: Sequence[Sequence[int]], b: Sequence[int]) -> PointMultiset:
    """Image of A under a -> L a + b (multiplicities kept)."""
    p, n = A.p, A.n
    mat = FpMatrix(p, L) if n else FpMatrix(p, [], cols=0)
    if mat.rows != n or mat.cols != n:
        raise ArityMismatch(f"need an {n}x{n} matrix")
    if len(b) != n:
        raise ArityMismatch(f"translation of length {len(b)} in dimension {n}")
    if rank_of_rows(mat.tolist(), p) != n:
        raise SingularMatrix("affine map is not invertible")
    out = {}
    for a, m in A.mult.items():
        img = tuple((sum(int(mat.data[r, c]) * a[c] for c in range(n)) + b[r]) % p for r in range(n))
        out[img] = m
    return PointMultiset(p, n, out)


# ---------------------------------------------------------------------------
# one-dimensional construction


def construct_1d(A: PointMultiset, d: int) -> ShiftCombo:
    """A combination over a one-dimensional multiset with degree exactly d."""
    if A.n != 1:
        raise ArityMismatch("construct_1d needs a one-dimensional multiset")
    if not 0 <= d <= A.size() - 1:
        raise OutOfRange(f"degree {d} outside [0, {A.size() - 1}]")
    keys = A.keys()
    table = _key_tensor(keys, A.p, [d + 1])  # rows: keys, cols: k = 0..d
    constraints = FpMatrix(A.p, table[:, :d].T.copy(), cols=len(keys))
    top = table[:, d]
    for v in nullspace(constraints):
        if int(np.dot(np.asarray(v, dtype=np.int64), top) % A.p):
            return ShiftCombo.from_values(A, v)
    raise InternalContradiction(f"no combination of degree {d} over {A}")


# ---------------------------------------------------------------------------
# leading-component spaces


@dataclass(frozen=True)
class DeltaBasis:
    d: int
    p: int
    n: int
    basis: tuple[DerivExpansion, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[list[int]]:
        return [e.vector(self.d) for e in self.basis]

    def contains(self, element: DerivExpansion | Sequence[int]) -> bool:
        v = element.vector(self.d) if isinstance(element, DerivExpansion) else list(element)
        if not any(x % self.p for x in v):
            return True
        if not self.basis:
            return False
        return rank_of_rows(self.vectors() + [v], self.p) == self.dim


def _columns(keys: Sequence[Key], p: int, n: int, top: int) -> tuple[np.ndarray, list[Exps]]:
    """Key x alpha matrix for every alpha in the box [0, top]^n, with the alpha list."""
    table = _key_tensor(keys, p, [top + 1] * n)
    alphas = [tuple(int(x) for x in a) for a in np.ndindex(*([top + 1] * n))]
    return table, alphas


def delta_space(A: PointMultiset, d: int) -> DeltaBasis:
    """Basis of Delta^d_(A, m) in canonical (reduced echelon) form."""
    if d < 0:
        raise InvalidInput("degree must be >= 0")
    p, n = A.p, A.n
    keys = A.keys()
    if not keys:
        return DeltaBasis(d, p, n, ())
    table, alphas = _columns(keys, p, n, d)
    pos = {a: j for j, a in enumerate(alphas)}
    low = [pos[a] for a in indices_up_to(n, d - 1)] if d > 0 else []
    top = [pos[a] for a in weight_indices(n, d)]
    if low:
        null = nullspace(FpMatrix(p, table[:, low].T.copy(), cols=len(keys)))
    else:
        null = [tuple(int(i == j) for j in range(len(keys))) for i in range(len(keys))]
    if not null:
        return DeltaBasis(d, p, n, ())
    image = matmul_mod(np.asarray(null, dtype=np.int64), table[:, top].copy(), p)
    basis = row_basis(image.tolist(), p, len(top))
    idx = weight_indices(n, d)
    elems = tuple(DerivExpansion(p, n, d, dict(zip(idx, row))) for row in basis)
    return DeltaBasis(d, p, n, elems)


@dataclass(frozen=True)
class LambdaProfile:
    """Rank growth of the constraint system, one entry per weight."""

    degree: int | None  # None when the scan stopped before reaching full rank
    rank: int  # rank of all alpha-columns scanned
    dim: int  # number of generators
    scanned_weight: int


def lambda_profile(A: PointMultiset, W: int | None = None) -> LambdaProfile:
    """Scan alpha by weight, adding each column C_alpha(.) over the generators.

    Once the columns up to weight w have full rank, no nonzero combination
    has degree > w, and since the rank was deficient before weight w this
    gives deg(A, m) = w.  Columns are restricted to the certified box.
    """
    p, n = A.p, A.n
    keys = A.keys()
    if not keys:
        raise InvalidInput("empty multiset")
    bounds = multiset_bounds(A)
    full = sum(bounds)
    limit = full if W is None else min(W, full)
    tables = [np.stack([_factor(a[i], beta[i], bounds[i] + 1, p) for a, beta in keys]) for i in range(n)]
    basis = EchelonBasis(p, len(keys))
    for w in range(limit + 1):
        for alpha in weight_indices(n, w):
            if any(k > b for k, b in zip(alpha, bounds)):
                continue
            col = np.ones(len(keys), dtype=np.int64)
            for i, k in enumerate(alpha):
                col = col * tables[i][:, k] % p
            basis.add(col)
            if basis.rank == len(keys):
                break
        if basis.rank == len(keys):
            return LambdaProfile(w, basis.rank, len(keys), w)
    if W is None or W >= full:
        raise InternalContradiction(f"generators over {A} are dependent within the certified window")
    return LambdaProfile(None, basis.rank, len(keys), limit)


def deg_set(A: PointMultiset, W: int | None = None) -> int:
    """deg(A, m): the largest d with Delta^d nonzero (capped at W if given)."""
    prof = lambda_profile(A, W)
    if prof.degree is None:
        return prof.scanned_weight
    return prof.degree


def lambda_rank(A: PointMultiset) -> int:
    return lambda_profile(A).rank


# ---------------------------------------------------------------------------
# degree bounds for plain sets


def deg_upper_bound(A: PointMultiset, order: Sequence[int] | None = None) -> int:
    """Iterated coordinate-hyperplane slicing bound on deg(A).

    Slice along the last coordinate of ``order``; with u_c the recursive bound
    of slice c and C_k = {c : u_c >= k}, return max_k (|C_k| - 1 + k).
    """
    if not A.is_plain():
        raise InvalidInput("deg_upper_bound takes a plain set")
    if not len(A):
        raise InvalidInput("empty set")
    order = list(range(A.n)) if order is None else list(order)
    if sorted(order) != list(range(A.n)):
        raise InvalidInput(f"{order} is not a permutation of the coordinates")
    return _slice_bound([tuple(a[i] for i in order) for a in A.points])


def _slice_bound(points: list[tuple[int, ...]]) -> int:
    if len(points[0]) <= 1:
        return len(points) - 1
    slices: dict[int, list] = {}
    for pt in points:
        slices.setdefault(pt[-1], []).append(pt[:-1])
    u = [_slice_bound(s) for s in slices.values()]
    best = 0
    for k in range(max(u) + 1):
        ck = sum(1 for x in u if x >= k)
        if ck:
            best = max(best, ck - 1 + k)
    return best


def deg_lower_bound(A: PointMultiset, coords: Iterable[int] | None = None) -> int:
    """Largest r + 1 with |A n W| > N(dim W, p, r), W the span of ``coords``."""
    if not A.is_plain():
        raise InvalidInput("deg_lower_bound takes a plain set")
    coords = set(range(A.n) if coords is None else coords)
    if not coords <= set(range(A.n)):
        raise InvalidInput(f"coordinates {sorted(coords)} outside 0..{A.n - 1}")
    inside = sum(1 for a in A.points if all(a[i] == 0 for i in range(A.n) if i not in coords))
    dim = len(coords)
    best = 0
    for r in range(dim * (A.p - 1) + 1):
        if inside > count_monomials(dim, A.p, r):
            best = r + 1
        else:
            break
    return best


def monomial_box_bound(A: PointMultiset) -> int:
    """sum_i (|pi_i(A)| - 1), the bound from the coordinate bounding box."""
    return sum(len({a[i] for a in A.points}) - 1 for i in range(A.n))
