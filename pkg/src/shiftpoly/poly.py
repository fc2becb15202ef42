"""Sparse multivariate polynomials over F_p and their derivative operators.

Exponent vectors ("multi-indices") are plain tuples of nonnegative ints.
Wherever iteration order matters we use graded order: by weight first, then
lexicographically ascending (so ``(0, 2) < (1, 1) < (2, 0)``).
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, CtxMismatch, DependentFrame, DivisionByZeroPoly, InvalidInput
from .field import _check_modulus, binom_mod_p, multi_binom, rank_of_rows

Exps = tuple[int, ...]

NEG_INF = float("-inf")  # degree of the zero polynomial


# ---------------------------------------------------------------------------
# multi-indices


def weight(alpha: Sequence[int]) -> int:
    return sum(alpha)


def leq(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Componentwise alpha <= beta."""
    return all(a <= b for a, b in zip(alpha, beta))


def grlex_key(alpha: Sequence[int]) -> tuple:
    return (sum(alpha), tuple(alpha))


def add_exps(alpha: Sequence[int], beta: Sequence[int]) -> Exps:
    return tuple(a + b for a, b in zip(alpha, beta))


def sub_exps(alpha: Sequence[int], beta: Sequence[int]) -> Exps:
    return tuple(a - b for a, b in zip(alpha, beta))


def unit(n: int, i: int) -> Exps:
    return tuple(1 if j == i else 0 for j in range(n))


def multi_factorial(alpha: Sequence[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


@lru_cache(maxsize=4096)
def weight_indices(n: int, d: int) -> tuple[Exps, ...]:
    """All alpha in N^n with |alpha| = d, in ascending graded order."""
    if d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d + 1):
        for rest in weight_indices(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def indices_up_to(n: int, w: int) -> Iterator[Exps]:
    for d in range(w + 1):
        yield from weight_indices(n, d)


def count_monomials(n: int, q: int | None, r: int) -> int:
    """N(n, q, r): exponent vectors in N^n with entries < q and weight <= r.

    ``q=None`` means no per-coordinate cap, in which case the count is
    C(n + r, r).  Exact big-integer dynamic programme over coordinates.
    """
    if n < 0:
        raise InvalidInput("arity must be nonnegative")
    if r < 0:
        return 0
    if q is not None and q < 1:
        return 0
    # ways[s] = number of vectors so far with weight exactly s
    ways = [1] + [0] * r
    for _ in range(n):
        nxt = [0] * (r + 1)
        run = 0
        for s in range(r + 1):
            run += ways[s]
            if q is not None and s - q >= 0:
                run -= ways[s - q]
            nxt[s] = run
        ways = nxt
    return sum(ways)


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Immutable sparse polynomial in ``n`` variables over F_p."""

    __slots__ = ("p", "n", "terms", "_hash")

    def __init__(self, p: int, n: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        _check_modulus(p)
        if n < 0:
            raise InvalidInput("arity must be nonnegative")
        clean: dict[Exps, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ArityMismatch(f"exponent {exps} has length {len(exps)}, expected {n}")
            if any(e < 0 for e in exps):
                raise InvalidInput(f"negative exponent in {exps}")
            clean[exps] = (clean.get(exps, 0) + int(c)) % p
        self.p = p
        self.n = n
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, p: int, n: int, terms: dict[Exps, int]) -> Poly:
        obj = cls.__new__(cls)
        obj.p, obj.n, obj._hash = p, n, None
        obj.terms = {e: c for e, c in terms.items() if c}
        return obj

    # constructors
    @classmethod
    def zero(cls, p: int, n: int) -> Poly:
        return cls(p, n)

    @classmethod
    def constant(cls, p: int, n: int, c: int) -> Poly:
        return cls(p, n, {(0,) * n: c})

    @classmethod
    def monomial(cls, p: int, alpha: Sequence[int], c: int = 1) -> Poly:
        return cls(p, len(alpha), {tuple(alpha): c})

    @classmethod
    def variable(cls, p: int, n: int, i: int) -> Poly:
        return cls(p, n, {unit(n, i): 1})

    @classmethod
    def univariate(cls, p: int, coeffs: Sequence[int]) -> Poly:
        """From coefficients listed by ascending power."""
        return cls(p, 1, {(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def from_roots(cls, p: int, roots: Iterable[int]) -> Poly:
        """prod (z - r) as a univariate polynomial."""
        coeffs = [1]
        for r in roots:
            nxt = [0] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k + 1] = (nxt[k + 1] + c) % p
                nxt[k] = (nxt[k] - c * r) % p
            coeffs = nxt
        return cls.univariate(p, coeffs)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, alpha: Sequence[int]) -> int:
        return self.terms.get(tuple(alpha), 0)

    def deg(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=NEG_INF)

    def deg_i(self, i: int):
        return max((e[i] for e in self.terms), default=NEG_INF)

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def dense(self, length: int | None = None) -> list[int]:
        """Univariate coefficient list by ascending power."""
        if self.n != 1:
            raise ArityMismatch("dense() is for univariate polynomials")
        top = 0 if self.is_zero() else int(self.deg()) + 1
        length = top if length is None else length
        out = [0] * length
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    # arithmetic
    def _check(self, other: Poly):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.p != self.p:
            raise CtxMismatch(f"F_{self.p} vs F_{other.p}")
        if other.n != self.n:
            raise ArityMismatch(f"arity {self.n} vs {other.n}")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = (out.get(e, 0) + c) % self.p
        return Poly._raw(self.p, self.n, out)

    def __sub__(self, other: Poly) -> Poly:
        return self + other.scale(-1)

    def __neg__(self) -> Poly:
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        out: dict[Exps, int] = {}
        p = self.p
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Poly._raw(p, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        result = Poly.constant(self.p, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> Poly:
        c %= self.p
        return Poly._raw(self.p, self.n, {e: v * c % self.p for e, v in self.terms.items()})

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def __eq__(self, other):
        return isinstance(other, Poly) and (self.p, self.n, self.terms) == (other.p, other.n, other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.n, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return f"Poly(p={self.p}, 0)"
        names = [f"x{i + 1}" for i in range(self.n)] if self.n > 1 else ["x"]
        parts = []
        for e, c in reversed(self.sorted_terms()):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(names, e) if k)
            parts.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
        return f"Poly(p={self.p}, {' + '.join(parts)})"


def poly_arith(f: Poly, g: Poly | None, op: str, c: int | None = None) -> Poly:
    if op == "scale":
        if c is None:
            raise InvalidInput("scale needs a constant")
        return f.scale(c)
    if g is None:
        raise InvalidInput(f"{op} needs two operands")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise InvalidInput(f"unknown poly op {op!r}")


def _check_point(f: Poly, x: Sequence[int]):
    if len(x) != f.n:
        raise ArityMismatch(f"point of length {len(x)} for a polynomial in {f.n} variables")


def evaluate(f: Poly, x: Sequence[int]) -> int:
    _check_point(f, x)
    p = f.p
    x = [v % p for v in x]
    total = 0
    for e, c in f.terms.items():
        term = c
        for xi, ei in zip(x, e):
            if ei:
                term = term * pow(xi, ei, p) % p
        total += term
    return total % p


def hasse_derivative(f: Poly, alpha: Sequence[int]) -> Poly:
    """H^(alpha) f: x^beta -> C(beta, alpha) x^(beta - alpha)."""
    alpha = tuple(alpha)
    if len(alpha) != f.n:
        raise ArityMismatch(f"index of length {len(alpha)} for arity {f.n}")
    if any(a < 0 for a in alpha):
        return Poly.zero(f.p, f.n)
    if not any(alpha):
        return f
    p = f.p
    out: dict[Exps, int] = {}
    for e, c in f.terms.items():
        if not leq(alpha, e):
            continue
        b = multi_binom(e, alpha, p)
        if b:
            out[sub_exps(e, alpha)] = c * b % p
    return Poly._raw(p, f.n, out)


def ordinary_derivative(f: Poly, alpha: Sequence[int]) -> Poly:
    """Formal iterated partial derivative d^alpha f."""
    alpha = tuple(alpha)
    if len(alpha) != f.n:
        raise ArityMismatch(f"index of length {len(alpha)} for arity {f.n}")
    p = f.p
    out: dict[Exps, int] = {}
    for e, c in f.terms.items():
        if not leq(alpha, e):
            continue
        falling = 1
        for ei, ai in zip(e, alpha):
            for t in range(ai):
                falling = falling * (ei - t) % p
        if falling:
            out[sub_exps(e, alpha)] = c * falling % p
    return Poly._raw(p, f.n, out)


def shift_poly(f: Poly, h: Sequence[int]) -> Poly:
    """T^h f = f(X + h), expanded one variable at a time."""
    _check_point(f, h)
    p = f.p
    terms = dict(f.terms)
    for i, hi in enumerate(h):
        hi %= p
        if not hi:
            continue
        nxt: dict[Exps, int] = {}
        for e, c in terms.items():
            k = e[i]
            hp = 1
            # x_i^k -> sum_j C(k, j) h^(k-j) x_i^j, walking j downward
            for j in range(k, -1, -1):
                b = binom_mod_p(k, j, p)
                if b:
                    e2 = e[:i] + (j,) + e[i + 1 :]
                    nxt[e2] = (nxt.get(e2, 0) + c * b * hp) % p
                hp = hp * hi % p
        terms = {e: c for e, c in nxt.items() if c}
    return Poly._raw(p, f.n, terms)


class DirectionalFrame:
    """Linearly independent vectors v_1..v_k in F_p^n (checked on construction)."""

    __slots__ = ("p", "n", "vectors")

    def __init__(self, p: int, vectors: Sequence[Sequence[int]], n: int | None = None):
        _check_modulus(p)
        vecs = tuple(tuple(int(x) % p for x in v) for v in vectors)
        if n is None:
            if not vecs:
                raise InvalidInput("empty frame needs an explicit ambient dimension")
            n = len(vecs[0])
        if any(len(v) != n for v in vecs):
            raise ArityMismatch("frame vectors of differing length")
        if rank_of_rows([list(v) for v in vecs], p) != len(vecs):
            raise DependentFrame(f"vectors {vecs} are linearly dependent over F_{p}")
        self.p, self.n, self.vectors = p, n, vecs

    @classmethod
    def standard(cls, p: int, n: int) -> DirectionalFrame:
        return cls(p, [unit(n, i) for i in range(n)], n)

    def __len__(self):
        return len(self.vectors)


def directional_hasse(f: Poly, frame: DirectionalFrame, alpha: Sequence[int]) -> Poly:
    """[Z^alpha] f(X + Z_1 v_1 + ... + Z_k v_k), computed by direct substitution."""
    alpha = tuple(alpha)
    k = len(frame)
    if len(alpha) != k:
        raise ArityMismatch(f"index of length {len(alpha)} for a frame of {k} vectors")
    if frame.n != f.n or frame.p != f.p:
        raise ArityMismatch("frame and polynomial live in different spaces")
    p, n = f.p, f.n
    if any(a < 0 for a in alpha):
        return Poly.zero(p, n)

    # Work in n + k variables, discarding any Z-part that exceeds alpha.
    def trunc_mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                z = tuple(x + y for x, y in zip(e1[n:], e2[n:]))
                if not leq(z, alpha):
                    continue
                e = tuple(x + y for x, y in zip(e1[:n], e2[:n])) + z
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return {e: c for e, c in out.items() if c}

    one = {(0,) * (n + k): 1}
    powers: list[list[dict]] = []
    for i in range(n):
        lin = {unit(n + k, i): 1}
        for j, v in enumerate(frame.vectors):
            if v[i]:
                lin[unit(n + k, n + j)] = v[i]
        pw = [one]
        top = f.deg_i(i)
        for _ in range(int(top) if top != NEG_INF else 0):
            pw.append(trunc_mul(pw[-1], lin))
        powers.append(pw)

    total: dict = {}
    for e, c in f.terms.items():
        acc = {(0,) * (n + k): c}
        for i, ei in enumerate(e):
            if ei:
                acc = trunc_mul(acc, powers[i][ei])
        for key, v in acc.items():
            if key[n:] == alpha:
                x = key[:n]
                total[x] = (total.get(x, 0) + v) % p
    return Poly._raw(p, n, total)


def divrem_univariate(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Euclidean division f = q g + r with deg r < deg g."""
    if f.n != 1 or g.n != 1:
        raise ArityMismatch("divrem_univariate needs univariate polynomials")
    if f.p != g.p:
        raise CtxMismatch(f"F_{f.p} vs F_{g.p}")
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    p = f.p
    r = f.dense()
    gd = g.dense()
    dg = len(gd) - 1
    lead_inv = pow(gd[-1], -1, p)
    q = [0] * max(len(r) - dg, 0)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * lead_inv % p
        if not c:
            continue
        q[k - dg] = c
        for j, gj in enumerate(gd):
            r[k - dg + j] = (r[k - dg + j] - c * gj) % p
    return Poly.univariate(p, q), Poly.univariate(p, r[:dg])


def is_maximal_monomial(f: Poly, alpha: Sequence[int]) -> bool:
    """[X^alpha] f != 0 and no other monomial of f dominates alpha."""
    alpha = tuple(alpha)
    if len(alpha) != f.n:
        raise ArityMismatch(f"index of length {len(alpha)} for arity {f.n}")
    if not f.coeff(alpha):
        return False
    return not any(e != alpha and leq(alpha, e) for e in f.terms)


def maximal_monomials(f: Poly) -> list[Exps]:
    return sorted((e for e in f.terms if is_maximal_monomial(f, e)), key=grlex_key)


def all_points(p: int, n: int) -> Iterator[Exps]:
    return itertools.product(range(p), repeat=n)
