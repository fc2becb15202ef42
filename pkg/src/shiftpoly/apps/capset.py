"""3-AP-free sets and k-colored sum-free families in F_p^n."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import EvenCharacteristic, InvalidInput, TooLarge
from ..field import EchelonBasis, _check_modulus, inv_mod
from ..poly import grlex_key, indices_up_to
from ..shiftop import PointMultiset

Point = tuple[int, ...]
SUMFREE_GUARD = 10**7


def _plain_points(A: PointMultiset) -> list[Point]:
    if not A.is_plain():
        raise InvalidInput("expected a plain set")
    return list(A.points)


def find_3ap(A: PointMultiset) -> tuple[Point, Point, Point] | None:
    """First (x, y, z) with x != z and x + z = 2y, scanning pairs in sorted order."""
    p = A.p
    if p == 2:
        raise EvenCharacteristic("3-term progressions need an odd characteristic")
    half = inv_mod(2, p)
    pts = _plain_points(A)
    members = set(pts)
    for x, z in itertools.combinations(pts, 2):
        y = tuple((a + b) * half % p for a, b in zip(x, z))
        if y in members:
            return x, y, z
    return None


def capset_verify(A: PointMultiset) -> bool:
    """True iff A contains no nontrivial 3-term arithmetic progression."""
    return find_3ap(A) is None


def canonical_order(points: Iterable[Point]) -> list[Point]:
    """Graded-lexicographic order on coordinate vectors."""
    return sorted(points, key=grlex_key)


def extreme_supports(A: PointMultiset, r: int, order: Sequence[Point] | None = None) -> tuple[set[Point], set[Point]]:
    """(S+, S-) for the threshold r.

    a lies in S+ iff some l supported on {a' <= a} has C_alpha = 0 for all
    |alpha| <= r and [T^a] l != 0.  That happens exactly when the row
    (a^alpha)_{|alpha| <= r} lies in the span of the earlier rows, so one
    incremental echelon pass per direction decides every point.
    """
    pts = _plain_points(A)
    if order is None:
        order = canonical_order(pts)
    else:
        order = [tuple(x % A.p for x in a) for a in order]
        if sorted(order) != sorted(pts):
            raise InvalidInput("order must list every point of A exactly once")
    if r < 0:
        # every nonzero l has degree > r
        return set(order[1:]), set(order[:-1])
    p = A.p
    alphas = list(indices_up_to(A.n, r))

    def row(a):
        return [math.prod(pow(x, e, p) for x, e in zip(a, al)) % p for al in alphas]

    rows = {a: row(a) for a in order}

    def scan(seq):
        basis = EchelonBasis(p, len(alphas))
        return {a for a in seq if not basis.add(rows[a])}

    return scan(order), scan(list(reversed(order)))


# ---------------------------------------------------------------------------
# k-colored sum-free families


@dataclass(frozen=True)
class SumFreeFamily:
    p: int
    n: int
    k: int
    tuples: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        _check_modulus(self.p)
        if self.k < 2:
            raise InvalidInput("k must be >= 2")
        clean = []
        for t in self.tuples:
            if len(t) != self.k:
                raise InvalidInput(f"tuple {t} does not have {self.k} entries")
            row = []
            for x in t:
                if len(x) != self.n:
                    raise InvalidInput(f"point {x} is not in F_{self.p}^{self.n}")
                row.append(tuple(int(c) % self.p for c in x))
            clean.append(tuple(row))
        for i in range(self.k):
            col = [t[i] for t in clean]
            if len(set(col)) != len(col):
                raise InvalidInput(f"color {i} repeats a point")
        object.__setattr__(self, "tuples", tuple(clean))

    @property
    def M(self) -> int:
        return len(self.tuples)


def _encode(vecs: np.ndarray, p: int) -> np.ndarray:
    """Injective integer code of rows of a residue matrix."""
    n = vecs.shape[1]
    if p**n < 2**62:
        weights = np.array([p**j for j in range(n)], dtype=np.int64)
        return vecs @ weights if n else np.zeros(vecs.shape[0], dtype=np.int64)
    weights = np.array([p**j for j in range(n)], dtype=object)
    return (vecs.astype(object) * weights).sum(axis=1)


def _partial_sums(cols: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All sums over index tuples of the given colors: (sums, index tuples)."""
    h, M, n = cols.shape
    idx = np.indices((M,) * h).reshape(h, -1).T
    sums = np.zeros((idx.shape[0], n), dtype=np.int64)
    for c in range(h):
        sums = (sums + cols[c][idx[:, c]]) % p
    return sums, idx


def sumfree_verify(fam: SumFreeFamily) -> bool:
    """Diagonal sums vanish and no off-diagonal index tuple sums to zero.

    Meet in the middle: sums over the first ceil(k/2) colors are tabulated,
    sums over the rest are looked up negated.  A hit is harmless only when
    the matching left tuple is unique and both halves are the same constant
    index.
    """
    p, n, k, M = fam.p, fam.n, fam.k, fam.M
    for t in fam.tuples:
        if any(sum(x[j] for x in t) % p for j in range(n)):
            return False
    if M <= 1:
        return True
    h = (k + 1) // 2
    if M**h > SUMFREE_GUARD:
        raise TooLarge(f"{M}^{h} partial sums exceed the guard {SUMFREE_GUARD}")
    pts = np.array(fam.tuples, dtype=np.int64).reshape(M, k, n).transpose(1, 0, 2)
    left, lidx = _partial_sums(pts[:h], p)
    right, ridx = _partial_sums(pts[h:], p)
    codes, first, counts = np.unique(_encode(left, p), return_index=True, return_counts=True)
    need = _encode((-right) % p, p)
    pos = np.searchsorted(codes, need)
    pos_c = np.minimum(pos, len(codes) - 1)
    hit = codes[pos_c] == need
    if not hit.any():
        return True
    ridx, pos_c = ridx[hit], pos_c[hit]
    if np.any(counts[pos_c] > 1):
        return False
    rep = lidx[first[pos_c]]
    j = ridx[:, :1]
    diag = np.all(ridx == j, axis=1) & np.all(rep == j, axis=1)
    return bool(diag.all())


def sumfree_brute(fam: SumFreeFamily) -> bool:
    """Direct scan over all M^k index tuples (test oracle)."""
    p, n, k, M = fam.p, fam.n, fam.k, fam.M
    for js in itertools.product(range(M), repeat=k):
        s = [sum(fam.tuples[j][i][c] for i, j in enumerate(js)) % p for c in range(n)]
        zero = not any(s)
        diag = len(set(js)) == 1
        if zero != diag:
            return False
    return True
