"""Finite-field Kakeya sets: line coverage, span claims, closed-form bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegreeTooLarge, GuardTripped, InvalidInput, NotKakeya
from ..field import FpMatrix, is_prime, rank, rank_of_rows
from ..poly import all_points, grlex_key, indices_up_to, weight_indices
from ..shiftop import PointMultiset, delta_space, _key_tensor

Point = tuple[int, ...]
MATRIX_GUARD = 2_000_000  # entries


def directions(p: int, n: int) -> list[Point]:
    """Projective representatives (first nonzero coordinate 1), graded-lex order."""
    reps = [v for v in all_points(p, n) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    return sorted(reps, key=grlex_key)


def kakeya_verify(K: PointMultiset) -> tuple[bool, list[Point]]:
    """(contains a line in every direction, uncovered directions)."""
    p, n = K.p, K.n
    members = set(K.points)
    missing = []
    for v in directions(p, n):
        seen = set()
        covered = False
        for u in K.points:
            if u in seen:
                continue
            line = [tuple((x + a * y) % p for x, y in zip(u, v)) for a in range(p)]
            seen.update(line)
            if all(pt in members for pt in line):
                covered = True
                break
        if not covered:
            missing.append(v)
    return not missing, missing


def _check_kakeya(K: PointMultiset):
    ok, missing = kakeya_verify(K)
    if not ok:
        raise NotKakeya(f"no line in directions {missing[:5]}{'...' if len(missing) > 5 else ''}")


@dataclass(frozen=True)
class SpanReport:
    ok: bool
    delta_dim: int
    claim_dim: int
    expected_dim: int

    def __bool__(self):
        return self.ok


def direction_power_rank(p: int, n: int, d: int) -> int:
    """dim span{(v^alpha)_{|alpha| = d} : v != 0}."""
    alphas = weight_indices(n, d)
    rows = [[math.prod(pow(x, e, p) for x, e in zip(v, al)) % p for al in alphas] for v in all_points(p, n) if any(v)]
    return rank_of_rows(rows, p, len(alphas))


def kakeya_span_check(K: PointMultiset, d: int) -> SpanReport:
    """Delta^d_K contains every H^(alpha), |alpha| = d, and the direction-span claim holds."""
    p, n = K.p, K.n
    if d < 0:
        raise InvalidInput("d must be >= 0")
    if d > p - 1:
        raise DegreeTooLarge(f"d = {d} exceeds p - 1 = {p - 1}")
    if not K.is_plain():
        raise InvalidInput("expected a plain set")
    _check_kakeya(K)
    expected = math.comb(n + d - 1, n - 1)
    delta = delta_space(K, d)
    claim = direction_power_rank(p, n, d)
    # Delta^d lives in the weight-d coordinates; it holds all H^(alpha) iff it is everything
    ok = delta.dim == expected and all(
        delta.contains([int(a == b) for b in weight_indices(n, d)]) for a in weight_indices(n, d)
    )
    return SpanReport(ok and claim == expected, delta.dim, claim, expected)


@dataclass(frozen=True)
class MultSpanReport:
    ok: bool
    m: int
    d: int
    matrix_shape: tuple[int, int]
    matrix_rank: int
    delta_dim: int
    expected_dim: int

    def __bool__(self):
        return self.ok


def kakeya_mult_span_check(q: int, n: int, ell: int) -> MultSpanReport:
    """Rank form of the multiplicity span claim, plus Delta^d of (F_q^n, m)."""
    if not is_prime(q):
        raise InvalidInput(f"q = {q} must be prime")
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if ell <= 0 or ell % q:
        raise InvalidInput(f"ell = {ell} must be a positive multiple of q = {q}")
    m = 2 * ell - ell // q
    d = ell * q - 1
    # rows (h, beta) over (F^(n-1), ell + 1); columns alpha in N^(n-1), |alpha| <= d
    n1 = n - 1
    keys = [(h, beta) for h in all_points(q, n1) for beta in indices_up_to(n1, ell)]
    alphas = list(indices_up_to(n1, d))
    shape = (len(keys), len(alphas))
    full = PointMultiset(q, n, {pt: m for pt in all_points(q, n)})
    delta_keys = full.dim()
    delta_cols = (d + 1) ** n
    for rows, cols in (shape, (delta_keys, delta_cols)):
        if rows * cols > MATRIX_GUARD:
            raise GuardTripped(f"{rows}x{cols} matrix exceeds the guard of {MATRIX_GUARD} entries")
    if n1:
        box = _key_tensor(keys, q, [d + 1] * n1)
        pos = {a: j for j, a in enumerate(np.ndindex(*([d + 1] * n1)))}
        mat = box[:, [pos[a] for a in alphas]]
    else:
        mat = np.ones((len(keys), len(alphas)), dtype=np.int64)
    r = rank(FpMatrix(q, mat, cols=len(alphas)))
    expected = math.comb(n + d - 1, n - 1)
    delta = delta_space(full, d)
    ok = r == len(alphas) and delta.dim == expected
    return MultSpanReport(ok, m, d, shape, r, delta.dim, expected)


def min_kakeya_size(p: int, n: int) -> tuple[int, list[Point]]:
    """Exhaustive minimum over all subsets of F_p^n (desk scale only)."""
    pts = list(all_points(p, n))
    if len(pts) > 16:
        raise GuardTripped(f"2^{len(pts)} subsets is beyond desk scale")
    best = None
    for mask in range(1 << len(pts)):
        size = bin(mask).count("1")
        if best is not None and size >= best[0]:
            continue
        K = PointMultiset.plain(p, n, [pts[i] for i in range(len(pts)) if mask >> i & 1])
        if kakeya_verify(K)[0]:
            best = (size, sorted(K.points))
    assert best is not None
    return best
