"""One-dimensional applications: Cauchy-Davenport, the nonvanishing witness, Hanson-Petridis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import (
    ArityMismatch,
    EmptyInput,
    FamilyTooSmall,
    HypothesisViolation,
    InternalContradiction,
    InvalidInput,
    NotMaximal,
)
from ..field import _check_modulus, rank_of_rows
from ..poly import (
    Poly,
    divrem_univariate,
    grlex_key,
    hasse_derivative,
    is_maximal_monomial,
    shift_poly,
)
from ..shiftop import PointMultiset, ShiftCombo, apply, construct_1d, multiply


def _residues(xs: Iterable[int], p: int) -> list[int]:
    return sorted({int(x) % p for x in xs})


def sumset(A: Iterable[int], B: Iterable[int], p: int) -> list[int]:
    return sorted({(a + b) % p for a in A for b in B})


# ---------------------------------------------------------------------------
# Cauchy-Davenport


@dataclass(frozen=True)
class CDReport:
    p: int
    sumset: tuple[int, ...]
    size: int
    bound: int
    holds: bool
    certificate_rank: int | None  # None when |A+B| = p and no certificate is needed

    def to_json(self) -> dict:
        return {
            "sumset": list(self.sumset),
            "size": self.size,
            "bound": self.bound,
            "holds": self.holds,
            "certificate_rank": self.certificate_rank,
        }


def cd_check(A: Iterable[int], B: Iterable[int], p: int) -> CDReport:
    """|A+B| >= min(p, |A|+|B|-1), certified by rank{f(z+b)} = |B| when |A+B| < p."""
    _check_modulus(p)
    A, B = _residues(A, p), _residues(B, p)
    if not A or not B:
        raise EmptyInput("A and B must be nonempty")
    S = sumset(A, B, p)
    bound = min(p, len(A) + len(B) - 1)
    cert = None
    if len(S) < p:
        f = Poly.from_roots(p, S)
        length = len(S) + 1
        cert = rank_of_rows([shift_poly(f, (b,)).dense(length) for b in B], p, length)
        if cert != len(B):
            raise InternalContradiction(f"shifts of prod(z - c) over A+B are dependent for B={B}")
    return CDReport(p, tuple(S), len(S), bound, len(S) >= bound, cert)


# ---------------------------------------------------------------------------
# nonvanishing witness


def _lift(l: ShiftCombo, i: int, n: int) -> ShiftCombo:
    """Embed a 1-D combination into coordinate i of F_p^n."""
    p = l.p
    mult = {}
    coeffs = {}
    for ((a,), (b,)), c in l.coeffs.items():
        pt = tuple(a if j == i else 0 for j in range(n))
        coeffs[(pt, tuple(b if j == i else 0 for j in range(n)))] = c
        mult[pt] = max(mult.get(pt, 1), b + 1)
    return ShiftCombo(PointMultiset(p, n, mult), coeffs)


def cns_witness(f: Poly, alpha: Sequence[int], families: Sequence[PointMultiset]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(a, r) with a_i in A_i, r_i <= m_i(a_i) - 1 and H^(r) f(a) != 0."""
    n, p = f.n, f.p
    alpha = tuple(alpha)
    if len(alpha) != n or len(families) != n:
        raise ArityMismatch(f"need {n} exponents and {n} families")
    for i, fam in enumerate(families):
        if fam.n != 1 or fam.p != p:
            raise InvalidInput(f"family {i} must be a multiset in F_{p}")
        if fam.size() < alpha[i] + 1:
            raise FamilyTooSmall(f"family {i} has size {fam.size()} < alpha_{i} + 1 = {alpha[i] + 1}")
    if not is_maximal_monomial(f, alpha):
        raise NotMaximal(f"x^{alpha} is not a maximal monomial of f")
    prod = ShiftCombo.shift(p, (0,) * n)
    for i, fam in enumerate(families):
        prod = multiply(prod, _lift(construct_1d(fam, alpha[i]), i, n))
    value = apply(prod, f)
    if value.deg() != 0:
        raise InternalContradiction(f"product operator sends f to {value}, expected a nonzero constant")
    derivs: dict = {}
    for (a, r), c in sorted(prod.coeffs.items(), key=lambda kv: (grlex_key(kv[0][0]), grlex_key(kv[0][1]))):
        if r not in derivs:
            derivs[r] = hasse_derivative(f, r)
        if derivs[r](a):
            return a, r
    raise InternalContradiction("nonvanishing theorem violated: no witness found")


# ---------------------------------------------------------------------------
# Hanson-Petridis


def multiplicative_subgroup(p: int, d: int) -> list[int]:
    """Z_d: elements of F_p^* whose order divides d."""
    return [x for x in range(1, p) if pow(x, d, p) == 1]


@dataclass(frozen=True)
class HPInstance:
    p: int
    A: tuple[int, ...]
    B: tuple[int, ...]
    F: Poly

    def __post_init__(self):
        p = self.p
        _check_modulus(p)
        object.__setattr__(self, "A", tuple(_residues(self.A, p)))
        object.__setattr__(self, "B", tuple(_residues(self.B, p)))
        if not self.A or not self.B:
            raise HypothesisViolation("A and B must be nonempty")
        F = self.F
        if F.n != 1 or F.p != p:
            raise HypothesisViolation(f"F must be univariate over F_{p}")
        d = F.deg()
        if F.is_zero() or F.coeff((d,)) != 1:
            raise HypothesisViolation("F must be monic")
        if not d < p:
            raise HypothesisViolation("d < p")
        if self.r > min(len(self.B) - 2, d):
            raise HypothesisViolation("r <= |B|-2")
        if self.r >= d:
            raise HypothesisViolation("deg R < d")
        zF = F * Poly.variable(p, 1, 0)
        bad = [c for c in sumset(self.A, self.B, p) if zF((c,))]
        if bad:
            raise HypothesisViolation(f"zF(z) vanishes on A+B (fails at {bad})")

    @classmethod
    def lacunary(cls, p: int, d: int, A, B) -> HPInstance:
        """F = z^d - 1, the case A + B inside Z_d and 0."""
        return cls(p, tuple(A), tuple(B), Poly.univariate(p, [-1] + [0] * (d - 1) + [1]))

    @property
    def d(self) -> int:
        return self.F.deg()

    @property
    def R(self) -> Poly:
        return self.F - Poly.monomial(self.p, (self.d,))

    @property
    def r(self) -> int:
        # R = 0 is treated as r = 0 (the weakest admissible value)
        R = self.R
        return 0 if R.is_zero() else R.deg()

    @property
    def K(self) -> int:
        return len(self.B) - 1 - self.r

    @property
    def g0(self) -> Poly:
        negB = {(-b) % self.p for b in self.B}
        return Poly.from_roots(self.p, [a for a in self.A if a in negB])

    @property
    def g1(self) -> Poly:
        negB = {(-b) % self.p for b in self.B}
        return Poly.from_roots(self.p, [a for a in self.A if a not in negB])


@dataclass
class HPReport:
    lhs: int
    rhs_cap: int
    rhs_cup: int
    holds_cap: bool
    holds_cup: bool
    certificate: dict | None = None

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs_cap": self.rhs_cap,
            "rhs_cup": self.rhs_cup,
            "holds_cap": self.holds_cap,
            "holds_cup": self.holds_cup,
            "certificate": self.certificate,
        }


def _divides_times(f: Poly, g: Poly, times: int) -> tuple[bool, int]:
    """Divide f by g ``times`` times; (all remainders zero, steps taken)."""
    for step in range(times):
        if f.is_zero():
            return True, step
        f, r = divrem_univariate(f, g)
        if not r.is_zero():
            return False, step + 1
    return True, times


def hp_verify(inst: HPInstance, with_certificate: bool = True) -> HPReport:
    """|A|(|B|-r) <= d - r + |B n (-A)| (and the printed union variant)."""
    p, A, B = inst.p, inst.A, inst.B
    d, r, K = inst.d, inst.r, inst.K
    negA = {(-a) % p for a in A}
    cap = len(set(B) & negA)
    cup = len(set(B) | negA)
    lhs = len(A) * (len(B) - r)
    rep = HPReport(lhs, d - r + cap, d - r + cup, lhs <= d - r + cap, lhs <= d - r + cup)
    if not with_certificate:
        return rep
    base = PointMultiset.line(p, B)
    ell = construct_1d(base, len(B) - 1)
    FK = Poly.monomial(p, (K,)) * inst.F
    lFK = apply(ell, FK)
    # constants C(d+K, K-k) relating H^(K-k) l(F_K) to l(F_k)
    vanishing = [k for k in range(K) if math.comb(d + K, K - k) % p == 0]
    g0, g1 = inst.g0, inst.g1
    ok0, s0 = _divides_times(lFK, g0, K) if g0.deg() > 0 else (True, 0)
    ok1, s1 = _divides_times(lFK, g1, K + 1) if g1.deg() > 0 else (True, 0)
    if lFK.is_zero():
        ok0, ok1 = True, True
    rep.certificate = {
        "ell": [[a[0], c] for (a, _), c in ell.sorted_items()],
        "lF_K_degree": None if lFK.is_zero() else lFK.deg(),
        "K": K,
        "eps_vanishing": vanishing,
        "g0_steps": s0,
        "g1_steps": s1,
        "divisible": ok0 and ok1,
        "degree_inequality": (lFK.is_zero() or lFK.deg() >= (K + 1) * len(A) - g0.deg()),
    }
    return rep


def hp_basic(p: int, d: int, A, B) -> dict:
    """The lacunary case: |A||B| <= d + |B n (-A)| when A + B lies in Z_d and 0."""
    _check_modulus(p)
    if d <= 0 or (p - 1) % d or d == p - 1:
        raise HypothesisViolation("d must properly divide p - 1")
    A, B = _residues(A, p), _residues(B, p)
    if not A or not B:
        raise HypothesisViolation("A and B must be nonempty")
    allowed = set(multiplicative_subgroup(p, d)) | {0}
    if not set(sumset(A, B, p)) <= allowed:
        raise HypothesisViolation("A + B lies in Z_d and 0")
    cap = len(set(B) & {(-a) % p for a in A})
    return {"lhs": len(A) * len(B), "rhs": d + cap, "holds": len(A) * len(B) <= d + cap}
