"""Closed-form bounds: monomial counts, cap-set / sum-free / Kakeya constants, Gamma."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

import mpmath

from ..errors import InvalidInput, NotUnimodal
from ..field import is_prime
from ..poly import count_monomials

__all__ = [
    "BoundReport",
    "GammaResult",
    "capset_bound",
    "count_monomials",
    "gamma",
    "kakeya_bounds",
    "sumfree_bound",
]

GAMMA_PREC = 128  # bits
GRID = 256


@dataclass(frozen=True)
class BoundReport:
    kind: str
    params: dict[str, int]
    values: dict[str, Any]
    formulas: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "values": {k: _json_value(v) for k, v in self.values.items()},
            "formulas": dict(self.formulas),
        }


def _json_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return {"num": str(v.numerator), "den": str(v.denominator)}
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 30)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


# ---------------------------------------------------------------------------
# Gamma


@dataclass(frozen=True)
class GammaResult:
    value: mpmath.mpf
    minimizer: mpmath.mpf
    unimodal: bool
    residual: mpmath.mpf  # |f'(gamma*)| by central differences

    def __float__(self):
        return float(self.value)


def _gamma_objective(p: int, k: int):
    e = mpmath.mpf(p - 1) / k

    def f(g):
        return mpmath.fsum(g**i for i in range(p)) / g**e

    def log_f(u):
        # u = log(gamma); log f is convex in u (log-sum-exp minus a linear term)
        return mpmath.log(mpmath.fsum(mpmath.exp(i * u) for i in range(p))) - e * u

    return f, log_f


def gamma(p: int, k: int, tol: float = 1e-12) -> GammaResult:
    """min over 0 < g < 1 of (1 + g + ... + g^(p-1)) / g^((p-1)/k)."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if k < 3:
        raise InvalidInput("k must be >= 3")
    if not tol > 0:
        raise InvalidInput("tol must be positive")
    return _gamma_cached(p, k, float(tol))


@lru_cache(maxsize=512)
def _gamma_cached(p: int, k: int, tol: float) -> GammaResult:
    with mpmath.workprec(GAMMA_PREC):
        f, log_f = _gamma_objective(p, k)
        # the minimizer stays well inside (e^-20, 1) for every admissible (p, k)
        lo, hi = mpmath.mpf(-20), mpmath.mpf(0)
        us = [lo + (hi - lo) * (j + 0.5) / GRID for j in range(GRID)]
        vals = [log_f(u) for u in us]
        minima = [j for j in range(1, GRID - 1) if vals[j] < vals[j - 1] and vals[j] <= vals[j + 1]]
        unimodal = len(minima) <= 1
        if not unimodal:
            warnings.warn(f"Gamma objective for p={p}, k={k} is not unimodal on the grid", NotUnimodal)
            j = min(range(GRID), key=vals.__getitem__)
            lo, hi = us[max(j - 1, 0)], us[min(j + 1, GRID - 1)]
        else:
            j = minima[0] if minima else min(range(GRID), key=vals.__getitem__)
            lo, hi = us[max(j - 1, 0)], us[min(j + 1, GRID - 1)]
        # gamma = e^u with u < 0, so a u-interval of width w bounds the gamma error by w
        stop = mpmath.mpf(tol) / 100
        while hi - lo > stop:
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if log_f(m1) <= log_f(m2):
                hi = m2
            else:
                lo = m1
        g = mpmath.exp((lo + hi) / 2)
        h = mpmath.mpf(10) ** -20
        residual = abs((f(g + h) - f(g - h)) / (2 * h))
        return GammaResult(f(g), g, unimodal, residual)


# ---------------------------------------------------------------------------
# reports


def capset_bound(n: int, p: int) -> BoundReport:
    """Both constants for 3-AP-free sets: 3N (statement) and 2N (proof)."""
    if n < 0:
        raise InvalidInput("n must be >= 0")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    r = (p - 1) * n // 3
    N = count_monomials(n, p, r)
    return BoundReport(
        "capset",
        {"n": n, "p": p},
        {"r": r, "N": N, "statement_bound": 3 * N, "proof_bound": 2 * N},
        {
            "r": "floor((p-1)n/3)",
            "statement_bound": "3*N(n,p,r)  (theorem statement)",
            "proof_bound": "2*N(n,p,r)  (proof constant)",
        },
    )


def sumfree_bound(n: int, p: int, k: int, tol: float = 1e-12) -> BoundReport:
    """k N(n, p, floor((p-1)n/k)) and Gamma_{p,k}^n, with N <= Gamma^n checked."""
    if n < 0:
        raise InvalidInput("n must be >= 0")
    if k < 3:
        raise InvalidInput("k must be >= 3")
    r = (p - 1) * n // k
    N = count_monomials(n, p, r)
    g = gamma(p, k, tol)
    with mpmath.workprec(GAMMA_PREC):
        gn = g.value**n
        # slack for the numeric error of Gamma itself
        holds = bool(N <= gn * (1 + mpmath.mpf(tol)) ** n)
    return BoundReport(
        "sumfree",
        {"n": n, "p": p, "k": k},
        {"r": r, "N": N, "bound": k * N, "gamma": g.value, "gamma_pow_n": gn, "N_le_gamma_pow_n": holds},
        {"r": "floor((p-1)n/k)", "bound": "k*N(n,p,r)", "gamma_pow_n": "Gamma_{p,k}^n"},
    )


def kakeya_bounds(n: int, q: int) -> BoundReport:
    """C(n+q-1, n) and (q^2/(2q-1))^n as an exact rational with its ceiling."""
    if n < 0:
        raise InvalidInput("n must be >= 0")
    if not is_prime(q):
        raise InvalidInput(f"q = {q} must be prime")
    binom = math.comb(n + q - 1, n)
    mult = Fraction(q * q, 2 * q - 1) ** n
    return BoundReport(
        "kakeya",
        {"n": n, "q": q},
        {"binom": binom, "mult_bound": mult, "mult_bound_ceil": math.ceil(mult)},
        {"binom": "C(n+q-1,n)", "mult_bound": "(q/(2-1/q))^n"},
    )
