"""Install check: field and linear-algebra smoke suite plus certified-window validation."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from . import field, poly, shiftop


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def window_oracle_table(p: int, keys, length: int) -> np.ndarray:
    """Rows C(k, beta) a^(k - beta) mod p for k < length, from math.comb and pow only."""
    out = np.zeros((len(keys), length), dtype=np.int64)
    for r, ((a,), (b,)) in enumerate(keys):
        for k in range(b, length):
            out[r, k] = math.comb(k, b) * pow(a, k - b, p) % p
    return out


def validate_window(p: int, beta_max: int, factor: int = 3) -> tuple[int, int]:
    """Exhaustive window check in one dimension.

    Every combination over F_p with multiplicities up to ``beta_max + 1`` is
    expanded directly out to ``factor`` times the largest window; vanishing
    on its own certified window must coincide with vanishing on the whole
    range.  The library's own expansion table is compared entrywise with the
    oracle table as well.  Returns (combinations checked, disagreements).
    """
    base = shiftop.PointMultiset(p, 1, {(a,): beta_max + 1 for a in range(p)})
    keys = base.keys()
    top = shiftop._period_data(beta_max, p)[0]
    length = factor * top + 1
    table = window_oracle_table(p, keys, length)
    betas = np.array([b[0] for _, b in keys])
    coeffs = np.array(list(itertools.product(range(p), repeat=len(keys))), dtype=np.int64)[1:]
    values = coeffs @ table % p
    # per-combination window from its own largest beta
    support_beta = np.where(coeffs != 0, betas[None, :], -1).max(axis=1)
    bounds = np.array([shiftop._period_data(int(b), p)[0] for b in range(beta_max + 1)])[support_beta]
    cols = np.arange(length)[None, :]
    inside = np.where(cols <= bounds[:, None], values, 0).any(axis=1)
    anywhere = values.any(axis=1)
    engine = shiftop._key_tensor(keys, p, [length])
    table_bad = int(np.count_nonzero(engine != table))
    return len(coeffs), int(np.count_nonzero(inside != anywhere)) + table_bad


def _field_checks() -> list[Check]:
    out = []
    ok = all(
        a * field.inv_mod(a, p) % p == 1 and pow(a, p - 1, p) == 1 for p in (2, 3, 5, 7, 11, 13) for a in range(1, p)
    )
    out.append(Check("inverse_and_fermat", ok))
    bad = None
    for p in (2, 3, 5, 7):
        row = [1]
        for n in range(61):
            for k in range(n + 1):
                if field.binom_mod_p(n, k, p) != row[k] % p:
                    bad = (n, k, p)
                    break
            if bad:
                break
            row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
        if bad:
            break
    out.append(Check("binom_pascal", bad is None, "" if bad is None else f"C({bad[0]},{bad[1]}) mod {bad[2]}"))
    van = field.FpMatrix(5, [[1, 1, 1], [1, 2, 4], [1, 3, 4]])
    r = field.rref(van)
    out.append(Check("rref_vandermonde", r.rank == 3 and not r.nullspace_basis))
    r = field.rref(field.FpMatrix(5, [[1, 2], [2, 4]]))
    out.append(Check("rref_nullspace", r.rank == 1 and [list(v) for v in r.nullspace_basis] == [[1, 2]]))
    s1 = field.solve(field.FpMatrix(3, [[1, 1]]), [1])
    s2 = field.solve(field.FpMatrix(5, [[1], [1]]), [1, 2])
    out.append(Check("solve", list(s1) == [1, 0] and s2 is None))
    return out


def _operator_checks(seed: int) -> list[Check]:
    rng = random.Random(seed)
    bad = None
    for trial in range(60):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 2)
        pts = rng.sample(list(poly.all_points(p, n)), rng.randint(1, min(3, p**n)))
        A = shiftop.PointMultiset(p, n, {a: rng.randint(1, 2) for a in pts})
        l = shiftop.ShiftCombo.from_values(A, [rng.randrange(p) for _ in A.keys()])
        i = rng.randint(1, n)
        W = 6
        lhs = shiftop.expand(shiftop.reduce(l, i), W)
        rhs = shiftop.expand(l, W + 1)
        for alpha in poly.indices_up_to(n, W):
            if lhs[alpha] != rhs[poly.add_exps(alpha, poly.unit(n, i - 1))]:
                bad = (trial, alpha)
                break
        if bad:
            break
    out = [Check("reduction_identity", bad is None, "" if bad is None else f"trial {bad[0]} at {bad[1]}")]
    ell = shiftop.ShiftCombo(shiftop.PointMultiset.line(5, [0, 1, 2]), {((0,), (0,)): 1, ((1,), (0,)): -2, ((2,), (0,)): 1})
    res = shiftop.degree_and_leading(ell)
    out.append(Check("second_difference_degree", res.d == 2 and res.leading.coeffs == {(2,): 2}))
    return out


def run_selftest(seed: int = 0) -> list[Check]:
    checks = _field_checks()
    for p in (2, 3):
        for b in range(3):
            count, bad = validate_window(p, b)
            checks.append(Check(f"window_p{p}_beta{b}", bad == 0, f"{count} combinations, {bad} disagreements"))
    checks.extend(_operator_checks(seed))
    return checks
