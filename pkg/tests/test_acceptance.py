"""Acceptance gate: sixteen criteria, one pass/fail line each.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the lines) or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import io as _io
import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from shiftpoly import io
from shiftpoly.apps import (
    HPInstance,
    SumFreeFamily,
    canonical_order,
    capset_verify,
    cd_check,
    cns_witness,
    count_monomials,
    extreme_supports,
    gamma,
    hp_basic,
    hp_verify,
    kakeya_bounds,
    kakeya_mult_span_check,
    kakeya_span_check,
    kakeya_verify,
    multiplicative_subgroup,
    sumfree_bound,
    sumfree_brute,
    sumfree_verify,
)
from shiftpoly.cli import run
from shiftpoly.poly import (
    DirectionalFrame,
    Poly,
    add_exps,
    all_points,
    directional_hasse,
    hasse_derivative,
    indices_up_to,
    leq,
    multi_factorial,
    ordinary_derivative,
    shift_poly,
    unit,
    weight_indices,
)
from shiftpoly.field import multi_binom, rank_of_rows
from shiftpoly.selftest import validate_window
from shiftpoly.shiftop import (
    DerivExpansion,
    PointMultiset,
    ShiftCombo,
    annihilate_hyperplane,
    certified_bounds,
    coefficient,
    construct_1d,
    degree_and_leading,
    delta_space,
    expansion_box,
    lambda_rank,
    reduce,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def _report(num: int, title: str, limit: float, body):
    t0 = time.perf_counter()
    err = None
    try:
        detail = body() or ""
    except AssertionError as e:
        err, detail = e, f"assertion failed: {e}"
    elapsed = time.perf_counter() - t0
    ok = err is None and elapsed < limit
    if err is None and not ok:
        detail = f"too slow: {elapsed:.1f}s >= {limit}s"
    line = f"{title} ({elapsed:.2f}s / {limit:.0f}s) {detail}".rstrip()
    RESULTS[num] = (ok, line)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {line}")
    if err is not None:
        raise err
    assert ok, detail


# ---------------------------------------------------------------------------
# random generators


def random_multiset(rng, p, n, max_total, max_points=None):
    pts = list(all_points(p, n))
    rng.shuffle(pts)
    total = rng.randint(1, max_total)
    mult: dict = {}
    for a in pts:
        if total == 0 or (max_points and len(mult) >= max_points):
            break
        m = rng.randint(1, total)
        mult[a] = m
        total -= m
    return PointMultiset(p, n, mult)


def random_combo(rng, A):
    while True:
        vals = [rng.randrange(A.p) for _ in A.keys()]
        if any(vals):
            return ShiftCombo.from_values(A, vals)


def random_poly(rng, p, n, terms, max_deg):
    return Poly(p, n, [(tuple(rng.randint(0, max_deg) for _ in range(n)), rng.randrange(p)) for _ in range(terms)])


# ---------------------------------------------------------------------------
# criteria


def crit1():
    count = 0
    rng = random.Random(1)
    for p in (3, 5, 7):
        for size in range(1, 5):
            for pts in itertools.combinations(range(p), size):
                A = PointMultiset.line(p, pts)
                for d in range(size):
                    res = degree_and_leading(construct_1d(A, d))
                    assert res.d == d, (p, pts, d, res)
                for _ in range(200):
                    assert degree_and_leading(random_combo(rng, A)).d <= size - 1
                count += 1
    return f"{count} sets"


def crit2():
    rng = random.Random(2)
    for t in range(100):
        p = (3, 5)[t % 2]
        A = random_multiset(rng, p, 1, 6)
        s = A.size()
        for d in range(s):
            assert degree_and_leading(construct_1d(A, d)).d == d, (A, d)
        for _ in range(200):
            assert degree_and_leading(random_combo(rng, A)).d <= s - 1, A
    return "100 multisets"


def _instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        A = random_multiset(rng, p, n, 8)
        yield rng, A, random_combo(rng, A), rng.randint(1, n)


def crit3():
    checked = 0
    for rng, A, l, i in _instances(3, 1000):
        bounds = certified_bounds(l)
        red = reduce(l, i)
        assert red.base == l.base
        # coefficient-for-coefficient over the certified window of l
        big = expansion_box(l, [b + (j == i - 1) for j, b in enumerate(bounds)])
        small = expansion_box(red, list(bounds))
        sl = tuple(slice(1, None) if j == i - 1 else slice(None) for j in range(A.n))
        assert np.array_equal(small, big[sl]), (l, i)
        # independent spot checks by the defining sum
        for _ in range(3):
            alpha = tuple(rng.randint(0, b) for b in bounds)
            assert coefficient(red, alpha) == coefficient(l, add_exps(alpha, unit(A.n, i - 1)))
        checked += small.size
    return f"{checked} coefficients"


def crit4():
    preserved = 0
    for rng, A, l, i in _instances(3, 1000):
        eps = rng.randrange(A.p)
        out = annihilate_hyperplane(l, i, eps)
        for (a, beta), c in out.coeffs.items():
            assert not (a[i - 1] == eps and sum(beta) == A.mult[a] - 1), (l, i, eps)
        assert out.base == A.reduce_hyperplane(i - 1, eps)
        d = degree_and_leading(l).d
        lead = degree_and_leading(l).leading
        # differentiated leading part: sum over alpha_i > 0 of C_alpha H^(alpha - e_i)
        target = {add_exps(a, tuple(-int(j == i - 1) for j in range(A.n))): c for a, c in lead.coeffs.items() if a[i - 1] > 0}
        red = reduce(l, i)
        if target:
            r1 = degree_and_leading(red)
            r2 = degree_and_leading(out)
            assert r1.d == d - 1 and r1.leading.coeffs == target, (l, i)
            assert r2.d == d - 1 and r2.leading.coeffs == r1.leading.coeffs, (l, i, eps)
            preserved += 1
    return f"{preserved} nonzero reduced leading parts preserved"


def crit5():
    rng = random.Random(5)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        A = random_multiset(rng, p, n, 8)
        expected = sum(math.comb(m + n - 1, n) for m in A.mult.values())
        assert lambda_rank(A) == expected, A
    return "200 multisets"


def crit6():
    total = 0
    for p in (2, 3):
        for b in range(3):
            count, bad = validate_window(p, b, factor=3)
            assert bad == 0, (p, b, bad)
            total += count
    return f"{total} combinations"


def _product(e1: DerivExpansion, e2: DerivExpansion) -> list[int]:
    return (e1 * e2).vector(e1.W + e2.W)


def crit7():
    rng = random.Random(7)
    nonzero = 0
    for t in range(100):
        p = (3, 5)[t % 2]
        pts = list(all_points(p, 2))
        A = PointMultiset.plain(p, 2, rng.sample(pts, rng.randint(1, 5)))
        B = PointMultiset.plain(p, 2, rng.sample(pts, rng.randint(1, 5)))
        S = PointMultiset.plain(p, 2, [tuple((x + y) % p for x, y in zip(a, b)) for a in A for b in B])
        spaces_a = [delta_space(A, d) for d in range(2 * (p - 1) + 1)]
        spaces_b = [delta_space(B, d) for d in range(2 * (p - 1) + 1)]
        cache: dict = {}
        for da in spaces_a:
            for db in spaces_b:
                for e1 in da.basis:
                    for e2 in db.basis:
                        v = _product(e1, e2)
                        if not any(v):
                            continue
                        d = da.d + db.d
                        if d not in cache:
                            cache[d] = delta_space(S, d)
                        assert cache[d].contains(v), (A, B, e1, e2)
                        nonzero += 1
    return f"{nonzero} nonzero products"


def _cns_instance(rng):
    p = rng.choice([3, 5])
    n = rng.randint(1, 3)
    alpha = tuple(rng.randint(0, 3) for _ in range(n))
    terms = {alpha: rng.randrange(1, p)}
    for _ in range(rng.randint(0, 4)):
        beta = tuple(rng.randint(0, 4) for _ in range(n))
        if leq(alpha, beta):
            continue
        terms[beta] = rng.randrange(p)
    f = Poly(p, n, terms)
    fams = []
    for i in range(n):
        while True:
            pts = rng.sample(range(p), rng.randint(1, p))
            fam = PointMultiset(p, 1, {(a,): rng.randint(1, 3) for a in pts})
            if fam.size() >= alpha[i] + 1:
                break
        fams.append(fam)
    return f, alpha, fams


def crit8():
    rng = random.Random(8)
    for _ in range(500):
        f, alpha, fams = _cns_instance(rng)
        a, r = cns_witness(f, alpha, fams)
        for i, fam in enumerate(fams):
            assert (a[i],) in fam.mult and r[i] <= fam.mult[(a[i],)] - 1
        assert hasse_derivative(f, r)(a) != 0
        brute = any(
            hasse_derivative(f, rr)(aa)
            for aa in itertools.product(*[[x[0] for x in fam.points] for fam in fams])
            for rr in itertools.product(*[range(fam.mult[(x,)]) for fam, x in zip(fams, aa)])
        )
        assert brute
    return "500 instances"


def crit9():
    pairs = 0
    for p in (3, 5, 7):
        subs = [s for r in range(1, p + 1) for s in itertools.combinations(range(p), r)]
        for A in subs:
            for B in subs:
                rep = cd_check(A, B, p)
                assert rep.size >= min(p, len(A) + len(B) - 1)
                if rep.size < p:
                    assert rep.certificate_rank == len(B)
                pairs += 1
    return f"{pairs} pairs"


def _hp_pairs(p, d, rng=None, samples=None):
    allowed = set(multiplicative_subgroup(p, d)) | {0}

    def bs_for(A):
        return [b for b in range(p) if all((a + b) % p in allowed for a in A)]

    if rng is None:
        for size in range(1, p + 1):
            for A in itertools.combinations(range(p), size):
                bs = bs_for(A)
                for k in range(1, len(bs) + 1):
                    for B in itertools.combinations(bs, k):
                        yield A, B
        return
    got = 0
    while got < samples:
        A = tuple(sorted(rng.sample(range(p), rng.randint(1, d + 1))))
        bs = bs_for(A)
        if not bs:
            continue
        B = tuple(sorted(rng.sample(bs, rng.randint(1, len(bs)))))
        got += 1
        yield A, B


def crit10():
    rng = random.Random(10)
    stats = {"pairs": 0, "certificates": 0, "eps_skipped": 0, "union_fail": 0}
    for p in (7, 11, 13):
        for d in [x for x in range(1, p - 1) if (p - 1) % x == 0]:
            gen = _hp_pairs(p, d) if p <= 11 else _hp_pairs(p, d, rng, 10_000)
            for A, B in gen:
                assert hp_basic(p, d, A, B)["holds"], (p, d, A, B)
                stats["pairs"] += 1
                if len(B) < 2:
                    continue
                rep = hp_verify(HPInstance.lacunary(p, d, A, B))
                assert rep.holds_cap, (p, d, A, B)
                stats["union_fail"] += not rep.holds_cup
                if rep.certificate["eps_vanishing"]:
                    stats["eps_skipped"] += 1
                    continue
                assert rep.certificate["divisible"], (p, d, A, B)
                stats["certificates"] += 1
    return json.dumps(stats)


def crit11():
    g = gamma(3, 3, 1e-12)
    assert 2.754 < g.value < 2.756, g
    assert g.residual < 1e-8, g.residual
    assert abs(4 * g.minimizer**2 + g.minimizer - 2) < 1e-10
    for p in (2, 3, 5, 7, 11, 13):
        for k in range(3, p + 1):
            assert gamma(p, k).value < p, (p, k)
        if p >= 3:
            assert gamma(p, p).value < 4, p
    return f"Gamma_3,3 = {float(g.value):.6f}"


def crit12():
    pts = list(all_points(3, 2))
    N = count_monomials(2, 3, 1)
    best = 0
    for mask in range(1 << 9):
        A = PointMultiset.plain(3, 2, [pts[i] for i in range(9) if mask >> i & 1])
        if not capset_verify(A):
            continue
        assert len(A) <= 2 * N
        best = max(best, len(A))
        if len(A):
            sp, sm = extreme_supports(A, 1, canonical_order(A.points))
            assert len(A) - len(sp) <= N and len(A) - len(sm) <= N
    return f"largest cap {best} <= {2 * N}"


def _diagonal_family(rng):
    while True:
        p = rng.choice([3, 5, 7])
        n = rng.randint(1, 3)
        k = rng.randint(3, 4)
        M = rng.randint(1, 5)
        pts = list(all_points(p, n))
        if M > len(pts):
            continue
        cols = [rng.sample(pts, M) for _ in range(k - 1)]
        last = [tuple(-sum(c[j][t] for c in cols) % p for t in range(n)) for j in range(M)]
        if len(set(last)) < M:
            continue
        fam = SumFreeFamily(p, n, k, tuple(tuple(c[j] for c in cols) + (last[j],) for j in range(M)))
        if sumfree_brute(fam):
            return fam


def _corrupt(rng, fam):
    p, n, k, M = fam.p, fam.n, fam.k, fam.M
    while True:
        tuples = [list(t) for t in fam.tuples]
        if M == 1 or rng.random() < 0.3:
            j = rng.randrange(M)
            i = rng.randrange(k)
            new = tuple((x + rng.randrange(1, p)) % p if t == 0 else x for t, x in enumerate(tuples[j][i]))
            tuples[j][i] = new
        else:
            js = [rng.randrange(M) for _ in range(k)]
            if len(set(js)) == 1:
                continue
            s = [sum(tuples[js[i]][i][t] for i in range(k - 1)) % p for t in range(n)]
            tuples[js[-1]][k - 1] = tuple(-x % p for x in s)
        col_ok = all(len({t[i] for t in tuples}) == M for i in range(k))
        if col_ok:
            return SumFreeFamily(p, n, k, tuple(tuple(t) for t in tuples))


def crit13():
    rng = random.Random(13)
    valid = [_diagonal_family(rng) for _ in range(100)]
    assert all(sumfree_verify(f) for f in valid)
    bad = [_corrupt(rng, f) for f in valid]
    assert not any(sumfree_verify(f) for f in bad)
    assert not any(sumfree_brute(f) for f in bad)
    checked = 0
    for p in (3, 5, 7, 11, 13):
        for k in range(3, p + 1):
            for n in range(1, 31):
                assert sumfree_bound(n, p, k).values["N_le_gamma_pow_n"], (n, p, k)
                checked += 1
    return f"{checked} bound reports"


def crit14():
    for q in (2, 3, 5):
        for n in (1, 2, 3):
            assert kakeya_verify(PointMultiset.plain(q, n, list(all_points(q, n))))[0]
    pts = list(all_points(3, 2))
    smallest = min(
        bin(mask).count("1")
        for mask in range(1 << 9)
        if kakeya_verify(PointMultiset.plain(3, 2, [pts[i] for i in range(9) if mask >> i & 1]))[0]
    )
    assert smallest >= kakeya_bounds(2, 3).values["binom"] == 6
    for q, n in ((2, 2), (3, 2), (3, 3), (5, 2)):
        K = PointMultiset.plain(q, n, list(all_points(q, n)))
        for d in range(q):
            assert kakeya_span_check(K, d).ok, (q, n, d)
    assert kakeya_mult_span_check(2, 2, 2).ok
    assert kakeya_mult_span_check(3, 2, 3).ok
    return f"minimum Kakeya set in F_3^2 has {smallest} points"


def crit15():
    rng = random.Random(15)
    for _ in range(500):  # Hasse composition
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 3)
        f = random_poly(rng, p, n, 5, 8)
        a = tuple(rng.randint(0, 3) for _ in range(n))
        b = tuple(rng.randint(0, 3) for _ in range(n))
        ab = add_exps(a, b)
        assert hasse_derivative(hasse_derivative(f, b), a) == hasse_derivative(f, ab).scale(multi_binom(ab, a, p))
    for _ in range(500):  # derivative bridge
        p = rng.choice([3, 5, 7])
        n = rng.randint(1, 3)
        f = random_poly(rng, p, n, 5, 8)
        a = tuple(rng.randint(0, p - 1) for _ in range(n))
        assert hasse_derivative(f, a).scale(multi_factorial(a)) == ordinary_derivative(f, a)
    for _ in range(500):  # shift / Hasse duality
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 3)
        f = random_poly(rng, p, n, 4, 5)
        h = tuple(rng.randrange(p) for _ in range(n))
        total = Poly.zero(p, n)
        for al in indices_up_to(n, max(f.deg(), 0)):
            c = math.prod(pow(x, e, p) for x, e in zip(h, al)) % p
            total = total + hasse_derivative(f, al).scale(c)
        assert shift_poly(f, h) == total
    for _ in range(500):  # directional bullets
        p = rng.choice([3, 5, 7])
        n = rng.randint(1, 3)
        f = random_poly(rng, p, n, 4, 4)
        d = rng.randint(0, 3)
        while True:
            v = tuple(rng.randrange(p) for _ in range(n))
            if any(v):
                break
        lhs = directional_hasse(f, DirectionalFrame(p, [v]), (d,))
        rhs = Poly.zero(p, n)
        for al in weight_indices(n, d):
            rhs = rhs + hasse_derivative(f, al).scale(math.prod(pow(x, e, p) for x, e in zip(v, al)))
        assert lhs == rhs
        k = rng.randint(1, n)
        while True:
            vs = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(k)]
            if rank_of_rows(vs, p) == k:
                break
        frame = DirectionalFrame(p, vs)
        al = tuple(rng.randint(0, 2) for _ in range(k))
        composed = f
        for vj, aj in zip(vs, al):
            composed = directional_hasse(composed, DirectionalFrame(p, [vj]), (aj,))
        assert directional_hasse(f, frame, al) == composed
        c = tuple(rng.randrange(p) for _ in range(k))
        w = tuple(sum(cj * vj[t] for cj, vj in zip(c, vs)) % p for t in range(n))
        if any(w):
            lhs = directional_hasse(f, DirectionalFrame(p, [w]), (d,))
            rhs = Poly.zero(p, k and n)
            for be in weight_indices(k, d):
                coef = math.prod(pow(x, e, p) for x, e in zip(c, be)) % p
                rhs = rhs + directional_hasse(f, frame, be).scale(coef)
            assert lhs == rhs
    return "4 x 500 instances"


def _cli(argv):
    buf = _io.StringIO()
    code = run(argv, stdout=buf)
    return code, json.loads(buf.getvalue())


def crit16(tmp_path=None):
    import tempfile
    from pathlib import Path

    rng = random.Random(16)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 3)
        f = random_poly(rng, p, n, 5, 6)
        A = random_multiset(rng, p, n, 8)
        l = random_combo(rng, A)
        for load, dump, x in (
            (io.load_poly, io.dump_poly, f),
            (io.load_multiset, io.dump_multiset, A),
            (io.load_combo, io.dump_combo, l),
        ):
            doc = json.loads(io.canonical_dumps(dump(x)))
            y = load(doc)
            assert y == x and io.canonical_dumps(dump(y)) == io.canonical_dumps(doc)
        fam = _diagonal_family(rng)
        assert io.load_family(io.dump_family(fam)) == fam
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "A.json").write_text(json.dumps({"p": 5, "n": 1, "points": [{"coords": [c]} for c in (0, 1, 2)]}))
        (tmp / "L.json").write_text(json.dumps({"p": 3, "n": 2, "points": [{"coords": [c, c]} for c in range(3)]}))
        (tmp / "bad.json").write_text(json.dumps({"p": 5, "n": 1, "points": [{"coords": "x"}]}))
        argvs = [
            ["degree", "--set", str(tmp / "A.json")],
            ["capset", "verify", "--set", str(tmp / "L.json")],
            ["bounds", "kakeya", "--n", "2", "--q", "3"],
            ["delta", "--set", str(tmp / "A.json"), "--d", "1"],
            ["gamma", "--p", "3", "--k", "3"],
            ["selftest"],
        ]
        for argv in argvs:
            c1, d1 = _cli(argv)
            c2, d2 = _cli(argv)
            d1["meta"].pop("elapsed_ms")
            d2["meta"].pop("elapsed_ms")
            assert c1 == c2 and d1 == d2, argv
        code, doc = _cli(["degree", "--set", str(tmp / "A.json")])
        assert code == 0 and doc["result"]["deg"] == 2
        code, doc = _cli(["capset", "verify", "--set", str(tmp / "L.json")])
        assert code == 1 and len(doc["result"]["triple"]) == 3
        code, doc = _cli(["bounds", "kakeya", "--n", "2", "--q", "3"])
        assert doc["result"]["binom"] == "6" and doc["result"]["mult_bound"] == {"num": "81", "den": "25"}
        code, _ = _cli(["degree", "--set", str(tmp / "bad.json")])
        assert code == 2
        code, doc = _cli(["selftest"])
        assert code == 0 and doc["ok"]
    return "round-trip, determinism, selftest"


CRITERIA = [
    (1, "1-D degree lemma, exhaustive", 30, crit1),
    (2, "multiset degree lemma", 30, crit2),
    (3, "reduction identity", 60, crit3),
    (4, "hyperplane annihilation", 60, crit4),
    (5, "independence dimension", 120, crit5),
    (6, "certified window validation", 30, crit6),
    (7, "Delta multiplicativity", 120, crit7),
    (8, "nonvanishing witness vs brute force", 120, crit8),
    (9, "Cauchy-Davenport exhaustive", 120, crit9),
    (10, "Hanson-Petridis", 300, crit10),
    (11, "Gamma constants", 10, crit11),
    (12, "cap sets in F_3^2", 60, crit12),
    (13, "k-colored sum-free", 60, crit13),
    (14, "Kakeya", 300, crit14),
    (15, "polynomial-layer identities", 60, crit15),
    (16, "CLI round-trip, determinism, selftest", 30, crit16),
]


@pytest.mark.parametrize("num,title,limit,body", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, title, limit, body):
    _report(num, title, limit, body)


if __name__ == "__main__":
    failed = 0
    for num, title, limit, body in CRITERIA:
        try:
            _report(num, title, limit, body)
        except AssertionError:
            failed += 1
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    raise SystemExit(1 if failed else 0)
