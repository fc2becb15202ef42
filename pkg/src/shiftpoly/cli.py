"""Command-line front end: every operation on JSON inputs.

Exit codes: 0 success / property holds, 1 property violated, 2 input or
schema error, 3 guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable

import mpmath

from . import __version__, io
from .apps import (
    HPInstance,
    capset_bound,
    cd_check,
    cns_witness,
    extreme_supports,
    find_3ap,
    gamma,
    hp_basic,
    hp_verify,
    kakeya_bounds,
    kakeya_mult_span_check,
    kakeya_span_check,
    kakeya_verify,
    sumfree_bound,
    sumfree_verify,
)
from .errors import InternalContradiction, ShiftPolyError, TooLarge
from .poly import Poly
from .selftest import run_selftest
from .shiftop import (
    BoundExhausted,
    PointMultiset,
    annihilate_hyperplane,
    construct_1d,
    deg_lower_bound,
    deg_set,
    deg_upper_bound,
    degree_and_leading,
    delta_space,
    reduce,
)


class Outcome:
    """Result payload plus whether the checked property held."""

    def __init__(self, result: Any, ok: bool = True, p: int | None = None, n: int | None = None, guard: bool = False):
        self.result, self.ok, self.p, self.n, self.guard = result, ok, p, n, guard


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load_set(path: str) -> PointMultiset:
    return io.load_multiset(io.read_json(path))


def _same_field(A: PointMultiset, B: PointMultiset):
    if A.p != B.p:
        raise io.InvalidInput(f"A is over F_{A.p} but B is over F_{B.p}")


def _one_dim(A: PointMultiset, what: str) -> list[int]:
    if A.n != 1:
        raise io.InvalidInput(f"{what} must be a subset of F_p (n = 1)")
    return [a[0] for a in A.points]


# ---------------------------------------------------------------------------
# handlers


def cmd_degree(args) -> Outcome:
    if args.combo:
        l = io.load_combo(io.read_json(args.combo))
        res = degree_and_leading(l, args.bound)
        if isinstance(res, BoundExhausted):
            return Outcome({"bound_exhausted": res.W}, False, l.p, l.n, guard=True)
        return Outcome({"deg": res.d, "leading": io.dump_expansion_terms(res.leading.coeffs)}, True, l.p, l.n)
    A = _load_set(args.set)
    out: dict = {"deg": deg_set(A, args.bound)}
    if A.is_plain():
        order = args.order if args.order is not None else list(range(1, A.n + 1))
        out["upper_bound"] = deg_upper_bound(A, [i - 1 for i in order])
        out["lower_bound"] = deg_lower_bound(A)
    return Outcome(out, True, A.p, A.n)


def cmd_delta(args) -> Outcome:
    A = _load_set(args.set)
    D = delta_space(A, args.d)
    return Outcome(
        {"d": D.d, "dim": D.dim, "basis": [io.dump_expansion_terms(e.coeffs) for e in D.basis]}, True, A.p, A.n
    )


def cmd_reduce(args) -> Outcome:
    l = io.load_combo(io.read_json(args.combo))
    out = reduce(l, args.i) if args.eps is None else annihilate_hyperplane(l, args.i, args.eps)
    return Outcome(io.dump_combo(out), True, l.p, l.n)


def cmd_construct(args) -> Outcome:
    A = _load_set(args.set)
    return Outcome(io.dump_combo(construct_1d(A, args.d)), True, A.p, A.n)


def cmd_cns(args) -> Outcome:
    f = io.load_poly(io.read_json(args.poly))
    fams = [_load_set(x) for x in args.families]
    a, r = cns_witness(f, args.alpha, fams)
    return Outcome({"point": list(a), "r": list(r)}, True, f.p, f.n)


def cmd_cd(args) -> Outcome:
    A, B = (_load_set(x) for x in args.set)
    _same_field(A, B)
    rep = cd_check(_one_dim(A, "A"), _one_dim(B, "B"), A.p)
    return Outcome(rep.to_json(), rep.holds, A.p, 1)


def cmd_hp(args) -> Outcome:
    A, B = (_load_set(x) for x in args.set)
    _same_field(A, B)
    p = A.p
    a, b = _one_dim(A, "A"), _one_dim(B, "B")
    if args.poly:
        F = io.load_poly(io.read_json(args.poly))
    elif args.d is not None:
        F = Poly.univariate(p, [-1] + [0] * (args.d - 1) + [1])
    else:
        raise io.InvalidInput("hp needs --poly or --d")
    result: dict = {}
    ok = True
    if args.d is not None and not args.poly:
        basic = hp_basic(p, args.d, a, b)
        result["lacunary"] = basic
        ok = basic["holds"]
    if len(b) >= 2 or args.poly:
        rep = hp_verify(HPInstance(p, tuple(a), tuple(b), F), not args.no_certificate)
        result["technical"] = rep.to_json()
        ok = ok and rep.holds_cap and (rep.certificate is None or rep.certificate["divisible"])
    return Outcome(result, ok, p, 1)


def cmd_capset_verify(args) -> Outcome:
    A = _load_set(args.set)
    triple = find_3ap(A)
    out: dict = {"cap": triple is None}
    if triple is not None:
        out["triple"] = [list(x) for x in triple]
    if args.supports and triple is None:
        r = (A.p - 1) * A.n // 3
        sp, sm = extreme_supports(A, r)
        out["supports"] = {"r": r, "outside_plus": len(A) - len(sp), "outside_minus": len(A) - len(sm)}
    return Outcome(out, triple is None, A.p, A.n)


def _bound_outcome(rep, p=None, n=None) -> Outcome:
    return Outcome(rep.to_json()["values"], True, p, n)


def cmd_capset_bound(args) -> Outcome:
    return _bound_outcome(capset_bound(args.n, args.p), args.p, args.n)


def cmd_sumfree_verify(args) -> Outcome:
    fam = io.load_family(io.read_json(args.family))
    ok = sumfree_verify(fam)
    return Outcome({"sum_free": ok}, ok, fam.p, fam.n)


def cmd_sumfree_bound(args) -> Outcome:
    rep = sumfree_bound(args.n, args.p, args.k, args.tol)
    out = _bound_outcome(rep, args.p, args.n)
    out.ok = rep.values["N_le_gamma_pow_n"]
    return out


def cmd_kakeya_verify(args) -> Outcome:
    K = _load_set(args.set)
    ok, missing = kakeya_verify(K)
    return Outcome({"kakeya": ok, "missing": [list(v) for v in missing]}, ok, K.p, K.n)


def cmd_kakeya_bounds(args) -> Outcome:
    return _bound_outcome(kakeya_bounds(args.n, args.q), args.q, args.n)


def cmd_kakeya_span(args) -> Outcome:
    K = _load_set(args.set)
    rep = kakeya_span_check(K, args.d)
    return Outcome(
        {"ok": rep.ok, "delta_dim": rep.delta_dim, "claim_dim": rep.claim_dim, "expected_dim": rep.expected_dim},
        rep.ok,
        K.p,
        K.n,
    )


def cmd_kakeya_multspan(args) -> Outcome:
    rep = kakeya_mult_span_check(args.q, args.n, args.ell)
    return Outcome(
        {
            "ok": rep.ok,
            "m": rep.m,
            "d": rep.d,
            "matrix_shape": list(rep.matrix_shape),
            "matrix_rank": rep.matrix_rank,
            "delta_dim": rep.delta_dim,
            "expected_dim": rep.expected_dim,
        },
        rep.ok,
        args.q,
        args.n,
    )


def cmd_bounds(args) -> Outcome:
    if args.kind == "kakeya":
        return cmd_kakeya_bounds(args)
    if args.kind == "capset":
        return cmd_capset_bound(args)
    return cmd_sumfree_bound(args)


def cmd_gamma(args) -> Outcome:
    g = gamma(args.p, args.k, args.tol)
    return Outcome(
        {
            "value": mpmath.nstr(g.value, 25),
            "minimizer": mpmath.nstr(g.minimizer, 25),
            "unimodal": g.unimodal,
            "residual": mpmath.nstr(g.residual, 5),
        },
        True,
        args.p,
    )


def cmd_selftest(args) -> Outcome:
    checks = run_selftest(args.seed)
    failed = [c.name for c in checks if not c.ok]
    result = {"checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    if failed:
        result["first_failure"] = failed[0]
    return Outcome(result, not failed)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shiftpoly", description="Shift-operator calculus over F_p.")
    ap.add_argument("--version", action="version", version=__version__)
    mode = argparse.ArgumentParser(add_help=False)
    g = mode.add_mutually_exclusive_group()
    g.add_argument("--json", dest="human", action="store_false", help="single JSON document (default)")
    g.add_argument("--human", dest="human", action="store_true", help="readable key/value output")
    mode.set_defaults(human=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(parent, name, func: Callable, help_: str):
        p = parent.add_parser(name, parents=[mode], help=help_)
        p.set_defaults(func=func)
        return p

    p = add(sub, "degree", cmd_degree, "deg(A, m) of a multiset, or deg and leading part of a combination")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--set")
    src.add_argument("--combo")
    p.add_argument("--bound", type=int, help="scan weight override")
    p.add_argument("--order", type=_ints, help="coordinate permutation (1-based) for the slicing upper bound")

    p = add(sub, "delta", cmd_delta, "basis of the leading-component space Delta^d")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, required=True)

    p = add(sub, "reduce", cmd_reduce, "coordinate reduction (or hyperplane annihilation with --eps)")
    p.add_argument("--combo", required=True)
    p.add_argument("--i", type=int, required=True, help="coordinate, 1-based")
    p.add_argument("--eps", type=int)

    p = add(sub, "construct", cmd_construct, "1-D combination of exact degree d")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, required=True)

    p = add(sub, "cns", cmd_cns, "nonvanishing witness")
    p.add_argument("--poly", required=True)
    p.add_argument("--alpha", type=_ints, required=True)
    p.add_argument("--families", nargs="+", required=True, help="one 1-D multiset file per coordinate")

    p = add(sub, "cd", cmd_cd, "Cauchy-Davenport check with rank certificate")
    p.add_argument("--set", nargs=2, required=True, metavar=("A", "B"))

    p = add(sub, "hp", cmd_hp, "Hanson-Petridis inequality and divisibility certificate")
    p.add_argument("--set", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--poly", help="F as a univariate polynomial")
    p.add_argument("--d", type=int, help="use F = z^d - 1")
    p.add_argument("--no-certificate", action="store_true")

    cap = sub.add_parser("capset").add_subparsers(dest="action", required=True)
    p = add(cap, "verify", cmd_capset_verify, "3-AP freeness")
    p.add_argument("--set", required=True)
    p.add_argument("--supports", action="store_true", help="also report |A minus S+| and |A minus S-|")
    p = add(cap, "bound", cmd_capset_bound, "3N and 2N constants")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    sf = sub.add_parser("sumfree").add_subparsers(dest="action", required=True)
    p = add(sf, "verify", cmd_sumfree_verify, "k-colored sum-free check")
    p.add_argument("--family", required=True)
    p = add(sf, "bound", cmd_sumfree_bound, "kN and Gamma^n")
    for flag in ("--n", "--p", "--k"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    kk = sub.add_parser("kakeya").add_subparsers(dest="action", required=True)
    p = add(kk, "verify", cmd_kakeya_verify, "line in every direction")
    p.add_argument("--set", required=True)
    p = add(kk, "bounds", cmd_kakeya_bounds, "C(n+q-1,n) and (q/(2-1/q))^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p = add(kk, "span", cmd_kakeya_span, "Delta^d contains all weight-d derivatives")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, required=True)
    p = add(kk, "multspan", cmd_kakeya_multspan, "multiplicity span claim by exact rank")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)

    p = add(sub, "bounds", cmd_bounds, "closed-form bound reports")
    p.add_argument("kind", choices=["kakeya", "capset", "sumfree"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--tol", type=float, default=1e-12)

    p = add(sub, "gamma", cmd_gamma, "Gamma_{p,k}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = add(sub, "selftest", cmd_selftest, "install check")
    p.add_argument("--seed", type=int, default=0)
    return ap


def _fix_bounds_args(args):
    if args.command != "bounds":
        return
    if args.kind == "kakeya":
        args.q = args.q if args.q is not None else args.p
        if args.q is None:
            raise io.InvalidInput("bounds kakeya needs --q")
    else:
        args.p = args.p if args.p is not None else args.q
        if args.p is None or (args.kind == "sumfree" and args.k is None):
            raise io.InvalidInput(f"bounds {args.kind} needs --p" + (" and --k" if args.kind == "sumfree" else ""))


def _human(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(f"{pad}- {json.dumps(v)}" for v in doc)
    return f"{pad}{json.dumps(doc)}"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    t0 = time.perf_counter()
    try:
        _fix_bounds_args(args)
        out = args.func(args)
        code = 3 if out.guard else (0 if out.ok else 1)
    except TooLarge as e:
        out, code = Outcome({"error": type(e).__name__, "message": str(e)}, False, guard=True), 3
    except InternalContradiction as e:
        print(f"defect: {e}", file=sys.stderr)
        out, code = Outcome({"error": type(e).__name__, "message": str(e)}, False), 1
    except (ShiftPolyError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        out, code = Outcome({"error": type(e).__name__, "message": str(e)}, False), 2
    elapsed = (time.perf_counter() - t0) * 1000
    doc = {
        "ok": out.ok,
        "result": out.result,
        "meta": {"version": __version__, "p": out.p, "n": out.n, "elapsed_ms": round(elapsed, 3)},
    }
    if args.human:
        print(_human({"ok": out.ok, **({"result": out.result} if out.result is not None else {})}), file=stdout)
    else:
        print(io.canonical_dumps(doc), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
