"""Command-line entry point: one subcommand per capability, JSON lines out.

Exit codes: 0 success, 1 a check failed (a mathematical finding), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .curve import CurveError, count_points, jacobian_order, zeta_numerator_at_level
from .jacobian import JacobianError, default_base
from .lfun import (
    LFunctionError, change_of_variable_all, change_of_variable_check, character_table_product,
    euler_product_all, expected_series, factor_roots, l_polynomial, level_data, splitting_law_check,
    zeta_denominator,
)
from .recovery import (
    CrossCurveMap, RecoveryError, are_isomorphic_hyperelliptic, build_bundle, cross_curve_check,
    example_l_check, isomorphism_families, l_data_multiset, point_difference_map,
    recover_point_classes, search_f3_example, abel_jacobi_image, shuffled_bundle, twist_map,
)

DEFAULT_CAP = 5000


class UsageError(Exception):
    pass


class Output:
    def __init__(self, path):
        self.path = path
        self.lines: list[str] = []

    def emit(self, record: dict):
        self.lines.append(io.dumps(io.to_plain(record)))

    def close(self):
        text = "".join(line + "\n" for line in self.lines)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()


# ---------------------------------------------------------------------------
# shared setup

def _cache(args):
    return io.CensusCache(None if args.no_cache else io.cache_dir(args.cache_dir))


def _check_cap(model, n, cap):
    h = jacobian_order(model, n)
    if h > cap:
        raise UsageError(f"|J(F_{{q^{n}}})| = {h} exceeds the group-size cap {cap}")


def _level(args, model, base, n):
    """Level data with workers set and census slices filled from the cache."""
    _check_cap(model, n, args.cap)
    D = level_data(model, base, n)
    D.workers = args.workers
    io.load_census(D, _cache(args), max(0, 2 * model.genus - 2))
    return D


def _label(model):
    return model.label or "unnamed"


def _parse_exponents(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise UsageError(f"character exponents must be comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands

def cmd_zeta(args, out):
    model, _ = io.load_curve(args.curve)
    n = args.n
    P = zeta_numerator_at_level(model, n)
    out.emit({
        "command": "zeta", "curve": _label(model), "n": n,
        "numerator": P, "denominator": zeta_denominator(model, n),
        "points": [count_points(model, n * k) for k in range(1, model.genus + 1)],
        "jacobian_order": jacobian_order(model, n),
    })
    return 0


def cmd_census(args, out):
    model, base = io.load_curve(args.curve)
    D = _level(args, model, base, args.n)
    dmax = 2 * model.genus if args.dmax is None else args.dmax
    slices = {}
    for d in range(dmax + 1):
        v = D.census(d)
        slices[d] = v
        out.emit({
            "command": "census", "curve": _label(model), "n": args.n, "d": d,
            "invariants": list(D.S.invariant_factors),
            "source": "closed_form" if d > 2 * model.genus - 2 else "enumeration",
            "total": int(v.sum()), "counts": [int(c) for c in v],
        })
    if args.figure:
        from .plots import census_plot
        census_plot(slices, args.figure, f"{_label(model)}, n = {args.n}")
    return 0


def cmd_lfun(args, out):
    model, base = io.load_curve(args.curve)
    n = args.n
    D = _level(args, model, base, n)
    if args.all_chars:
        chars = D.table.characters
    elif args.char is not None:
        chars = [D.character(_parse_exponents(args.char))[1]]
    else:
        chars = [D.table.characters[0]]
    status = 0
    euler = None
    if args.euler:
        euler = euler_product_all(model, base, n)
    for ch in chars:
        L = l_polynomial(model, base, n, ch)
        rec = {"command": "lfun", "curve": _label(model), "n": n,
               "character": list(ch.exponents), "coeffs": L.to_json()}
        if L.denominator is not None:
            rec["denominator"] = L.denominator
        if euler is not None:
            idx = D.character(ch)[0]
            want = expected_series(model, base, n, ch, euler.shape[0] - 1)
            got = [D.table.to_cyclotomic(r) for r in euler[:, idx]]
            ok = all(a.equals(b) for a, b in zip(got, want))
            rec["euler_agrees"] = ok
            status = status or (0 if ok else 1)
        out.emit(rec)
    if args.product:
        prod = character_table_product(model, base, n)
        target = float(model.q) ** (-n / 2)
        roots = factor_roots(model, base, n)
        inverse = 1.0 / roots
        dev = float(np.max(np.abs(np.abs(roots) - target))) if len(roots) else 0.0
        want_deg = D.table.size * (2 * model.genus - 2) + 2
        ok = prod[0] == 1 and len(prod) - 1 == want_deg and dev <= 1e-6
        out.emit({"command": "lfun-product", "curve": _label(model), "n": n,
                  "degree": len(prod) - 1, "expected_degree": want_deg,
                  "coeffs": prod, "max_root_deviation": float(f"{dev:.3e}"), "passed": ok})
        status = status or (0 if ok else 1)
        if args.figure:
            from .plots import root_plot
            root_plot(inverse, float(model.q) ** (n / 2), args.figure,
                      f"inverse roots, {_label(model)}, n = {n}")
    return status


def cmd_recover(args, out):
    model, base = io.load_curve(args.curve)
    n = args.n
    D = _level(args, model, base, n)
    bundle = build_bundle(model, base, n).truncated(1)
    if args.shuffle:
        bundle = shuffled_bundle(bundle)
    expected = sorted(abel_jacobi_image(model, base, n))
    rec = {"command": "recover", "curve": _label(model), "n": n,
           "invariants": list(D.S.invariant_factors), "degree_used": 1}
    try:
        got = sorted(recover_point_classes(bundle))
        message = ""
    except RecoveryError as exc:
        got, message = None, str(exc)
    passed = got == expected
    rec.update({"passed": passed, "size": None if got is None else len(got),
                "recovered": got, "expected": expected})
    if message:
        rec["error"] = message
    out.emit(rec)
    return 0 if passed else 1


def _load_map(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
        return CrossCurveMap({int(k): tuple(tuple(int(c) for c in img) for img in v) for k, v in obj.items()})
    except (OSError, ValueError, TypeError, AttributeError) as exc:
        raise UsageError(f"cannot read the map {path}: {exc}") from None


def _cross_records(out, C, C2, baseC, baseC2, psi, n_max):
    rep = cross_curve_check(C, C2, psi, n_max, baseC, baseC2)
    for n, chi, eq in rep.verdicts:
        out.emit({"command": "cross-check", "n": n, "character": list(chi), "equal": eq})
    multisets = {n: l_data_multiset(C, baseC, n) == l_data_multiset(C2, baseC2, n) for n in rep.levels}
    out.emit({
        "command": "cross-check-summary", "curves": [_label(C), _label(C2)], "n_max": n_max,
        "equal": rep.equal,
        "first_failure": None if rep.first_failure is None else
        {"n": rep.first_failure[0], "character": list(rep.first_failure[1])},
        "points_match": {str(n): v for n, v in rep.points_match.items()},
        "compatibility_failures": [list(p) for p in rep.compatibility_failures],
        "l_multisets_equal": {str(n): v for n, v in multisets.items()},
        "map": {str(n): psi.images[n] for n in psi.levels},
    })
    return rep


def cmd_cross_check(args, out):
    C, baseC = io.load_curve(args.curve)
    C2, baseC2 = io.load_curve(args.curve2)
    for n in range(1, args.n_max + 1):
        _level(args, C, baseC, n)
        _level(args, C2, baseC2, n)
    if args.map:
        psi = _load_map(args.map)
    else:
        psi = point_difference_map(C, baseC, C2, baseC2, args.n_max)
    rep = _cross_records(out, C, C2, baseC, baseC2, psi, args.n_max)
    return 0 if rep.equal else 1


def cmd_twist(args, out):
    model, base = io.load_curve(args.curve)
    for n in range(1, args.n_max + 1):
        _level(args, model, base, n)
    T, baseT, psi = twist_map(model, base, args.m, args.n_max)
    out.emit({"command": "twist", "curve": _label(model), "m": args.m,
              "twist": io.curve_to_spec(T, baseT),
              "map": {str(n): psi.images[n] for n in psi.levels}})
    if args.spec_out:
        with open(args.spec_out, "w") as fh:
            json.dump(io.curve_to_spec(T, baseT), fh)
            fh.write("\n")
    if not args.check:
        return 0
    for n in range(1, args.n_max + 1):
        _level(args, T, baseT, n)
    same_zeta = all(zeta_numerator_at_level(model, n) == zeta_numerator_at_level(T, n)
                    for n in range(1, args.n_max + 1))
    rep = _cross_records(out, model, T, base, baseT, psi, args.n_max)
    out.emit({"command": "twist-check", "zeta_equal": same_zeta, "equal": rep.equal and same_zeta})
    return 0 if rep.equal and same_zeta else 1


def cmd_search_example(args, out):
    found = search_f3_example()
    fams = isomorphism_families([e.model for e in found])
    fam_of = {C: i for i, fam in enumerate(fams) for C in fam}
    ok_all = bool(found) and len(fams) >= 2
    for ex in found:
        C = ex.model
        pts = [count_points(C, 1), count_points(C, 2)]
        l_ok = example_l_check(ex)
        ok = (pts == [2, 12] and ex.class_number == 5 and ex.zeta == [1, -2, 3, -6, 9] and l_ok)
        ok_all = ok_all and ok
        out.emit({"command": "search-example", "curve": io.curve_to_spec(C), "family": fam_of[C],
                  "points": pts, "jacobian_order": ex.class_number, "zeta": ex.zeta,
                  "l_formula": l_ok})
    out.emit({"command": "search-example-summary", "survivors": len(found),
              "families": [len(f) for f in fams], "passed": ok_all})
    return 0 if ok_all else 1


def cmd_isom(args, out):
    A, _ = io.load_curve(args.curve)
    B, _ = io.load_curve(args.curve2)
    try:
        iso = are_isomorphic_hyperelliptic(A, B)
    except CurveError as exc:
        raise UsageError(str(exc)) from None
    out.emit({"command": "isom", "curves": [_label(A), _label(B)], "isomorphic": iso})
    return 0


def cmd_artin_check(args, out):
    model, base = io.load_curve(args.curve)
    n = args.n
    D = _level(args, model, base, n)
    trunc = 2 * model.genus + 2 if args.trunc is None else args.trunc
    ok_all = True
    if args.all_chars:
        flags, _ = change_of_variable_all(model, base, n, trunc)
        verdicts = [(ch, bool(f)) for ch, f in zip(D.table.characters, flags)]
    else:
        ch = D.table.characters[0] if args.char is None else D.character(_parse_exponents(args.char))[1]
        verdicts = [(ch, change_of_variable_check(model, base, n, ch, trunc).passed)]
    for ch, passed in verdicts:
        ok_all = ok_all and passed
        out.emit({"command": "artin-check", "curve": _label(model), "n": n, "trunc": trunc,
                  "character": list(ch.exponents), "passed": passed})
    patterns, violations = splitting_law_check(model, n, args.split_dmax)
    ok_all = ok_all and not violations
    out.emit({"command": "splitting-law", "curve": _label(model), "n": n, "dmax": args.split_dmax,
              "patterns": {str(d): [list(p) for p in v] for d, v in patterns.items()},
              "violations": len(violations), "passed": not violations})
    return 0 if ok_all else 1


# ---------------------------------------------------------------------------
# argument parsing

def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON lines here instead of stdout")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest Jacobian order allowed")
    common.add_argument("--cache-dir", help=f"census cache directory (default ${io.CACHE_ENV} or ~/.cache/hclf)")
    common.add_argument("--no-cache", action="store_true")

    p = argparse.ArgumentParser(prog="hclf", description="L-functions of characters of hyperelliptic Jacobians over finite fields")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("zeta", parents=[common], help="zeta function over F_{q^n}")
    s.add_argument("--curve", required=True)
    s.add_argument("--n", type=_positive, default=1)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("census", parents=[common], help="class counts N(x, d) of effective divisors")
    s.add_argument("--curve", required=True)
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--dmax", type=_nonneg)
    s.add_argument("--figure", help="save a histogram of the counts")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("lfun", parents=[common], help="L-polynomials of characters")
    s.add_argument("--curve", required=True)
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--char", help="character exponents, comma separated")
    s.add_argument("--all-chars", action="store_true")
    s.add_argument("--euler", action="store_true", help="compare with the Euler product")
    s.add_argument("--product", action="store_true", help="product over all characters")
    s.add_argument("--figure", help="with --product: save the inverse roots plot")
    s.set_defaults(func=cmd_lfun)

    s = sub.add_parser("recover", parents=[common], help="point classes from group + degree-1 L-data")
    s.add_argument("--curve", required=True)
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--shuffle", action="store_true", help="negative control: permute the bundle")
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("cross-check", parents=[common], help="compare L-data of two curves under a class map")
    s.add_argument("--curve", required=True)
    s.add_argument("--curve2", required=True)
    s.add_argument("--n-max", type=_positive, default=2)
    s.add_argument("--map", help="JSON {n: [generator images]}; default maps [Q-P] to [Q'-P']")
    s.set_defaults(func=cmd_cross_check)

    s = sub.add_parser("twist", parents=[common], help="Frobenius twist and its induced class map")
    s.add_argument("--curve", required=True)
    s.add_argument("--m", type=_positive, default=1)
    s.add_argument("--n-max", type=_positive, default=2)
    s.add_argument("--check", action="store_true", help="also cross-check curve and twist")
    s.add_argument("--spec-out", help="write the twisted curve specification here")
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("search-example", parents=[common], help="the genus-2 example curves over F_3")
    s.set_defaults(func=cmd_search_example)

    s = sub.add_parser("isom", parents=[common], help="isomorphism test for genus-2 curves")
    s.add_argument("--curve", required=True)
    s.add_argument("--curve2", required=True)
    s.set_defaults(func=cmd_isom)

    s = sub.add_parser("artin-check", parents=[common], help="change-of-variable identity and splitting law")
    s.add_argument("--curve", required=True)
    s.add_argument("--n", type=_positive, default=2)
    s.add_argument("--trunc", type=_positive)
    s.add_argument("--char")
    s.add_argument("--all-chars", action="store_true")
    s.add_argument("--split-dmax", type=_positive, default=6)
    s.set_defaults(func=cmd_artin_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    out = Output(args.out)
    try:
        code = args.func(args, out)
    except (UsageError, io.SpecError, CurveError, JacobianError, LFunctionError) as exc:
        print(f"hclf {args.command}: {exc}", file=sys.stderr)
        return 2
    except RecoveryError as exc:
        out.close()
        print(f"hclf {args.command}: {exc}", file=sys.stderr)
        return 1
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
