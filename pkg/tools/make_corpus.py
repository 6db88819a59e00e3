"""Regenerate tests/data/corpus.json (deterministic)."""

import json
import random
import sys
from pathlib import Path

from hclf.curve import CurveError, jacobian_order, level, places_at_level, validate_curve
from hclf.field import make_field
from hclf.io import curve_to_spec
from hclf.jacobian import Divisor, BasePointConfig

CAP = 5000


def candidates(rng, p, a, deg, with_h, nonprime=False):
    K = make_field(p, a)
    while True:
        f = [rng.randrange(K.order) for _ in range(deg)] + [1 if deg % 2 else rng.randrange(1, K.order)]
        h = [rng.randrange(K.order) for _ in range(rng.randrange(1, 3))] if with_h else []
        if nonprime and all(c < p for c in f + h):
            continue
        try:
            C = validate_curve(K, h, f, "")
        except CurveError:
            continue
        yield C


def pick(rng, p, a, deg, count, label, kinds=None, with_h=False, nonprime=False, need_point=True, nmax=2):
    out = []
    for C in candidates(rng, p, a, deg, with_h, nonprime):
        if any(jacobian_order(C, n) > CAP for n in range(1, nmax + 1)):
            continue
        if need_point and not places_at_level(C, 1, 1):
            continue
        kind = level(C, 1).inf[0].kind
        if kinds is not None and kind not in kinds:
            continue
        if any(C.F == D.F and C.h == D.h for D in out):
            continue
        out.append(C)
        if len(out) == count:
            break
    return [(f"{label}{i}", C) for i, C in enumerate(out)]


def spec(name, C, group, base=None):
    C = validate_curve(C.base, C.h, C.f, name)
    s = curve_to_spec(C, base)
    s["group"] = group
    return s


def pointless(rng):
    """A genus-2 curve over F_3 with no rational point; D1 = P3 - P2."""
    for C in candidates(rng, 3, 1, 6, False):
        if places_at_level(C, 1, 1) or jacobian_order(C, 2) > CAP:
            continue
        P2, P3 = places_at_level(C, 1, 2), places_at_level(C, 1, 3)
        if P2 and P3:
            return C, BasePointConfig(Divisor.from_places(1, [(P3[0], 1), (P2[0], -1)]))


def small_exponent(rng, p, a, deg, count, label, max_exponent=100, trials=4000):
    """Curves with non-prime-field coefficients whose level-2 group has a small exponent."""
    from hclf.jacobian import default_base, jacobian
    out, seen, gen = [], set(), candidates(rng, p, a, deg, False, nonprime=True)
    for _ in range(trials):
        C = next(gen)
        if C.F in seen or not places_at_level(C, 1, 1) or jacobian_order(C, 2) > CAP:
            continue
        seen.add(C.F)
        if jacobian(C, default_base(C), 2).structure().exponent <= max_exponent:
            out.append((f"{label}{len(out)}", C))
            if len(out) == count:
                break
    return out


def main(path):
    rng = random.Random(20261017)
    curves = []
    for name, C in pick(rng, 3, 1, 3, 3, "e3_"):
        curves.append(spec(name, C, "elliptic"))
    for name, C in pick(rng, 5, 1, 3, 2, "e5_") + pick(rng, 5, 1, 4, 1, "e5q_", kinds={"split"}):
        curves.append(spec(name, C, "elliptic"))
    g2 = (pick(rng, 3, 1, 5, 5, "g2i3_") + pick(rng, 3, 1, 5, 2, "g2i3h_", with_h=True)
          + pick(rng, 3, 1, 6, 4, "g2s3_", kinds={"split"})
          + pick(rng, 3, 1, 6, 3, "g2n3_", kinds={"inert"})
          + pick(rng, 5, 1, 5, 3, "g2i5_") + pick(rng, 5, 1, 5, 1, "g2i5h_", with_h=True))
    for name, C in g2:
        curves.append(spec(name, C, "genus2"))
    C, base = pointless(rng)
    curves.append(spec("g2p3_0", C, "genus2", base))
    for name, C in pick(rng, 3, 1, 7, 3, "g3i3_"):
        curves.append(spec(name, C, "genus3"))
    for name, C in small_exponent(rng, 3, 2, 5, 3, "t9_"):
        curves.append(spec(name, C, "twist"))
    for name, C in pick(rng, 3, 1, 6, 1, "g2s3h_", kinds={"split"}, with_h=True):
        curves.append(spec(name, C, "genus2"))
    Path(path).write_text(json.dumps(curves, indent=1) + "\n")
    for s in curves:
        print(s["label"], s["group"], s["f"], s["h"])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus.json")
