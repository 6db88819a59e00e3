"""Recovering the Abel-Jacobi point set from group + L-data, and cross-curve checks."""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .characters import Character, CharacterError, CharacterTable, negate
from .curve import (
    CurveError, CurveModel, places_at_level, validate_curve, zeta_numerator, jacobian_order,
    count_points,
)
from .cyclotomic import CyclotomicInteger
from .field import make_field
from .jacobian import BasePointConfig, Divisor, default_base, map_divisor, jacobian
from .lfun import l_polynomial, level_data


class RecoveryError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# the bundle: abstract group plus L-coefficients, nothing else

@dataclass
class LDataBundle:
    invariants: tuple[int, ...]
    lfunctions: dict  # character exponents -> list of CyclotomicInteger (c_0, c_1, ...)
    level: int

    def truncated(self, degree: int) -> "LDataBundle":
        return LDataBundle(self.invariants, {k: v[: degree + 1] for k, v in self.lfunctions.items()}, self.level)

    def relabeled(self, perm: dict) -> "LDataBundle":
        """Move the data of character a to character perm[a]."""
        return LDataBundle(self.invariants, {perm.get(k, k): v for k, v in self.lfunctions.items()}, self.level)


def build_bundle(model: CurveModel, base, n: int) -> LDataBundle:
    """Group invariants and the divisor-sum coefficients c_0..c_{2g-2} of every character."""
    D = level_data(model, base, n)
    top = 2 * model.genus - 2
    rows = [D.coefficients(d) for d in range(max(top, 1) + 1)]
    lf = {}
    for i, ch in enumerate(D.table.characters):
        lf[ch.exponents] = [D.table.to_cyclotomic(r[i]) for r in rows]
    return LDataBundle(tuple(D.S.invariant_factors), lf, n)


@lru_cache(maxsize=32)
def _table(invariants) -> CharacterTable:
    return CharacterTable(invariants)


def invert_counts(bundle: LDataBundle, d: int) -> dict:
    """N(x, d) for every group element x (as coordinates), by exact Fourier inversion."""
    T = _table(tuple(bundle.invariants))
    C = np.zeros((len(T.characters), T.phi), dtype=np.int64)
    for i, ch in enumerate(T.characters):
        coeffs = bundle.lfunctions.get(ch.exponents)
        if coeffs is None:
            raise RecoveryError(f"bundle has no data for character {ch.exponents}")
        if d >= len(coeffs):
            raise RecoveryError(f"bundle has no coefficient of degree {d}")
        C[i] = T.from_cyclotomic(coeffs[d])
    try:
        vals = T.inverse(C)
    except CharacterError as exc:
        raise RecoveryError(f"inconsistent bundle: {exc}") from None
    if (vals < 0).any():
        raise RecoveryError("inconsistent bundle: negative class count")
    return {e: int(v) for e, v in zip(T.elements, vals)}


def recover_point_classes(bundle: LDataBundle) -> set:
    """{x : N(x, 1) = 1}; uses only the degree-1 coefficients."""
    counts = invert_counts(bundle, 1)
    bad = {x: c for x, c in counts.items() if c > 1}
    if bad:
        raise RecoveryError(f"N(x, 1) > 1 for {len(bad)} classes")
    return {x for x, c in counts.items() if c == 1}


def abel_jacobi_image(model: CurveModel, base, n: int) -> set:
    """Coordinates of [P - D1] for the rational places P over F_{q^n}."""
    D = level_data(model, base, n)
    return {D.S.coords[D.J.frobenius_class(P)] for P in places_at_level(model, n, 1)}


@dataclass
class RecoveryReport:
    passed: bool
    level: int
    recovered: list
    expected: list
    message: str = ""


def verify_recovery(model: CurveModel, base, n: int, bundle: LDataBundle | None = None) -> RecoveryReport:
    expected = abel_jacobi_image(model, base, n)
    if bundle is None:
        bundle = build_bundle(model, base, n).truncated(1)
    try:
        got = recover_point_classes(bundle)
    except RecoveryError as exc:
        return RecoveryReport(False, n, [], sorted(expected), str(exc))
    ok = got == expected
    return RecoveryReport(ok, n, sorted(got), sorted(expected), "" if ok else "point sets differ")


def shuffled_bundle(bundle: LDataBundle) -> LDataBundle:
    """Swap the data of two characters whose swap is not a group automorphism."""
    keys = sorted(bundle.lfunctions)
    if len(keys) < 3:
        raise RecoveryError("group too small for a shuffle")
    # the trivial character is fixed by every automorphism; moving it never is one
    a, b = keys[0], keys[1]
    return bundle.relabeled({a: b, b: a})


# ---------------------------------------------------------------------------
# maps between Jacobians of two curves

@dataclass
class CrossCurveMap:
    """psi_n given by the images (coordinates in J_C'(F_{q^n})) of the generators of J_C(F_{q^n})."""

    images: dict  # n -> tuple of coordinate tuples

    @property
    def levels(self) -> list[int]:
        return sorted(self.images)


def _apply(images, inv_src, inv_tgt, coords):
    out = [0] * len(inv_tgt)
    for e, img in zip(coords, images):
        for j, c in enumerate(img):
            out[j] += e * c
    return tuple(o % d for o, d in zip(out, inv_tgt))


def map_table(C: CurveModel, baseC, C2: CurveModel, baseC2, psi: CrossCurveMap, n: int) -> dict:
    """psi_n as a dict on coordinates, after checking it is a well-defined isomorphism."""
    D, D2 = level_data(C, baseC, n), level_data(C2, baseC2, n)
    inv, inv2 = tuple(D.S.invariant_factors), tuple(D2.S.invariant_factors)
    images = psi.images[n]
    if len(images) != len(inv):
        raise RecoveryError("wrong number of generator images")
    for img, d in zip(images, inv):
        if any((d * c) % m for c, m in zip(img, inv2)):
            raise RecoveryError("generator image has the wrong order")
    table = {x: _apply(images, inv, inv2, x) for x in D.table.elements}
    if len(set(table.values())) != len(table) or len(table) != D2.table.size:
        raise RecoveryError(f"psi_{n} is not bijective")
    return table


def check_compatibility(C, baseC, C2, baseC2, psi: CrossCurveMap) -> list:
    """Pairs (n, nm) where psi_nm o incl != incl o psi_n."""
    bad = []
    for n in psi.levels:
        for N in psi.levels:
            if N <= n or N % n:
                continue
            t_n = map_table(C, baseC, C2, baseC2, psi, n)
            t_N = map_table(C, baseC, C2, baseC2, psi, N)
            D, DN = level_data(C, baseC, n), level_data(C, baseC, N)
            E, EN = level_data(C2, baseC2, n), level_data(C2, baseC2, N)
            for x in D.table.elements:
                up = DN.S.coords[D.J.include(D.S.element(x), DN.J)]
                up2 = EN.S.coords[E.J.include(E.S.element(t_n[x]), EN.J)]
                if t_N[up] != up2:
                    bad.append((n, N))
                    break
    return bad


def transport_character(table: dict, inv_src, inv_tgt, chi: Character) -> tuple[int, ...]:
    """Exponents of chi o psi^-1 on the target group."""
    inverse = {v: k for k, v in table.items()}
    N = chi.order_N
    exps = []
    for j, d in enumerate(inv_tgt):
        gen = tuple(int(i == j) for i in range(len(inv_tgt)))
        k = chi.power(inverse[gen])
        if (k * d) % N:
            raise RecoveryError("transported character is not well defined")
        exps.append(k * d // N)
    return tuple(exps)


@dataclass
class CrossCheckReport:
    equal: bool
    levels: list
    verdicts: list = field(default_factory=list)  # (n, chi exponents, equal)
    points_match: dict = field(default_factory=dict)
    first_failure: tuple | None = None
    compatibility_failures: list = field(default_factory=list)


def cross_curve_check(C: CurveModel, C2: CurveModel, psi: CrossCurveMap, n_max: int = 2,
                      baseC=None, baseC2=None) -> CrossCheckReport:
    baseC = baseC if baseC is not None else default_base(C)
    baseC2 = baseC2 if baseC2 is not None else default_base(C2)
    levels = [n for n in range(1, n_max + 1)]
    missing = [n for n in levels if n not in psi.images]
    if missing:
        raise RecoveryError(f"psi is missing levels {missing}")
    compat = check_compatibility(C, baseC, C2, baseC2, psi)
    rep = CrossCheckReport(True, levels, compatibility_failures=compat)
    if compat:
        rep.equal = False
    for n in levels:
        D, D2 = level_data(C, baseC, n), level_data(C2, baseC2, n)
        table = map_table(C, baseC, C2, baseC2, psi, n)
        inv, inv2 = tuple(D.S.invariant_factors), tuple(D2.S.invariant_factors)
        for ch in D.table.characters:
            exps2 = transport_character(table, inv, inv2, ch)
            La = l_polynomial(C, baseC, n, ch).coeffs
            Lb = l_polynomial(C2, baseC2, n, exps2).coeffs
            eq = len(La) == len(Lb) and all(a.equals(b) for a, b in zip(La, Lb))
            rep.verdicts.append((n, ch.exponents, eq))
            if not eq:
                rep.equal = False
                if rep.first_failure is None:
                    rep.first_failure = (n, ch.exponents)
        img = {table[x] for x in abel_jacobi_image(C, baseC, n)}
        rep.points_match[n] = img == abel_jacobi_image(C2, baseC2, n)
        if not rep.points_match[n]:
            rep.equal = False
    return rep


def l_data_multiset(model: CurveModel, base, n: int) -> list:
    """Sorted L-polynomials of all characters; invariant under any relabeling of the group."""
    out = []
    for ch in level_data(model, base, n).table.characters:
        out.append(tuple(c.coeffs for c in l_polynomial(model, base, n, ch).coeffs))
    return sorted(out)


def point_difference_map(C: CurveModel, baseC, C2: CurveModel, baseC2, n_max: int = 2) -> CrossCurveMap:
    """psi_1 sends [Q - P] to [Q' - P'] (P, P' the base points, Q, Q' the other rational
    points); each higher level takes the least multiplier of generators compatible with
    psi_1 under inclusion.  Cyclic groups only."""
    D, D2 = level_data(C, baseC, 1), level_data(C2, baseC2, 1)
    if len(D.S.invariant_factors) != 1 or tuple(D.S.invariant_factors) != tuple(D2.S.invariant_factors):
        raise RecoveryError("point-difference map needs equal cyclic groups at level 1")
    N1 = D.S.invariant_factors[0]
    P, P2 = baseC.rational_place, baseC2.rational_place
    Qs = [Q for Q in places_at_level(C, 1, 1) if Q != P]
    Q2s = [Q for Q in places_at_level(C2, 1, 1) if Q != P2]
    if P is None or P2 is None or len(Qs) != 1 or len(Q2s) != 1:
        raise RecoveryError("each curve needs exactly two rational points, one of them D1")
    x = D.S.coords[D.J.frobenius_class(Qs[0])][0]
    y = D2.S.coords[D2.J.frobenius_class(Q2s[0])][0]
    if gcd(x, N1) != 1:
        raise RecoveryError("[Q - P] does not generate the level-1 group")
    # generator 1 = x^-1 [Q - P] goes to x^-1 [Q' - P']
    images = {1: (((pow(x, -1, N1) * y) % N1,),)}
    for n in range(2, n_max + 1):
        Dn, D2n = level_data(C, baseC, n), level_data(C2, baseC2, n)
        if len(Dn.S.invariant_factors) != 1 or tuple(Dn.S.invariant_factors) != tuple(D2n.S.invariant_factors):
            raise RecoveryError(f"groups at level {n} are not equal and cyclic")
        Nn = Dn.S.invariant_factors[0]
        for k in range(1, Nn):
            if gcd(k, Nn) != 1:
                continue
            trial = CrossCurveMap({1: images[1], n: ((k,),)})
            if not check_compatibility(C, baseC, C2, baseC2, trial):
                images[n] = ((k,),)
                break
        else:
            raise RecoveryError(f"no isomorphism at level {n} is compatible with psi_1")
    return CrossCurveMap(images)


# ---------------------------------------------------------------------------
# Frobenius twists

def frobenius_twist(model: CurveModel, m: int) -> CurveModel:
    """Raise every coefficient of h and f to the p^m-th power."""
    K = model.base
    e = model.p ** (m % K.k) if K.k > 1 else 1
    h = [K.pow(c, e) if c else 0 for c in model.h]
    f = [K.pow(c, e) if c else 0 for c in model.f]
    label = f"{model.label}^(p^{m})" if model.label else ""
    return validate_curve(K, h, f, label)


def twist_base(model: CurveModel, base: BasePointConfig, m: int) -> BasePointConfig:
    """D1 carried over to the twisted curve."""
    T = frobenius_twist(model, m)
    K = model.base
    e = model.p ** (m % K.k) if K.k > 1 else 1
    items = []
    for P, k in base.d1.support:
        items.append((_twist_place(model, T, P, e), k))
    return BasePointConfig(Divisor.from_places(1, items))


def _twist_place(model, T, P, e):
    from .curve import level, Place
    K = model.base
    fn = lambda c: K.pow(c, e) if c else 0
    if P.kind == "infinite":
        L, LT = level(model, 1), level(T, 1)
        src = L.inf[P.inf_index]
        if src.kind == "split":
            idx = next(I.index for I in LT.inf if I.sign == fn(src.sign))
            return Place(1, P.degree, "infinite", inf_index=idx)
        return Place(1, P.degree, "infinite", inf_index=0)
    return Place(1, P.degree, P.kind, tuple(fn(c) for c in P.u), tuple(fn(c) for c in P.v))


def twist_map(model: CurveModel, base, m: int, n_max: int = 2) -> tuple[CurveModel, BasePointConfig, CrossCurveMap]:
    """The twist, its transported D1 and the class map induced by x -> x^(p^m)."""
    T = frobenius_twist(model, m)
    baseT = twist_base(model, base, m)
    images = {}
    for n in range(1, n_max + 1):
        D, DT = level_data(model, base, n), level_data(T, baseT, n)
        K = D.J.L.field
        e = model.p ** m
        fn = lambda c, K=K, e=e: K.pow(c, e) if c else 0
        imgs = []
        for g in D.S.generators:
            E = map_divisor(D.J.L, DT.J.L, fn, g.rep)
            imgs.append(DT.S.coords[DT.J.canonical(E)])
        images[n] = tuple(imgs)
    return T, baseT, CrossCurveMap(images)


# ---------------------------------------------------------------------------
# the genus-2 example over F_3

@dataclass
class ExampleCurve:
    model: CurveModel
    points: tuple  # (P, Q): the two rational points, P = D1
    zeta: list
    class_number: int


def _example_conditions(R, f) -> bool:
    """Squarefree, no factor of degree <= 2, exactly one split point of P^1."""
    if not R.squarefree(f):
        return False
    if any(len(u) - 1 <= 2 for u, _ in R.factor(f)):
        return False
    K = R.F
    split = sum(1 for x in range(K.order) if K.is_square(R.eval(f, x)) and R.eval(f, x))
    split += 1 if K.is_square(f[-1]) else 0
    return split == 1


def search_f3_example() -> list[ExampleCurve]:
    """Genus-2 curves y^2 = f(x), deg f = 6 over F_3, with the stated properties and |J| = 5."""
    from .poly import ring
    K = make_field(3, 1)
    R = ring(K)
    out = []
    for tail in itertools.product(range(3), repeat=6):
        for lc in (1, 2):
            f = list(tail) + [lc]
            if not _example_conditions(R, f):
                continue
            try:
                C = validate_curve(K, [], f, "")
            except CurveError:
                continue
            if jacobian_order(C, 1) != 5:
                continue
            C = validate_curve(K, [], f, "f=" + "".join(map(str, f)))
            pts = places_at_level(C, 1, 1)
            out.append(ExampleCurve(C, tuple(pts), zeta_numerator(C), 5))
    return out


def _apply_mobius(R, f, a, b, c, d, deg):
    """(c x + d)^deg * f((a x + b)/(c x + d))."""
    out = []
    num, den = [b, a], [d, c]
    for i, fi in enumerate(f + [0] * (deg + 1 - len(f))):
        if fi:
            term = R.mul(R.pow(num, i), R.pow(den, deg - i))
            out = R.add(out, R.scale(term, fi))
    return out


def are_isomorphic_hyperelliptic(A: CurveModel, B: CurveModel) -> bool:
    """Search x -> (ax+b)/(cx+d), y -> e y/(cx+d)^3 over the base field (genus 2 only)."""
    if A.genus != 2 or B.genus != 2:
        raise CurveError("isomorphism test is implemented for genus 2 only")
    if A.base is not B.base:
        return False
    K = A.base
    from .poly import ring
    R = ring(K)
    fa, fb = list(A.F), list(B.F)
    units = [x for x in range(1, K.order)]
    for a, b, c, d in itertools.product(range(K.order), repeat=4):
        if K.sub(K.mul(a, d), K.mul(b, c)) == 0:
            continue
        g = _apply_mobius(R, fa, a, b, c, d, 6)
        for e in units:
            if R.scale(g, K.mul(e, e)) == fb:
                return True
    return False


def isomorphism_families(curves: list[CurveModel]) -> list[list[CurveModel]]:
    fams: list[list[CurveModel]] = []
    for C in curves:
        for fam in fams:
            if are_isomorphic_hyperelliptic(fam[0], C):
                fam.append(C)
                break
        else:
            fams.append([C])
    return fams


def example_l_check(ex: ExampleCurve) -> bool:
    """Every nontrivial chi has L = 1 + (1 + z) t + 3 z t^2 with z = chi([Q - P])."""
    C = ex.model
    base = default_base(C)
    D = level_data(C, base, 1)
    P = base.rational_place
    Q = next(R for R in ex.points if R != P)
    x = D.S.coords[D.J.frobenius_class(Q)]
    for ch in D.table.characters:
        if ch.is_trivial:
            continue
        z = CyclotomicInteger.zeta(ch.order_N, ch.power(x))
        want = [CyclotomicInteger.one(ch.order_N), z + 1, z * 3]
        got = l_polynomial(C, base, 1, ch).coeffs
        if len(got) != 3 or not all(a.equals(b) for a, b in zip(got, want)):
            return False
    return True
