"""Hyperelliptic curves y^2 + h(x) y = f(x) over F_q and their closed points.

Internally every model is rewritten as y'^2 = F(x) with F = f + h^2/4 and
y' = y + h/2 (odd characteristic).  The curve over F_{q^n} is described by a
:class:`CurveLevel`, which owns the level field, the embedded polynomial F and
the places at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import numpy as np

from .field import DEFAULT_FIELD_CAP, GF, FieldError, embedding_table, make_field
from .poly import ring


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CurveModel:
    """A validated hyperelliptic model; build with :func:`validate_curve`."""

    base: GF
    h: tuple[int, ...]
    f: tuple[int, ...]
    genus: int
    model_kind: str
    label: str = dc_field(default="", compare=False)
    F: tuple[int, ...] = dc_field(default=(), repr=False)

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def a(self) -> int:
        return self.base.k

    def __hash__(self):
        return hash((self.base.p, self.base.k, self.h, self.f))

    def __eq__(self, other):
        return (isinstance(other, CurveModel) and self.base is other.base
                and self.h == other.h and self.f == other.f)


def _completed_square(base: GF, h, f):
    R = ring(base)
    four_inv = base.inv(base.from_coords([4 % base.p]))
    return tuple(R.add(list(f), R.scale(R.mul(list(h), list(h)), four_inv)))


def validate_curve(base: GF, h, f, label: str = "") -> CurveModel:
    """Check smoothness and compute genus and model kind."""
    R = ring(base)
    h = tuple(R.trim([int(c) for c in h]))
    f = tuple(R.trim([int(c) for c in f]))
    if any(not 0 <= c < base.order for c in h + f):
        raise CurveError("coefficients must be field codes in [0, q)")
    if base.p == 2:
        raise CurveError("characteristic 2 is not supported")
    F = _completed_square(base, h, f)
    d = len(F) - 1
    if d < 1:
        raise CurveError("y^2 = constant is not a curve of positive genus")
    if not R.squarefree(list(F)):
        raise CurveError("f + h^2/4 is not squarefree: the model is singular")
    if d <= 2:
        raise CurveError(f"genus 0 (degree {d})")
    genus = (d - 1) // 2
    kind = "imaginary" if d % 2 else "real"
    return CurveModel(base, h, f, genus, kind, label, F)


def curve_from_ints(p: int, a: int, h, f, label: str = "", modulus=None) -> CurveModel:
    """Build a model from integer codes or coordinate lists."""
    base = make_field(p, a)
    if modulus is not None and tuple(modulus) != base.modulus:
        raise CurveError(f"modulus {list(modulus)} differs from the canonical {list(base.modulus)}")

    def code(c):
        if isinstance(c, (list, tuple)):
            return base.from_coords(c)
        return int(c) % base.order if a == 1 else int(c)

    return validate_curve(base, [code(c) for c in h], [code(c) for c in f], label)


# ---------------------------------------------------------------------------
# places at infinity and the curve over F_{q^n}

@dataclass(frozen=True)
class InfinitePlace:
    index: int
    degree: int
    kind: str  # "ramified", "split" or "inert"
    ram: int  # -v(x) at this place
    sign: int = 0  # for split places: the leading coefficient of y / x^(g+1)


class CurveLevel:
    """The curve base-changed to F_{q^n}."""

    def __init__(self, model: CurveModel, n: int, cap: int = DEFAULT_FIELD_CAP):
        if n < 1:
            raise CurveError("level must be >= 1")
        self.model = model
        self.n = n
        self.g = model.genus
        try:
            self.field = make_field(model.p, model.a * n, cap=cap)
        except FieldError as exc:
            raise CurveError(f"level {n} exceeds the field cap: {exc}") from None
        self.R = ring(self.field)
        self.emb = embedding_table(model.base, self.field)
        self.F = [self.emb[c] for c in model.F]
        self.h = [self.emb[c] for c in model.h]
        self.q = model.q
        self.Q = self.field.order
        K = self.field
        self.half_h = self.R.scale(self.h, K.inv(K.from_coords([2])))
        d = len(self.F) - 1
        self.degF = d
        if d % 2:
            self.inf = [InfinitePlace(0, 1, "ramified", 2)]
        else:
            s = K.sqrt(self.F[-1])
            if s is None:
                self.inf = [InfinitePlace(0, 2, "inert", 1)]
            else:
                s0, s1 = sorted((s, K.neg(s)))
                self.inf = [InfinitePlace(0, 1, "split", 1, s0),
                            InfinitePlace(1, 1, "split", 1, s1)]
        self._series = None

    def __repr__(self):
        return f"CurveLevel({self.model.label or 'curve'}, n={self.n})"

    @property
    def split_infinity(self) -> bool:
        return self.inf[0].kind == "split"

    def y_series(self, prec: int):
        """Coefficients S_0..S_{prec-1} with y = x^(g+1) * (+-S(1/x))."""
        if self._series is None or len(self._series) < prec:
            K = self.field
            G = self.F[::-1]
            s0 = self.inf[0].sign
            S = [s0]
            inv2s = K.inv(K.add(s0, s0))
            for k in range(1, prec):
                acc = G[k] if k < len(G) else 0
                for i in range(1, k):
                    acc = K.sub(acc, K.mul(S[i], S[k - i]))
                S.append(K.mul(acc, inv2s))
            self._series = S
        return self._series

    # -- coordinates: internal y' = y + h/2 --
    def to_internal_y(self, x: int, y: int) -> int:
        return self.field.add(y, self.R.eval(self.half_h, x))

    def to_model_y(self, x: int, y: int) -> int:
        return self.field.sub(y, self.R.eval(self.half_h, x))


@lru_cache(maxsize=256)
def level(model: CurveModel, n: int = 1) -> CurveLevel:
    return CurveLevel(model, n)


# ---------------------------------------------------------------------------
# geometric points

@dataclass(frozen=True, order=True)
class GeometricPoint:
    """A point of C(F_{q^n}); affine (x, y) in model coordinates or a branch at infinity."""

    level: int
    infinity: int  # 0 for affine points, 1 + branch index at infinity
    x: int = 0
    y: int = 0

    @property
    def is_infinite(self) -> bool:
        return self.infinity > 0


def count_points(model: CurveModel, n: int) -> int:
    L = level(model, n)
    K = L.field
    F = L.F
    count = 0
    for x in range(K.order):
        v = L.R.eval(F, x)
        if v == 0:
            count += 1
        elif K.is_square(v):
            count += 2
    count += sum(1 for P in L.inf if P.degree == 1)
    return count


def rational_points(model: CurveModel, n: int = 1) -> list[GeometricPoint]:
    L = level(model, n)
    K = L.field
    pts = []
    for x in range(K.order):
        v = L.R.eval(L.F, x)
        r = K.sqrt(v)
        if r is None:
            continue
        ys = {r, K.neg(r)}
        for y in sorted(L.to_model_y(x, yy) for yy in ys):
            pts.append(GeometricPoint(n, 0, x, y))
    for P in L.inf:
        if P.degree == 1:
            pts.append(GeometricPoint(n, 1 + P.index))
    return pts


# ---------------------------------------------------------------------------
# places

@dataclass(frozen=True)
class Place:
    """A closed point of the curve over F_{q^n}.

    Finite places are stored by their ideal data over F_{q^n}: ``u`` is the
    monic irreducible below the place and ``v`` the value of y' modulo u
    (split and ramified places); inert places carry only ``u``.
    """

    level: int
    degree: int
    kind: str  # "split", "ramified", "inert", "infinite"
    u: tuple[int, ...] = ()
    v: tuple[int, ...] = ()
    inf_index: int = -1

    @property
    def key(self):
        return (self.degree, self.kind == "infinite", self.inf_index, self.u[::-1], self.v[::-1])

    def __lt__(self, other):
        return self.key < other.key

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"


def _finite_places_over(L: CurveLevel, u):
    R = L.R
    delta = R.mod(L.F, u)
    e = len(u) - 1
    if not delta:
        return [Place(L.n, e, "ramified", tuple(u), ())]
    r = R.sqrt_mod(delta, u)
    if r is None:
        return [Place(L.n, 2 * e, "inert", tuple(u), ())]
    roots = sorted({tuple(r), tuple(R.mod(R.neg(r), u))}, key=lambda t: t[::-1])
    return [Place(L.n, e, "split", tuple(u), t) for t in roots]


BATCH_MIN = 64


def _finite_places_batch(L: CurveLevel, us):
    """_finite_places_over for many moduli of one degree (numpy path)."""
    from .batch import batch_reduce_fixed, batch_sqrt_mod
    R, K = L.R, L.field
    U = np.array(us, dtype=np.int32).T
    delta = batch_reduce_fixed(K, L.F, U)
    status, roots = batch_sqrt_mod(K, U, delta)
    roots = roots.T
    e = U.shape[0] - 1
    out = []
    for u, st, r in zip(us, status.tolist(), roots.tolist()):
        if st == 0:
            out.append([Place(L.n, e, "ramified", tuple(u), ())])
        elif st < 0:
            out.append([Place(L.n, 2 * e, "inert", tuple(u), ())])
        else:
            r = R.trim(r)
            pair = sorted({tuple(r), tuple(R.mod(R.neg(r), list(u)))}, key=lambda t: t[::-1])
            out.append([Place(L.n, e, "split", tuple(u), t) for t in pair])
    return out


def _places_over_all(L: CurveLevel, us):
    if len(us) >= BATCH_MIN and L.Q <= 1024 and len(us[0]) > 2:
        return _finite_places_batch(L, us)
    return [_finite_places_over(L, u) for u in us]


def places_at_level(model: CurveModel, n: int, d: int) -> list[Place]:
    """All places of exact degree d on C over F_{q^n}."""
    if d < 1:
        raise CurveError("place degree must be >= 1")
    return list(_places_cached(model, n, d))


@lru_cache(maxsize=512)
def _places_cached(model: CurveModel, n: int, d: int):
    L = level(model, n)
    out = []
    for ps in _places_over_all(L, L.R.irreducibles(d)):
        out.extend(P for P in ps if P.degree == d)
    if d % 2 == 0:
        for ps in _places_over_all(L, L.R.irreducibles(d // 2)):
            out.extend(P for P in ps if P.degree == d)
    for I in L.inf:
        if I.degree == d:
            out.append(Place(n, d, "infinite", inf_index=I.index))
    out.sort()
    return tuple(out)


def places_of_degree(model: CurveModel, d: int, n: int = 1) -> list[Place]:
    return places_at_level(model, n, d)


def place_points(model: CurveModel, P: Place, cap: int = DEFAULT_FIELD_CAP) -> list[GeometricPoint]:
    """The Frobenius orbit of geometric points making up P, least point first."""
    L = level(model, P.level)
    big_n = P.level * P.degree
    if model.q ** big_n > cap:
        raise CurveError("orbit field exceeds the cap")
    M = level(model, big_n)
    K = M.field
    if P.is_infinite:
        I = L.inf[P.inf_index]
        if I.degree == 1:
            s = L.inf[P.inf_index].sign
            s_big = embedding_table(L.field, K)[s]
            idx = next(J.index for J in M.inf if J.sign == s_big)
            return [GeometricPoint(big_n, 1 + idx)]
        return [GeometricPoint(big_n, 1 + J.index) for J in M.inf]
    emb = embedding_table(L.field, K)
    u = [emb[c] for c in P.u]
    v = [emb[c] for c in P.v]
    xs = [x for x in range(K.order) if M.R.eval(u, x) == 0]
    pts = set()
    for x in xs:
        if P.kind == "split":
            ys = [M.R.eval(v, x)]
        elif P.kind == "ramified":
            ys = [0]
        else:
            r = K.sqrt(M.R.eval(M.F, x))
            ys = [r, K.neg(r)]
        for y in ys:
            pts.add(GeometricPoint(big_n, 0, x, M.to_model_y(x, y)))
    out = sorted(pts)
    if len(out) != P.degree:
        raise CurveError("orbit size does not match the place degree")
    return out


# ---------------------------------------------------------------------------
# zeta function

def _power_sums_to_elementary(S, g):
    """Newton's identities: power sums S[1..g] -> e_0..e_g (exact)."""
    e = [1]
    for k in range(1, g + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * S[i]
        if acc % k:
            raise ArithmeticError("inconsistent point counts")
        e.append(acc // k)
    return e


def zeta_numerator(model: CurveModel) -> list[int]:
    """P(T) = prod(1 - alpha_i T) with integer coefficients, degree 2g."""
    return list(_zeta_cached(model))


@lru_cache(maxsize=256)
def _zeta_cached(model: CurveModel):
    g, q = model.genus, model.q
    S = [0] + [q ** m + 1 - count_points(model, m) for m in range(1, g + 1)]
    e = _power_sums_to_elementary(S, g)
    a = [(-1) ** k * e[k] for k in range(g + 1)]
    coeffs = a + [0] * g
    for k in range(g):
        coeffs[2 * g - k] = q ** (g - k) * a[k]
    return tuple(coeffs)


def power_sums(P: list[int], count: int) -> list[int]:
    """Power sums s_1..s_count of the reciprocal roots of P(T) = prod(1 - a_i T)."""
    deg = len(P) - 1
    e = [(-1) ** k * P[k] for k in range(deg + 1)]
    s = [0]
    for m in range(1, count + 1):
        acc = (-1) ** (m - 1) * m * e[m] if m <= deg else 0
        for i in range(1, min(m, deg + 1)):
            acc += (-1) ** (i - 1) * e[i] * s[m - i]
        s.append(acc)
    return s


def zeta_numerator_at_level(model: CurveModel, n: int) -> list[int]:
    """P_n(T) = prod(1 - alpha_i^n T), the zeta numerator of C over F_{q^n}."""
    P = zeta_numerator(model)
    deg = len(P) - 1
    s = power_sums(P, deg * n)
    sn = [0] + [s[k * n] for k in range(1, deg + 1)]
    e = [1]
    for k in range(1, deg + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * sn[i] for i in range(1, k + 1))
        e.append(acc // k)
    return [(-1) ** k * e[k] for k in range(deg + 1)]


def point_count_from_zeta(model: CurveModel, m: int) -> int:
    s = power_sums(zeta_numerator(model), m)
    return model.q ** m + 1 - s[m]


def _int_det(M):
    """Bareiss fraction-free determinant."""
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


def _mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def jacobian_order(model: CurveModel, n: int = 1) -> int:
    """|J(F_{q^n})| = det(I - M^n), M the companion matrix of T^{2g} P(1/T)."""
    P = zeta_numerator(model)
    d = len(P) - 1
    # monic polynomial T^d P(1/T) = T^d + P1 T^(d-1) + ... + Pd
    comp = [[0] * d for _ in range(d)]
    for i in range(1, d):
        comp[i][i - 1] = 1
    for i in range(d):
        comp[i][d - 1] = -P[d - i]
    Mn = [[int(i == j) for j in range(d)] for i in range(d)]
    base = comp
    e = n
    while e:
        if e & 1:
            Mn = _mat_mul(Mn, base)
        base = _mat_mul(base, base)
        e >>= 1
    A = [[int(i == j) - Mn[i][j] for j in range(d)] for i in range(d)]
    return _int_det(A)


def splitting_degrees(d: int, n: int) -> list[int]:
    """A degree-d place splits into gcd(n, d) places of degree d / gcd(n, d)."""
    g = gcd(n, d)
    return [d // g] * g
