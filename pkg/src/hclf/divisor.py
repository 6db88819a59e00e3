"""Divisors on y^2 = F(x) as ideals plus multiplicities at infinity.

An integral ideal of F_Q[x, y] is ``w * (u, y - v)`` with ``w, u`` monic and
``u | v^2 - F``; this matches effective divisors supported on the affine part
one-to-one.  A general divisor is ``pos - neg + sum(inf[i] * P_inf_i)``.

Riemann-Roch spaces are computed by parametrising the fractional ideal part
freely over F_Q[x] and imposing the pole bounds at infinity as linear
conditions on coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import CurveLevel


class DivisorError(ArithmeticError):
    pass


@dataclass(frozen=True, order=True)
class Ideal:
    w: tuple[int, ...] = (1,)
    u: tuple[int, ...] = (1,)
    v: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return 2 * (len(self.w) - 1) + len(self.u) - 1

    @property
    def is_one(self) -> bool:
        return self.w == (1,) and self.u == (1,)


ONE = Ideal()


@dataclass(frozen=True)
class IdealDivisor:
    """pos - neg + sum inf[i] * (i-th place at infinity), on one CurveLevel."""

    pos: Ideal
    neg: Ideal
    inf: tuple[int, ...]

    def degree(self, L: CurveLevel) -> int:
        return self.pos.degree - self.neg.degree + sum(
            P.degree * k for P, k in zip(L.inf, self.inf))

    @property
    def is_effective(self) -> bool:
        return self.neg.is_one and all(k >= 0 for k in self.inf)

    @property
    def key(self):
        return (self.pos.w, self.pos.u, self.pos.v, self.neg.w, self.neg.u, self.neg.v, self.inf)


def zero_divisor(L: CurveLevel) -> IdealDivisor:
    return IdealDivisor(ONE, ONE, (0,) * len(L.inf))


def _deg(a) -> int:
    return len(a) - 1


# ---------------------------------------------------------------------------
# ideal arithmetic

def make_ideal(L: CurveLevel, w, u, v) -> Ideal:
    R = L.R
    w = R.monic(list(w))
    u = R.monic(list(u))
    v = R.mod(list(v), u) if len(u) > 1 else []
    return Ideal(tuple(w), tuple(u), tuple(v))


def ideal_mul(L: CurveLevel, I: Ideal, J: Ideal) -> Ideal:
    if I.is_one:
        return J
    if J.is_one:
        return I
    R = L.R
    u1, v1, u2, v2 = list(I.u), list(I.v), list(J.u), list(J.v)
    w = R.mul(list(I.w), list(J.w))
    if len(u1) == 1:
        return Ideal(tuple(w), J.u, J.v)
    if len(u2) == 1:
        return Ideal(tuple(w), I.u, I.v)
    d0, e1, e2 = R.xgcd(u1, u2)
    if d0 == [1]:
        d, s1, s2, s3 = [1], e1, e2, []
    else:
        d, c1, c2 = R.xgcd(d0, R.add(v1, v2))
        s1, s2, s3 = R.mul(c1, e1), R.mul(c1, e2), c2
    u3 = R.mul(u1, u2)
    if d != [1]:
        u3 = R.div_exact(u3, R.mul(d, d))
    t = R.add(R.mul(R.mul(s1, u1), v2), R.mul(R.mul(s2, u2), v1))
    if s3:
        t = R.add(t, R.mul(s3, R.add(R.mul(v1, v2), L.F)))
    if d != [1]:
        t = R.div_exact(t, d)
        w = R.mul(w, d)
    v3 = R.mod(t, u3) if len(u3) > 1 else []
    return Ideal(tuple(w), tuple(u3), tuple(v3))


def ideal_conj(L: CurveLevel, I: Ideal) -> Ideal:
    if len(I.u) == 1:
        return I
    R = L.R
    return Ideal(I.w, I.u, tuple(R.mod(R.neg(list(I.v)), list(I.u))))


def ideal_norm(L: CurveLevel, I: Ideal):
    R = L.R
    w = list(I.w)
    return R.mul(R.mul(w, w), list(I.u))


def ideal_pow(L: CurveLevel, I: Ideal, k: int) -> Ideal:
    out = ONE
    for _ in range(k):
        out = ideal_mul(L, out, I)
    return out


def principal_ideal(L: CurveLevel, a, b) -> Ideal:
    """The ideal generated by a + b*y (not both zero)."""
    R = L.R
    a, b = list(a), list(b)
    if not b:
        if not a:
            raise DivisorError("principal ideal of zero")
        return Ideal(tuple(R.monic(a)), (1,), ())
    c = R.gcd(a, b)
    if c != [1]:
        a, b = R.div_exact(a, c), R.div_exact(b, c)
    N = R.monic(R.sub(R.mul(a, a), R.mul(R.mul(b, b), L.F)))
    if len(N) == 1:
        return Ideal(tuple(c), (1,), ())
    v = R.mod(R.neg(R.mul(a, R.invmod(R.mod(b, N), N))), N)
    return Ideal(tuple(c), tuple(N), tuple(v))


def ideal_contains(L: CurveLevel, I: Ideal, a, b) -> bool:
    """Membership of a + b*y in w*(u, y - v)."""
    R = L.R
    w = list(I.w)
    qa, ra = R.divmod(list(a), w)
    qb, rb = R.divmod(list(b), w)
    if ra or rb:
        return False
    return not R.mod(R.add(qa, R.mul(qb, list(I.v))), list(I.u))


# ---------------------------------------------------------------------------
# valuations at infinity

def inf_valuations(L: CurveLevel, a, b) -> list[int]:
    """v_i(a + b*y) at each place at infinity."""
    g = L.g
    da, db = _deg(a), _deg(b)
    kind = L.inf[0].kind
    if not a and not b:
        raise DivisorError("valuation of zero")
    if kind == "ramified":
        vals = []
        if a:
            vals.append(-2 * da)
        if b:
            vals.append(-(2 * g + 1) - 2 * db)
        return [min(vals)]
    top = max(da if a else -10 ** 9, db + g + 1 if b else -10 ** 9)
    if kind == "inert":
        return [-top]
    if not a or not b or da != db + g + 1:
        return [-top, -top]
    K = L.field
    lead = [K.add(a[-1], K.mul(P.sign, b[-1])) for P in L.inf]
    R = L.R
    degN = _deg(R.sub(R.mul(a, a), R.mul(R.mul(b, b), L.F)))
    if lead[0] and lead[1]:
        return [-top, -top]
    if lead[0]:
        return [-top, top - degN]
    return [top - degN, -top]


# ---------------------------------------------------------------------------
# linear algebra over the level field

def nullspace(K, rows, ncols):
    """Basis of {c : rows * c = 0} over K, in reduced echelon order."""
    M = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = K.inv(M[r][c])
        M[r] = [K.mul(x, inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [K.sub(x, K.mul(f, y)) if y else x for x, y in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            if M[i][fc]:
                vec[pc] = K.neg(M[i][fc])
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Riemann-Roch spaces

def riemann_roch_basis(L: CurveLevel, D: IdealDivisor):
    """Basis of L(D) as triples (a, b, den) meaning (a + b*y') / den."""
    R, K, g = L.R, L.field, L.g
    P_pos = Ideal((1,), D.pos.u, D.pos.v)
    den = R.mul(list(D.pos.w), list(D.pos.u))
    J = ideal_mul(L, D.neg, ideal_conj(L, P_pos))
    r, uJ, vJ = list(J.w), list(J.u), list(J.v)
    dden = _deg(den)
    c = [-k - P.ram * dden for P, k in zip(L.inf, D.inf)]
    kind = L.inf[0].kind
    if kind == "ramified":
        A = (-c[0]) // 2
        B = (-c[0] - 2 * g - 1) // 2
    elif kind == "inert":
        A = -c[0]
        B = -c[0] - g - 1
    else:
        A = max(-c[0], -c[1])
        B = A - g - 1
    if A < 0 and B < 0:
        return []
    dr, du = _deg(r), _deg(uJ)
    Bb = B - dr
    Ba = max(A - dr, Bb + du - 1) - du
    cols = []
    ru = R.mul(r, uJ)
    for i in range(Ba + 1):
        cols.append((R.shift(ru, i), []))
    if Bb >= 0:
        rv = R.neg(R.mul(r, vJ))
        for i in range(Bb + 1):
            cols.append((R.shift(rv, i), R.shift(r, i)))
    if not cols:
        return []
    rows = []
    if kind in ("ramified", "inert"):
        maxa = max(_deg(a) for a, _ in cols)
        maxb = max((_deg(b) for _, b in cols if b), default=-1)
        for j in range(A + 1, maxa + 1):
            rows.append([a[j] if j < len(a) else 0 for a, _ in cols])
        for j in range(max(B + 1, 0), maxb + 1):
            rows.append([b[j] if j < len(b) else 0 for _, b in cols])
    else:
        T = max(max(_deg(a), _deg(b) + g + 1 if b else -1) for a, b in cols)
        S = L.y_series(max(1, max(c) + T + g + 2))
        for idx, P in enumerate(L.inf):
            sigma_neg = idx == 1
            for e in range(-T, c[idx]):
                row = []
                for a, b in cols:
                    val = a[-e] if 0 <= -e < len(a) else 0
                    acc = 0
                    for j, bj in enumerate(b):
                        k = e + j + g + 1
                        if bj and k >= 0:
                            acc = K.add(acc, K.mul(bj, S[k]))
                    if sigma_neg:
                        acc = K.neg(acc)
                    row.append(K.add(val, acc))
                rows.append(row)
    basis = []
    for vec in nullspace(K, rows, len(cols)):
        a, b = [], []
        for coef, (ca, cb) in zip(vec, cols):
            if coef:
                a = R.add(a, R.scale(ca, coef))
                if cb:
                    b = R.add(b, R.scale(cb, coef))
        basis.append((a, b, den))
    return basis


def divisor_of_function_plus(L: CurveLevel, fn, D: IdealDivisor) -> IdealDivisor:
    """div(fn) + D for fn in L(D); the result is effective."""
    a, b, den = fn
    R = L.R
    I = ideal_mul(L, principal_ideal(L, a, b), D.pos)
    I = ideal_mul(L, I, ideal_conj(L, D.neg))
    divisor = R.mul(den, ideal_norm(L, D.neg))
    w = R.div_exact(list(I.w), divisor)
    vals = inf_valuations(L, a, b)
    inf = tuple(k + v + P.ram * _deg(den) for P, k, v in zip(L.inf, D.inf, vals))
    E = IdealDivisor(Ideal(tuple(R.monic(w)), I.u, I.v), ONE, inf)
    if not E.is_effective:
        raise DivisorError("function is not in L(D)")
    return E


def combine(L: CurveLevel, D: IdealDivisor, E: IdealDivisor, k: int = 1) -> IdealDivisor:
    """D + k*E."""
    if k == 0:
        return D
    pos, neg = (E.pos, E.neg) if k > 0 else (E.neg, E.pos)
    m = abs(k)
    return IdealDivisor(ideal_mul(L, D.pos, ideal_pow(L, pos, m)),
                   ideal_mul(L, D.neg, ideal_pow(L, neg, m)),
                   tuple(x + k * y for x, y in zip(D.inf, E.inf)))


# ---------------------------------------------------------------------------
# reduction to a small equivalent divisor

def simplify(L: CurveLevel, D: IdealDivisor, bound: int | None = None):
    """Linearly equivalent (u, v) ideal with deg u <= bound (default g + 1) plus infinite part."""
    R, g = L.R, L.g
    inf = list(D.inf)
    shift = _deg(list(D.pos.w)) - _deg(list(D.neg.w)) - _deg(list(D.neg.u))
    P = ideal_mul(L, Ideal((1,), D.pos.u, D.pos.v), ideal_conj(L, Ideal((1,), D.neg.u, D.neg.v)))
    shift += _deg(list(P.w))
    for i, Pi in enumerate(L.inf):
        inf[i] += Pi.ram * shift
    u, v = list(P.u), list(P.v)
    bound = g + 1 if bound is None else bound
    while _deg(u) > bound:
        u2 = R.monic(R.div_exact(R.sub(R.mul(v, v), L.F), u))
        vals = inf_valuations(L, R.neg(v), [1])
        du2 = _deg(u2)
        for i, Pi in enumerate(L.inf):
            inf[i] += -Pi.ram * du2 - vals[i]
        v = R.mod(R.neg(v), u2) if du2 > 0 else []
        u = u2
    return IdealDivisor(Ideal((1,), tuple(u), tuple(v)), ONE, tuple(inf))
