"""Divisor classes of degree zero: [E - deg(E) * D1] with canonical E."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .curve import CurveLevel, CurveModel, Place, level, places_at_level
from .divisor import (
    ONE, Ideal, IdealDivisor, DivisorError, combine, divisor_of_function_plus, ideal_conj,
    ideal_mul, ideal_pow, riemann_roch_basis, simplify, zero_divisor,
)
from .field import embedding_table

DEFAULT_GROUP_CAP = 5000


class JacobianError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# divisors as formal sums of places

@dataclass(frozen=True)
class Divisor:
    """Formal sum of places of C over F_{q^n}; support is sorted (place, mult)."""

    level: int
    support: tuple[tuple[Place, int], ...] = ()

    @classmethod
    def from_places(cls, n: int, items) -> "Divisor":
        acc: dict[Place, int] = {}
        for P, k in items:
            if P.level != n:
                raise JacobianError("place is not at the divisor's level")
            acc[P] = acc.get(P, 0) + k
        return cls(n, tuple(sorted(((P, k) for P, k in acc.items() if k), key=lambda t: t[0].key)))

    @property
    def degree(self) -> int:
        return sum(P.degree * k for P, k in self.support)

    @property
    def is_effective(self) -> bool:
        return all(k > 0 for _, k in self.support)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor.from_places(self.level, list(self.support) + list(other.support))

    def __neg__(self) -> "Divisor":
        return Divisor(self.level, tuple((P, -k) for P, k in self.support))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def scale(self, k: int) -> "Divisor":
        return Divisor.from_places(self.level, [(P, m * k) for P, m in self.support])


def place_ideal(L: CurveLevel, P: Place) -> IdealDivisor:
    inf = [0] * len(L.inf)
    if P.kind == "infinite":
        inf[P.inf_index] = 1
        return IdealDivisor(ONE, ONE, tuple(inf))
    if P.kind == "inert":
        return IdealDivisor(Ideal(P.u, (1,), ()), ONE, tuple(inf))
    return IdealDivisor(Ideal((1,), P.u, P.v), ONE, tuple(inf))


def to_ideal_divisor(L: CurveLevel, D: Divisor) -> IdealDivisor:
    out = zero_divisor(L)
    for P, k in D.support:
        out = combine(L, out, place_ideal(L, P), k)
    return out


def to_place_divisor(L: CurveLevel, E: IdealDivisor) -> Divisor:
    """Decompose an ideal divisor into places (used for reporting)."""
    from .curve import _finite_places_over
    R = L.R
    items = []
    for sign, I in ((1, E.pos), (-1, E.neg)):
        for pi, e in R.factor(list(I.w)):
            for P in _finite_places_over(L, pi):
                items.append((P, sign * e * (2 if P.kind == "ramified" else 1)))
        if len(I.u) > 1:
            for pi, e in R.factor(list(I.u)):
                vr = tuple(R.mod(list(I.v), pi))
                for P in _finite_places_over(L, pi):
                    if P.kind == "ramified" or P.v == vr:
                        items.append((P, sign * e))
    for Pi, k in zip(L.inf, E.inf):
        if k:
            items.append((Place(L.n, Pi.degree, "infinite", inf_index=Pi.index), k))
    return Divisor.from_places(L.n, items)


# ---------------------------------------------------------------------------
# moving divisors between levels and through Frobenius

def _inf_image(src: CurveLevel, tgt: CurveLevel, mapc, inf):
    out = [0] * len(tgt.inf)
    for Pi, k in zip(src.inf, inf):
        if not k:
            continue
        if Pi.kind == "split":
            s = mapc(Pi.sign)
            idx = next(T.index for T in tgt.inf if T.sign == s)
            out[idx] += k
        elif Pi.kind == "inert" and tgt.inf[0].kind == "split":
            out[0] += k
            out[1] += k
        else:
            out[0] += k
    return tuple(out)


def _map_ideal(mapc, I: Ideal) -> Ideal:
    return Ideal(tuple(mapc(c) for c in I.w), tuple(mapc(c) for c in I.u), tuple(mapc(c) for c in I.v))


def map_divisor(src: CurveLevel, tgt: CurveLevel, mapc, E: IdealDivisor) -> IdealDivisor:
    """Apply a coefficient map (field embedding or Frobenius) to a divisor."""
    return IdealDivisor(_map_ideal(mapc, E.pos), _map_ideal(mapc, E.neg), _inf_image(src, tgt, mapc, E.inf))


def embed_divisor(src: CurveLevel, tgt: CurveLevel, E: IdealDivisor) -> IdealDivisor:
    if tgt.n % src.n:
        raise JacobianError("target level must be a multiple of the source level")
    table = embedding_table(src.field, tgt.field)
    if [table[c] for c in src.F] != tgt.F:
        raise JacobianError("field embeddings are not compatible with the tower")
    return map_divisor(src, tgt, table.__getitem__, E)


# ---------------------------------------------------------------------------
# the base divisor D1

@dataclass(frozen=True)
class BasePointConfig:
    """Degree-one divisor D1 over the base field."""

    d1: Divisor

    def __post_init__(self):
        if self.d1.degree != 1:
            raise JacobianError("D1 must have degree 1")
        if self.d1.level != 1:
            raise JacobianError("D1 must be defined over the base field")

    @property
    def rational_place(self) -> Place | None:
        s = self.d1.support
        if len(s) == 1 and s[0][1] == 1 and s[0][0].degree == 1:
            return s[0][0]
        return None


def default_base(model: CurveModel) -> BasePointConfig:
    """D1 = least rational place."""
    pts = places_at_level(model, 1, 1)
    if not pts:
        raise JacobianError("no rational place: supply D1 as a degree-1 combination of places")
    return BasePointConfig(Divisor(1, ((pts[0], 1),)))


def base_from_places(model: CurveModel, items) -> BasePointConfig:
    return BasePointConfig(Divisor.from_places(1, items))


# ---------------------------------------------------------------------------
# classes

@dataclass(frozen=True, order=True)
class DivisorClass:
    """The class [E - m*D1] with E the canonical effective representative."""

    level: int
    m: int
    rep: IdealDivisor = field(compare=False)
    key: tuple = field(repr=False, default=())

    def __hash__(self):
        return hash((self.level, self.key))

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and self.level == other.level and self.key == other.key


def _ekey(E: IdealDivisor):
    return (E.pos.w, E.pos.u, E.pos.v, E.inf)


class Jacobian:
    """J_C(F_{q^n}) with a fixed D1."""

    def __init__(self, model: CurveModel, base: BasePointConfig | None = None, n: int = 1,
                 cap: int = DEFAULT_GROUP_CAP):
        self.model = model
        self.base = base if base is not None else default_base(model)
        self.n = n
        self.cap = cap
        self.L = level(model, n)
        self.g = model.genus
        L1 = level(model, 1)
        D1 = to_ideal_divisor(L1, self.base.d1)
        self.D1 = embed_divisor(L1, self.L, D1) if n > 1 else D1
        P = self.base.rational_place
        self._rational = None
        if P is not None:
            if P.kind == "infinite":
                idx = next(i for i, k in enumerate(self.D1.inf) if k)
                self._rational = ("inf", idx)
            else:
                x0 = self.D1.pos.u[0]
                x0 = self.L.field.neg(x0)
                y0 = self.D1.pos.v[0] if self.D1.pos.v else 0
                self._rational = ("fin", x0, y0, P.kind == "ramified")
        self._cache: dict = {}
        self._group = None
        self._structure = None
        self._mumford = None

    def __repr__(self):
        return f"Jacobian({self.L!r})"

    # -- basic constructors --
    def _make(self, E: IdealDivisor) -> DivisorClass:
        return DivisorClass(self.n, E.degree(self.L), E, _ekey(E))

    @property
    def zero(self) -> DivisorClass:
        return self._make(zero_divisor(self.L))

    # -- D1 multiplicity for a rational place --
    def _d1_mult(self, E: IdealDivisor) -> int:
        kind = self._rational
        if kind[0] == "inf":
            return E.inf[kind[1]]
        _, x0, y0, ram = kind
        R = self.L.R
        lin = [self.L.field.neg(x0), 1]

        def mult(a):
            k = 0
            a = list(a)
            while len(a) > 1:
                q, r = R.divmod(a, lin)
                if r:
                    break
                a, k = q, k + 1
            return k

        tw, tu = mult(E.pos.w), mult(E.pos.u)
        if ram:
            return 2 * tw + tu
        if tu and R.eval(list(E.pos.v), x0) == y0:
            return tw + tu
        return tw

    def canonical(self, D: IdealDivisor) -> DivisorClass:
        """Canonical representative of [D - deg(D) * D1]."""
        L = self.L
        delta = D.degree(L)
        Dp = simplify(L, D)
        ck = (Dp.pos, Dp.inf, delta)
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        if self._rational is not None:
            out = self._canonical_rational(Dp, delta)
        else:
            out = self._canonical_general(Dp, delta)
        self._cache[ck] = out
        return out

    def _canonical_rational(self, Dp: IdealDivisor, delta: int) -> DivisorClass:
        L, g = self.L, self.g
        k = delta - g
        basis = riemann_roch_basis(L, combine(L, Dp, self.D1, -k))
        if not basis:
            raise DivisorError("Riemann-Roch bound violated")
        if len(basis) == 1:
            E0 = divisor_of_function_plus(L, basis[0], combine(L, Dp, self.D1, -k))
            j = self._d1_mult(E0)
            return self._make(self._strip(E0, j) if j else E0)
        while True:
            nxt = riemann_roch_basis(L, combine(L, Dp, self.D1, -(k + 1)))
            if not nxt:
                break
            basis, k = nxt, k + 1
        if len(basis) != 1:
            raise DivisorError("minimal representative is not unique")
        return self._make(divisor_of_function_plus(L, basis[0], combine(L, Dp, self.D1, -k)))

    def _strip(self, E: IdealDivisor, j: int) -> IdealDivisor:
        """E - j*D1 for E containing D1 with multiplicity >= j."""
        L = self.L
        kind = self._rational
        if kind[0] == "inf":
            inf = list(E.inf)
            inf[kind[1]] -= j
            return IdealDivisor(E.pos, E.neg, tuple(inf))
        R = L.R
        I = ideal_mul(L, E.pos, ideal_pow(L, ideal_conj(L, self.D1.pos), j))
        lin = [L.field.neg(kind[1]), 1]
        w = R.div_exact(list(I.w), R.pow(lin, j))
        return IdealDivisor(Ideal(tuple(w), I.u, I.v), ONE, E.inf)

    def _canonical_general(self, Dp: IdealDivisor, delta: int) -> DivisorClass:
        L, K = self.L, self.L.field
        for m in range(self.g + 1):
            Dm = combine(L, Dp, self.D1, m - delta)
            basis = riemann_roch_basis(L, Dm)
            if not basis:
                continue
            if len(basis) == 1:
                return self._make(divisor_of_function_plus(L, basis[0], Dm))
            best = None
            for vec in _projective_points(K.order, len(basis)):
                a, b = [], []
                for c, (ba, bb, den) in zip(vec, basis):
                    if c:
                        a = L.R.add(a, L.R.scale(ba, c))
                        b = L.R.add(b, L.R.scale(bb, c))
                E = divisor_of_function_plus(L, (a, b, basis[0][2]), Dm)
                if best is None or _ekey(E) < _ekey(best):
                    best = E
            return self._make(best)
        raise DivisorError("no effective representative of degree <= g")

    # -- public operations --
    def class_of(self, D) -> DivisorClass:
        if isinstance(D, Divisor):
            if D.level != self.n:
                raise JacobianError("divisor level mismatch")
            D = to_ideal_divisor(self.L, D)
        return self.canonical(D)

    def frobenius_class(self, P: Place) -> DivisorClass:
        return self.class_of(Divisor(self.n, ((P, 1),)))

    def add(self, a: DivisorClass, b: DivisorClass) -> DivisorClass:
        return self.canonical(combine(self.L, a.rep, b.rep))

    def neg(self, a: DivisorClass) -> DivisorClass:
        if a.m == 0:
            return a
        D = combine(self.L, combine(self.L, zero_divisor(self.L), a.rep, -1), self.D1, 2 * a.m)
        return self.canonical(D)

    def sub(self, a: DivisorClass, b: DivisorClass) -> DivisorClass:
        return self.add(a, self.neg(b))

    def mul(self, k: int, a: DivisorClass) -> DivisorClass:
        if k < 0:
            return self.mul(-k, self.neg(a))
        out, base = self.zero, a
        while k:
            if k & 1:
                out = self.add(out, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return out

    def order_of(self, a: DivisorClass) -> int:
        k, x = 1, a
        z = self.zero
        while x != z:
            x = self.add(x, a)
            k += 1
        return k

    def cantor_add(self, a: DivisorClass, b: DivisorClass) -> DivisorClass:
        """Mumford reduction; only for imaginary models with D1 the point at infinity."""
        if self.L.inf[0].kind != "ramified" or self._rational != ("inf", 0):
            raise JacobianError("Cantor path needs an imaginary model with D1 at infinity")
        E = simplify(self.L, combine(self.L, a.rep, b.rep), bound=self.g)
        return self._make(IdealDivisor(E.pos, ONE, (0,)))

    def _mumford_key(self, D: IdealDivisor):
        E = simplify(self.L, D, bound=self.g)
        return (E.pos.u, E.pos.v)

    @property
    def has_mumford_table(self) -> bool:
        return self.L.inf[0].kind == "ramified"

    def _mumford_data(self):
        S = self.structure()
        if self._mumford is None:
            T = S.coords[self.canonical(IdealDivisor(ONE, ONE, (1,)))]
            table = {}
            for y in self.enumerate():
                table[self._mumford_key(combine(self.L, y.rep, self.D1, -y.m))] = S.coords[y]
            if len(table) != S.order:
                raise JacobianError("reduced divisors do not separate classes")
            self._mumford = (T, table)
        return S, self._mumford

    def reduced_class(self, D: IdealDivisor, degree: int) -> DivisorClass:
        """class_of for an effective finite divisor of an imaginary model, by table lookup."""
        S, (T, table) = self._mumford_data()
        c = table[self._mumford_key(D)]
        return S.element(tuple(ci + degree * ti for ci, ti in zip(c, T)))

    def place_classes(self, places) -> list[DivisorClass]:
        """class_of for many places; imaginary models go through a reduced-divisor table."""
        if not self.has_mumford_table:
            return [self.frobenius_class(P) for P in places]
        return [self.reduced_class(place_ideal(self.L, P), P.degree) for P in places]

    def riemann_roch_space(self, D):
        if isinstance(D, Divisor):
            D = to_ideal_divisor(self.L, D)
        return riemann_roch_basis(self.L, D)

    def is_principal(self, D):
        """(True, witness) if D is the divisor of a function, else (False, None)."""
        if isinstance(D, Divisor):
            D = to_ideal_divisor(self.L, D)
        if D.degree(self.L) != 0:
            return False, None
        neg = combine(self.L, zero_divisor(self.L), D, -1)
        basis = riemann_roch_basis(self.L, neg)
        if not basis:
            return False, None
        return True, basis[0]

    def frobenius(self, a: DivisorClass, m: int = 1) -> DivisorClass:
        """q^m-power Frobenius on a class."""
        K = self.L.field
        e = self.model.q ** m
        E = map_divisor(self.L, self.L, lambda c: K.pow(c, e), a.rep)
        return self.canonical(E)

    def include(self, a: DivisorClass, J2: "Jacobian") -> DivisorClass:
        """Image of a class under J(F_{q^n}) -> J(F_{q^(n m)})."""
        return J2.canonical(embed_divisor(self.L, J2.L, a.rep))

    def as_divisor(self, a: DivisorClass) -> Divisor:
        return to_place_divisor(self.L, a.rep)

    # -- the whole group --
    def enumerate(self) -> list[DivisorClass]:
        if self._group is None:
            from .curve import jacobian_order
            h = jacobian_order(self.model, self.n)
            if h > self.cap:
                raise JacobianError(f"|J| = {h} exceeds the cap {self.cap}")
            seen = set()
            for d in range(self.g + 1):
                for E in effective_ideal_divisors(self.L, d):
                    seen.add(self.canonical(E))
                if len(seen) == h:
                    break
            if len(seen) != h:
                raise JacobianError(f"enumerated {len(seen)} classes, expected {h}")
            self._group = sorted(seen)
        return list(self._group)

    def structure(self) -> "GroupStructure":
        if self._structure is None:
            self._structure = group_structure(self, self.enumerate())
        return self._structure


def _projective_points(q: int, dim: int):
    for lead in range(dim):
        for tail in itertools.product(range(q), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


@lru_cache(maxsize=256)
def jacobian(model: CurveModel, base: BasePointConfig | None = None, n: int = 1,
             cap: int = DEFAULT_GROUP_CAP) -> Jacobian:
    return Jacobian(model, base, n, cap)


# ---------------------------------------------------------------------------
# effective divisors

def _place_multisets(places_by_deg, d: int, start=(1, 0)):
    """Multisets of places with total degree d, as tuples of (place, mult)."""
    if d == 0:
        yield ()
        return
    deg0, idx0 = start
    for e in range(deg0, d + 1):
        plist = places_by_deg.get(e, [])
        i0 = idx0 if e == deg0 else 0
        for i in range(i0, len(plist)):
            for k in range(1, d // e + 1):
                for rest in _place_multisets(places_by_deg, d - k * e, (e, i + 1)):
                    yield ((plist[i], k),) + rest


def effective_place_divisors(model: CurveModel, n: int, d: int):
    """All effective divisors of degree d on C over F_{q^n}."""
    by_deg = {e: places_at_level(model, n, e) for e in range(1, d + 1)}
    for ms in _place_multisets(by_deg, d):
        yield Divisor(n, ms)


def effective_ideal_divisors(L: CurveLevel, d: int):
    by_deg = {e: places_at_level(L.model, L.n, e) for e in range(1, d + 1)}
    cache = {}
    for ms in _place_multisets(by_deg, d):
        out = zero_divisor(L)
        for P, k in ms:
            I = cache.get(P)
            if I is None:
                I = cache[P] = place_ideal(L, P)
            out = combine(L, out, I, k)
        yield out


# ---------------------------------------------------------------------------
# group structure

@dataclass
class GroupStructure:
    invariant_factors: list[int]
    generators: list[DivisorClass]
    order: int
    coords: dict = field(default_factory=dict, repr=False)
    elements: dict = field(default_factory=dict, repr=False)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def coordinates(self, x: DivisorClass) -> tuple[int, ...]:
        return self.coords[x]

    def element(self, c) -> DivisorClass:
        return self.elements[tuple(ci % d for ci, d in zip(c, self.invariant_factors))]


def smith_normal_form(M):
    """Return (D, U, V) with U*M*V = D diagonal, d_i | d_(i+1), U and V unimodular."""
    n, m = len(M), len(M[0]) if M else 0
    A = [list(r) for r in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(X, i, j):
        X[i], X[j] = X[j], X[i]

    def swap_cols(X, i, j):
        for r in X:
            r[i], r[j] = r[j], r[i]

    def add_row(X, src, dst, k):
        X[dst] = [a + k * b for a, b in zip(X[dst], X[src])]

    def add_col(X, src, dst, k):
        for r in X:
            r[dst] += k * r[src]

    t = 0
    while t < min(n, m):
        nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, m) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(A, t, i)
        swap_rows(U, t, i)
        swap_cols(A, t, j)
        swap_cols(V, t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, n):
                if A[i][t]:
                    k = A[i][t] // A[t][t]
                    add_row(A, t, i, -k)
                    add_row(U, t, i, -k)
                    if A[i][t]:
                        swap_rows(A, t, i)
                        swap_rows(U, t, i)
                        done = False
            for j in range(t + 1, m):
                if A[t][j]:
                    k = A[t][j] // A[t][t]
                    add_col(A, t, j, -k)
                    add_col(V, t, j, -k)
                    if A[t][j]:
                        swap_cols(A, t, j)
                        swap_cols(V, t, j)
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                            if A[i][j] % A[t][t]), None)
                if bad is not None:
                    add_row(A, bad[0], t, 1)
                    add_row(U, bad[0], t, 1)
                    done = False
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def _int_inverse(V):
    """Inverse of a unimodular integer matrix via fraction-free elimination."""
    from fractions import Fraction
    n = len(V)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(V)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c])
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = [[int(x) for x in r[n:]] for r in A]
    return out


def group_structure(J: Jacobian, classes: list[DivisorClass]) -> GroupStructure:
    """Invariant factors, generators and coordinates of every class."""
    zero = J.zero
    H = {zero: ()}
    gens, rels = [], []
    for x in classes:
        if x in H:
            continue
        k, y = 1, x
        while y not in H:
            y = J.add(y, x)
            k += 1
        s = len(gens)
        rels.append([-c for c in H[y]] + [0] * (s - len(H[y])) + [k])
        gens.append(x)
        newH = {}
        for h, c in H.items():
            c = tuple(c) + (0,) * (s - len(c))
            z = h
            for j in range(k):
                newH[z] = c + (j,)
                z = J.add(z, x)
        H = newH
    if len(H) != len(classes):
        raise JacobianError("class list is not a group")
    s = len(gens)
    if s == 0:
        return GroupStructure([], [], 1, {zero: ()}, {(): zero})
    R = [r + [0] * (s - len(r)) for r in rels]
    D, U, V = smith_normal_form(R)
    diag = [D[i][i] for i in range(s)]
    Vinv = _int_inverse(V)
    keep = [j for j in range(s) if diag[j] != 1]
    invariants = [diag[j] for j in keep]
    new_gens = []
    for j in keep:
        acc = zero
        for i in range(s):
            acc = J.add(acc, J.mul(Vinv[j][i], gens[i]))
        new_gens.append(acc)
    coords, elements = {}, {}
    for h, c in H.items():
        c = tuple(c) + (0,) * (s - len(c))
        cc = tuple(sum(c[i] * V[i][j] for i in range(s)) % diag[j] for j in keep)
        coords[h] = cc
        elements[cc] = h
    if len(elements) != len(classes):
        raise JacobianError("coordinate map is not injective")
    order = 1
    for d in invariants:
        order *= d
    return GroupStructure(invariants, new_gens, order, coords, elements)
