"""Character L-polynomials of C over F_{q^n}, two ways, and consistency checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .census import class_count_closed_form, class_counts
from .characters import Character, CharacterTable, all_characters
from .curve import (
    CurveModel, level, places_at_level, splitting_degrees, zeta_numerator_at_level,
)
from .cyclotomic import CyclotomicInteger, cyclotomic_polynomial, primes_one_mod, root_of_unity_mod
from .jacobian import BasePointConfig, Jacobian, jacobian
from .poly import ring


class LFunctionError(ArithmeticError):
    pass


@dataclass
class LPolynomial:
    coeffs: list[CyclotomicInteger]
    character: Character
    level: int
    denominator: list[int] | None = None  # set only for the trivial character

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]


def series_of_rational(num, den, prec: int) -> list[int]:
    """Power series coefficients of num/den (den[0] = 1)."""
    out = []
    for k in range(prec):
        c = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            c -= den[j] * out[k - j]
        out.append(c)
    return out


def zeta_denominator(model: CurveModel, n: int) -> list[int]:
    Q = model.q ** n
    return [1, -(Q + 1), Q]


# ---------------------------------------------------------------------------
# per-level data shared by everything below

class LevelData:
    """Jacobian, its structure, the character table and census vectors at one level."""

    def __init__(self, model: CurveModel, base: BasePointConfig | None, n: int, workers: int = 1):
        self.model = model
        self.n = n
        self.g = model.genus
        self.J: Jacobian = jacobian(model, base, n)
        self.base = self.J.base
        self.S = self.J.structure()
        self.table = CharacterTable(self.S.invariant_factors)
        self.workers = workers
        self._census: dict[int, np.ndarray] = {}
        self._coeffs: dict[int, np.ndarray] = {}

    def index_of(self, x) -> int:
        return self.table.index[self.S.coords[x]]

    def class_at(self, i: int):
        return self.S.element(self.table.elements[i])

    def census(self, d: int) -> np.ndarray:
        """N(., d) as a vector in the table's element order."""
        if d not in self._census:
            v = np.zeros(self.table.size, dtype=np.int64)
            if d > 2 * self.g - 2:
                v[:] = class_count_closed_form(self.model, d, self.n)
            else:
                for x, c in class_counts(self.model, self.base, self.n, d, workers=self.workers).items():
                    v[self.index_of(x)] = c
            self._census[d] = v
        return self._census[d]

    def coefficients(self, d: int) -> np.ndarray:
        """c_d(chi) for every character (rows in table order)."""
        if d not in self._coeffs:
            self._coeffs[d] = self.table.forward(self.census(d))
        return self._coeffs[d]

    def character(self, chi) -> tuple[int, Character]:
        if isinstance(chi, Character):
            exps = chi.exponents
        else:
            exps = tuple(chi)
        inv = tuple(self.S.invariant_factors)
        if len(exps) != len(inv) or any(not 0 <= a < d for a, d in zip(exps, inv)):
            raise LFunctionError(f"bad character exponents {exps} for group {inv}")
        idx = self.table.elements.index(exps) if inv else 0
        return idx, self.table.characters[idx]


@lru_cache(maxsize=256)
def level_data(model: CurveModel, base: BasePointConfig | None, n: int) -> LevelData:
    return LevelData(model, base, n)


# ---------------------------------------------------------------------------
# L-polynomials from the divisor sum

def l_polynomial(model: CurveModel, base, n: int, chi) -> LPolynomial:
    D = level_data(model, base, n)
    idx, ch = D.character(chi)
    if ch.is_trivial:
        P = zeta_numerator_at_level(model, n)
        N = D.table.N
        return LPolynomial([CyclotomicInteger.from_int(N, c) for c in P], ch, n, zeta_denominator(model, n))
    top = 2 * model.genus - 2
    coeffs = [D.table.to_cyclotomic(D.coefficients(d)[idx]) for d in range(top + 1)]
    if not coeffs[0].equals(CyclotomicInteger.one()):
        raise LFunctionError("constant term is not 1")
    return LPolynomial(coeffs, ch, n)


def all_l_polynomials(model: CurveModel, base, n: int) -> list[LPolynomial]:
    D = level_data(model, base, n)
    return [l_polynomial(model, base, n, ch) for ch in D.table.characters]


def divisor_sum_coefficient(model: CurveModel, base, n: int, chi, d: int) -> CyclotomicInteger:
    """sum_x chi(x) N(x, d) for any d (closed form beyond 2g - 2)."""
    D = level_data(model, base, n)
    idx, _ = D.character(chi)
    return D.table.to_cyclotomic(D.coefficients(d)[idx])


# ---------------------------------------------------------------------------
# Euler product

def place_class_counts(model: CurveModel, base, n: int, dmax: int) -> dict[int, np.ndarray]:
    """For each degree e <= dmax: number of places of degree e in each class."""
    D = level_data(model, base, n)
    out = {}
    for e in range(1, dmax + 1):
        v = np.zeros(D.table.size, dtype=np.int64)
        places = places_at_level(model, n, e)
        for x in D.J.place_classes(places):
            v[D.index_of(x)] += 1
        out[e] = v
    return out


def _translation(table: CharacterTable, coords) -> np.ndarray:
    """Index permutation i -> index of (element_i + coords)."""
    inv = np.array(table.invariants, dtype=np.int64)
    if len(inv) == 0:
        return np.zeros(1, dtype=np.int64)
    E = np.array(table.elements, dtype=np.int64)
    strides = np.ones(len(inv), dtype=np.int64)
    for i in range(len(inv) - 2, -1, -1):
        strides[i] = strides[i + 1] * inv[i + 1]
    return ((E + np.asarray(coords, dtype=np.int64)) % inv) @ strides


def _group_ring_product(T: CharacterTable, counts: dict, trunc: int) -> list[np.ndarray]:
    """prod over (e, x) of (1 - [x] t^e)^-counts[e][x] in Z[G][[t]] to degree trunc."""
    S = [np.zeros(T.size, dtype=np.int64) for _ in range(trunc + 1)]
    S[0][T.index[T.elements[0]]] = 1
    for e in sorted(counts):
        if e > trunc:
            continue
        for i in np.nonzero(counts[e])[0]:
            m = int(counts[e][i])
            x = np.array(T.elements[i], dtype=np.int64)
            shifts = {}
            new = [s.copy() for s in S]
            for d in range(e, trunc + 1):
                for k in range(1, d // e + 1):
                    src = S[d - k * e]
                    if not src.any():
                        continue
                    perm = shifts.get(k)
                    if perm is None:
                        perm = shifts[k] = _translation(T, k * x)
                    acc = np.zeros_like(src)
                    acc[perm] = src
                    new[d] += math.comb(m + k - 1, k) * acc
            S = new
    return S


@lru_cache(maxsize=128)
def group_ring_euler_series(model: CurveModel, base, n: int, trunc: int) -> tuple:
    """Coefficients in Z[J] of prod_P (1 - [P - deg(P) D1] t^deg P)^-1 to degree trunc."""
    D = level_data(model, base, n)
    return tuple(_group_ring_product(D.table, place_class_counts(model, base, n, trunc), trunc))


def euler_product_truncation(model: CurveModel, base, n: int, chi, trunc: int | None = None) -> list[CyclotomicInteger]:
    """Series coefficients of prod_P (1 - chi(Frob_P) t^deg P)^-1 through degree trunc."""
    trunc = 2 * model.genus if trunc is None else trunc
    D = level_data(model, base, n)
    idx, _ = D.character(chi)
    S = group_ring_euler_series(model, base, n, trunc)
    return [D.table.to_cyclotomic(D.table.forward(s)[idx]) for s in S]


def euler_product_all(model: CurveModel, base, n: int, trunc: int | None = None) -> np.ndarray:
    """Array [d, chi, phi] of Euler-product coefficients for all characters."""
    trunc = 2 * model.genus if trunc is None else trunc
    D = level_data(model, base, n)
    S = group_ring_euler_series(model, base, n, trunc)
    return np.stack([D.table.forward(s) for s in S])


def euler_product_direct(model: CurveModel, base, n: int, chi, trunc: int | None = None) -> list[CyclotomicInteger]:
    """Same series, multiplied out place by place in Z[zeta_N] (small cases)."""
    trunc = 2 * model.genus if trunc is None else trunc
    D = level_data(model, base, n)
    _, ch = D.character(chi)
    N = D.table.N
    series = [np.zeros(N, dtype=object) for _ in range(trunc + 1)]
    series[0][0] = 1
    for e in range(1, trunc + 1):
        places = places_at_level(model, n, e)
        for x in D.J.place_classes(places):
            k0 = ch.power(D.S.coords[x])
            new = [s.copy() for s in series]
            for d in range(e, trunc + 1):
                for k in range(1, d // e + 1):
                    new[d] = new[d] + np.roll(series[d - k * e], k * k0)
            series = new
    return [CyclotomicInteger.from_vector(N, list(s)) for s in series]


def expected_series(model: CurveModel, base, n: int, chi, trunc: int) -> list[CyclotomicInteger]:
    """L-polynomial (or zeta series for the trivial character) as a series to degree trunc."""
    L = l_polynomial(model, base, n, chi)
    N = level_data(model, base, n).table.N
    if L.denominator is not None:
        num = [c.rational_value() for c in L.coeffs]
        return [CyclotomicInteger.from_int(N, c) for c in series_of_rational(num, L.denominator, trunc + 1)]
    out = list(L.coeffs[: trunc + 1])
    while len(out) < trunc + 1:
        out.append(CyclotomicInteger.zero(N))
    return [c if c.order == N else c.lift(N) for c in out]


# ---------------------------------------------------------------------------
# product over the character table

def _unit_generators(N: int) -> list[int]:
    units = [s for s in range(1, N) if math.gcd(s, N) == 1]
    gens, reach = [], {1 % N}
    for s in units:
        if s in reach:
            continue
        gens.append(s)
        frontier = set(reach)
        while True:
            more = {(r * s) % N for r in frontier} | {(r * t) % N for r in frontier for t in gens}
            if more <= reach:
                break
            reach |= more
            frontier = more
    return gens


def _polymul_mod(a, b, ell):
    return np.convolve(a, b) % ell


def _pairwise_mod(A, ell):
    """Products of consecutive row pairs of A (equal-length polynomials), mod ell."""
    k, m = A.shape
    a, b = A[0:k - 1:2], A[1:k:2]
    out = np.zeros((len(a), 2 * m - 1), dtype=np.int64)
    for i in range(m):
        out[:, i:i + m] += a[:, i:i + 1] * b
        if i % 1024 == 1023:
            out %= ell
    return out % ell


def _product_mod(polys, ell):
    # batched while there are many short factors, then one convolution per pair
    A = np.asarray(polys, dtype=np.int64)
    while len(A) > 16:
        odd = A[-1] if len(A) % 2 else None
        A = _pairwise_mod(A, ell)
        if odd is not None:
            pad = np.zeros(A.shape[1], dtype=np.int64)
            pad[:len(odd)] = odd
            A = np.vstack([A, pad])
    polys = list(A)
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            nxt.append(_polymul_mod(polys[i], polys[i + 1], ell))
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


EXACT_PRODUCT_MAX = 64


def character_table_product(model: CurveModel, base, n: int) -> list[int]:
    """prod over nontrivial chi of L(t, chi), times P_n(t), as an integer polynomial."""
    D = level_data(model, base, n)
    T = D.table
    P = zeta_numerator_at_level(model, n)
    top = 2 * model.genus - 2
    C = np.stack([D.coefficients(d) for d in range(top + 1)], axis=1)  # [chi, d, phi]
    C = C[1:]
    h = T.size
    if h == 1:
        return list(P)
    if h <= EXACT_PRODUCT_MAX:
        prod = [CyclotomicInteger.one(T.N)]
        for row in C:
            f = [T.to_cyclotomic(c) for c in row]
            out = [CyclotomicInteger.zero(T.N)] * (len(prod) + len(f) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(f):
                    out[i + j] = out[i + j] + a * b
            prod = out
        if not all(c.is_rational for c in prod):
            raise LFunctionError("character-table product is not rational")
        ints = [c.rational_value() for c in prod]
    else:
        ints = _multimodular_product(C, T.N)
    out = [0] * (len(ints) + len(P) - 1)
    for i, a in enumerate(ints):
        for j, b in enumerate(P):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _multimodular_product(C: np.ndarray, N: int) -> list[int]:
    """Exact integer product of the rows of C (polynomials over Z[zeta_N]) via CRT.

    The first prime is used with every embedding zeta -> w^s for s in a generating
    set of (Z/N)^*; all must agree, a check that the product is rational.
    """
    phi = C.shape[2]
    # |coefficient| bound: product of the l1 norms of the factors under one complex embedding
    z = np.exp(2j * np.pi * np.arange(phi) / N)
    l1 = np.abs(C.astype(np.complex128) @ z).sum(axis=1)
    bound_bits = int(np.ceil(np.log2(np.maximum(l1, 1.0)).sum() * 1.001)) + 64
    gens = [1] + _unit_generators(N)
    # exact in float64 while |row| * ell < 2^53
    exact_float = int(np.abs(C).sum(axis=2).max()) < 1 << 29
    Cf = C.astype(np.float64) if exact_float else None
    primes, residues, bits = [], [], 0
    for ell in primes_one_mod(N, 1 << 23):
        w = root_of_unity_mod(N, ell)
        results = []
        for s in (gens if not primes else [1]):
            pw = np.array([pow(w, s * j, ell) for j in range(phi)], dtype=np.int64)
            if exact_float:
                vals = np.fmod(Cf @ pw.astype(np.float64), ell).astype(np.int64) % ell
            else:
                vals = (C % ell) @ pw % ell  # [chi, d]
            results.append(_product_mod(list(vals), ell))
        for r in results[1:]:
            if not np.array_equal(r, results[0]):
                raise LFunctionError("character-table product is not Galois invariant")
        primes.append(ell)
        residues.append(results[0])
        bits += ell.bit_length() - 1
        if bits > bound_bits + 1:
            break
    # CRT by a balanced tree of pairwise Garner steps
    nodes = [(r.astype(object), ell) for r, ell in zip(residues, primes)]
    while len(nodes) > 1:
        nxt = []
        for (x1, m1), (x2, m2) in zip(nodes[0::2], nodes[1::2]):
            k = (x2 - x1) % m2 * pow(m1, -1, m2) % m2
            nxt.append((x1 + m1 * k, m1 * m2))
        if len(nodes) % 2:
            nxt.append(nodes[-1])
        nodes = nxt
    x, M = nodes[0]
    half = M // 2
    return [int(v - M) if v > half else int(v) for v in x]


def factor_roots(model: CurveModel, base, n: int) -> np.ndarray:
    """Roots of every nontrivial L_chi and of P_n under the standard complex embedding."""
    D = level_data(model, base, n)
    T = D.table
    top = 2 * model.genus - 2
    z = np.exp(2j * np.pi / T.N)
    zp = z ** np.arange(T.phi)
    roots = []
    if top > 0:
        C = np.stack([D.coefficients(d) for d in range(top + 1)], axis=1)[1:]
        vals = C.astype(np.complex128) @ zp
        for row in vals:
            roots.extend(np.roots(row[::-1]))
    P = zeta_numerator_at_level(model, n)
    roots.extend(np.roots(np.array(P[::-1], dtype=float)))
    return np.array(roots, dtype=complex)


def factor_root_moduli(model: CurveModel, base, n: int) -> list[float]:
    return [float(abs(r)) for r in factor_roots(model, base, n)]


# ---------------------------------------------------------------------------
# change of variable: places of C over F_q grouped by their splitting over F_{q^n}

@dataclass
class ChangeOfVariableReport:
    passed: bool
    n: int
    trunc: int
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    splitting: dict = field(default_factory=dict)
    law_violations: list = field(default_factory=list)


@lru_cache(maxsize=1 << 15)
def _split_base_place(model: CurveModel, P, n: int):
    """Places of C over F_{q^n} above the base place P."""
    from .curve import Place, _finite_places_over
    Ln = level(model, n)
    if P.kind == "infinite":
        L1 = level(model, 1)
        src = L1.inf[P.inf_index]
        if src.kind == "inert" and Ln.inf[0].kind == "split":
            return [Place(n, 1, "infinite", inf_index=0), Place(n, 1, "infinite", inf_index=1)]
        if src.kind == "split":
            s = Ln.emb[src.sign]
            idx = next(I.index for I in Ln.inf if I.sign == s)
            return [Place(n, 1, "infinite", inf_index=idx)]
        return [Place(n, Ln.inf[0].degree, "infinite", inf_index=0)]
    Rn = Ln.R
    u = [Ln.emb[c] for c in P.u]
    out = []
    for pi, _ in Rn.factor(u):
        for Q in _finite_places_over(Ln, pi):
            if P.kind == "inert" or P.kind == "ramified":
                out.append(Q)
            else:
                v = [Ln.emb[c] for c in P.v]
                if Q.kind == "ramified" or tuple(Rn.mod(v, pi)) == Q.v:
                    out.append(Q)
    return tuple(out)


def change_of_variable_check(model: CurveModel, base, n: int, chi, trunc: int | None = None) -> ChangeOfVariableReport:
    """Compare L(t^n, C over F_{q^n}, chi) with the product over base places P of
    prod_{Q | P} (1 - chi(Frob_Q) t^(n deg Q))^-1, both to degree trunc in t."""
    trunc = 2 * model.genus + 2 if trunc is None else trunc
    D = level_data(model, base, n)
    _, ch = D.character(chi)
    N = D.table.N
    # left side: the L-function over F_{q^n} in the variable t^n
    small = trunc // n
    L = expected_series(model, base, n, ch, small)
    lhs = [CyclotomicInteger.zero(N)] * (trunc + 1)
    for k, c in enumerate(L):
        lhs[k * n] = c
    # right side: Euler factors grouped by base places
    series = [np.zeros(N, dtype=object) for _ in range(trunc + 1)]
    series[0][0] = 1
    splitting = {}
    violations = []
    for d in range(1, trunc + 1):
        for P in places_at_level(model, 1, d):
            Qs = _split_base_place(model, P, n)
            degs = sorted(Q.degree for Q in Qs)
            splitting.setdefault(d, set()).add(tuple(degs))
            if degs != splitting_degrees(d, n):
                violations.append((d, P.key, degs))
            for Q in Qs:
                e = n * Q.degree
                if e > trunc:
                    continue
                k0 = ch.power(D.S.coords[D.J.frobenius_class(Q)])
                new = [s.copy() for s in series]
                for dd in range(e, trunc + 1):
                    for k in range(1, dd // e + 1):
                        new[dd] = new[dd] + np.roll(series[dd - k * e], k * k0)
                series = new
    rhs = [CyclotomicInteger.from_vector(N, list(s)) for s in series]
    ok = not violations and all(a.equals(b) for a, b in zip(lhs, rhs))
    return ChangeOfVariableReport(ok, n, trunc, lhs, rhs,
                                  {d: sorted(v) for d, v in splitting.items()}, violations)


def splitting_law_check(model: CurveModel, n: int, dmax: int = 6) -> tuple[dict, list]:
    """Observed splitting patterns of base places of degree <= dmax over F_{q^n}, and violations."""
    patterns, violations = {}, []
    for d in range(1, dmax + 1):
        for P in places_at_level(model, 1, d):
            degs = sorted(Q.degree for Q in _split_base_place(model, P, n))
            patterns.setdefault(d, set()).add(tuple(degs))
            if degs != splitting_degrees(d, n):
                violations.append((d, P.key, degs))
    return {d: sorted(v) for d, v in patterns.items()}, violations


def _expected_all(model: CurveModel, base, n: int, trunc: int) -> np.ndarray:
    """[d, chi, phi]: L-polynomials of all characters (zeta series for the trivial one)."""
    D = level_data(model, base, n)
    T = D.table
    out = np.zeros((trunc + 1, len(T.characters), T.phi), dtype=np.int64)
    top = 2 * model.genus - 2
    for d in range(min(top, trunc) + 1):
        out[d] = D.coefficients(d)
    P = zeta_numerator_at_level(model, n)
    zs = series_of_rational(P, zeta_denominator(model, n), trunc + 1)
    out[:, 0, :] = 0
    out[:, 0, 0] = zs
    return out


def change_of_variable_all(model: CurveModel, base, n: int, trunc: int | None = None) -> tuple[np.ndarray, list]:
    """The change-of-variable identity for every character at once.

    The right side is built in the group ring from the places over each base place
    of degree <= trunc; returns (pass flag per character, splitting-law violations).
    """
    trunc = 2 * model.genus + 2 if trunc is None else trunc
    D = level_data(model, base, n)
    T = D.table
    if T.characters[0].exponents != tuple(0 for _ in T.invariants):
        raise LFunctionError("character table does not start with the trivial character")
    above, violations = [], []
    for d in range(1, trunc + 1):
        for P in places_at_level(model, 1, d):
            Qs = _split_base_place(model, P, n)
            if sorted(Q.degree for Q in Qs) != splitting_degrees(d, n):
                violations.append((d, P.key, sorted(Q.degree for Q in Qs)))
            above.extend(Q for Q in Qs if n * Q.degree <= trunc)
    counts = {}
    for Q, x in zip(above, D.J.place_classes(above)):
        v = counts.setdefault(n * Q.degree, np.zeros(T.size, dtype=np.int64))
        v[D.index_of(x)] += 1
    rhs = np.stack([T.forward(s) for s in _group_ring_product(T, counts, trunc)])
    small = _expected_all(model, base, n, trunc // n)
    lhs = np.zeros_like(rhs)
    lhs[::n] = small[: len(lhs[::n])]
    ok = (lhs == rhs).all(axis=(0, 2))
    return ok, violations
