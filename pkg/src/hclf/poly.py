"""Univariate polynomials over a :class:`~hclf.field.GF`.

Polynomials are plain lists of integer field codes, lowest degree first, with
no trailing zeros (the zero polynomial is ``[]``).  Functions never mutate
their inputs.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .field import GF, _prime_factors


class PolyRing:
    """Polynomial arithmetic over one field.  Obtain via :func:`ring`."""

    def __init__(self, F: GF):
        self.F = F
        self.p = F.p
        self.q = F.order

    # -- basics --
    @staticmethod
    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    @staticmethod
    def deg(a) -> int:
        return len(a) - 1

    def const(self, c: int):
        return [c] if c else []

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        add = self.F.add
        out = list(a)
        for i, c in enumerate(b):
            if c:
                out[i] = add(out[i], c)
        return self.trim(out)

    def neg(self, a):
        neg = self.F.neg_table
        return [neg[c] for c in a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c: int):
        if c == 0:
            return []
        mul = self.F.mul
        return [mul(x, c) for x in a]

    def shift(self, a, n: int):
        return [0] * n + list(a) if a else []

    def mul(self, a, b):
        if not a or not b:
            return []
        F = self.F
        if F.is_prime:
            p = self.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return self.trim([c % p for c in out])
        add, log, exp = F.add, F.log, F.exp
        out = [0] * (len(a) + len(b) - 1)
        lb = [(j, log[y]) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                lx = log[x]
                for j, ly in lb:
                    out[i + j] = add(out[i + j], exp[lx + ly])
        return self.trim(out)

    def sqr(self, a):
        return self.mul(a, a)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        a = list(a)
        db = len(b) - 1
        if len(a) <= db:
            return [], a
        inv_lead = F.inv(b[-1])
        quo = [0] * (len(a) - db)
        if F.is_prime:
            p = self.p
            for i in range(len(a) - 1, db - 1, -1):
                c = a[i] * inv_lead % p
                if c:
                    quo[i - db] = c
                    for j in range(db + 1):
                        a[i - db + j] = (a[i - db + j] - c * b[j]) % p
        else:
            mul, sub = F.mul, F.sub
            for i in range(len(a) - 1, db - 1, -1):
                c = mul(a[i], inv_lead)
                if c:
                    quo[i - db] = c
                    for j in range(db + 1):
                        if b[j]:
                            a[i - db + j] = sub(a[i - db + j], mul(c, b[j]))
        return self.trim(quo), self.trim(a[:db])

    def mod(self, a, b):
        if len(a) < len(b):
            return list(a)
        return self.divmod(a, b)[1]

    def div_exact(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self, a):
        if not a or a[-1] == 1:
            return list(a)
        return self.scale(a, self.F.inv(a[-1]))

    def gcd(self, a, b):
        a, b = list(a), list(b)
        while b:
            a, b = b, self.mod(a, b)
        return self.monic(a)

    def xgcd(self, a, b):
        """Return (g, s, t) with s*a + t*b == g monic."""
        r0, r1 = list(a), list(b)
        s0, s1, t0, t1 = [1], [], [], [1]
        while r1:
            qt, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(qt, s1))
            t0, t1 = t1, self.sub(t0, self.mul(qt, t1))
        if not r0:
            return [], [], []
        c = self.F.inv(r0[-1])
        return self.scale(r0, c), self.scale(s0, c), self.scale(t0, c)

    def invmod(self, a, m):
        g, s, _ = self.xgcd(a, m)
        if g != [1]:
            raise ZeroDivisionError("not invertible modulo m")
        return self.mod(s, m)

    def mulmod(self, a, b, m):
        return self.mod(self.mul(a, b), m)

    def powmod(self, a, e: int, m):
        result = [1]
        base = self.mod(a, m)
        while e:
            if e & 1:
                result = self.mulmod(result, base, m)
            e >>= 1
            if e:
                base = self.mulmod(base, base, m)
        return self.mod(result, m)

    def pow(self, a, e: int):
        result = [1]
        base = list(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def deriv(self, a):
        F = self.F
        out = []
        for i in range(1, len(a)):
            out.append(F.mul(a[i], F.from_coords([i % self.p])))
        return self.trim(out)

    def eval(self, a, x: int) -> int:
        add, mul = self.F.add, self.F.mul
        acc = 0
        for c in reversed(a):
            acc = add(mul(acc, x), c)
        return acc

    def map_coeffs(self, a, fn):
        return self.trim([fn(c) for c in a])

    def frobenius(self, a, power: int):
        """Raise every coefficient to ``power`` (a power of p)."""
        pw = self.F.pow
        return self.trim([pw(c, power) for c in a])

    # -- irreducibility and factoring --
    def is_irreducible(self, u) -> bool:
        n = len(u) - 1
        if n < 1:
            return False
        if n == 1:
            return True
        u = self.monic(u)
        x = [0, 1]
        xq = self.powmod(x, self.q, u)
        cur = xq
        powers = {1: xq}
        for i in range(2, n + 1):
            cur = self._compose_mod(cur, xq, u)
            powers[i] = cur
        if powers[n] != x:
            return False
        for r in _prime_factors(n):
            if self.gcd(u, self.sub(powers[n // r], x)) != [1]:
                return False
        return True

    def _compose_mod(self, a, b, m):
        """a(b) mod m by Horner."""
        acc = []
        for c in reversed(a):
            acc = self.add(self.mulmod(acc, b, m), self.const(c))
        return acc

    def squarefree(self, a) -> bool:
        return len(self.gcd(a, self.deriv(a))) == 1

    def squarefree_factorization(self, a):
        """List of (factor, multiplicity) with pairwise coprime squarefree factors."""
        a = self.monic(a)
        out = []
        self._sqf(a, 1, out)
        merged = {}
        for f, m in out:
            merged[tuple(f)] = merged.get(tuple(f), 0) + m
        return [(list(f), m) for f, m in merged.items()]

    def _sqf(self, a, mult, out):
        if len(a) <= 1:
            return
        d = self.deriv(a)
        if not d:
            # a = b(x^p): take p-th roots of the coefficients
            p = self.p
            inv_frob = self.F.order // p
            b = [self.F.pow(a[i], inv_frob) for i in range(0, len(a), p)]
            self._sqf(self.trim(b), mult * p, out)
            return
        c = self.gcd(a, d)
        w = self.div_exact(a, c)
        i = 1
        while len(w) > 1:
            y = self.gcd(w, c)
            z = self.div_exact(w, y)
            if len(z) > 1:
                out.append((z, mult * i))
            i += 1
            w = y
            c = self.div_exact(c, y)
        if len(c) > 1:
            self._sqf(c, mult, out)

    def distinct_degree(self, a):
        """Split a squarefree monic polynomial into (product, degree) pieces."""
        out = []
        x = [0, 1]
        h = x
        f = list(a)
        d = 0
        while len(f) - 1 >= 2 * (d + 1):
            d += 1
            h = self.powmod(h, self.q, f)
            g = self.gcd(f, self.sub(h, x))
            if len(g) > 1:
                out.append((g, d))
                f = self.div_exact(f, g)
                h = self.mod(h, f)
        if len(f) > 1:
            out.append((f, len(f) - 1))
        return out

    def equal_degree(self, a, d: int, rng=None):
        """Cantor-Zassenhaus split of a squarefree product of degree-d irreducibles."""
        n = len(a) - 1
        if n == d:
            return [self.monic(a)]
        if self.p == 2:
            raise NotImplementedError("equal-degree splitting needs odd characteristic")
        rng = rng or random.Random(0x5EED)
        e = (self.q ** d - 1) // 2
        while True:
            r = self.trim([rng.randrange(self.q) for _ in range(n)])
            if len(r) < 2:
                continue
            g = self.gcd(a, r)
            if 1 < len(g) < len(a):
                break
            t = self.sub(self.powmod(r, e, a), [1])
            g = self.gcd(a, t)
            if 1 < len(g) < len(a):
                break
        return self.equal_degree(g, d, rng) + self.equal_degree(self.div_exact(a, g), d, rng)

    def factor(self, a):
        """Monic irreducible factorization as a sorted list of (factor, mult)."""
        out = []
        rng = random.Random(0x5EED)
        for f, m in self.squarefree_factorization(a):
            for g, d in self.distinct_degree(f):
                for h in self.equal_degree(g, d, rng):
                    out.append((h, m))
        out.sort(key=lambda fm: (len(fm[0]), fm[0][::-1], fm[1]))
        return out

    def roots(self, a):
        return sorted(self.F.neg(f[0]) for f, _ in self.factor(a) if len(f) == 2)

    # -- square roots in F[x]/(u), u irreducible --
    def is_square_mod(self, a, u) -> bool:
        a = self.mod(a, u)
        if not a:
            return True
        if self.p == 2:
            return True
        e = (self.q ** (len(u) - 1) - 1) // 2
        return self.powmod(a, e, u) == [1]

    def sqrt_mod(self, a, u):
        """A square root of a in F[x]/(u) (Tonelli-Shanks), or None."""
        a = self.mod(a, u)
        if not a:
            return []
        order = self.q ** (len(u) - 1)
        if self.p == 2:
            return self.powmod(a, order // 2, u)
        if not self.is_square_mod(a, u):
            return None
        m = order - 1
        s = 0
        while m % 2 == 0:
            m //= 2
            s += 1
        half = (order - 1) // 2
        z = None
        code = 2
        while z is None:
            cand = _code_to_poly(code, self.q)
            cand = self.mod(cand, u)
            if cand and self.powmod(cand, half, u) != [1]:
                z = cand
            code += 1
        c = self.powmod(z, m, u)
        x = self.powmod(a, (m + 1) // 2, u)
        t = self.powmod(a, m, u)
        r = s
        while t != [1]:
            i, tt = 0, t
            while tt != [1]:
                tt = self.mulmod(tt, tt, u)
                i += 1
            b = c
            for _ in range(r - i - 1):
                b = self.mulmod(b, b, u)
            x = self.mulmod(x, b, u)
            c = self.mulmod(b, b, u)
            t = self.mulmod(t, c, u)
            r = i
        return x

    # -- enumeration --
    def monic_polys(self, e: int):
        q = self.q
        for code in range(q ** e):
            yield _code_to_poly(code, q, e) + [1]

    def irreducibles(self, e: int):
        """All monic irreducibles of degree e, ordered by (coefficients high to low)."""
        return [list(t) for t in _irreducibles(self.F, e)]


def _code_to_poly(code: int, q: int, length: int | None = None):
    out = []
    while code:
        out.append(code % q)
        code //= q
    if length is not None:
        out += [0] * (length - len(out))
        return out
    return out


def poly_key(a) -> tuple:
    return tuple(a)


@lru_cache(maxsize=None)
def ring(F: GF) -> PolyRing:
    return PolyRing(F)


@lru_cache(maxsize=64)
def _irreducibles(F: GF, e: int) -> tuple[tuple[int, ...], ...]:
    R = ring(F)
    q = F.order
    if e == 1:
        return tuple((c, 1) for c in range(q))
    if q > 1024 or q ** e > 4_000_000:
        found = [tuple(p) for p in R.monic_polys(e) if p[0] and R.is_irreducible(p)]
    else:
        found = _sieve_irreducibles(F, e)
    found.sort(key=lambda t: t[::-1])
    return tuple(found)


def _sieve_irreducibles(F: GF, e: int):
    """Mark products of lower-degree monics; survivors are irreducible."""
    q = F.order
    add, mul, _ = F.np_tables()
    total = q ** e
    reducible = np.zeros(total, dtype=bool)
    weights = q ** np.arange(e, dtype=np.int64)
    for a in range(1, e // 2 + 1):
        irr_a = np.array([list(t) for t in _irreducibles(F, a)], dtype=np.int32)
        b = e - a
        nb = q ** b
        monic_b = np.zeros((nb, b + 1), dtype=np.int32)
        codes = np.arange(nb, dtype=np.int64)
        for i in range(b):
            monic_b[:, i] = codes % q
            codes //= q
        monic_b[:, b] = 1
        for row in irr_a:
            prod = np.zeros((nb, e + 1), dtype=np.int32)
            for i, c in enumerate(row):
                if c == 0:
                    continue
                for j in range(b + 1):
                    prod[:, i + j] = add[prod[:, i + j], mul[c, monic_b[:, j]]]
            reducible[prod[:, :e].astype(np.int64) @ weights] = True
    out = []
    for code in np.nonzero(~reducible)[0]:
        out.append(tuple(_code_to_poly(int(code), q, e)) + (1,))
    return out
