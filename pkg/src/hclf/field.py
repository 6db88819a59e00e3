"""Finite fields F_{p^k} with integer-encoded elements.

An element is stored as the integer ``sum(c_i * p**i)`` where ``c_i`` are its
coordinates in the power basis of ``F_p[x]/(modulus)``.  Integer order is the
enumeration order, so 0 and 1 come first.  Multiplication goes through
log/antilog tables and addition through Zech logarithms, which keeps every
operation a handful of list lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_FIELD_CAP = 3 ** 10


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n == p**k, or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


# -- dense polynomials over the prime field (only used to build tables) --

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    return _fp_trim(prod[:k] if len(prod) > k else prod)


def _fp_mod(a, mod, p):
    a = list(a)
    k = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(k + 1):
                a[i - k + j] = (a[i - k + j] - c * mod[j]) % p
    return _fp_trim(a[:k] if len(a) > k else a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod(base, e, mod, p):
    result = [1]
    base = _fp_mod(base, mod, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(poly, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    k = len(poly) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _fp_powmod(x, p ** k, poly, p) != x:
        return False
    for r in _prime_factors(k):
        h = _fp_powmod(x, p ** (k // r), poly, p)
        n = max(len(h), 2)
        hh, xx = h + [0] * (n - len(h)), x + [0] * (n - 2)
        diff = _fp_trim([(c - d) % p for c, d in zip(hh, xx)])
        if len(_fp_gcd(poly, diff, p)) != 1:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k (low-degree first)."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        poly = coeffs + [1]
        if k <= 3:
            if all(sum(a * pow(t, i, p) for i, a in enumerate(poly)) % p for t in range(p)):
                return tuple(poly)
        elif is_irreducible_fp(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


class GF:
    """The field F_{p^k}; use :func:`make_field` rather than the constructor."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.order = p ** k
        q = self.order
        self.is_prime = k == 1
        self._np_tables = None
        if self.is_prime:
            self.neg_table = [(-a) % p for a in range(p)]
            self.inv_table = [0] + [pow(a, p - 2, p) for a in range(1, p)]
            gen = next(g for g in range(1, p) if p == 2 or
                       all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
            exp = [1] * (q - 1)
            for i in range(1, q - 1):
                exp[i] = exp[i - 1] * gen % p
        else:
            exp = self._find_generator()
        self.exp = exp + exp
        log = [0] * q
        for i in range(q - 1):
            log[exp[i]] = i
        self.log = log
        if not self.is_prime:
            digits = [self.coords(a) for a in range(q)]
            self.neg_table = [self.from_coords([(-c) % p for c in d]) for d in digits]
            self.inv_table = [0] + [self.exp[(q - 1 - log[a]) % (q - 1)] for a in range(1, q)]
            # zech[i] = log(1 + g^i), or -1 when 1 + g^i == 0
            zech = [0] * (q - 1)
            for i in range(q - 1):
                d = digits[exp[i]]
                s = self.from_coords([(d[0] + 1) % p] + list(d[1:]))
                zech[i] = -1 if s == 0 else log[s]
            self.zech = zech

    def _find_generator(self):
        p, q = self.p, self.order
        mod = list(self.modulus)
        rs = _prime_factors(q - 1)
        for cand in range(p, q):
            base = _fp_trim(self.coords(cand))
            if all(_fp_powmod(base, (q - 1) // r, mod, p) != [1] for r in rs):
                break
        else:
            raise FieldError("no primitive element found")
        seq = [1]
        cur = [1]
        for _ in range(1, q - 1):
            cur = _fp_mulmod(cur, base, mod, p)
            seq.append(self.from_coords(cur))
        return seq

    # -- coordinates --
    def coords(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coords(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.k]):
            v = v * self.p + (c % self.p)
        return v

    # -- arithmetic on integer codes --
    def add(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % (self.order - 1)]
        return 0 if z < 0 else self.exp[la + z]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.is_prime:
            return a * b % self.p
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.log[a] % 2 == 0

    def sqrt(self, a: int) -> int | None:
        """The square root with even discrete log, or None."""
        if a == 0:
            return 0
        la = self.log[a]
        if self.p == 2:
            return self.exp[(la * (self.order // 2)) % (self.order - 1)]
        if la % 2:
            return None
        return self.exp[la // 2]

    def frobenius(self, a: int, power: int) -> int:
        """a ** power, for power a power of p (cheap via logs)."""
        return self.pow(a, power)

    def elements(self) -> range:
        return range(self.order)

    def np_tables(self):
        """(add, mul, neg) as numpy lookup tables; small fields only."""
        if self._np_tables is None:
            q = self.order
            if q > 1024:
                raise FieldError("lookup tables only built for fields of size <= 1024")
            add = np.zeros((q, q), dtype=np.int32)
            mul = np.zeros((q, q), dtype=np.int32)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    mul[a, b] = self.mul(a, b)
            self._np_tables = (add, mul, np.array(self.neg_table, dtype=np.int32))
        return self._np_tables

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (make_field, (self.p, self.k))


_FIELDS: dict[tuple[int, int], GF] = {}


def make_field(p: int, k: int, cap: int = DEFAULT_FIELD_CAP) -> GF:
    """The field of size p**k with the least irreducible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p ** k > cap:
        raise FieldError(f"field of size {p}^{k} exceeds the cap {cap}")
    key = (p, k)
    F = _FIELDS.get(key)
    if F is None:
        F = GF(p, k, least_irreducible(p, k))
        _FIELDS[key] = F
    return F


def field_of_size(q: int, cap: int = DEFAULT_FIELD_CAP) -> GF:
    pk = prime_power(q)
    if pk is None:
        raise FieldError(f"{q} is not a prime power")
    return make_field(*pk, cap=cap)


@lru_cache(maxsize=None)
def _direct_embedding(src: GF, tgt: GF) -> tuple[int, ...]:
    # image of the power-basis generator: least root of the source modulus
    mod = src.modulus
    root = None
    for r in range(tgt.order):
        acc = 0
        for c in reversed(mod):
            acc = tgt.add(tgt.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    if root is None:
        raise FieldError(f"{src} has no embedding into {tgt}")
    powers = [1]
    for _ in range(1, src.k):
        powers.append(tgt.mul(powers[-1], root))
    table = []
    for a in range(src.order):
        acc = 0
        for c, w in zip(src.coords(a), powers):
            if c:
                acc = tgt.add(acc, tgt.mul(c, w))
        table.append(acc)
    return tuple(table)


@lru_cache(maxsize=None)
def embedding_table(src: GF, tgt: GF) -> tuple[int, ...]:
    """Fixed ring embedding src -> tgt as a lookup table.

    Embeddings factor through the largest intermediate field, so the chain of
    maximal steps composes to the direct map.
    """
    if src.p != tgt.p or tgt.k % src.k:
        raise FieldError(f"cannot embed {src} into {tgt}")
    if src is tgt:
        return tuple(range(src.order))
    if src.k == 1:
        return tuple(range(src.order))
    mids = [c for c in range(src.k + 1, tgt.k) if tgt.k % c == 0 and c % src.k == 0]
    if not mids:
        return _direct_embedding(src, tgt)
    mid = make_field(src.p, max(mids), cap=max(tgt.order, DEFAULT_FIELD_CAP))
    first = embedding_table(src, mid)
    second = embedding_table(mid, tgt)
    return tuple(second[a] for a in first)


@dataclass(frozen=True)
class FieldElement:
    """A field element with operator overloading; library internals use ints."""

    field: GF
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.field.coords(self.value)

    def _check(self, other):
        if isinstance(other, int):
            return self.field.from_coords([other])
        if other.field is not self.field:
            raise FieldError("operands live in different fields")
        return other.value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._check(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._check(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._check(other)))

    def __pow__(self, e: int):
        if e < 0 and self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"{self.field!r}({self.coeffs})"


def element(F: GF, coeffs) -> FieldElement:
    if isinstance(coeffs, int):
        coeffs = [coeffs]
    return FieldElement(F, F.from_coords(coeffs))


def field_arith(op: str, *operands: FieldElement) -> FieldElement:
    """Dispatch add/sub/mul/inv/pow by name; pow takes an int exponent last."""
    if op == "inv":
        (a,) = operands
        return a.inverse()
    if op == "pow":
        a, e = operands
        if e < 0:
            raise FieldError("pow expects a non-negative exponent")
        return a ** e
    a, b = operands
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise FieldError(f"unknown operation {op!r}")


def frobenius_power(e: FieldElement, q: int, m: int) -> FieldElement:
    F = e.field
    pk = prime_power(q)
    if pk is None or pk[0] != F.p or F.k % pk[1]:
        raise FieldError(f"{q} is not a subfield size of {F!r}")
    if m < 0:
        raise FieldError("m must be non-negative")
    return FieldElement(F, F.pow(e.value, q ** m))


def embed(e: FieldElement, target: GF) -> FieldElement:
    return FieldElement(target, embedding_table(e.field, target)[e.value])


def enumerate_elements(F: GF) -> list[FieldElement]:
    return [FieldElement(F, a) for a in range(F.order)]
