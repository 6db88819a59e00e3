"""Exact arithmetic in Z[zeta_N] modulo the N-th cyclotomic polynomial."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("N must be positive")
    num = [-1] + [0] * (N - 1) + [1]
    for m in range(1, N):
        if N % m == 0:
            num = _exact_div(num, cyclotomic_polynomial(m))
    return tuple(num)


def _exact_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def totient(N: int) -> int:
    return sum(1 for k in range(1, N + 1) if gcd(k, N) == 1)


def reduce_vector(vec, N: int) -> tuple[int, ...]:
    """Reduce sum vec[k] zeta^k (any length) modulo Phi_N."""
    phi = cyclotomic_polynomial(N)
    d = len(phi) - 1
    v = list(vec)
    if len(v) < d:
        v += [0] * (d - len(v))
    for k in range(len(v) - 1, d - 1, -1):
        c = v[k]
        if c:
            v[k] = 0
            for j in range(d):
                if phi[j]:
                    v[k - d + j] -= c * phi[j]
    return tuple(v[:d])


def reduce_rows(V: np.ndarray, N: int) -> np.ndarray:
    """Row-wise reduction of an integer matrix of zeta^k coefficients modulo Phi_N."""
    phi = np.array(cyclotomic_polynomial(N), dtype=np.int64)
    d = len(phi) - 1
    V = np.array(V, dtype=np.int64)
    if V.shape[1] < d:
        V = np.pad(V, ((0, 0), (0, d - V.shape[1])))
    nz = np.nonzero(phi[:d])[0]
    for k in range(V.shape[1] - 1, d - 1, -1):
        c = V[:, k]
        if c.any():
            V[:, k - d + nz] -= np.outer(c, phi[nz])
    out = V[:, :d]
    if np.abs(out).max(initial=0) > 2 ** 60:
        raise OverflowError("cyclotomic reduction overflow")
    return out


@dataclass(frozen=True)
class CyclotomicInteger:
    order: int
    coeffs: tuple[int, ...]

    # -- constructors --
    @classmethod
    def from_vector(cls, N: int, vec) -> "CyclotomicInteger":
        return cls(N, reduce_vector([int(c) for c in vec], N))

    @classmethod
    def from_int(cls, N: int, c: int) -> "CyclotomicInteger":
        return cls.from_vector(N, [c])

    @classmethod
    def zero(cls, N: int = 1) -> "CyclotomicInteger":
        return cls.from_int(N, 0)

    @classmethod
    def one(cls, N: int = 1) -> "CyclotomicInteger":
        return cls.from_int(N, 1)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CyclotomicInteger":
        vec = [0] * N
        vec[k % N] = 1
        return cls.from_vector(N, vec)

    # -- coercion --
    def lift(self, M: int) -> "CyclotomicInteger":
        if M % self.order:
            raise ValueError("target order must be a multiple")
        if M == self.order:
            return self
        step = M // self.order
        vec = [0] * (step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        return CyclotomicInteger.from_vector(M, vec)

    def _coerce(self, other):
        if isinstance(other, int):
            return self, CyclotomicInteger.from_int(self.order, other)
        if other.order == self.order:
            return self, other
        M = self.order * other.order // gcd(self.order, other.order)
        return self.lift(M), other.lift(M)

    # -- ring operations --
    def __add__(self, other):
        a, b = self._coerce(other)
        return CyclotomicInteger(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        return CyclotomicInteger(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.order, tuple(other * x for x in self.coeffs))
        a, b = self._coerce(other)
        prod = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicInteger.from_vector(a.order, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out, base = CyclotomicInteger.one(self.order), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # -- inspection --
    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational:
            raise ValueError("not a rational integer")
        return self.coeffs[0] if self.coeffs else 0

    def equals(self, other) -> bool:
        """Equality as elements of the cyclotomic field (orders may differ)."""
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def to_complex(self, k: int = 1) -> complex:
        z = cmath.exp(2j * cmath.pi * k / self.order)
        return sum(c * z ** i for i, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj) -> "CyclotomicInteger":
        return cls(int(obj["order"]), tuple(int(c) for c in obj["coeffs"]))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Z{self.order}({' + '.join(terms) or '0'})"


def cyclo_arith(op: str, *operands):
    """'add' and 'mul' fold over operands; 'scalar_mul' takes (int, value)."""
    if op == "add":
        out = operands[0]
        for x in operands[1:]:
            out = out + x
        return out
    if op == "mul":
        out = operands[0]
        for x in operands[1:]:
            out = out * x
        return out
    if op == "scalar_mul":
        k, x = operands
        return x * int(k)
    raise ValueError(f"unknown operation {op!r}")


def primes_one_mod(N: int, start: int):
    """Primes ell = 1 mod N from about start upwards."""
    from .field import is_prime
    p = start - (start % N) + 1
    while True:
        if p > 2 and is_prime(p):
            yield p
        p += N


def root_of_unity_mod(N: int, ell: int) -> int:
    """A primitive N-th root of unity modulo the prime ell = 1 mod N."""
    from .field import _prime_factors
    facs = _prime_factors(ell - 1)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // f, ell) != 1 for f in facs):
            return pow(g, (ell - 1) // N, ell)
    raise ArithmeticError("no primitive root")
