"""Characters of a finite abelian group given by invariant factors.

Group elements are coordinate tuples (e_1, ..., e_r) with 0 <= e_i < d_i.
A character with exponents (a_1, ..., a_r) sends e to zeta_N^(sum a_i e_i N / d_i)
where N = d_r is the exponent of the group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cyclotomic import (
    CyclotomicInteger, cyclotomic_polynomial, primes_one_mod, reduce_rows, root_of_unity_mod,
)

DEFAULT_CHARACTER_CAP = 5000


class CharacterError(ArithmeticError):
    pass


def group_exponent(invariants) -> int:
    return invariants[-1] if invariants else 1


@dataclass(frozen=True)
class Character:
    invariants: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def order_N(self) -> int:
        return group_exponent(self.invariants)

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def power(self, coords) -> int:
        """k with chi(x) = zeta_N^k."""
        N = self.order_N
        return sum(a * e * (N // d) for a, e, d in zip(self.exponents, coords, self.invariants)) % N


def _invariants(group) -> tuple[int, ...]:
    if hasattr(group, "invariant_factors"):
        return tuple(group.invariant_factors)
    return tuple(group)


def all_characters(group, cap: int = DEFAULT_CHARACTER_CAP) -> list[Character]:
    inv = _invariants(group)
    size = int(np.prod(inv)) if inv else 1
    if size > cap:
        raise CharacterError(f"group of order {size} exceeds the cap {cap}")
    return [Character(inv, a) for a in itertools.product(*(range(d) for d in inv))]


def all_elements(invariants) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(d) for d in invariants)))


def evaluate(chi: Character, coords) -> CyclotomicInteger:
    return CyclotomicInteger.zeta(chi.order_N, chi.power(coords))


def negate(invariants, coords) -> tuple[int, ...]:
    return tuple((-e) % d for e, d in zip(coords, invariants))


class CharacterTable:
    """Exact transforms between functions on G and character sums in Z[zeta_N]."""

    def __init__(self, invariants, cap: int = DEFAULT_CHARACTER_CAP):
        self.invariants = tuple(invariants)
        self.N = group_exponent(self.invariants)
        self.characters = all_characters(self.invariants, cap)
        self.elements = all_elements(self.invariants)
        self.size = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.phi = len(cyclotomic_polynomial(self.N)) - 1

    @cached_property
    def powers(self) -> np.ndarray:
        """K[c, x] with chi_c(x) = zeta_N^K[c, x]."""
        N = self.N
        if not self.invariants:
            return np.zeros((1, 1), dtype=np.int64)
        A = np.array([c.exponents for c in self.characters], dtype=np.int64)
        scale = np.array([N // d for d in self.invariants], dtype=np.int64)
        E = np.array(self.elements, dtype=np.int64)
        return (A * scale) @ E.T % N

    def _as_vector(self, values) -> np.ndarray:
        if isinstance(values, dict):
            v = np.zeros(self.size, dtype=np.int64)
            for e, c in values.items():
                v[self.index[tuple(e)]] = c
            return v
        return np.asarray(values, dtype=np.int64)

    def forward(self, values) -> np.ndarray:
        """Rows c(chi) = sum_x chi(x) values(x), reduced modulo Phi_N."""
        v = self._as_vector(values)
        if np.abs(v).sum() >= 2 ** 52:
            raise OverflowError("values too large for exact accumulation")
        K, N, m = self.powers, self.N, len(self.characters)
        out = np.zeros((m, N), dtype=np.int64)
        step = max(1, 4_000_000 // max(1, self.size))
        for s in range(0, m, step):
            blk = K[s: s + step]
            rows = blk.shape[0]
            idx = (np.arange(rows)[:, None] * N + blk).ravel()
            acc = np.bincount(idx, weights=np.tile(v, rows).astype(np.float64), minlength=rows * N)
            out[s: s + rows] = np.rint(acc).astype(np.int64).reshape(rows, N)
        return reduce_rows(out, N)

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        """values(x) = (1/|G|) sum_chi chi(-x) c(chi); exactness is enforced."""
        C = np.asarray(coeffs, dtype=np.int64)
        if C.shape != (len(self.characters), self.phi):
            raise CharacterError("coefficient array has the wrong shape")
        if np.abs(C).sum() >= 2 ** 52:
            raise OverflowError("coefficients too large for exact accumulation")
        v = self._inverse_modular(C)
        if v is not None:
            return v
        return self._inverse_exact(C)

    def _inverse_modular(self, C: np.ndarray) -> np.ndarray | None:
        """Integer candidate from residues mod primes = 1 mod N, certified by the forward map.

        The forward map is injective, so a candidate reproducing C exactly is the inverse.
        None if no integer vector within the size bound does.
        """
        K, N, G, m = self.powers, self.N, self.size, len(self.characters)
        bound = int(np.abs(C).sum()) // G + 1
        primes, res, M = [], [], 1
        for ell in primes_one_mod(N, 1 << 22):
            w = root_of_unity_mod(N, ell)
            pw = np.ones(N, dtype=np.int64)
            for j in range(1, N):
                pw[j] = pw[j - 1] * w % ell
            cw = (C % ell) @ pw[:self.phi] % ell
            r = np.zeros(G, dtype=np.int64)
            step = max(1, 4_000_000 // m)
            for s in range(0, G, step):
                r[s: s + step] = cw @ pw[(-K[:, s: s + step]) % N] % ell
            primes.append(ell)
            res.append(r * pow(G, -1, ell) % ell)
            M *= ell
            if M > 2 * bound:
                break
        x, Mx = res[0].astype(object), primes[0]
        for ell, r in zip(primes[1:], res[1:]):
            k = (r.astype(object) - x) % ell * pow(Mx, -1, ell) % ell
            x, Mx = x + Mx * k, Mx * ell
        v = np.array([int(a - Mx) if a > Mx // 2 else int(a) for a in x], dtype=np.int64)
        if np.array_equal(self.forward(v), C):
            return v
        return None

    def _inverse_exact(self, C: np.ndarray) -> np.ndarray:
        """Direct sum in Z[zeta_N] with divisibility and rationality checks."""
        K, N, G = self.powers, self.N, self.size
        nz_chars = np.nonzero(C.any(axis=1))[0]
        Kc, Cc = K[nz_chars], C[nz_chars]
        jj = np.arange(self.phi)
        out = np.zeros((G, N), dtype=np.int64)
        step = max(1, 4_000_000 // max(1, len(nz_chars) * self.phi))
        for s in range(0, G, step):
            xs = np.arange(s, min(G, s + step))
            # chi(-x) c(chi) = sum_j c_j zeta^(j - k(chi, x))
            pos = (jj[None, None, :] - Kc[:, xs].T[:, :, None]) % N
            idx = (np.arange(len(xs))[:, None, None] * N + pos).ravel()
            w = np.broadcast_to(Cc[None, :, :], pos.shape).ravel().astype(np.float64)
            acc = np.bincount(idx, weights=w, minlength=len(xs) * N)
            out[xs] = np.rint(acc).astype(np.int64).reshape(len(xs), N)
        red = reduce_rows(out, N)
        if red[:, 1:].any():
            raise CharacterError("inverse transform left irrational components")
        total = red[:, 0]
        if (total % G).any():
            raise CharacterError("inverse transform is not divisible by |G|")
        return total // G

    def to_cyclotomic(self, row) -> CyclotomicInteger:
        return CyclotomicInteger(self.N, tuple(int(c) for c in row))

    def from_cyclotomic(self, value: CyclotomicInteger) -> np.ndarray:
        if value.order != self.N:
            value = value.lift(self.N) if self.N % value.order == 0 else None
            if value is None:
                raise CharacterError("value does not live in Z[zeta_N]")
        return np.array(value.coeffs, dtype=np.int64)
