"""Vectorised arithmetic in F[x]/(u) for many moduli u of one degree at once.

Used to split large batches of irreducible polynomials into places; the
scalar routines in poly.py give the same answers, only slower.
"""

from __future__ import annotations

import numpy as np

from .field import GF


class BatchQuotient:
    """Residues modulo many monic u of degree d.

    Arrays are stored coefficient-major: A[i] is the vector of x^i
    coefficients across all moduli.  U has shape (d + 1, M).
    """

    def __init__(self, F: GF, U: np.ndarray):
        self.F = F
        self.add, self.mul, self.neg = F.np_tables()
        self.U = np.ascontiguousarray(U, dtype=np.int32)
        self.M = self.U.shape[1]
        self.d = self.U.shape[0] - 1
        self.negU = self.neg[self.U[: self.d]]

    def subset(self, idx) -> "BatchQuotient":
        return BatchQuotient(self.F, self.U[:, idx])

    def one(self) -> np.ndarray:
        out = np.zeros((self.d, self.M), dtype=np.int32)
        out[0] = 1
        return out

    def is_const(self, A: np.ndarray, c: int) -> np.ndarray:
        return (A[0] == c) & ~A[1:].any(axis=0)

    def reduce(self, C: np.ndarray) -> np.ndarray:
        """Reduce arrays with >= d coefficient rows modulo U."""
        add, mul, d = self.add, self.mul, self.d
        C = C.copy()
        for k in range(C.shape[0] - 1, d - 1, -1):
            c = C[k]
            if not c.any():
                continue
            for j in range(d):
                C[k - d + j] = add[C[k - d + j], mul[c, self.negU[j]]]
        return C[:d]

    def mulmod(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        add, mul, d = self.add, self.mul, self.d
        C = np.zeros((2 * d - 1, self.M), dtype=np.int32)
        for i in range(d):
            Ai = A[i]
            for j in range(d):
                C[i + j] = add[C[i + j], mul[Ai, B[j]]]
        return self.reduce(C)

    def powmod(self, A: np.ndarray, e: int) -> np.ndarray:
        out = self.one()
        base = A
        while e:
            if e & 1:
                out = self.mulmod(out, base)
            e >>= 1
            if e:
                base = self.mulmod(base, base)
        return out

    def where(self, mask, A, B):
        return np.where(mask[None, :], A, B)


def batch_reduce_fixed(F: GF, f, U: np.ndarray) -> np.ndarray:
    """f mod u for each row u of U."""
    Q = BatchQuotient(F, U)
    width = max(len(f), Q.d)
    C = np.zeros((width, Q.M), dtype=np.int32)
    C[: len(f)] = np.asarray(f, dtype=np.int32)[:, None]
    return Q.reduce(C)


def batch_sqrt_mod(F: GF, U: np.ndarray, A: np.ndarray):
    """Square roots of A modulo U, one per column (coefficient-major layout).

    Returns (status, roots): status 0 if the residue is zero, 1 if it is a
    nonzero square (root given), -1 if it is a non-square.
    """
    Q = BatchQuotient(F, U)
    M, d = Q.M, Q.d
    order = F.order ** d
    half = (order - 1) // 2
    minus_one = F.neg_table[1]
    zero = ~A.any(axis=0)
    leg = Q.powmod(A, half)
    square = Q.is_const(leg, 1) & ~zero
    status = np.where(zero, 0, np.where(square, 1, -1))
    roots = np.zeros((d, M), dtype=np.int32)
    idx = np.nonzero(square)[0]
    if len(idx) == 0:
        return status, roots
    Qs = Q.subset(idx)
    a = A[:, idx]
    m, s = order - 1, 0
    while m % 2 == 0:
        m //= 2
        s += 1
    # a non-residue per modulus, trying small polynomials in order
    z = np.zeros_like(a)
    found = np.zeros(len(idx), dtype=bool)
    q = F.order
    for code in range(q, q ** d):
        digits, k = [], code
        while k:
            digits.append(k % q)
            k //= q
        todo = np.nonzero(~found)[0]
        Qt = Qs.subset(todo)
        cand = np.zeros((d, len(todo)), dtype=np.int32)
        cand[: len(digits)] = np.asarray(digits, dtype=np.int32)[:, None]
        ok = Qt.is_const(Qt.powmod(cand, half), minus_one)
        z[:, todo[ok]] = cand[:, ok]
        found[todo[ok]] = True
        if found.all():
            break
    if not found.all():
        raise ArithmeticError("no non-residue found")
    c = Qs.powmod(z, m)
    x = Qs.powmod(a, (m + 1) // 2)
    t = Qs.powmod(a, m)
    r = np.full(len(idx), s)
    for _ in range(s):
        done = Qs.is_const(t, 1)
        if done.all():
            break
        # least i >= 1 with t^(2^i) = 1
        i = np.zeros(len(idx), dtype=np.int64)
        tt = t
        got = done.copy()
        for k in range(1, s + 1):
            tt = Qs.mulmod(tt, tt)
            hit = Qs.is_const(tt, 1) & ~got
            i[hit] = k
            got |= hit
        b = c
        steps = r - i - 1
        for k in range(s):
            sq = Qs.mulmod(b, b)
            b = Qs.where(k < steps, sq, b)
        active = ~done
        x = Qs.where(active, Qs.mulmod(x, b), x)
        c2 = Qs.mulmod(b, b)
        c = Qs.where(active, c2, c)
        t = Qs.where(active, Qs.mulmod(t, c2), t)
        r = np.where(active, i, r)
    if not Qs.is_const(t, 1).all():
        raise ArithmeticError("Tonelli-Shanks did not converge")
    roots[:, idx] = x
    return status, roots
