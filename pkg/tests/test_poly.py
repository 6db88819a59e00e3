import numpy as np
from hypothesis import given, settings, strategies as st

from hclf.batch import batch_reduce_fixed, batch_sqrt_mod
from hclf.field import make_field
from hclf.poly import ring


def necklace(q, e):
    from sympy import divisors, mobius
    return sum(mobius(e // d) * q ** d for d in divisors(e)) // e


def test_irreducible_counts():
    for p, k in [(3, 1), (5, 1), (3, 2)]:
        R = ring(make_field(p, k))
        for e in range(1, 5):
            irr = R.irreducibles(e)
            assert len(irr) == necklace(p ** k, e)
            assert all(R.is_irreducible(list(u)) for u in irr[:20])


polys = st.lists(st.integers(0, 8), min_size=1, max_size=8)


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_division_and_gcd(a, b):
    R = ring(make_field(3, 2))
    a, b = R.trim(a), R.trim(b)
    if not b:
        return
    qt, r = R.divmod(a, b)
    assert R.add(R.mul(qt, b), r) == a
    assert len(r) < len(b)
    g, s, t = R.xgcd(a, b)
    assert R.add(R.mul(s, a), R.mul(t, b)) == g
    if g:
        assert not R.mod(a, g) and not R.mod(b, g)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=9))
def test_factor_reconstructs(a):
    R = ring(make_field(5, 1))
    a = R.trim(a)
    if len(a) < 2:
        return
    prod = [a[-1]]
    for u, m in R.factor(a):
        assert R.is_irreducible(list(u)) and u[-1] == 1
        prod = R.mul(prod, R.pow(list(u), m))
    assert prod == a


def test_sqrt_mod_and_batch_agree():
    F = make_field(3, 1)
    R = ring(F)
    f = [1, 2, 0, 0, 0, 1]
    for d in (2, 3, 4):
        us = [list(u) for u in R.irreducibles(d)]
        U = np.array(us, dtype=np.int32).T
        A = batch_reduce_fixed(F, f, U)
        status, roots = batch_sqrt_mod(F, U, A)
        for j, u in enumerate(us):
            a = R.mod(f, u)
            r = R.sqrt_mod(f, u)
            if not a:
                assert status[j] == 0
            elif r is None:
                assert status[j] == -1
            else:
                assert status[j] == 1
                x = R.trim(list(roots[:, j]))
                assert R.mod(R.sub(R.mul(x, x), a), u) == []
