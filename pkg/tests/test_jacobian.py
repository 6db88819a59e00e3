import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hclf.census import class_counts
from hclf.curve import curve_from_ints, jacobian_order, level, places_at_level
from hclf.divisor import zero_divisor
from hclf.jacobian import Divisor, base_from_places, default_base, jacobian, smith_normal_form

from conftest import labels, load

SMALL = labels("genus2")[:6] + labels("elliptic")[:3]


def test_example_classes(example):
    C = example.model
    base = default_base(C)
    J = jacobian(C, base, 1)
    P = base.rational_place
    Q = next(R for R in example.points if R != P)
    g = J.frobenius_class(Q)
    assert J.class_of(Divisor(1, ((P, 1),))) == J.zero
    assert J.frobenius_class(P) == J.zero
    assert J.order_of(g) == 5
    assert J.class_of(Divisor(1, ((P, 2),))) == J.zero
    assert J.class_of(Divisor(1, ((Q, 2),))) == J.mul(2, g)
    assert len(J.enumerate()) == 5
    assert list(J.structure().invariant_factors) == [5]
    # quadratic places lying over a rational x (fibres of the x-map) map to [Q - P]
    fibres = [R for R in places_at_level(C, 1, 2)
              if R.is_infinite or (R.kind == "inert" and len(R.u) == 2)]
    assert len(fibres) == 3
    assert all(J.frobenius_class(R) == g for R in fibres)


@pytest.mark.parametrize("label", labels("genus2")[:8] + labels("genus3")[:1])
def test_group_order_independent_of_det(label):
    C, base = load(label)
    g = C.genus
    for n in (1, 2):
        # every degree-g class contains an effective divisor
        counts = class_counts(C, base, n, g)
        assert sum(1 for c in counts.values() if c > 0) == jacobian_order(C, n)


@pytest.mark.parametrize("label", SMALL)
def test_structure_and_frobenius(label):
    C, base = load(label)
    J1, J2 = jacobian(C, base, 1), jacobian(C, base, 2)
    S = J2.structure()
    assert int(np.prod(S.invariant_factors)) == jacobian_order(C, 2)
    assert all(b % a == 0 for a, b in zip(S.invariant_factors, S.invariant_factors[1:]))
    els = J2.enumerate()
    assert els.count(J2.zero) == 1
    fixed = {x for x in els if J2.frobenius(x, 1) == x}
    image = {J1.include(x, J2) for x in J1.enumerate()}
    assert fixed == image
    assert all(J2.frobenius(x, 2) == x for x in els[:50])
    assert all(J1.frobenius(x, 1) == x for x in J1.enumerate())


def test_cantor_matches_engine():
    C = curve_from_ints(5, 1, [], [3, 0, 3, 4, 0, 1])
    inf = next(P for P in places_at_level(C, 1, 1) if P.is_infinite)
    J = jacobian(C, base_from_places(C, [(inf, 1)]), 1)
    els = J.enumerate()
    for a, b in itertools.product(els[:25], els):
        assert J.cantor_add(a, b) == J.add(a, b)


def test_group_laws():
    C, base = load(labels("genus2")[0])
    J = jacobian(C, base, 1)
    els = J.enumerate()
    for a in els:
        assert J.add(a, J.zero) == a
        assert J.add(a, J.neg(a)) == J.zero
    for a, b in itertools.product(els[:5], els[:5]):
        assert J.add(a, b) == J.add(b, a)


def test_riemann_roch_and_principal():
    C = curve_from_ints(3, 1, [], [1, 2, 0, 0, 0, 1])
    L = level(C, 1)
    J = jacobian(C, None, 1)
    pts = places_at_level(C, 1, 1)
    assert len(J.riemann_roch_space(zero_divisor(L))) == 1
    P = next(R for R in pts if not R.is_infinite)
    assert len(J.riemann_roch_space(Divisor(1, ((P, 1),)))) == 1
    for k in range(3, 7):
        D = Divisor(1, ((P, k),))
        assert len(J.riemann_roch_space(D)) == k - C.genus + 1
    ok, w = J.is_principal(zero_divisor(L))
    assert ok
    a, b = [R for R in pts if not R.is_infinite][:2]
    assert not J.is_principal(Divisor(1, ((a, 1), (b, -1))))[0]
    # div(x - x0) = the two points over x0 minus twice the point at infinity
    infp = next(R for R in pts if R.is_infinite)
    over = [R for R in places_at_level(C, 1, 1) if not R.is_infinite and R.u == P.u]
    D = Divisor.from_places(1, [(R, 1 if R.kind == "split" else 2) for R in over] + [(infp, -2)])
    assert J.is_principal(D)[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_normal_form(r, c, data):
    M = np.array(data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                                    min_size=r, max_size=r)), dtype=object)
    D, U, V = smith_normal_form(M.tolist())
    D, U, V = (np.array(X, dtype=object) for X in (D, U, V))
    assert (U.dot(M).dot(V) == D).all()
    diag = [D[i, i] for i in range(min(r, c))]
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    off = D.copy()
    for i in range(min(r, c)):
        off[i, i] = 0
    assert not off.any()
