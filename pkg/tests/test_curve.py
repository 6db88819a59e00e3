import pytest

from hclf.curve import (
    CurveError, count_points, curve_from_ints, jacobian_order, level, places_at_level,
    places_of_degree, rational_points, splitting_degrees, zeta_numerator, zeta_numerator_at_level,
)
from hclf.poly import ring

from conftest import corpus_specs, load


def brute_count(model, n):
    """Solutions of y^2 + h y = f over F_{q^n} in model coordinates, plus points at infinity."""
    L = level(model, n)
    K, R = L.field, L.R
    f, h = [L.emb[c] for c in model.f], [L.emb[c] for c in model.h]
    count = 0
    for x in range(K.order):
        fx, hx = R.eval(f, x), R.eval(h, x) if h else 0
        count += sum(1 for y in range(K.order) if K.add(K.mul(y, y), K.mul(hx, y)) == fx)
    return count + sum(1 for P in L.inf if P.degree == 1)


def test_validation():
    C = curve_from_ints(3, 1, [], [1, 2, 0, 0, 0, 1])
    assert C.genus == 2 and C.model_kind == "imaginary"
    # x^5 + x + 1 has a double root at x = 1 over F_3
    with pytest.raises(CurveError):
        curve_from_ints(3, 1, [], [1, 1, 0, 0, 0, 1])
    with pytest.raises(CurveError):
        curve_from_ints(3, 1, [], [0, 0, 0, 0, 0, 0, 1])
    assert curve_from_ints(5, 1, [], [0, 1, 0, 1]).genus == 1
    with pytest.raises(CurveError):
        curve_from_ints(2, 1, [], [1, 1, 0, 0, 0, 1])


@pytest.mark.parametrize("label", [s["label"] for s in corpus_specs()][::3])
def test_point_counts_brute_force(label):
    C, _ = load(label)
    for n in (1, 2):
        assert count_points(C, n) == brute_count(C, n) == len(rational_points(C, n))


@pytest.mark.parametrize("label", [s["label"] for s in corpus_specs()])
def test_zeta_consistency(label):
    C, _ = load(label)
    P = zeta_numerator(C)
    g, q = C.genus, C.q
    assert len(P) == 2 * g + 1 and P[0] == 1
    # functional equation
    assert all(P[2 * g - i] == q ** (g - i) * P[i] for i in range(g + 1))
    assert sum(P) == jacobian_order(C, 1)
    P2 = zeta_numerator_at_level(C, 2)
    assert sum(P2) == jacobian_order(C, 2)
    # orbit counting: sum_{e | d} e * #places(e) = #C(F_{q^d})
    for d in (1, 2):
        tot = sum(e * len(places_at_level(C, 1, e)) for e in range(1, d + 1) if d % e == 0)
        assert tot == count_points(C, d)
    if g == 1:
        assert P == [1, count_points(C, 1) - q - 1, q]


def test_imaginary_single_infinity():
    C = curve_from_ints(5, 1, [], [1, 2, 0, 0, 0, 1])
    assert [P.degree for P in level(C, 1).inf] == [1]


def test_splitting_degrees():
    assert splitting_degrees(2, 2) == [1, 1]
    assert splitting_degrees(3, 2) == [3]
    assert splitting_degrees(6, 4) == [3, 3]


def test_example_curve_counts(example):
    C = example.model
    assert count_points(C, 1) == 2 and count_points(C, 2) == 12
    assert len(places_of_degree(C, 1)) == 2 and len(places_of_degree(C, 2)) == 5
    assert zeta_numerator(C) == [1, -2, 3, -6, 9]
    assert jacobian_order(C, 1) == 5
