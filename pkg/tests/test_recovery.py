import pytest

from hclf.curve import validate_curve
from hclf.jacobian import default_base
from hclf.recovery import (
    CrossCurveMap, RecoveryError, abel_jacobi_image, are_isomorphic_hyperelliptic, build_bundle,
    cross_curve_check, frobenius_twist, invert_counts, recover_point_classes, shuffled_bundle,
    verify_recovery,
)
from hclf.lfun import level_data

from conftest import example_curves, labels, load


def identity_map(C, base, n_max):
    images = {}
    for n in range(1, n_max + 1):
        inv = level_data(C, base, n).S.invariant_factors
        images[n] = tuple(tuple(int(i == j) for i in range(len(inv))) for j in range(len(inv)))
    return CrossCurveMap(images)


def test_example_recovery(example):
    C = example.model
    base = default_base(C)
    D = level_data(C, base, 1)
    Q = next(R for R in example.points if R != base.rational_place)
    got = recover_point_classes(build_bundle(C, base, 1).truncated(1))
    assert got == {D.S.coords[D.J.zero], D.S.coords[D.J.frobenius_class(Q)]}
    for n in (1, 2):
        assert verify_recovery(C, base, n).passed


def test_pointless_curve_recovers_empty_set():
    C, base = load("g2p3_0")
    assert recover_point_classes(build_bundle(C, base, 1)) == set() == abel_jacobi_image(C, base, 1)


def test_inversion_identity():
    C, base = load(labels("genus2")[1])
    D = level_data(C, base, 2)
    bundle = build_bundle(C, base, 2)
    for d in range(3):
        counts = invert_counts(bundle, d)
        assert [counts[x] for x in D.table.elements] == list(D.census(d))


def test_shuffled_bundle_fails():
    C, base = load(labels("genus2")[1])
    bundle = build_bundle(C, base, 1)
    with pytest.raises(RecoveryError):
        invert_counts(shuffled_bundle(bundle), 1)
    assert not verify_recovery(C, base, 1, shuffled_bundle(bundle.truncated(1))).passed


def test_identity_cross_check():
    C, base = load(labels("genus2")[0])
    rep = cross_curve_check(C, C, identity_map(C, base, 2), 2, base, base)
    assert rep.equal and all(rep.points_match.values())


def test_bad_map_rejected():
    C, base = load(labels("genus2")[0])
    inv = level_data(C, base, 1).S.invariant_factors
    bad = CrossCurveMap({1: tuple((0,) * len(inv) for _ in inv)})
    with pytest.raises(RecoveryError):
        cross_curve_check(C, C, bad, 1, base, base)


def test_twist_basics():
    C, _ = load(labels("genus2")[0])
    assert frobenius_twist(C, 1) == C
    T, _ = load(labels("twist")[0])
    assert frobenius_twist(T, 1) != T
    assert frobenius_twist(frobenius_twist(T, 1), 1) == T


def test_isomorphism():
    found, fams = example_curves()
    A = fams[0][0]
    assert are_isomorphic_hyperelliptic(A, A)
    # x -> x + 1
    from hclf.poly import ring
    R = ring(A.base)
    f = [0]
    for c in reversed(A.f):
        f = R.add(R.mul(f, [1, 1]), [c])
    B = validate_curve(A.base, [], f, "shifted")
    assert are_isomorphic_hyperelliptic(A, B)
    assert not are_isomorphic_hyperelliptic(fams[0][0], fams[1][0])
