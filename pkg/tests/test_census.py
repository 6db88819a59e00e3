import pytest

from hclf.census import (
    CensusError, class_count_closed_form, class_counts, census_table, effective_divisor_count,
    effective_divisors,
)
from hclf.jacobian import default_base, jacobian

from conftest import labels, load


def test_example_slices(example):
    C = example.model
    base = default_base(C)
    J = jacobian(C, base, 1)
    P = base.rational_place
    Q = next(R for R in example.points if R != P)
    g = J.frobenius_class(Q)
    multiples = [J.mul(k, g) for k in range(5)]
    assert len(effective_divisors(C, 1, 1)) == 2
    assert len(effective_divisors(C, 1, 2)) == 8
    for d, want in [(0, [1, 0, 0, 0, 0]), (1, [1, 1, 0, 0, 0]), (2, [1, 4, 1, 1, 1])]:
        counts = class_counts(C, base, 1, d)
        assert [counts[x] for x in multiples] == want


@pytest.mark.parametrize("label", labels("genus2")[:4] + labels("elliptic")[:2])
def test_closed_form_against_enumeration(label):
    C, base = load(label)
    g = C.genus
    for d in range(2 * g - 1, 2 * g + 1):
        counts = class_counts(C, base, 1, d)
        assert set(counts.values()) == {class_count_closed_form(C, d, 1)}
    if g == 2:
        assert class_count_closed_form(C, 3, 1) == (C.q ** 2 - 1) // (C.q - 1)
    with pytest.raises(CensusError):
        class_count_closed_form(C, 2 * g - 2, 1)


@pytest.mark.parametrize("label", labels("genus2")[::3])
def test_sums_and_degree_one(label):
    C, base = load(label)
    for n in (1, 2):
        T = census_table(C, base, n)
        for d in range(2 * C.genus + 1):
            sl = T.slice(d)
            assert sum(sl.values()) == effective_divisor_count(C, n, d)
            if d == 1:
                assert set(sl.values()) <= {0, 1}


def test_workers_agree():
    C, base = load(labels("genus2")[0])
    assert class_counts(C, base, 2, 2, workers=1) == class_counts(C, base, 2, 2, workers=2)


@pytest.mark.parametrize("label", ["g2i3_0", "g2i3h_0", "g2i5_0"])
def test_reduced_lookup_matches_riemann_roch(label, monkeypatch):
    C, base = load(label)
    for n in (1, 2):
        J = jacobian(C, base, n)
        assert J.has_mumford_table
        fast = [class_counts(C, base, n, d) for d in range(3)]
        with monkeypatch.context() as m:
            m.setattr(type(J), "has_mumford_table", property(lambda self: False))
            slow = [class_counts(C, base, n, d) for d in range(3)]
        assert fast == slow
