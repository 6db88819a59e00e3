import pytest
from hypothesis import given, settings, strategies as st

from hclf.field import (
    FieldError, element, embed, embedding_table, enumerate_elements, field_arith,
    frobenius_power, is_irreducible_fp, least_irreducible, make_field,
)

FIELDS = [(3, 1), (3, 2), (5, 1), (5, 2), (3, 4), (7, 2)]


def test_moduli():
    assert make_field(3, 1).modulus == (0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    with pytest.raises(FieldError):
        make_field(2, 0)
    with pytest.raises(FieldError):
        make_field(4, 1)


def test_least_irreducible_is_least():
    for p, k in [(3, 2), (3, 3), (5, 2)]:
        mod = least_irreducible(p, k)
        assert is_irreducible_fp(list(mod), p)
        # every smaller monic polynomial of degree k is reducible
        for code in range(p ** k):
            tail = [(code // p ** i) % p for i in range(k)]
            if tuple(tail) + (1,) == mod:
                break
            assert not is_irreducible_fp(tail + [1], p)


def test_inverses_exhaustive_f9():
    F = make_field(3, 2)
    one = element(F, [1])
    assert field_arith("inv", one).coeffs == [1, 0]
    for a in range(1, 9):
        x = element(F, F.coords(a))
        assert (x * x.inverse()).coeffs == [1, 0]


def test_frobenius_f9():
    F = make_field(3, 2)
    i = element(F, [0, 1])
    assert (i * i).coeffs == [2, 0]
    assert frobenius_power(i, 3, 1).coeffs == (-i).coeffs
    for a in range(9):
        e = element(F, F.coords(a))
        assert frobenius_power(e, 3, 2).coeffs == e.coeffs
        if a < 3:
            assert frobenius_power(e, 3, 1).coeffs == e.coeffs


def test_embeddings():
    F3, F9, F81 = make_field(3, 1), make_field(3, 2), make_field(3, 4)
    e = embedding_table(F9, F81)
    assert e[0] == 0 and e[1] == 1
    for a in range(9):
        for b in range(9):
            assert e[F9.mul(a, b)] == F81.mul(e[a], e[b])
            assert e[F9.add(a, b)] == F81.add(e[a], e[b])
    direct = embedding_table(F3, F81)
    tower = embedding_table(F3, F9)
    assert all(direct[a] == e[tower[a]] for a in range(3))
    x = element(F9, [2, 1])
    assert embed(x, F81).field is F81
    with pytest.raises(FieldError):
        embedding_table(F9, make_field(3, 3))


def test_enumeration_order():
    assert [x.coeffs for x in enumerate_elements(make_field(3, 1))] == [[0], [1], [2]]
    els = enumerate_elements(make_field(3, 2))
    assert len({tuple(x.coeffs) for x in els}) == 9
    assert els[0].is_zero() and els[1].coeffs == [1, 0]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pk, data):
    F = make_field(*pk)
    el = st.integers(0, F.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.pow(a, F.order) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
    s = F.sqrt(F.mul(a, a))
    assert s is not None and F.mul(s, s) == F.mul(a, a)
