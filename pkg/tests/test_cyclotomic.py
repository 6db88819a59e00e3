import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hclf.characters import CharacterError, CharacterTable, all_characters, evaluate
from hclf.cyclotomic import CyclotomicInteger as Z, cyclo_arith, cyclotomic_polynomial, totient


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    for N in range(1, 31):
        assert len(cyclotomic_polynomial(N)) - 1 == totient(N)


def test_relations():
    z = Z.zeta(5)
    s = cyclo_arith("add", z, z ** 2, z ** 3, z ** 4)
    assert s.equals(Z.from_int(5, -1))
    for N in (1, 2, 6, 12, 15):
        assert (Z.zeta(N) * Z.zeta(N, N - 1)).equals(Z.one())
    assert cyclo_arith("scalar_mul", 3, z).equals(z + z + z)
    assert Z.zeta(6, 2).equals(Z.zeta(3))
    assert Z.from_json(z.to_json()) == z


def companion(N, c):
    phi = cyclotomic_polynomial(N)
    d = len(phi) - 1
    M = np.zeros((d, d), dtype=object)
    for i in range(1, d):
        M[i, i - 1] = 1
    M[:, d - 1] = [-x for x in phi[:d]]
    out = np.zeros((d, d), dtype=object)
    P = np.identity(d, dtype=object)
    for x in c:
        out = out + x * P
        P = P.dot(M)
    return out


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([5, 7, 9, 12]), st.data())
def test_products_match_companion_matrices(N, data):
    d = totient(N)
    vec = st.lists(st.integers(-9, 9), min_size=d, max_size=d)
    a, b = Z(N, tuple(data.draw(vec))), Z(N, tuple(data.draw(vec)))
    prod = a * b
    lhs = companion(N, prod.coeffs)
    rhs = companion(N, a.coeffs).dot(companion(N, b.coeffs))
    assert (lhs == rhs).all()
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-6 * (1 + abs(prod.to_complex()))


def test_characters_small():
    assert len(all_characters([])) == 1
    chars = all_characters([5])
    assert len(chars) == 5
    assert evaluate(chars[1], (1,)).equals(Z.zeta(5))
    assert all(evaluate(chars[0], (x,)).equals(Z.one()) for x in range(5))


def test_orthogonality_and_pairing():
    for inv in ([5], [2, 4], [2, 6], [3, 3, 9]):
        T = CharacterTable(inv)
        for i, ch in enumerate(T.characters):
            total = Z.zero(T.N)
            for x in T.elements:
                total = total + evaluate(ch, x)
            want = T.size if ch.is_trivial else 0
            assert total.equals(Z.from_int(T.N, want))
        # pairing is nondegenerate: distinct characters give distinct rows
        assert len({tuple(r) for r in T.powers}) == T.size


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5,), (2, 4), (3, 6), (2, 2, 4)]), st.data())
def test_forward_inverse_round_trip(inv, data):
    T = CharacterTable(inv)
    v = np.array(data.draw(st.lists(st.integers(0, 50), min_size=T.size, max_size=T.size)))
    C = T.forward(v)
    assert (T.inverse(C) == v).all()
    # forward agrees with direct evaluation
    i = data.draw(st.integers(0, T.size - 1))
    direct = Z.zero(T.N)
    for x, c in zip(T.elements, v):
        direct = direct + evaluate(T.characters[i], x) * int(c)
    assert direct.equals(T.to_cyclotomic(C[i]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5,), (2, 4), (3, 6), (12,)]), st.data())
def test_modular_inverse_agrees_with_direct_sum(inv, data):
    T = CharacterTable(inv)
    v = np.array(data.draw(st.lists(st.integers(-10**6, 10**6), min_size=T.size, max_size=T.size)))
    C = T.forward(v)
    assert (T._inverse_modular(C) == v).all()
    assert (T._inverse_exact(C) == v).all()
    # a perturbed row has no integer preimage; both paths refuse it
    i = data.draw(st.integers(1, T.size - 1))
    j = data.draw(st.integers(0, T.phi - 1))
    C[i, j] += 1
    assert T._inverse_modular(C) is None
    with pytest.raises(CharacterError):
        T.inverse(C)
