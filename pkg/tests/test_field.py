import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minklab.errors import BadField, DivisionByZero, FieldMismatch
from minklab.field import (
    GaloisField,
    MobiusMap,
    NearField9,
    ProjPoint,
    closure,
    enumerate_permutation_set,
    field_arith,
    mobius_apply,
    nearfield9_mul,
    pgl2_permutations,
    prime_power,
    projective_line,
)
from minklab.permset import certify_sharply_3_transitive

ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def poly_mul_mod(a, b, mod, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus; independent of the field tables."""
    k = len(mod) - 1
    prod = [0] * (2 * k)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return tuple(prod[:k])


def test_gf7_product():
    F = GaloisField.of_order(7)
    assert field_arith(F.element(3), F.element(5), "mul") == F.element(1)


def test_gf4_t_squared():
    F = GaloisField.of_order(4)
    t = F.element((0, 1))
    assert (t * t).coeffs == (1, 1)


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_products_match_polynomial_oracle(q):
    F = GaloisField.of_order(q)
    mod = list(F.modulus) + [1]  # stored without the leading coefficient
    for a, b in itertools.product(F.elements(), repeat=2):
        assert (a * b).coeffs == poly_mul_mod(a.coeffs, b.coeffs, mod, F.p)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = GaloisField.of_order(q)
    els = F.elements()
    one, zero = F.one, F.zero
    for a in els:
        assert a * one == a and a + zero == a
        if not a.is_zero:
            assert a * a.inverse() == one
    for a, b, c in itertools.product(els, repeat=3):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


def test_division_errors():
    F, G = GaloisField.of_order(5), GaloisField.of_order(7)
    with pytest.raises(DivisionByZero):
        field_arith(F.element(1), F.zero, "div")
    with pytest.raises(FieldMismatch):
        field_arith(F.element(1), G.element(1), "add")


@pytest.mark.parametrize("q", [6, 10, 12, 1])
def test_non_prime_powers_rejected(q):
    with pytest.raises(BadField):
        prime_power(q)


@settings(max_examples=200, deadline=None)
@given(q=st.sampled_from(ORDERS), data=st.data())
def test_sub_and_div_invert_add_and_mul(q, data):
    F = GaloisField.of_order(q)
    a = F.element(data.draw(st.integers(0, q - 1)))
    b = F.element(data.draw(st.integers(1, q - 1)))
    assert field_arith(field_arith(a, b, "add"), b, "sub") == a
    assert field_arith(field_arith(a, b, "mul"), b, "div") == a


def test_projective_line_size():
    for q in ORDERS:
        assert len(projective_line(GaloisField.of_order(q))) == q + 1


def test_mobius_inversion_map_gf7():
    F = GaloisField.of_order(7)
    inv = MobiusMap(F.zero, F.one, F.one, F.zero)
    assert mobius_apply(inv, ProjPoint(F, F.element(3))) == ProjPoint(F, F.element(5))
    assert mobius_apply(inv, ProjPoint(F, F.zero)).is_infinity
    ident = MobiusMap(F.one, F.zero, F.zero, F.one)
    for x in projective_line(F):
        assert mobius_apply(ident, x) == x


@settings(max_examples=100, deadline=None)
@given(q=st.sampled_from([5, 7, 8, 9]), data=st.data())
def test_mobius_canonical_form_and_composition(q, data):
    F = GaloisField.of_order(q)
    pick = lambda: F.element(data.draw(st.integers(0, q - 1)))
    a, b, c, d = pick(), pick(), pick(), pick()
    if (a * d - b * c).is_zero:
        return
    m = MobiusMap(a, b, c, d)
    lam = F.element(data.draw(st.integers(1, q - 1)))
    assert m.normalized().key == m.scaled(lam).normalized().key
    assert m.normalized().normalized().key == m.normalized().key
    assert sorted(m.as_permutation()) == list(range(q + 1))
    a2, b2, c2, d2 = pick(), pick(), pick(), pick()
    if (a2 * d2 - b2 * c2).is_zero:
        return
    m2 = MobiusMap(a2, b2, c2, d2)
    for x in projective_line(F):
        assert mobius_apply(m.compose(m2), x) == mobius_apply(m, mobius_apply(m2, x))


def test_nearfield_axioms_exhaustive():
    N = NearField9()
    els = range(9)
    for a in els:
        assert N.mul(a, 1) == a and N.mul(1, a) == a and N.mul(a, 0) == 0
    for a, b, c in itertools.product(els, repeat=3):
        assert N.mul(N.mul(a, b), c) == N.mul(a, N.mul(b, c))
        assert N.mul(N.add(a, b), c) == N.add(N.mul(a, c), N.mul(b, c))
    # a proper near-field: not commutative, so not a field
    assert any(N.mul(a, b) != N.mul(b, a) for a in els for b in els)


def test_nearfield_element_product():
    F = GaloisField.of_order(9)
    N = NearField9()
    for a, b in itertools.product(range(9), repeat=2):
        assert nearfield9_mul(F.element(a), F.element(b)).code == N.mul(a, b)


@pytest.mark.parametrize("q,count", [(3, 24), (4, 60), (5, 120), (7, 336), (8, 504), (9, 720)])
def test_pgl2_order(q, count):
    perms = pgl2_permutations(q)
    assert perms.shape == (count, q + 1)
    assert len({tuple(p) for p in perms}) == count


def test_nearfield9_set_closed_and_sharp():
    S = enumerate_permutation_set("nearfield9")
    assert S.perms.shape == (720, 10)
    assert S.composition_closed() is None
    certify_sharply_3_transitive(S)


def test_nearfield9_not_pgl2():
    assert len({tuple(p) for p in enumerate_permutation_set("nearfield9").perms}
               & {tuple(p) for p in pgl2_permutations(9)}) < 720


def test_closure_of_generators():
    gens = np.array([[1, 2, 0], [1, 0, 2]])
    assert len(closure(gens)) == 6
