import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkelliptic import fields
from hkelliptic.errors import CtxMismatch, DegreeTooLarge, DivisionByZero, InvalidInput, NotPrime
from hkelliptic.fields import FieldCtx, FieldElement, field_from_json, make_extension

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2)]


def test_prime_field_product():
    F5 = make_extension(5)
    assert fields.mul(F5.element(2), F5.element(3)) == F5.element(1)


def test_characteristic_two_sum():
    F2 = make_extension(2)
    assert fields.add(F2.element(1), F2.element(1)) == F2.element(0)


def test_f8_product_reduces_by_modulus():
    F8 = make_extension(2, 3)
    t = F8.gen()
    assert t * t**2 == F8.element([1, 1, 0])


@pytest.mark.parametrize("p,k,modulus", [(2, 3, (1, 1, 0, 1)), (2, 2, (1, 1, 1)), (5, 1, (0, 1))])
def test_modulus_choice(p, k, modulus):
    assert make_extension(p, k).modulus == modulus


def test_modulus_is_smallest_irreducible():
    # brute force over all monic cubics over F_2 in encoding order
    for n in range(8):
        cand = tuple((n >> i) & 1 for i in range(3)) + (1,)
        has_root = any(sum(c * x**i for i, c in enumerate(cand)) % 2 == 0 for x in range(2))
        if not has_root:
            assert make_extension(2, 3).modulus == cand
            break


def test_invalid_contexts():
    with pytest.raises(NotPrime):
        make_extension(6)
    with pytest.raises(DegreeTooLarge):
        make_extension(2, 40)
    with pytest.raises(InvalidInput):
        FieldCtx(2, 2, (0, 0, 1))  # t^2 is reducible


def test_mixed_contexts_rejected():
    a = make_extension(2, 2).element(1)
    b = make_extension(2, 3).element(1)
    with pytest.raises(CtxMismatch):
        a + b


def test_zero_has_no_inverse():
    with pytest.raises(DivisionByZero):
        make_extension(7).element(0).inv()


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_by_enumeration(p, k):
    F = make_extension(p, k)
    els = F.elements()
    one, zero = F.element(1), F.element(0)
    for a in els:
        assert a + (-a) == zero
        if a:
            assert a * a.inv() == one
            assert a ** (F.order - 1) == one
    # the multiplicative group is cyclic of order q-1
    orders = set()
    for a in els[1:]:
        n, x = 1, a
        while x != one:
            x, n = x * a, n + 1
        orders.add(n)
    assert max(orders) == F.order - 1


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_frobenius_is_additive(p, k):
    F = make_extension(p, k)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert (a + b) ** p == a**p + b**p


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_vectorized_ops_match_scalar(p, k):
    F = make_extension(p, k)
    vals = np.arange(F.order, dtype=np.int64)
    a, b = np.meshgrid(vals, vals)
    prod = F.vmul(a, b)
    total = F.vadd(a, b)
    for x, y in itertools.product(range(F.order), repeat=2):
        assert prod[y, x] == F.mul(x, y)
        assert total[y, x] == F.add(x, y)
    assert list(F.vpow(vals, 3)) == [F.pow(int(v), 3) for v in vals]


def _poly_mulmod(a, b, F):
    # schoolbook product of coefficient lists reduced by the modulus
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % F.p
    mod = F.modulus
    for d in range(len(prod) - 1, F.k - 1, -1):
        c = prod[d]
        if c:
            for i, m in enumerate(mod):
                prod[d - F.k + i] = (prod[d - F.k + i] - c * m) % F.p
    return prod[:F.k]


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 2)])
def test_table_multiplication_matches_polynomial_reduction(p, k):
    F = make_extension(p, k)
    for x, y in itertools.product(range(F.order), repeat=2):
        expect = _poly_mulmod(F.decode(x), F.decode(y), F)
        assert F.decode(F.mul(x, y)) == expect


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_matmul_matches_naive(pk, data):
    F = make_extension(*pk)
    n, m, r = (data.draw(st.integers(1, 5)) for _ in range(3))
    ints = st.integers(0, F.order - 1)
    a = np.array(data.draw(st.lists(st.lists(ints, min_size=m, max_size=m), min_size=n, max_size=n)))
    b = np.array(data.draw(st.lists(st.lists(ints, min_size=r, max_size=r), min_size=m, max_size=m)))
    got = F.matmul(a, b)
    for i in range(n):
        for j in range(r):
            acc = 0
            for t in range(m):
                acc = F.add(acc, F.mul(int(a[i, t]), int(b[t, j])))
            assert got[i, j] == acc


def test_json_round_trip():
    F = make_extension(3, 2)
    assert field_from_json(F.to_json()) == F
    assert FieldElement(F, 5) == F.element(F.decode(5))
