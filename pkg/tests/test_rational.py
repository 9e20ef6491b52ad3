import cmath
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from menon.rational import (
    IDENTITIES,
    find_character,
    identity_lhs,
    identity_rhs,
    mobius,
    phi2_product,
    phi_k,
    rational_characters,
    sigma,
    totient,
    verify_identity,
)


def test_basic_functions():
    assert [totient(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert [mobius(n) for n in (1, 2, 4, 6, 30)] == [1, -1, 0, 1, -1]
    assert sigma(12, 0) == 6 and sigma(12, 1) == 28
    assert phi2_product(5) == 12 and phi2_product(2) == 0
    assert phi_k(5, 2) == 12 and phi_k(7, 1) == 6
    with pytest.raises(ValueError):
        phi_k(5, 0)


@pytest.mark.parametrize("n", range(1, 40))
def test_phi2_product_is_phi_2(n):
    assert phi2_product(n) == phi_k(n, 2)


def test_character_tables():
    chis = rational_characters(8)
    assert len(chis) == 4 and all(c.order <= 2 for c in chis)
    assert sorted(c.conductor for c in chis) == [1, 4, 8, 8]
    chis5 = rational_characters(5)
    assert sorted(c.order for c in chis5) == [1, 2, 4, 4]
    # chi(2) = i fixes chi(4) = -1, i.e. exponent 2 of zeta_4
    chi = find_character(5, {2: Fraction(1, 4), 1: Fraction(0), 3: Fraction(3, 4), 4: Fraction(1, 2)})
    assert chi(4) == 2 and chi.order == 4 and chi(10) is None


@pytest.mark.parametrize("n", [12, 16, 20, 27, 45])
def test_character_orthogonality(n):
    chis = rational_characters(n)
    assert len(chis) == totient(n)
    for chi in chis:
        total = sum(cmath.exp(2j * cmath.pi * k / chi.order) for _, k in chi.table)
        assert abs(total - (totient(n) if chi.order == 1 else 0)) < 1e-9


def test_frozen_identity_values():
    assert identity_lhs("menon", 4) == 6 == identity_rhs("menon", 4)
    assert identity_lhs("sury", 4, s=1) == 14 == identity_rhs("sury", 4, s=1)
    assert identity_lhs("sita_ramaiah", 5) == 24
    assert identity_rhs("toth", 5, k=2) == 24
    quartic = next(c for c in rational_characters(5) if c.order == 4)
    assert identity_lhs("ji_wang", 5, chi=quartic) == -4 == identity_rhs("ji_wang", 5, chi=quartic)


def test_identity_argument_checks():
    with pytest.raises(ValueError):
        identity_lhs("nope", 5)
    with pytest.raises(ValueError):
        identity_lhs("cao_zhao", 5)
    with pytest.raises(ValueError):
        identity_lhs("cao_zhao", 6, chi=rational_characters(5)[0])


def test_li_hu_kim_small():
    for chi in rational_characters(5):
        for s in range(3):
            assert verify_identity("li_hu_kim", 5, s=s, chi=chi)["match"]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30), st.sampled_from(IDENTITIES), st.integers(0, 2), st.integers(1, 3), st.data())
def test_identities_random(n, ident, s, k, data):
    chi = data.draw(st.sampled_from(rational_characters(n)))
    row = verify_identity(ident, n, s, k, chi)
    assert row["match"], row


def test_toth_up_to_30():
    for n in range(1, 31):
        for k in (1, 2, 3):
            assert verify_identity("toth", n, k=k)["match"]


def test_conductor_divides_modulus():
    for n in range(1, 61):
        for chi in rational_characters(n):
            assert n % chi.conductor == 0
            assert all(gcd(a, n) == 1 for a, _ in chi.table)
