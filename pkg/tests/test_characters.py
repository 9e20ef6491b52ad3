from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from menon.characters import (
    CyclotomicSum,
    CycValue,
    DirichletCharacter,
    NonIntegralSum,
    character_group,
    character_sum,
    chi_eval,
    cyclotomic_polynomial,
    factor_character,
    is_primitive,
    trivial_character,
)
from menon.ideals import Element, divides, ideals_up_to_norm, parse_field, parse_ideal, principal
from menon.residues import make_ring


def test_cyclotomic_polynomials_frozen():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)


@pytest.mark.parametrize("m", range(1, 40))
def test_cyclotomic_against_sympy(m):
    import sympy

    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(m)) == [int(c) for c in ref]


def test_cyclotomic_sum_reduction():
    acc = CyclotomicSum(6)
    for k in range(6):
        acc.add(1, CycValue(k, 6))
    assert acc.to_int() == 0
    acc = CyclotomicSum(4)
    acc.add(3, CycValue(1, 4))
    acc.add(3, CycValue(3, 4))
    acc.add(2, CycValue(0, 4))
    acc.add(7, CycValue(None, 4))
    assert acc.to_int() == 2
    acc = CyclotomicSum(4)
    acc.add(1, CycValue(1, 4))
    assert acc.is_integer() is None
    with pytest.raises(NonIntegralSum):
        acc.to_int()


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 24), st.lists(st.integers(-9, 9), min_size=1, max_size=24))
def test_reduction_preserves_complex_value(m, raw):
    coeffs = (raw * m)[:m]
    acc = CyclotomicSum(m, list(coeffs))
    red = acc.reduced()
    z = np.exp(2j * np.pi / m)
    assert abs(sum(c * z**k for k, c in enumerate(red)) - acc.approx()) < 1e-8
    assert len(red) <= max(1, len(cyclotomic_polynomial(m)) - 1)


def test_cycvalue_multiplication():
    assert CycValue(1, 4) * CycValue(1, 6) == CycValue(5, 12)
    assert (CycValue(None, 2) * CycValue(1, 3)).is_zero


@pytest.mark.parametrize(
    "field, modulus, conductors",
    [
        ("Q", "8", ["1", "4", "8", "8"]),
        ("Q", "15", ["1", "15", "15", "15", "3", "5", "5", "5"]),
        ("Q", "16", ["1", "16", "16", "16", "16", "4", "8", "8"]),
        ("Q(sqrt -1)", "4", ["hnf:1,0,1", "hnf:2,0,2"] + ["hnf:4,0,4"] * 4 + ["hnf:4,2,2"] * 2),
        ("Q(sqrt -3)", "2", ["hnf:1,0,1", "hnf:2,0,2", "hnf:2,0,2"]),
        ("Q(sqrt 5)", "4", ["hnf:1,0,1"] + ["hnf:2,0,2"] * 2 + ["hnf:4,0,4"] * 9),
    ],
)
def test_conductors_frozen(field, modulus, conductors):
    K = parse_field(field)
    ring = make_ring(K, parse_ideal(K, modulus))
    assert sorted(str(c.conductor) for c in character_group(ring)) == conductors


def test_character_values_gaussian(Qi):
    ring = make_ring(Qi, principal(Qi, Element(2, 1)))
    chis = list(character_group(ring))
    assert [c.order for c in chis] == [1, 4, 2, 4]
    chi = chis[1]
    assert chi_eval(chi, Element(0, 0)).is_zero
    assert chi(Element(1, 0)) == CycValue(0, 4)
    # chi is well-defined on residue classes
    assert chi(Element(3, 0)) == chi(Element(3 + 10, 5))
    assert chi.label == "1" and trivial_character(ring).is_trivial


def test_character_requires_right_arity(QQ):
    ring = make_ring(QQ, principal(QQ, 15))
    with pytest.raises(ValueError):
        DirichletCharacter(ring, [1])


def test_rational_characters_agree_with_explicit_formula(QQ):
    # mod 5 with generator 2: chi_k(a) = exp(2 pi i k log_2(a) / 4)
    ring = make_ring(QQ, principal(QQ, 5))
    logs = {1: 0, 2: 1, 4: 2, 3: 3}
    for chi in character_group(ring):
        (k,) = chi.exponents
        for a, lg in logs.items():
            v = chi(Element(a))
            assert Fraction(v.k, v.m) == Fraction(k * lg % 4, 4)


def _orthogonality(ring):
    ones = ring.unit_mask.astype(np.int64)
    phi = len(ring.units)
    for chi in character_group(ring):
        total = character_sum(chi, ones).to_int()
        assert total == (phi if chi.is_trivial else 0)


def test_orthogonality_and_count():
    for field in ("Q", "Q(sqrt -1)", "Q(sqrt -5)", "Q(sqrt 2)"):
        K = parse_field(field)
        for a in ideals_up_to_norm(K, 30):
            ring = make_ring(K, a)
            assert len(list(character_group(ring))) == len(ring.units)
            _orthogonality(ring)


def test_conductor_minimal_and_unique():
    K = parse_field("Q(sqrt -1)")
    for a in ideals_up_to_norm(K, 40):
        ring = make_ring(K, a)
        for chi in character_group(ring):
            d = chi.conductor
            assert divides(d, a)
            vals = chi.values[ring.units]
            for i, e in enumerate(ring.divisors):
                trivial_on_kernel = not vals[ring.kernel_masks[i]].any()
                assert trivial_on_kernel == divides(d, e)
            assert is_primitive(chi) == (d == a)


def test_factor_character_mod_15(QQ):
    ring = make_ring(QQ, principal(QQ, 15))
    seen = set()
    for chi in character_group(ring):
        c3, c5 = factor_character(chi, principal(QQ, 3), principal(QQ, 5))
        assert c3.modulus.norm == 3 and c5.modulus.norm == 5
        seen.add((c3.exponents, c5.exponents))
        for a in range(15):
            if gcd(a, 15) == 1:
                v = chi(Element(a))
                w = c3(Element(a)) * c5(Element(a))
                assert Fraction(v.k, v.m) == Fraction(w.k, w.m)
    assert len(seen) == 8
