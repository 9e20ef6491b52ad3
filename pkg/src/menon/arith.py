"""Multiplicative functions on integral ideals, with brute-force counterparts."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .ideals import (
    Ideal,
    IdealError,
    divides,
    divisors_of,
    factor_ideal,
    ideal_div_exact,
    ideal_gcd,
    ideal_mul,
    ideal_pow,
    unit_ideal,
)
from .residues import ResidueRing, make_ring


def mobius(I: Ideal) -> int:
    fac = factor_ideal(I)
    if any(e > 1 for _, e in fac):
        return 0
    return (-1) ** len(fac)


def euler_phi(I: Ideal) -> int:
    out = I.norm
    for P, _ in factor_ideal(I):
        out = out // P.norm * (P.norm - 1)
    return out


def phi2(I: Ideal) -> int:
    """Unit pairs with unit sum, via phi(I)^2 * sum_{d | I} mu(d) / phi(d)."""
    total = Fraction(0)
    for d in divisors_of(I):
        mu = mobius(d)
        if mu:
            total += Fraction(mu, euler_phi(d))
    value = euler_phi(I) ** 2 * total
    if value.denominator != 1:
        raise AssertionError(f"phi2({I}) = {value} is not an integer")
    return int(value)


def sigma_s(I: Ideal, s: int) -> int:
    if s < 0:
        raise ValueError("s must be nonnegative")
    return sum(d.norm**s for d in divisors_of(I))


def compute_a0(a: Ideal, d: Ideal) -> Ideal:
    """The part of a supported on the primes of d, at full multiplicity."""
    if not divides(d, a):
        raise IdealError(f"{d} does not divide {a}")
    d_primes = {P for P, _ in factor_ideal(d)}
    a0 = unit_ideal(a.field)
    for P, e in factor_ideal(a):
        if P in d_primes:
            a0 = ideal_mul(a0, ideal_pow(P, e))
    rest = ideal_div_exact(a, a0)
    if not ideal_gcd(a0, rest).is_unit:
        raise AssertionError(f"a0 = {a0} is not coprime to a/a0 = {rest}")
    if {P for P, _ in factor_ideal(a0)} != d_primes:
        raise AssertionError(f"a0 = {a0} and d = {d} have different radicals")
    return a0


# -- brute-force counterparts -------------------------------------------------------


def unit_count(ring: ResidueRing) -> int:
    return int(ring.unit_mask.sum())


def unit_pair_count(ring: ResidueRing) -> int:
    """#{(a, b) : a, b, a + b units}, by enumeration."""
    units = ring.units
    A = np.repeat(units, len(units))
    B = np.tile(units, len(units))
    return int(ring.unit_mask[ring.add(A, B)].sum())


def euler_phi_brute(I: Ideal) -> int:
    return unit_count(make_ring(I.field, I))


def phi2_brute(I: Ideal) -> int:
    return unit_pair_count(make_ring(I.field, I))
