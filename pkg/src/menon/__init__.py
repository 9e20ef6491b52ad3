"""Ideal arithmetic, residue-ring characters, and exact verification of the
character-twisted Menon-Sury identity over Q and quadratic fields."""

from .arith import compute_a0, euler_phi, mobius, phi2, sigma_s
from .characters import (
    CyclotomicSum,
    CycValue,
    DirichletCharacter,
    character_group,
    chi_eval,
    conductor,
    cyclotomic_polynomial,
    factor_character,
)
from .engine import (
    count_tuples_gcd,
    lemma_sum,
    lhs_grouped,
    lhs_naive,
    rhs_closed_form,
    verify_multiplicativity,
    verify_prime_power_cases,
    verify_theorem,
)
from .ideals import (
    Element,
    FieldDesc,
    Ideal,
    IdealError,
    divisors_of,
    factor_ideal,
    ideal_div_exact,
    ideal_from_generators,
    ideal_gcd,
    ideal_mul,
    ideal_norm,
    make_field,
    parse_field,
    parse_ideal,
    split_prime,
)
from .residues import crt_split, coset_one_plus_pk, make_ring

__all__ = [name for name in dir() if not name.startswith("_")]
