"""End-to-end acceptance checks; every comparison is exact integer or cyclotomic equality."""

import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from menon.arith import euler_phi, euler_phi_brute, mobius, phi2, phi2_brute, sigma_s
from menon.characters import character_group, character_sum, factor_character
from menon.engine import lemma_grid, lhs_grouped, lhs_naive, rhs_closed_form, verify_theorem
from menon.ideals import (
    divides,
    divisors_of,
    factor_ideal,
    ideal_gcd,
    ideal_mul,
    ideal_pow,
    ideals_up_to_norm,
    parse_field,
    prime_ideals_up_to,
    reassemble,
)
from menon.rational import IDENTITIES, NEEDS_CHI, find_character, rational_characters, verify_identity
from menon.residues import make_ring

QUADRATIC = ["Q(sqrt -1)", "Q(sqrt -3)", "Q(sqrt -5)", "Q(sqrt 2)", "Q(sqrt 5)"]
ALL_FIELDS = ["Q"] + QUADRATIC
S_VALUES = (0, 1, 2)
RATIONAL_BOUND = 50
QUADRATIC_BOUND = 30
LEMMA_NORMS = {2, 3, 4, 5, 9, 13}
LEMMA_BOUND = 125
ARITH_BOUND = 200
CLASSIC_BOUND = 60


def sweep_moduli():
    """(field, modulus) pairs at the sweep bounds: Q up to 50, quadratic fields 2..30."""
    K = parse_field("Q")
    out = [(K, a) for a in ideals_up_to_norm(K, RATIONAL_BOUND, include_unit=True)]
    for name in QUADRATIC:
        K = parse_field(name)
        out.extend((K, a) for a in ideals_up_to_norm(K, QUADRATIC_BOUND))
    return out


def coprime_splittings(a):
    """Unordered (a1, a2) with a = a1 a2, gcd 1, both nontrivial."""
    fac = factor_ideal(a)
    K = a.field
    for size in range(1, len(fac) // 2 + 1):
        for part in combinations(range(len(fac)), size):
            if 2 * size == len(fac) and 0 not in part:
                continue  # each unordered split once
            a1 = reassemble(K, [fac[i] for i in part])
            a2 = reassemble(K, [fac[i] for i in range(len(fac)) if i not in part])
            yield a1, a2


def oracle_character(ring, chi):
    n = ring.modulus.norm
    angles = {}
    for i in ring.units:
        x = ring.element(int(i)).x % n
        # the oracle represents residues by 1..n
        angles[x or n] = Fraction(int(chi.values[i]), chi.order)
    return find_character(n, angles)


def test_criterion_1_rational_sweep(acceptance):
    K = parse_field("Q")
    t0 = time.perf_counter()
    cases = bad = 0
    for a in ideals_up_to_norm(K, RATIONAL_BOUND, include_unit=True):
        ring = make_ring(K, a)
        n = a.norm
        for chi in character_group(ring):
            ochi = oracle_character(ring, chi)
            if ochi.conductor != chi.conductor.norm:
                bad += 1
            for s in S_VALUES:
                naive = lhs_naive(ring, chi, s).to_int()
                grouped = lhs_grouped(ring, chi, s).to_int()
                rhs = rhs_closed_form(a, chi, s)
                row = verify_identity("corollary", n, s, 2, ochi)
                cases += 1
                bad += not (naive == grouped == rhs == row["lhs"] == row["rhs"])
    ok = bad == 0 and cases == 3 * sum(euler_phi(a) for a in ideals_up_to_norm(K, 50, True))
    acceptance(1, "rational sweep n <= 50", ok, f"{cases} cases, {bad} mismatches, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_criterion_2_quadratic_sweep(acceptance):
    cases = bad = 0
    t0 = time.perf_counter()
    for name in QUADRATIC:
        K = parse_field(name)
        for a in ideals_up_to_norm(K, QUADRATIC_BOUND):
            for chi in character_group(make_ring(K, a)):
                for s in S_VALUES:
                    rep = verify_theorem(K, a, chi, s)
                    cases += 1
                    bad += not (rep.match and rep.lhs_naive is not None)
    ok = bad == 0 and cases > 0
    acceptance(2, "quadratic sweep 2 <= N(a) <= 30", ok, f"{cases} cases, {bad} mismatches, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_criterion_3_lemma_suite(acceptance):
    rows = []
    primes_seen = set()
    for name in ALL_FIELDS:
        K = parse_field(name)
        for P in prime_ideals_up_to(K, LEMMA_BOUND):
            if P.norm not in LEMMA_NORMS:
                continue
            primes_seen.add((name, P.norm))
            m = 1
            while P.norm**m <= LEMMA_BOUND:
                rows.extend(lemma_grid(P, m, S_VALUES))
                m += 1
    failures = [r for r in rows if not r.ok]
    ids = {r.lemma for r in rows}
    t_cases = {min(r.t, 2) for r in rows if r.lemma == "2.7"}
    theorem_rows = sum(r.lemma == "2.7" for r in rows)
    ok = (
        not failures
        and ids == {"2.2", "2.3", "2.4", "2.5", "2.6", "2.7"}
        and t_cases == {0, 1, 2}
        and {n for _, n in primes_seen} == LEMMA_NORMS
    )
    acceptance(
        3,
        "prime-power lemmas and three-case prime-power theorem",
        ok,
        f"{len(rows)} rows ({theorem_rows} prime-power theorem rows) over {len(primes_seen)} (field, N(p)) pairs, "
        f"{len(failures)} failures",
    )
    assert ok, failures[:5]


def test_criterion_4_multiplicativity(acceptance):
    cases = bad = 0
    moduli = 0
    for K, a in sweep_moduli():
        if len(factor_ideal(a)) < 2:
            continue
        moduli += 1
        ring = make_ring(K, a)
        for a1, a2 in coprime_splittings(a):
            for chi in character_group(ring):
                chi1, chi2 = factor_character(chi, a1, a2)
                for s in S_VALUES:
                    whole = lhs_naive(ring, chi, s).to_int()
                    left = lhs_naive(chi1.ring, chi1, s).to_int()
                    right = lhs_naive(chi2.ring, chi2, s).to_int()
                    cases += 1
                    bad += whole != left * right
    ok = bad == 0 and cases > 0
    acceptance(4, "multiplicativity over coprime splittings", ok, f"{moduli} moduli, {cases} cases, {bad} mismatches")
    assert ok


def test_criterion_5_arithmetic_functions(acceptance):
    checks = bad = 0
    for name in ALL_FIELDS:
        K = parse_field(name)
        ideals = ideals_up_to_norm(K, ARITH_BOUND, include_unit=True)
        for I in ideals:
            checks += 3
            bad += sum(mobius(d) for d in divisors_of(I)) != (1 if I.is_unit else 0)
            bad += euler_phi(I) != euler_phi_brute(I)
            bad += phi2(I) != phi2_brute(I)
        for I, J in combinations(ideals, 2):
            if I.norm * J.norm > ARITH_BOUND or not ideal_gcd(I, J).is_unit:
                continue
            IJ = ideal_mul(I, J)
            checks += 4
            bad += mobius(IJ) != mobius(I) * mobius(J)
            bad += euler_phi(IJ) != euler_phi(I) * euler_phi(J)
            bad += phi2(IJ) != phi2(I) * phi2(J)
            bad += any(sigma_s(IJ, s) != sigma_s(I, s) * sigma_s(J, s) for s in S_VALUES)
    ok = bad == 0
    acceptance(5, "arithmetic functions, norm <= 200", ok, f"{checks} checks, {bad} failures")
    assert ok


def test_criterion_6_characters(acceptance):
    checks = bad = 0
    for K, a in sweep_moduli():
        ring = make_ring(K, a)
        chis = list(character_group(ring))
        phi = euler_phi(a)
        checks += 1
        bad += len(chis) != phi or len(set(chis)) != phi
        ones = ring.unit_mask.astype(np.int64)
        units = ring.units
        for chi in chis:
            checks += 2
            bad += character_sum(chi, ones).to_int() != (phi if chi.is_trivial else 0)
            # full divisor scan: chi factors through e exactly when the conductor divides e
            d = chi.conductor
            vals = chi.values[units]
            through = [e for i, e in enumerate(ring.divisors) if not vals[ring.kernel_masks[i]].any()]
            bad += not (d in through and all(divides(d, e) for e in through))
        for a1, a2 in coprime_splittings(a):
            for chi in chis:
                checks += 1
                chi1, chi2 = factor_character(chi, a1, a2)  # raises if the product law fails on a unit
                bad += chi1.modulus != a1 or chi2.modulus != a2
    ok = bad == 0
    acceptance(6, "character count, orthogonality, conductors, factorization", ok, f"{checks} checks, {bad} failures")
    assert ok


def test_criterion_7_classical_identities(acceptance):
    cases = bad = 0
    for n in range(1, CLASSIC_BOUND + 1):
        for ident in IDENTITIES:
            chis = rational_characters(n) if ident in NEEDS_CHI else [None]
            s_list = S_VALUES if ident in ("sury", "li_hu_kim", "corollary") else (0,)
            k_list = (1, 2, 3) if ident == "toth" else (2,)
            for chi in chis:
                for s in s_list:
                    for k in k_list:
                        cases += 1
                        bad += not verify_identity(ident, n, s, k, chi)["match"]
    ok = bad == 0
    acceptance(7, "classical identities n <= 60", ok, f"{cases} cases, {bad} mismatches")
    assert ok


def test_criterion_8_lift_independence(acceptance):
    rng = np.random.default_rng(20261015)
    pool = []
    for K, a in sweep_moduli():
        if a.norm > 9:
            continue
        ring = make_ring(K, a)
        for chi in character_group(ring):
            for s in S_VALUES:
                if a.norm ** (s + 2) <= 750:
                    pool.append((ring, chi, s))
    picks = rng.choice(len(pool), size=20, replace=False)
    bad = 0
    for i in picks:
        ring, chi, s = pool[int(i)]
        ref = lhs_naive(ring, chi, s)
        for _ in range(100):
            bad += lhs_naive(ring, chi, s, lift=rng).reduced() != ref.reduced()
    ok = bad == 0
    acceptance(8, "lift independence", ok, f"20 cases x 100 re-lifts from a pool of {len(pool)}, {bad} changes")
    assert ok
