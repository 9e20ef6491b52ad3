"""Dirichlet characters modulo an ideal and exact sums of roots of unity."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .ideals import Element, Ideal, divides
from .residues import ResidueRing, crt_split


class NonIntegralSum(ArithmeticError):
    """A character sum that should be a rational integer did not reduce to one."""


# -- cyclotomic arithmetic ---------------------------------------------------------


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial; coefficients low degree first."""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(num) <= dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        q = num[i]
        if q:
            quot[i - dd] = q
            for j in range(dd + 1):
                num[i - dd + j] -= q * den[j]
    return quot, num[:dd] or [0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Phi_m as a coefficient tuple, low degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            if any(rem):
                raise AssertionError(f"Phi_{d} does not divide x^{m} - 1 exactly")
    return tuple(num)


class CycValue(NamedTuple):
    """Zero (k is None) or the root of unity exp(2 pi i k / m)."""

    k: int | None
    m: int

    @property
    def is_zero(self) -> bool:
        return self.k is None

    def __mul__(self, other):  # type: ignore[override]
        if self.k is None or other.k is None:
            return CycValue(None, lcm(self.m, other.m))
        m = lcm(self.m, other.m)
        return CycValue((self.k * (m // self.m) + other.k * (m // other.m)) % m, m)

    def complex(self) -> complex:
        return 0j if self.k is None else cmath.exp(2j * cmath.pi * self.k / self.m)


@dataclass
class CyclotomicSum:
    """Integer combination sum_k coeffs[k] * zeta_m**k."""

    m: int
    coeffs: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.coeffs:
            self.coeffs = [0] * self.m
        if len(self.coeffs) != self.m:
            raise ValueError("coefficient vector must have length m")

    def add(self, weight: int, value: CycValue) -> None:
        if value.k is None:
            return
        if self.m % value.m:
            raise ValueError(f"root of order {value.m} is not a power of zeta_{self.m}")
        self.coeffs[value.k * (self.m // value.m) % self.m] += weight

    def merge(self, other: CyclotomicSum) -> CyclotomicSum:
        if other.m != self.m:
            raise ValueError("cannot merge sums of different root orders")
        return CyclotomicSum(self.m, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    def reduced(self) -> tuple[int, ...]:
        _, rem = _poly_divmod(self.coeffs, list(cyclotomic_polynomial(self.m)))
        while len(rem) > 1 and rem[-1] == 0:
            rem.pop()
        return tuple(rem)

    def is_integer(self) -> int | None:
        """The rational integer this sum equals, or None."""
        red = self.reduced()
        return red[0] if len(red) == 1 else None

    def to_int(self) -> int:
        v = self.is_integer()
        if v is None:
            raise NonIntegralSum(f"sum reduces to non-constant {self.reduced()} mod Phi_{self.m}")
        return v

    def approx(self) -> complex:
        return sum(c * cmath.exp(2j * cmath.pi * k / self.m) for k, c in enumerate(self.coeffs) if c)


def cyc_accumulate_and_reduce(terms: Iterable[tuple[int, CycValue]], m: int) -> CyclotomicSum:
    acc = CyclotomicSum(m)
    for w, v in terms:
        acc.add(int(w), v)
    return acc


# -- characters ----------------------------------------------------------------------


class DirichletCharacter:
    """Character of (O_K/a)^* given by exponents on the unit-group generators."""

    def __init__(self, ring: ResidueRing, exponents: Iterable[int]):
        ug = ring.unit_group
        exps = tuple(int(e) % d for e, d in zip(exponents, ug.orders))
        if len(exps) != len(ug.orders):
            raise ValueError(f"need {len(ug.orders)} exponents, got {len(exps)}")
        self.ring = ring
        self.exponents = exps
        self.order = lcm(1, *(d // gcd(d, e) for d, e in zip(ug.orders, exps)))

    @property
    def modulus(self) -> Ideal:
        return self.ring.modulus

    @property
    def label(self) -> str:
        return ",".join(map(str, self.exponents)) if self.exponents else "-"

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.modulus}, ({self.label}), order={self.order})"

    @cached_property
    def values(self) -> np.ndarray:
        """Exponent k of zeta_order for every residue index; -1 off the units."""
        ug = self.ring.unit_group
        out = np.full(self.ring.size, -1, dtype=np.int64)
        units = self.ring.units
        M = ug.exponent
        k = np.zeros(len(units), dtype=np.int64)
        for col, (d, e) in enumerate(zip(ug.orders, self.exponents)):
            k += self.ring.unit_log[units, col] * (e * (M // d))
        out[units] = (k % M) // (M // self.order)
        return out

    def __call__(self, e: Element) -> CycValue:
        return chi_eval(self, e)

    @cached_property
    def conductor(self) -> Ideal:
        return _conductor(self)


def character_group(ring: ResidueRing) -> Iterator[DirichletCharacter]:
    for exps in product(*(range(d) for d in ring.unit_group.orders)):
        yield DirichletCharacter(ring, exps)


def trivial_character(ring: ResidueRing) -> DirichletCharacter:
    return DirichletCharacter(ring, [0] * len(ring.unit_group.orders))


def chi_eval(chi: DirichletCharacter, e: Element) -> CycValue:
    k = int(chi.values[chi.ring.index(e)])
    return CycValue(None if k < 0 else k, chi.order)


def _conductor(chi: DirichletCharacter) -> Ideal:
    ring = chi.ring
    unit_vals = chi.values[ring.units]
    passing = [i for i, mask in enumerate(ring.kernel_masks) if not unit_vals[mask].any()]
    # divisors are sorted by norm, so the first passing one is the candidate
    best = ring.divisors[passing[0]]
    for i in passing:
        if not divides(best, ring.divisors[i]):
            raise AssertionError(f"conductor of {chi!r} is not unique")
    return best


def conductor(chi: DirichletCharacter) -> Ideal:
    return chi.conductor


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.conductor == chi.modulus


def character_sum(chi: DirichletCharacter, weights: np.ndarray) -> CyclotomicSum:
    """sum over residues r of weights[r] * chi(r), exactly."""
    vals = chi.values
    mask = vals >= 0
    coeffs = np.zeros(chi.order, dtype=object)
    for k, w in zip(vals[mask], weights[mask]):
        coeffs[k] += int(w)
    return CyclotomicSum(chi.order, [int(c) for c in coeffs])


def factor_character(
    chi: DirichletCharacter, I1: Ideal, I2: Ideal
) -> tuple[DirichletCharacter, DirichletCharacter]:
    """Unique (chi1, chi2) mod (I1, I2) with chi(e) = chi1(e) chi2(e) on units."""
    split = crt_split(chi.ring, I1, I2)
    parts = []
    for this, other, lift in (
        (split.ring1, split.ring2, lambda i, j: split.back[i, j]),
        (split.ring2, split.ring1, lambda i, j: split.back[j, i]),
    ):
        exps = []
        for g, d in zip(this.unit_group.generators, this.unit_group.orders):
            k = int(chi.values[lift(this.index(g), other.one)])
            if (k * d) % chi.order:
                raise AssertionError("restricted character value has the wrong order")
            exps.append(k * d // chi.order)
        parts.append(DirichletCharacter(this, exps))
    chi1, chi2 = parts
    m = lcm(chi.order, chi1.order, chi2.order)
    units = chi.ring.units
    lhs = chi.values[units] * (m // chi.order)
    rhs = chi1.values[split.to1[units]] * (m // chi1.order) + chi2.values[split.to2[units]] * (
        m // chi2.order
    )
    if ((lhs - rhs) % m).any():
        raise AssertionError("character factorization does not reproduce chi")
    return chi1, chi2
