"""Finite residue rings O_K/a and the structure of their unit groups.

Residues are indexed by position in the HNF box: the element x + y*w with
0 <= x < a, 0 <= y < c has index y*a + x.  Vectorized arithmetic over index
arrays keeps the exhaustive sums cheap at desk-scale norms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .ideals import (
    Element,
    FieldDesc,
    Ideal,
    IdealError,
    divides,
    divisors_of,
    factor_ideal,
    ideal_gcd,
    ideal_mul,
    ideal_pow,
    principal,
)

DEFAULT_MAX_RING_NORM = 10_000


class RingTooLarge(IdealError):
    pass


def max_ring_norm() -> int:
    env = os.environ.get("MENON_MAX_RING_NORM")
    return int(env) if env else DEFAULT_MAX_RING_NORM


@dataclass(frozen=True)
class UnitGroupStructure:
    generators: tuple[Element, ...]
    orders: tuple[int, ...]

    @property
    def exponent(self) -> int:
        return self.orders[-1] if self.orders else 1

    @property
    def total_order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out


class ResidueRing:
    def __init__(self, modulus: Ideal, max_norm: int | None = None):
        if modulus.is_zero:
            raise IdealError("residue ring modulo the zero ideal is infinite")
        bound = max_ring_norm() if max_norm is None else max_norm
        if modulus.norm > bound:
            raise RingTooLarge(f"norm {modulus.norm} exceeds max_ring_norm {bound}")
        self.field: FieldDesc = modulus.field
        self.modulus = modulus
        self.size = modulus.norm
        a, c = modulus.a, modulus.c
        self.xs = np.tile(np.arange(a, dtype=np.int64), c)
        self.ys = np.repeat(np.arange(c, dtype=np.int64), a)

    def __repr__(self) -> str:
        return f"ResidueRing({self.field}, {self.modulus})"

    # -- indexing ---------------------------------------------------------

    def index_of(self, xs, ys):
        """Vectorized reduction of coordinate arrays to residue indices."""
        a, b, c = self.modulus.hnf
        y = np.mod(ys, c)
        k = (ys - y) // c
        x = np.mod(xs - k * b, a)
        return y * a + x

    def index(self, e: Element) -> int:
        r = self.modulus.reduce(Element(*e))
        return r.y * self.modulus.a + r.x

    def element(self, i: int) -> Element:
        a = self.modulus.a
        return Element(int(i % a), int(i // a))

    @property
    def elements(self) -> list[Element]:
        return [self.element(i) for i in range(self.size)]

    def reduce(self, e: Element) -> Element:
        return self.modulus.reduce(Element(*e))

    @cached_property
    def one(self) -> int:
        return self.index(Element(1, 0))

    def add(self, i, j):
        return self.index_of(self.xs[i] + self.xs[j], self.ys[i] + self.ys[j])

    def mul(self, i, j):
        A, B = self.field.omega_sq
        x1, y1, x2, y2 = self.xs[i], self.ys[i], self.xs[j], self.ys[j]
        yy = y1 * y2
        return self.index_of(x1 * x2 + A * yy, x1 * y2 + y1 * x2 + B * yy)

    def shift(self, i, k: int = -1):
        """Index of (element i) + k."""
        return self.index_of(self.xs[i] + k, self.ys[i])

    def pow(self, i: int, e: int) -> int:
        out, base = self.one, int(i)
        while e:
            if e & 1:
                out = int(self.mul(out, base))
            base = int(self.mul(base, base))
            e >>= 1
        return out

    # -- divisor lattice ----------------------------------------------------

    @cached_property
    def divisors(self) -> tuple[Ideal, ...]:
        return divisors_of(self.modulus)

    @cached_property
    def divisor_index(self) -> dict[Ideal, int]:
        return {d: i for i, d in enumerate(self.divisors)}

    @cached_property
    def divisor_norms(self) -> np.ndarray:
        return np.array([d.norm for d in self.divisors], dtype=np.int64)

    @cached_property
    def meet(self) -> np.ndarray:
        """meet[i, j] = index of gcd(divisor i, divisor j)."""
        k = len(self.divisors)
        out = np.zeros((k, k), dtype=np.int64)
        for i, d in enumerate(self.divisors):
            for j in range(i, k):
                g = self.divisor_index[ideal_gcd(d, self.divisors[j])]
                out[i, j] = out[j, i] = g
        return out

    @cached_property
    def divides_table(self) -> np.ndarray:
        """divides_table[i, j] is True iff divisor i divides divisor j."""
        ds = self.divisors
        return np.array([[divides(d, e) for e in ds] for d in ds], dtype=bool)

    @cached_property
    def gcd_index(self) -> np.ndarray:
        """For each residue r, the divisor index of gcd(<r>, modulus)."""
        out = np.empty(self.size, dtype=np.int64)
        for i in range(self.size):
            g = ideal_gcd(principal(self.field, self.element(i)), self.modulus)
            out[i] = self.divisor_index[g]
        return out

    @cached_property
    def kernel_masks(self) -> np.ndarray:
        """kernel_masks[d, j] is True iff units[j] = 1 mod divisor d."""
        g = self.gcd_index[self.shift(self.units, -1)]
        return self.divides_table[:, g]

    # -- units ---------------------------------------------------------------

    @cached_property
    def unit_mask(self) -> np.ndarray:
        unit = self.divisor_index[self.divisors[0]]
        return self.gcd_index == unit

    @cached_property
    def units(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    def is_unit(self, e: Element) -> bool:
        return ideal_gcd(principal(self.field, Element(*e)), self.modulus).is_unit

    @cached_property
    def _unit_structure(self) -> tuple[UnitGroupStructure, np.ndarray]:
        return _unit_group(self)

    @property
    def unit_group(self) -> UnitGroupStructure:
        return self._unit_structure[0]

    @property
    def unit_log(self) -> np.ndarray:
        """Exponent vectors (one row per residue, -1 rows for non-units)."""
        return self._unit_structure[1]

    def log(self, e: Element) -> tuple[int, ...]:
        row = self.unit_log[self.index(e)]
        if len(row) and row[0] < 0:
            raise ValueError(f"{e} is not a unit mod {self.modulus}")
        return tuple(int(v) for v in row)


@lru_cache(maxsize=512)
def _cached_ring(modulus: Ideal, bound: int) -> ResidueRing:
    return ResidueRing(modulus, bound)


def make_ring(field: FieldDesc, I: Ideal, max_norm: int | None = None) -> ResidueRing:
    if I.field != field:
        raise IdealError(f"{I!r} does not belong to {field}")
    bound = max_ring_norm() if max_norm is None else max_norm
    if not I.is_zero and I.norm > bound:
        raise RingTooLarge(f"norm {I.norm} exceeds max_ring_norm {bound}")
    if I.is_zero:
        raise IdealError("residue ring modulo the zero ideal is infinite")
    return _cached_ring(I, bound)


def reduce(ring: ResidueRing, e: Element) -> Element:
    return ring.reduce(e)


def is_unit(ring: ResidueRing, e: Element) -> bool:
    return ring.is_unit(e)


def unit_group(ring: ResidueRing) -> UnitGroupStructure:
    return ring.unit_group


def _first_power_in(ring: ResidueRing, elems: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Smallest k >= 1 with elems**k in the target mask, elementwise."""
    out = np.zeros(len(elems), dtype=np.int64)
    P = elems.copy()
    k = 1
    while True:
        hit = target[P] & (out == 0)
        out[hit] = k
        if (out > 0).all():
            return out
        P = ring.mul(P, elems)
        k += 1
        if k > ring.size:
            raise AssertionError("power search did not terminate")


def _unit_group(ring: ResidueRing) -> tuple[UnitGroupStructure, np.ndarray]:
    # Greedy invariant factors: a maximal-order element of G/H spans a direct
    # summand, and its lift can be corrected by H to have the same order in G.
    units = ring.units
    phi = len(units)
    one = ring.one
    H: dict[int, tuple[int, ...]] = {one: ()}
    gens: list[int] = []
    orders: list[int] = []
    while len(H) < phi:
        in_H = np.zeros(ring.size, dtype=bool)
        in_H[list(H)] = True
        qord = _first_power_in(ring, units, in_H)
        pick = int(np.argmax(qord))
        h, e = int(units[pick]), int(qord[pick])
        js = H[ring.pow(h, e)]
        for g, d, j in zip(gens, orders, js):
            if j % e:
                raise AssertionError("greedy invariant-factor step failed")
            h = int(ring.mul(h, ring.pow(g, (d - j // e) % d)))
        if ring.pow(h, e) != one:
            raise AssertionError("corrected lift has wrong order")
        newH = dict(H)
        hp = one
        for t in range(1, e):
            hp = int(ring.mul(hp, h))
            xs = np.fromiter(H.keys(), dtype=np.int64)
            prods = ring.mul(xs, np.full(len(xs), hp))
            for x, p in zip(H.values(), prods):
                newH[int(p)] = x + (t,)
        for k in list(H):
            newH[k] = H[k] + (0,)
        H = newH
        gens.append(h)
        orders.append(e)
    if len(H) != phi:
        raise AssertionError("unit group enumeration mismatch")
    # ascending invariant factors d1 | d2 | ...
    gens.reverse()
    orders.reverse()
    log = np.full((ring.size, len(gens)), -1, dtype=np.int64)
    for idx, vec in H.items():
        log[idx] = vec[::-1]
    structure = UnitGroupStructure(tuple(ring.element(g) for g in gens), tuple(orders))
    return structure, log


# -- CRT ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CRTSplit:
    ring: ResidueRing
    ring1: ResidueRing
    ring2: ResidueRing
    to1: np.ndarray
    to2: np.ndarray
    back: np.ndarray  # back[i1, i2] -> index mod a

    def forward(self, e: Element) -> tuple[Element, Element]:
        i = self.ring.index(e)
        return self.ring1.element(self.to1[i]), self.ring2.element(self.to2[i])

    def backward(self, e1: Element, e2: Element) -> Element:
        return self.ring.element(self.back[self.ring1.index(e1), self.ring2.index(e2)])


def crt_split(ring: ResidueRing, I1: Ideal, I2: Ideal) -> CRTSplit:
    if not ideal_gcd(I1, I2).is_unit:
        raise IdealError(f"{I1} and {I2} are not coprime")
    if ideal_mul(I1, I2) != ring.modulus:
        raise IdealError(f"{I1} * {I2} is not {ring.modulus}")
    R1 = make_ring(ring.field, I1)
    R2 = make_ring(ring.field, I2)
    to1 = R1.index_of(ring.xs, ring.ys)
    to2 = R2.index_of(ring.xs, ring.ys)
    back = np.full((R1.size, R2.size), -1, dtype=np.int64)
    back[to1, to2] = np.arange(ring.size)
    if (back < 0).any():
        raise AssertionError("CRT map is not a bijection")
    return CRTSplit(ring, R1, R2, to1, to2, back)


# -- filtration ----------------------------------------------------------------------


def prime_power_of(I: Ideal) -> tuple[Ideal, int]:
    fac = factor_ideal(I)
    if len(fac) != 1:
        raise IdealError(f"{I} is not a prime power")
    return fac[0]


def one_plus_pk_mask(ring: ResidueRing, k: int) -> np.ndarray:
    """Mask of residues congruent to 1 modulo p**k, for modulus p**m."""
    P, m = prime_power_of(ring.modulus)
    if not 0 <= k <= m:
        raise IdealError(f"k = {k} outside 0..{m}")
    pk = ring.divisor_index[ideal_pow(P, k)]
    g = ring.gcd_index[ring.shift(np.arange(ring.size), -1)]
    return ring.divides_table[pk][g]


def coset_one_plus_pk(ring: ResidueRing, k: int) -> list[Element]:
    _, m = prime_power_of(ring.modulus)
    if not 1 <= k <= m:
        raise IdealError(f"k = {k} outside 1..{m}")
    return [ring.element(i) for i in np.flatnonzero(one_plus_pk_mask(ring, k))]
