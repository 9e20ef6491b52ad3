"""Evaluation and verification of the twisted Menon-Sury sum.

S(a, chi, s) = sum over a1, a2, b1..bs in O_K/a with a1, a2, a1 + a2 units of
N(gcd(a1 + a2 - 1, b1, ..., bs, a)) * chi(a1).

Three routes are provided: a naive enumeration, a grouped evaluator that counts
the b-tuples by Moebius inversion over divisors, and the closed form
mu(d) phi(a0^2/d) phi2(a/a0) sigma_s(a/d).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .arith import compute_a0, euler_phi, mobius, phi2, sigma_s
from .characters import (
    CyclotomicSum,
    DirichletCharacter,
    NonIntegralSum,
    character_group,
    character_sum,
    chi_eval,
    factor_character,
)
from .ideals import (
    Element,
    FieldDesc,
    Ideal,
    IdealError,
    divides,
    divisors_of,
    ideal_div_exact,
    ideal_gcd,
    ideal_mul,
    ideal_pow,
    principal,
    valuation,
)
from .residues import ResidueRing, make_ring, one_plus_pk_mask

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    pass


def _weight_dtype(ring: ResidueRing, s: int):
    # sums stay below N^(s+3); fall back to Python ints before int64 could wrap
    return np.int64 if ring.size ** (s + 3) < 2**62 else object


@lru_cache(maxsize=256)
def _valid_pairs(ring: ResidueRing) -> tuple[np.ndarray, np.ndarray]:
    """(a1 index, divisor index of gcd(a1 + a2 - 1, a)) over all valid pairs."""
    U = ring.units
    A1 = np.repeat(U, len(U))
    A2 = np.tile(U, len(U))
    keep = ring.unit_mask[ring.add(A1, A2)]
    A1, A2 = A1[keep], A2[keep]
    x = ring.shift(ring.add(A1, A2), -1)
    return A1, ring.gcd_index[x]


def _per_a1(ring: ResidueRing, a1: np.ndarray, w: np.ndarray, s: int) -> np.ndarray:
    out = np.zeros(ring.size, dtype=_weight_dtype(ring, s))
    np.add.at(out, a1, w.astype(out.dtype))
    return out


def _b_tuple_gcds(ring: ResidueRing, start: int, s: int) -> np.ndarray:
    """Divisor index of gcd(start, b1, ..., bs) for every b-tuple."""
    cur = np.array([start], dtype=np.int64)
    for _ in range(s):
        cur = ring.meet[cur[:, None], ring.gcd_index[None, :]].ravel()
    return cur


def _check_budget(work: int, budget: int | None, what: str) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if work > budget:
        raise BudgetExceeded(f"{what} needs {work} terms, budget is {budget}")


@lru_cache(maxsize=1024)
def naive_weights(ring: ResidueRing, s: int) -> np.ndarray:
    """W[a1] = sum over a2, b-tuples of N(gcd(a1 + a2 - 1, b..., a))."""
    a1, gx = _valid_pairs(ring)
    # gcd(x, b..., a) = gcd(gcd(x, a), b..., a): enumerate b-tuples once per class
    inner = {}
    for g in np.unique(gx):
        cur = _b_tuple_gcds(ring, int(g), s)
        inner[int(g)] = int(ring.divisor_norms[cur].astype(object).sum())
    w = np.array([inner[int(g)] for g in gx], dtype=object)
    return _per_a1(ring, a1, w, s)


def count_tuples_gcd(a: Ideal, g: Ideal, s: int) -> int:
    """#{(b1..bs) mod a : gcd(b1, ..., bs, a) = g}, by Moebius inversion."""
    if not divides(g, a):
        raise IdealError(f"{g} does not divide {a}")
    if s == 0:
        return 1 if g == a else 0
    total = 0
    for h in divisors_of(a):
        if divides(g, h):
            total += mobius(ideal_div_exact(h, g)) * ideal_div_exact(a, h).norm ** s
    return total


@lru_cache(maxsize=1024)
def grouped_weights(ring: ResidueRing, s: int) -> np.ndarray:
    a1, gx = _valid_pairs(ring)
    counts = [count_tuples_gcd(ring.modulus, g, s) for g in ring.divisors]
    k = len(ring.divisors)
    per_class = [
        sum(c * int(ring.divisor_norms[ring.meet[x, g]]) for g, c in enumerate(counts) if c)
        for x in range(k)
    ]
    w = np.array([per_class[int(x)] for x in gx], dtype=object)
    return _per_a1(ring, a1, w, s)


def _lifted_naive(ring: ResidueRing, chi: DirichletCharacter, s: int, rng) -> CyclotomicSum:
    """Naive sum with every residue replaced by a random lift, via ideal gcds only."""
    K = ring.field
    a = ring.modulus
    basis = a.basis()

    def lift(e: Element) -> Element:
        out = e
        for v in basis:
            out = out + v.scale(int(rng.integers(-50, 51)))
        return out

    def unit(e: Element) -> bool:
        return ideal_gcd(principal(K, e), a).is_unit

    reps = ring.elements
    acc = CyclotomicSum(chi.order)
    for r1, r2 in product(reps, repeat=2):
        x1, x2 = lift(r1), lift(r2)
        if not (unit(K.mul(x1, x2)) and unit(x1 + x2)):
            continue
        value = chi_eval(chi, x1)
        base = x1 + x2 - Element(1)
        for bs in product(reps, repeat=s):
            g = ideal_gcd(principal(K, base), a)
            for b in bs:
                g = ideal_gcd(g, principal(K, lift(b)))
            acc.add(g.norm, value)
    return acc


def lhs_naive(
    ring: ResidueRing,
    chi: DirichletCharacter,
    s: int,
    budget: int | None = None,
    lift=None,
) -> CyclotomicSum:
    """Naive left side; pass a numpy Generator as ``lift`` to re-lift every residue."""
    _check_budget(ring.size ** (s + 2), budget, "naive evaluation")
    if lift is not None:
        return _lifted_naive(ring, chi, s, lift)
    return character_sum(chi, naive_weights(ring, s))


def lhs_grouped(
    ring: ResidueRing, chi: DirichletCharacter, s: int, budget: int | None = None
) -> CyclotomicSum:
    _check_budget(ring.size**2 * len(ring.divisors), budget, "grouped evaluation")
    return character_sum(chi, grouped_weights(ring, s))


def rhs_closed_form(a: Ideal, chi: DirichletCharacter, s: int) -> int:
    d = chi.conductor
    a0 = compute_a0(a, d)
    return (
        mobius(d)
        * euler_phi(ideal_div_exact(ideal_mul(a0, a0), d))
        * phi2(ideal_div_exact(a, a0))
        * sigma_s(ideal_div_exact(a, d), s)
    )


def menon_sum(ring: ResidueRing, chi: DirichletCharacter, s: int, budget: int | None = None) -> int:
    """Exact S(a, chi, s), naive when affordable, grouped otherwise."""
    try:
        return lhs_naive(ring, chi, s, budget).to_int()
    except BudgetExceeded:
        return lhs_grouped(ring, chi, s, budget).to_int()


@dataclass
class VerificationReport:
    field: str
    modulus: str
    chi: str
    conductor: str
    a0: str
    s: int
    lhs_naive: int | None
    lhs_grouped: int
    rhs_closed: int
    match: bool
    ms: float

    @property
    def lhs(self) -> int:
        return self.lhs_naive if self.lhs_naive is not None else self.lhs_grouped

    def to_json(self) -> dict:
        """The report line schema: field, modulus, chi, conductor, a0, s, lhs, rhs, match, ms."""
        return {
            "field": self.field,
            "modulus": self.modulus,
            "chi": self.chi,
            "conductor": self.conductor,
            "a0": self.a0,
            "s": self.s,
            "lhs": self.lhs,
            "rhs": self.rhs_closed,
            "match": self.match,
            "ms": round(self.ms, 3),
        }

    def as_dict(self) -> dict:
        return asdict(self)


def verify_theorem(
    field: FieldDesc,
    a: Ideal,
    chi: DirichletCharacter,
    s: int,
    budget: int | None = None,
) -> VerificationReport:
    if chi.modulus != a or a.field != field:
        raise IdealError(f"character modulus {chi.modulus} does not match {a}")
    t0 = time.perf_counter()
    ring = chi.ring
    try:
        naive = lhs_naive(ring, chi, s, budget)
    except BudgetExceeded:
        naive = None
    grouped = lhs_grouped(ring, chi, s, budget)
    values = []
    for name, acc in (("naive", naive), ("grouped", grouped)):
        if acc is None:
            continue
        v = acc.is_integer()
        if v is None:
            raise NonIntegralSum(
                f"{name} sum for {field}, a={a}, chi=({chi.label}), s={s} "
                f"reduces to {acc.reduced()}"
            )
        values.append(v)
    lhs_n = values[0] if naive is not None else None
    lhs_g = values[-1]
    rhs = rhs_closed_form(a, chi, s)
    d = chi.conductor
    return VerificationReport(
        field=str(field),
        modulus=str(a),
        chi=chi.label,
        conductor=str(d),
        a0=str(compute_a0(a, d)),
        s=s,
        lhs_naive=lhs_n,
        lhs_grouped=lhs_g,
        rhs_closed=rhs,
        match=all(v == rhs for v in values),
        ms=(time.perf_counter() - t0) * 1000,
    )


def verify_multiplicativity(
    field: FieldDesc,
    a1: Ideal,
    a2: Ideal,
    chi: DirichletCharacter,
    s: int,
    budget: int | None = None,
) -> bool:
    """S(a1 a2, chi) == S(a1, chi1) * S(a2, chi2) with chi = chi1 chi2."""
    if not ideal_gcd(a1, a2).is_unit:
        raise IdealError(f"{a1} and {a2} are not coprime")
    if chi.modulus != ideal_mul(a1, a2):
        raise IdealError("character modulus is not a1 * a2")
    chi1, chi2 = factor_character(chi, a1, a2)
    whole = menon_sum(chi.ring, chi, s, budget)
    return whole == menon_sum(chi1.ring, chi1, s, budget) * menon_sum(chi2.ring, chi2, s, budget)


# -- prime-power lemmas ---------------------------------------------------------------


@dataclass
class LemmaCase:
    lemma: str
    prime: str
    norm_p: int
    m: int
    t: int
    chi: str
    params: dict = field(default_factory=dict)
    brute: int = 0
    closed: int = 0

    @property
    def ok(self) -> bool:
        return self.brute == self.closed


def _lemma_closed(lemma: str, q: int, m: int, t: int, k=None, r=None, s=None, p_m=None) -> int:
    """Closed forms; q = N(p)."""
    if lemma == "2.2":
        return q ** (m - k) if k >= t else 0
    if lemma == "2.3":
        if t == 0:
            return q ** (m - k) * (q**m - 2 * q ** (m - 1))
        return -(q ** (2 * m - k - 1)) if t == 1 else 0
    if lemma == "2.4":
        if t == 0:
            return (q**m - q ** (m - 1)) * (q**m - 3 * q ** (m - 1)) + q ** (2 * m - 2)
        return q ** (2 * m - 2) if t == 1 else 0
    if lemma == "2.5":
        if t == 0:
            return (r + 1) * phi2(p_m)
        return -r * (q ** (2 * m - 1) - q ** (2 * m - 2)) if t == 1 else 0
    if lemma == "2.6":
        return q ** ((m - r) * s) - q ** ((m - r - 1) * s) if r < m else 1
    raise ValueError(f"unknown lemma {lemma}")


def _unit_pairs(ring: ResidueRing):
    U = ring.units
    A1 = np.repeat(U, len(U))
    A2 = np.tile(U, len(U))
    total = ring.add(A1, A2)
    return A1, total, ring.gcd_index[ring.shift(total, -1)]


def lemma_sum(
    lemma: str,
    p: Ideal,
    m: int,
    chi: DirichletCharacter | None = None,
    k: int | None = None,
    r: int | None = None,
    s: int | None = None,
) -> LemmaCase:
    """Brute-force and closed value of one lemma instance modulo p**m."""
    pm = ideal_pow(p, m)
    ring = make_ring(p.field, pm)
    if chi is None:
        chi = next(character_group(ring))
    if chi.modulus != pm:
        raise IdealError(f"character is not modulo {pm}")
    t = valuation(p, chi.conductor)
    q = p.norm
    params: dict = {}
    if lemma in ("2.2", "2.3"):
        if k is None or not 1 <= k <= m:
            raise ValueError(f"lemma {lemma} needs 1 <= k <= m")
        params["k"] = k
    if lemma in ("2.5", "2.6"):
        if r is None or not 0 <= r <= m:
            raise ValueError(f"lemma {lemma} needs 0 <= r <= m")
        params["r"] = r
    if lemma == "2.6":
        if s is None or s < 0:
            raise ValueError("lemma 2.6 needs s >= 0")
        params["s"] = s

    if lemma == "2.2":
        w = (one_plus_pk_mask(ring, k) & ring.unit_mask).astype(np.int64)
        brute = character_sum(chi, w).to_int()
    elif lemma == "2.6":
        target = ring.divisor_index[ideal_pow(p, r)]
        gcds = _b_tuple_gcds(ring, ring.divisor_index[pm], s)
        brute = int((gcds == target).sum())
    else:
        A1, total, gx = _unit_pairs(ring)
        sum_unit = ring.unit_mask[total]
        if lemma == "2.3":
            pk = ring.divisor_index[ideal_pow(p, k)]
            keep = ring.divides_table[pk][gx]
            w = np.ones(keep.sum(), dtype=np.int64)
        elif lemma == "2.4":
            one_unit = ring.divisor_index[ring.divisors[0]]
            keep = sum_unit & (gx == one_unit)
            w = np.ones(keep.sum(), dtype=np.int64)
        elif lemma == "2.5":
            pr = ring.divisor_index[ideal_pow(p, r)]
            keep = sum_unit
            w = ring.divisor_norms[ring.meet[gx[keep], pr]]
        else:
            raise ValueError(f"unknown lemma {lemma}")
        brute = character_sum(chi, _per_a1(ring, A1[keep], w, 0)).to_int()
    closed = _lemma_closed(lemma, q, m, t, k=k, r=r, s=s, p_m=pm)
    return LemmaCase(lemma, str(p), q, m, t, chi.label, params, brute, closed)


def prime_power_closed(p: Ideal, m: int, t: int, s: int) -> int:
    if t == 0:
        pm = ideal_pow(p, m)
        return phi2(pm) * sigma_s(pm, s)
    if t == 1:
        return -euler_phi(ideal_pow(p, 2 * m - 1)) * sigma_s(ideal_pow(p, m - 1), s)
    return 0


def verify_prime_power_cases(
    p: Ideal, m: int, s: int, budget: int | None = None
) -> list[LemmaCase]:
    """S(p^m, chi, s) against the t = 0 / t = 1 / t >= 2 closed forms, for every chi."""
    ring = make_ring(p.field, ideal_pow(p, m))
    out = []
    for chi in character_group(ring):
        t = valuation(p, chi.conductor)
        out.append(
            LemmaCase(
                "2.7",
                str(p),
                p.norm,
                m,
                t,
                chi.label,
                {"s": s},
                menon_sum(ring, chi, s, budget),
                prime_power_closed(p, m, t, s),
            )
        )
    return out


def lemma_grid(p: Ideal, m: int, s_values=(0, 1, 2)) -> list[LemmaCase]:
    """Every admissible lemma instance modulo p**m, over all characters."""
    ring = make_ring(p.field, ideal_pow(p, m))
    out = []
    for chi in character_group(ring):
        for k in range(1, m + 1):
            out.append(lemma_sum("2.2", p, m, chi, k=k))
            out.append(lemma_sum("2.3", p, m, chi, k=k))
        out.append(lemma_sum("2.4", p, m, chi))
        for r in range(m + 1):
            out.append(lemma_sum("2.5", p, m, chi, r=r))
    for r in range(m + 1):
        for s in s_values:
            out.append(lemma_sum("2.6", p, m, r=r, s=s))
    for s in s_values:
        out.extend(verify_prime_power_cases(p, m, s))
    return out
