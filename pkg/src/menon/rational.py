"""Integer-only verifiers for the classical Menon-type identities over Z.

Nothing here touches the ideal machinery: factorization, characters, and
conductors are rebuilt from the structure of (Z/n)^* so this module can act
as an independent oracle for the general engine at K = Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd, lcm

import sympy

IDENTITIES = (
    "menon",
    "sury",
    "cao_zhao",
    "li_hu_kim",
    "toth",
    "sita_ramaiah",
    "ji_wang",
    "corollary",
)
NEEDS_CHI = {"cao_zhao", "li_hu_kim", "ji_wang", "corollary"}


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    return 0 if any(e > 1 for e in f.values()) else (-1) ** len(f)


def sigma(n: int, s: int) -> int:
    return sum(d**s for d in range(1, n + 1) if n % d == 0)


def phi2_product(n: int) -> int:
    """n^2 prod_{p | n} (1 - 1/p)(1 - 2/p)."""
    out = n * n
    for p in factorize(n):
        out = out // (p * p) * (p - 1) * (p - 2)
    return out


def phi_k(n: int, k: int) -> int:
    """#{(a1..ak) mod n : each ai and a1 + ... + ak coprime to n}, by enumeration."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    units = [a for a in range(1, n + 1) if gcd(a, n) == 1]
    return sum(1 for t in product(units, repeat=k) if gcd(sum(t), n) == 1)


# -- characters of (Z/n)^* -------------------------------------------------------------


def _component(p: int, e: int) -> tuple[int, list[int], list[int], dict[int, tuple[int, ...]]]:
    """(q, generator orders, generators, discrete logs) for (Z/p^e)^*."""
    q = p**e
    if p == 2:
        if e == 1:
            return q, [], [], {1: ()}
        if e == 2:
            return q, [2], [3], {1: (0,), 3: (1,)}
        order5 = 2 ** (e - 2)
        logs = {}
        for i in range(2):
            for j in range(order5):
                logs[(-1) ** i * pow(5, j, q) % q] = (i, j)
        return q, [2, order5], [q - 1, 5], logs
    phi = q // p * (p - 1)
    for g in range(2, q):
        if gcd(g, p) != 1:
            continue
        x, k = g, 1
        while x != 1:
            x = x * g % q
            k += 1
        if k == phi:
            break
    logs = {pow(g, j, q): (j,) for j in range(phi)}
    return q, [phi], [g], logs


@dataclass(frozen=True)
class RationalCharacter:
    modulus: int
    order: int
    table: tuple[tuple[int, int], ...]  # (unit a, k) with chi(a) = zeta_order^k
    conductor: int
    key: tuple[int, ...]

    def __call__(self, a: int) -> int | None:
        a %= self.modulus
        if gcd(a, self.modulus) != 1:
            return None
        return dict(self.table)[a]

    def angles(self) -> dict[int, Fraction]:
        return {a: Fraction(k, self.order) for a, k in self.table}


@lru_cache(maxsize=None)
def rational_characters(n: int) -> tuple[RationalCharacter, ...]:
    comps = [_component(p, e) + (p,) for p, e in sorted(factorize(n).items())]
    units = [a for a in range(1, n + 1) if gcd(a, n) == 1]
    ranges = [range(o) for q, orders, _, _, _ in comps for o in orders]
    out = []
    for key in product(*ranges):
        angle = {a: Fraction(0) for a in units}
        cond = 1
        pos = 0
        for q, orders, _, logs, p in comps:
            exps = key[pos : pos + len(orders)]
            pos += len(orders)

            def comp_angle(u, exps=exps, orders=orders, logs=logs, q=q):
                lg = logs[u % q]
                return sum((Fraction(c * l, o) for c, l, o in zip(exps, lg, orders)), Fraction(0))

            for a in units:
                angle[a] += comp_angle(a)
            # conductor exponent: least j with the component trivial on 1 + p^j
            comp_units = [u for u in range(1, q + 1) if u % p]
            j = 0
            while any(comp_angle(u) % 1 for u in comp_units if (u - 1) % p**j == 0):
                j += 1
            cond *= p**j
        order = reduce(lcm, (x.denominator for x in (v % 1 for v in angle.values())), 1)
        table = tuple((a, int((angle[a] % 1) * order)) for a in units)
        out.append(RationalCharacter(n, order, table, cond, tuple(key)))
    return tuple(out)


def find_character(n: int, angles: dict[int, Fraction]) -> RationalCharacter:
    """The oracle character with the given values angle(a) (chi(a) = e^{2 pi i angle})."""
    for chi in rational_characters(n):
        if all(chi.angles()[a] == angles[a] % 1 for a in angles):
            return chi
    raise LookupError(f"no character mod {n} with those values")


def _exact_sum(weights: dict[int, int], chi: RationalCharacter | None) -> int | tuple[int, ...]:
    if chi is None:
        return sum(weights.values())
    coeffs = [0] * chi.order
    for a, k in chi.table:
        coeffs[k] += weights.get(a, 0)
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    rem = poly.rem(sympy.Poly(sympy.cyclotomic_poly(chi.order, x), x))
    c = [int(v) for v in reversed(rem.all_coeffs())]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c[0] if len(c) == 1 else tuple(c)


@lru_cache(maxsize=None)
def _b_sum(g0: int, n: int, s: int) -> int:
    return sum(reduce(gcd, bs, g0) for bs in product(range(1, n + 1), repeat=s))


@lru_cache(maxsize=None)
def _single_weights(n: int, s: int) -> dict[int, int]:
    """a -> sum over b in [1, n]^s of gcd(a - 1, b1, ..., bs, n), a a unit."""
    return {a: _b_sum(gcd(a - 1, n), n, s) for a in range(1, n + 1) if gcd(a, n) == 1}


@lru_cache(maxsize=None)
def _pair_weights(n: int, s: int) -> dict[int, int]:
    """a1 -> sum over valid a2 and b of gcd(a1 + a2 - 1, b1, ..., bs, n)."""
    out: dict[int, int] = {}
    for a1, a2 in product(range(1, n + 1), repeat=2):
        if gcd(a1 * a2, n) == 1 and gcd(a1 + a2, n) == 1:
            out[a1] = out.get(a1, 0) + _b_sum(gcd(a1 + a2 - 1, n), n, s)
    return out


def _require(ident: str, chi, n: int) -> None:
    if ident not in IDENTITIES:
        raise ValueError(f"unknown identity {ident!r}")
    if ident in NEEDS_CHI and chi is None:
        raise ValueError(f"identity {ident} needs a character")
    if chi is not None and chi.modulus != n:
        raise ValueError("character modulus does not match n")


def identity_lhs(ident: str, n: int, s: int = 0, k: int = 2, chi: RationalCharacter | None = None):
    _require(ident, chi, n)
    if ident == "menon":
        return _exact_sum(_single_weights(n, 0), None)
    if ident == "sury":
        return _exact_sum(_single_weights(n, s), None)
    if ident == "cao_zhao":
        return _exact_sum(_single_weights(n, 0), chi)
    if ident == "li_hu_kim":
        return _exact_sum(_single_weights(n, s), chi)
    if ident == "toth":
        units = [a for a in range(1, n + 1) if gcd(a, n) == 1]
        return sum(
            gcd(sum(t) - 1, n) for t in product(units, repeat=k) if gcd(sum(t), n) == 1
        )
    if ident == "sita_ramaiah":
        return _exact_sum(_pair_weights(n, 0), None)
    if ident == "ji_wang":
        return _exact_sum(_pair_weights(n, 0), chi)
    return _exact_sum(_pair_weights(n, s), chi)


def _n0(n: int, d: int) -> int:
    out = 1
    for p, e in factorize(n).items():
        if d % p == 0:
            out *= p**e
    return out


def identity_rhs(ident: str, n: int, s: int = 0, k: int = 2, chi: RationalCharacter | None = None) -> int:
    _require(ident, chi, n)
    if ident == "menon":
        return totient(n) * sigma(n, 0)
    if ident == "sury":
        return totient(n) * sigma(n, s)
    if ident == "cao_zhao":
        return totient(n) * sigma(n // chi.conductor, 0)
    if ident == "li_hu_kim":
        return totient(n) * sigma(n // chi.conductor, s)
    if ident == "toth":
        return phi_k(n, k) * sigma(n, 0)
    if ident == "sita_ramaiah":
        return phi2_product(n) * sigma(n, 0)
    s_eff = 0 if ident == "ji_wang" else s
    d = chi.conductor
    n0 = _n0(n, d)
    return mobius(d) * totient(n0 * n0 // d) * phi2_product(n // n0) * sigma(n // d, s_eff)


def verify_identity(ident: str, n: int, s: int = 0, k: int = 2, chi: RationalCharacter | None = None) -> dict:
    lhs = identity_lhs(ident, n, s, k, chi)
    rhs = identity_rhs(ident, n, s, k, chi)
    return {
        "identity": ident,
        "n": n,
        "s": s,
        "k": k,
        "chi": None if chi is None else ",".join(map(str, chi.key)),
        "conductor": None if chi is None else chi.conductor,
        "lhs": lhs,
        "rhs": rhs,
        "match": lhs == rhs,
    }
