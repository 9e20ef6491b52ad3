"""Quadratic and rational base fields, their integers, and integral ideals.

Elements of O_K are pairs (x, y) standing for x + y*w, where w is the usual
integral basis generator.  Nonzero ideals are kept in Hermite normal form
over the basis {1, w}: the Z-module spanned by a and b + c*w.  The rational
field is handled as the degenerate case with b = 0, c = 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Iterable, NamedTuple, Sequence

from sympy import factorint, isprime, primerange
from sympy.ntheory.primetest import is_square


class IdealError(ValueError):
    """Raised for malformed fields, ideals, or invalid ideal operations."""


RATIONAL = "rational"
QUADRATIC = "quadratic"


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


@dataclass(frozen=True)
class FieldDesc:
    kind: str
    D: int = 1

    @property
    def degree(self) -> int:
        return 1 if self.kind == RATIONAL else 2

    @property
    def omega_sq(self) -> tuple[int, int]:
        """(A, B) with w**2 = A + B*w."""
        if self.kind == RATIONAL:
            return (0, 0)
        if self.D % 4 == 1:
            return ((self.D - 1) // 4, 1)
        return (self.D, 0)

    @property
    def discriminant(self) -> int:
        if self.kind == RATIONAL:
            return 1
        return self.D if self.D % 4 == 1 else 4 * self.D

    @property
    def omega(self) -> str:
        if self.kind == RATIONAL:
            return "1"
        return f"(1+sqrt({self.D}))/2" if self.D % 4 == 1 else f"sqrt({self.D})"

    def __str__(self) -> str:
        return "Q" if self.kind == RATIONAL else f"Q(sqrt {self.D})"

    # -- element arithmetic ------------------------------------------------

    def mul(self, u: Element, v: Element) -> Element:
        A, B = self.omega_sq
        yy = u.y * v.y
        return Element(u.x * v.x + A * yy, u.x * v.y + u.y * v.x + B * yy)

    def norm(self, u: Element) -> int:
        A, B = self.omega_sq
        return u.x * u.x + B * u.x * u.y - A * u.y * u.y

    def conj(self, u: Element) -> Element:
        _, B = self.omega_sq
        return Element(u.x + B * u.y, -u.y)


class Element(NamedTuple):
    x: int
    y: int = 0

    def __add__(self, other):  # type: ignore[override]
        return Element(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Element(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Element(-self.x, -self.y)

    def scale(self, k: int) -> Element:
        return Element(k * self.x, k * self.y)

    def __str__(self) -> str:
        if not self.y:
            return str(self.x)
        return f"{self.x}{self.y:+d}w" if self.x else f"{self.y}w"


ZERO_ELEMENT = Element(0, 0)
ONE = Element(1, 0)


def make_field(kind: str, D: int | None = None) -> FieldDesc:
    if kind == RATIONAL:
        return FieldDesc(RATIONAL, 1)
    if kind != QUADRATIC:
        raise IdealError(f"unknown field kind {kind!r}")
    if D is None or D in (0, 1):
        raise IdealError(f"quadratic field needs D not in {{0, 1}}, got {D}")
    if not _squarefree(D):
        raise IdealError(f"D = {D} is not squarefree")
    return FieldDesc(QUADRATIC, D)


_FIELD_RE = re.compile(r"^\s*Q\s*(?:\(\s*sqrt\s*\(?\s*([+-]?\d+)\s*\)?\s*\))?\s*$")


def parse_field(text: str) -> FieldDesc:
    m = _FIELD_RE.match(text)
    if not m:
        raise IdealError(f"cannot parse field {text!r}; expected 'Q' or 'Q(sqrt D)'")
    if m.group(1) is None:
        return make_field(RATIONAL)
    D = int(m.group(1))
    if D == 1 or (D > 0 and is_square(D)):
        raise IdealError(f"Q(sqrt {D}) is not a quadratic field")
    return make_field(QUADRATIC, D)


# -- ideals ------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class Ideal:
    field: FieldDesc
    a: int
    b: int = 0
    c: int = 1

    def __post_init__(self):
        if self.a == 0:
            if self.b or self.c:
                raise IdealError("zero ideal must be (0, 0, 0)")
            return
        a, b, c = self.a, self.b, self.c
        if self.field.kind == RATIONAL:
            if a < 0 or b != 0 or c != 1:
                raise IdealError(f"bad rational ideal {(a, b, c)}")
            return
        if not (a > 0 and c > 0 and 0 <= b < a and a % c == 0 and b % c == 0):
            raise IdealError(f"({a}, {b}, {c}) is not a Hermite normal form")
        A, B = self.field.omega_sq
        # (b + c w) * w must lie in the lattice
        if not self.contains(Element(c * A, b + c * B)):
            raise IdealError(f"HNF ({a}, {b}, {c}) is not closed under w")

    @property
    def is_zero(self) -> bool:
        return self.a == 0

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def is_unit(self) -> bool:
        return self.norm == 1

    @property
    def hnf(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.norm, self.a, self.b, self.c)

    def basis(self) -> list[Element]:
        if self.is_zero:
            return []
        if self.field.kind == RATIONAL:
            return [Element(self.a, 0)]
        return [Element(self.a, 0), Element(self.b, self.c)]

    def contains(self, e: Element) -> bool:
        if self.is_zero:
            return e.x == 0 and e.y == 0
        if e.y % self.c:
            return False
        return (e.x - (e.y // self.c) * self.b) % self.a == 0

    def reduce(self, e: Element) -> Element:
        """Canonical representative of e in the box 0 <= x < a, 0 <= y < c."""
        y = e.y % self.c
        k = (e.y - y) // self.c
        return Element((e.x - k * self.b) % self.a, y)

    def __repr__(self) -> str:
        return f"Ideal({self.field}, {self})"

    def __str__(self) -> str:
        if self.field.kind == RATIONAL or self.is_zero:
            return str(self.a)
        return f"hnf:{self.a},{self.b},{self.c}"


def zero_ideal(field: FieldDesc) -> Ideal:
    return Ideal(field, 0, 0, 0)


def unit_ideal(field: FieldDesc) -> Ideal:
    return Ideal(field, 1, 0, 1)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def _hnf_rows(rows: Iterable[Element]) -> tuple[int, int, int] | None:
    """Hermite normal form (a, b, c) of a full-rank lattice in Z^2."""
    px = py = 0
    xs: list[int] = []
    for x, y in rows:
        if y == 0:
            xs.append(x)
            continue
        if py == 0:
            px, py = x, y
            continue
        u, v, g = _xgcd(py, y)
        # unimodular: new pivot has y = g, the partner row has y = 0
        xs.append((y // g) * px - (py // g) * x)
        px, py = u * px + v * x, g
    if py == 0:
        return None
    a = 0
    for x in xs:
        a = gcd(a, x)
    if a == 0:
        return None
    if py < 0:
        px, py = -px, -py
    return (a, px % a, py)


def ideal_from_generators(field: FieldDesc, elems: Sequence[Element]) -> Ideal:
    if not elems:
        raise IdealError("need at least one generator")
    elems = [Element(*e) for e in elems]
    if field.kind == RATIONAL:
        n = 0
        for e in elems:
            if e.y:
                raise IdealError(f"{e} is not a rational integer")
            n = gcd(n, e.x)
        return Ideal(field, n, 0, 1 if n else 0)
    omega = Element(0, 1)
    rows = []
    for e in elems:
        rows.append(e)
        rows.append(field.mul(e, omega))
    hnf = _hnf_rows(rows)
    if hnf is None:
        if any(e.x or e.y for e in elems):
            raise IdealError("generators do not span a full-rank lattice")
        return zero_ideal(field)
    return Ideal(field, *hnf)


def principal(field: FieldDesc, e: Element | int) -> Ideal:
    if isinstance(e, int):
        e = Element(e, 0)
    return ideal_from_generators(field, [e])


def ideal_norm(I: Ideal) -> int:
    return 0 if I.is_zero else I.norm


def ideal_gcd(I: Ideal, J: Ideal) -> Ideal:
    """The ideal sum I + J."""
    if I.is_zero and J.is_zero:
        raise IdealError("gcd of two zero ideals is undefined")
    if I.is_zero:
        return J
    if J.is_zero:
        return I
    if I.field.kind == RATIONAL:
        return Ideal(I.field, gcd(I.a, J.a))
    return Ideal(I.field, *_hnf_rows(I.basis() + J.basis()))


def ideal_mul(I: Ideal, J: Ideal) -> Ideal:
    if I.is_zero or J.is_zero:
        raise IdealError("ideal_mul needs nonzero operands")
    if I.field.kind == RATIONAL:
        return Ideal(I.field, I.a * J.a)
    f = I.field
    return ideal_from_generators(f, [f.mul(u, v) for u in I.basis() for v in J.basis()])


def ideal_pow(I: Ideal, e: int) -> Ideal:
    out = unit_ideal(I.field)
    for _ in range(e):
        out = ideal_mul(out, I)
    return out


def divides(J: Ideal, I: Ideal) -> bool:
    """True iff J | I, i.e. I is contained in J."""
    if I.is_zero:
        return True
    if J.is_zero:
        return False
    return all(J.contains(e) for e in I.basis())


def conjugate(I: Ideal) -> Ideal:
    if I.field.kind == RATIONAL or I.is_zero:
        return I
    return ideal_from_generators(I.field, [I.field.conj(e) for e in I.basis()])


def ideal_div_exact(I: Ideal, J: Ideal) -> Ideal:
    """Q with Q * J = I; J must divide I."""
    if I.is_zero or J.is_zero:
        raise IdealError("ideal_div_exact needs nonzero operands")
    if not divides(J, I):
        raise IdealError(f"{J} does not divide {I}")
    if I.field.kind == RATIONAL:
        return Ideal(I.field, I.a // J.a)
    # J * conj(J) = <N(J)>
    n = J.norm
    P = ideal_mul(I, conjugate(J))
    Q = ideal_from_generators(I.field, [Element(e.x // n, e.y // n) for e in P.basis()])
    assert ideal_mul(Q, J) == I
    return Q


# -- splitting and factorization -----------------------------------------------


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol (d / p) for a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = pow(d % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


@dataclass(frozen=True)
class SplitRecord:
    p: int
    kind: str  # "split" | "inert" | "ramified" | "rational"
    primes: tuple[Ideal, ...]


@lru_cache(maxsize=None)
def split_prime(field: FieldDesc, p: int) -> SplitRecord:
    if not isprime(p):
        raise IdealError(f"{p} is not prime")
    if field.kind == RATIONAL:
        return SplitRecord(p, "rational", (Ideal(field, p),))
    kind = {1: "split", 0: "ramified", -1: "inert"}[kronecker(field.discriminant, p)]
    A, B = field.omega_sq
    # roots of the minimal polynomial of w mod p give the primes <p, w - r>
    roots = [r for r in range(p) if (r * r - B * r - A) % p == 0]
    expected = {"split": 2, "ramified": 1, "inert": 0}[kind]
    if len(roots) != expected:
        raise AssertionError(f"splitting of {p} in {field} inconsistent: {kind} vs roots {roots}")
    if kind == "inert":
        primes = (principal(field, p),)
    else:
        primes = tuple(
            sorted(
                (ideal_from_generators(field, [Element(p), Element(-r, 1)]) for r in roots),
                key=Ideal.sort_key,
            )
        )
    return SplitRecord(p, kind, primes)


Factorization = tuple[tuple[Ideal, int], ...]


@lru_cache(maxsize=None)
def factor_ideal(I: Ideal) -> Factorization:
    if I.is_zero:
        raise IdealError("cannot factor the zero ideal")
    out = []
    rest = I
    for p in sorted(factorint(I.norm)):
        for P in split_prime(I.field, p).primes:
            e = 0
            while divides(P, rest):
                rest = ideal_div_exact(rest, P)
                e += 1
            if e:
                out.append((P, e))
    assert rest.is_unit, f"factorization of {I} left {rest}"
    out.sort(key=lambda pe: pe[0].sort_key())
    return tuple(out)


def reassemble(field: FieldDesc, fac: Iterable[tuple[Ideal, int]]) -> Ideal:
    out = unit_ideal(field)
    for P, e in fac:
        out = ideal_mul(out, ideal_pow(P, e))
    return out


def valuation(P: Ideal, I: Ideal) -> int:
    for Q, e in factor_ideal(I):
        if Q == P:
            return e
    return 0


@lru_cache(maxsize=None)
def divisors_of(I: Ideal) -> tuple[Ideal, ...]:
    fac = factor_ideal(I)
    powers = [[ideal_pow(P, k) for k in range(e + 1)] for P, e in fac]
    out = []
    for combo in product(*powers):
        d = unit_ideal(I.field)
        for q in combo:
            d = ideal_mul(d, q)
        out.append(d)
    out.sort(key=Ideal.sort_key)
    assert len(out) == prod(e + 1 for _, e in fac)
    return tuple(out)


def prime_ideals_up_to(field: FieldDesc, bound: int) -> list[Ideal]:
    out = []
    for p in primerange(2, bound + 1):
        out.extend(P for P in split_prime(field, p).primes if P.norm <= bound)
    out.sort(key=Ideal.sort_key)
    return out


def ideals_up_to_norm(field: FieldDesc, bound: int, include_unit: bool = False) -> list[Ideal]:
    """All nonzero ideals of norm <= bound, ordered by (norm, HNF)."""
    primes = prime_ideals_up_to(field, bound)
    out: list[Ideal] = []

    def extend(start: int, current: Ideal):
        for i in range(start, len(primes)):
            P = primes[i]
            if current.norm * P.norm > bound:
                continue
            nxt = ideal_mul(current, P)
            out.append(nxt)
            extend(i, nxt)

    unit = unit_ideal(field)
    if include_unit:
        out.append(unit)
    extend(0, unit)
    out.sort(key=Ideal.sort_key)
    return out


# -- text formats ----------------------------------------------------------------

def parse_element(text: str) -> Element:
    s = text.replace(" ", "")
    m = re.fullmatch(r"(?:([+-]?\d+)(?=[+-]|$))?(?:([+-]?\d*)\*?w)?", s)
    if not s or not m:
        raise IdealError(f"cannot parse element {text!r}")
    x = int(m.group(1)) if m.group(1) else 0
    ycoef = m.group(2)
    if ycoef is None:
        y = 0
    elif ycoef in ("", "+"):
        y = 1
    elif ycoef == "-":
        y = -1
    else:
        y = int(ycoef)
    return Element(x, y)


def parse_ideal(field: FieldDesc, text: str) -> Ideal:
    s = text.strip()
    try:
        if s.startswith("hnf:"):
            a, b, c = (int(t) for t in s[4:].split(","))
            return Ideal(field, a, b, c)
        if s.startswith("gen:"):
            return ideal_from_generators(field, [parse_element(t) for t in s[4:].split(";")])
        n = int(s)
    except IdealError:
        raise
    except ValueError as exc:
        raise IdealError(f"cannot parse ideal {text!r}") from exc
    if n < 0:
        raise IdealError(f"negative ideal {n}")
    return principal(field, n)
