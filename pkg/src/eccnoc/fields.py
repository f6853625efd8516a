"""Finite-field arithmetic for GF(p) and GF(2^m).

Elements are immutable wrappers around Python ints.  For GF(p) the int is
the least nonnegative residue; for GF(2^m) bit i of the int is the
coefficient of z^i in the polynomial-basis representation, fully reduced
by the field's irreducible polynomial.  Every operation returns a
canonical value, so equality is plain int equality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import DivisionByZero, FieldMismatch, OracleBoundExceeded

_ENUMERATION_BOUND = 1 << 16

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# GF(2)[z] helpers on raw ints (bit i = coefficient of z^i)

def _pdeg(x: int) -> int:
    return x.bit_length() - 1


def _pmod(x: int, f: int) -> int:
    df = _pdeg(f)
    while _pdeg(x) >= df:
        x ^= f << (_pdeg(x) - df)
    return x


def _pmulmod(a: int, b: int, f: int) -> int:
    top = 1 << _pdeg(f)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= f
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for a GF(2) polynomial given as an int."""
    m = _pdeg(f)
    if m < 1:
        return False
    if m == 1:
        return True
    if not f & 1:
        return False  # divisible by z
    z = 0b10
    t = z
    for _ in range(m):
        t = _pmulmod(t, t, f)
    if t != z:
        return False
    for q in _prime_factors(m):
        t = z
        for _ in range(m // q):
            t = _pmulmod(t, t, f)
        if _pgcd(f, t ^ z) != 1:
            return False
    return True


# squaring in GF(2^m) interleaves a zero bit between adjacent coefficient
# bits; do it a byte at a time through a 256-entry table
_SPREAD = []
for _b in range(256):
    _s = 0
    for _i in range(8):
        if _b >> _i & 1:
            _s |= 1 << (2 * _i)
    _SPREAD.append(_s)
del _b, _s, _i


class FieldKind(enum.Enum):
    PRIME = "prime"
    BINARY = "binary"


@dataclass(frozen=True)
class FieldSpec:
    """A validated field description: GF(p) or GF(2^m).

    Use the `prime` / `binary` constructors; they reject composite moduli
    and reducible polynomials up front so arithmetic can assume a field.
    """

    kind: FieldKind
    modulus: int = 0          # p (prime fields only)
    degree: int = 0           # m (binary fields only)
    reduction_poly: int = 0   # monic irreducible of degree m (binary only)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        if p <= 3:
            raise ValueError(f"prime field modulus must exceed 3, got {p}")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        return cls(kind=FieldKind.PRIME, modulus=p)

    @classmethod
    def binary(cls, m: int, poly: int) -> "FieldSpec":
        if m < 2:
            raise ValueError(f"binary field degree must be at least 2, got {m}")
        if _pdeg(poly) != m:
            raise ValueError(
                f"reduction polynomial degree {_pdeg(poly)} does not match m={m}")
        if not poly & 1:
            raise ValueError("reduction polynomial has zero constant term")
        if not is_irreducible(poly):
            raise ValueError(f"reduction polynomial {poly:#x} is reducible")
        return cls(kind=FieldKind.BINARY, degree=m, reduction_poly=poly)

    # -- descriptive helpers ------------------------------------------------

    @property
    def bits(self) -> int:
        if self.kind is FieldKind.PRIME:
            return self.modulus.bit_length()
        return self.degree

    @property
    def order(self) -> int:
        if self.kind is FieldKind.PRIME:
            return self.modulus
        return 1 << self.degree

    @property
    def tag(self) -> str:
        if self.kind is FieldKind.PRIME:
            return f"GF({self.modulus})"
        return f"GF(2^{self.degree})"

    # -- element construction ----------------------------------------------

    def element(self, value: int) -> "FieldElement":
        """Wrap an int, reducing it to canonical form first."""
        if self.kind is FieldKind.PRIME:
            return FieldElement(self, value % self.modulus)
        if value < 0:
            raise ValueError("binary field elements are nonnegative bit vectors")
        return FieldElement(self, _pmod(value, self.reduction_poly))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def random_element(self, rng) -> "FieldElement":
        return FieldElement(self, rng.randrange(self.order))

    def elements(self) -> Iterator["FieldElement"]:
        """Yield every element; refuses fields beyond desk scale."""
        if self.order > _ENUMERATION_BOUND:
            raise OracleBoundExceeded(
                f"{self.tag} has {self.order} elements; enumeration is capped "
                f"at {_ENUMERATION_BOUND}")
        for v in range(self.order):
            yield FieldElement(self, v)

    # -- raw int arithmetic (values assumed canonical) ----------------------

    def _add(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            return (a + b) % self.modulus
        return a ^ b

    def _sub(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            return (a - b) % self.modulus
        return a ^ b

    def _neg(self, a: int) -> int:
        if self.kind is FieldKind.PRIME:
            return -a % self.modulus
        return a

    def _mul(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            return a * b % self.modulus
        top = 1 << self.degree
        f = self.reduction_poly
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= f
        return r

    def _sqr(self, a: int) -> int:
        if self.kind is FieldKind.PRIME:
            return a * a % self.modulus
        r = 0
        shift = 0
        while a:
            r |= _SPREAD[a & 0xFF] << shift
            a >>= 8
            shift += 16
        return _pmod(r, self.reduction_poly)

    def _inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self.tag}")
        if self.kind is FieldKind.PRIME:
            return pow(a, -1, self.modulus)
        # extended Euclid in GF(2)[z]; invariants g1*a = u, g2*a = v (mod f)
        u, v = a, self.reduction_poly
        g1, g2 = 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v, g1, g2 = v, u, g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return _pmod(g1, self.reduction_poly)


@dataclass(frozen=True)
class FieldElement:
    """A canonical element of a concrete field."""

    spec: FieldSpec
    value: int

    def __repr__(self) -> str:
        return f"{self.spec.tag}:{self.value:x}"

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return ff_add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return ff_sub(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return ff_mul(self, other)

    def __neg__(self) -> "FieldElement":
        return ff_neg(self)


def _same_spec(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldMismatch(f"operands live in {a.spec.tag} and {b.spec.tag}")
    return a.spec


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_spec(a, b)
    return FieldElement(spec, spec._add(a.value, b.value))


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_spec(a, b)
    return FieldElement(spec, spec._sub(a.value, b.value))


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_spec(a, b)
    return FieldElement(spec, spec._mul(a.value, b.value))


def ff_sqr(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec._sqr(a.value))


def ff_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec._inv(a.value))


def ff_neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec._neg(a.value))


class OpKind(enum.Enum):
    """The field-operation vocabulary tracked everywhere downstream."""

    ADD = "ADD"
    SUB = "SUB"
    MUL = "MUL"
    SQR = "SQR"
    INV = "INV"
    XFER = "XFER"


ARITH_KINDS = (OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.SQR, OpKind.INV)


class FieldOps:
    """Arithmetic facade the curve kernels are written against.

    Each call performs the plain field operation and, when a sink is
    attached, reports its OpKind so callers can meter work.  `const`
    introduces an input value (base-point coordinate, curve constant);
    the label only matters to backends that build graphs.
    """

    def __init__(self, spec: FieldSpec,
                 sink: Optional[Callable[[OpKind], None]] = None):
        self.spec = spec
        self.sink = sink

    def _note(self, kind: OpKind) -> None:
        if self.sink is not None:
            self.sink(kind)

    def add(self, a, b):
        self._note(OpKind.ADD)
        return ff_add(a, b)

    def sub(self, a, b):
        self._note(OpKind.SUB)
        return ff_sub(a, b)

    def mul(self, a, b):
        self._note(OpKind.MUL)
        return ff_mul(a, b)

    def sqr(self, a):
        self._note(OpKind.SQR)
        return ff_sqr(a)

    def inv(self, a):
        self._note(OpKind.INV)
        return ff_inv(a)

    def const(self, elem: FieldElement, label: str):
        return elem

    def is_zero(self, v) -> bool:
        return v.value == 0
