"""Arithmetic in GF(2^m).

Elements are integers in ``[0, 2**m)`` in the polynomial basis: bit ``i`` of
the value is the coefficient of ``x**i``. Addition is XOR; multiplication is
carry-less multiplication reduced modulo a fixed irreducible polynomial.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DEGREE = 16

__all__ = [
    "FieldParams",
    "FieldElement",
    "field",
    "add",
    "mul",
    "from_bits",
    "to_bits",
    "is_irreducible",
    "smallest_irreducible",
    "clmul",
    "poly_mod",
]


def clmul(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, p: int) -> int:
    """Remainder of binary polynomial ``a`` modulo ``p``."""
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, f) == 0:
                return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(m: int) -> int:
    """Lexicographically smallest monic irreducible polynomial of degree m."""
    for poly in range(1 << m, 1 << (m + 1)):
        if is_irreducible(poly):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {m}")


@dataclass(frozen=True)
class FieldParams:
    """Defining data of GF(2^m).

    Parameters
    ----------
    m : int
        Bits per symbol, ``1 <= m <= 16``.
    poly : int, optional
        Bitmask of a degree-``m`` irreducible reduction polynomial. Defaults
        to the smallest irreducible of that degree.
    """

    m: int
    poly: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or not 1 <= self.m <= MAX_DEGREE:
            raise ValueError(f"m must be an integer in [1, {MAX_DEGREE}], got {self.m!r}")
        if self.poly == 0:
            object.__setattr__(self, "poly", smallest_irreducible(self.m))
        if self.poly.bit_length() - 1 != self.m:
            raise ValueError(f"poly {self.poly:#b} does not have degree {self.m}")
        if not is_irreducible(self.poly):
            raise ValueError(f"poly {self.poly:#b} is reducible over GF(2)")

    @property
    def q(self) -> int:
        return 1 << self.m

    def __repr__(self) -> str:
        return f"GF({self.q}, poly={self.poly:#b})"

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.q)]

    def check(self, value: int) -> int:
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of {self!r}")
        return value

    # Integer-level arithmetic; the vectorised paths in the simulator use these.

    def mul_int(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.poly)

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_int(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul_int(out, a)
            a = self.mul_int(a, a)
            e >>= 1
        return out

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow_int(a, self.q - 2)

    def mul_row(self, a: int) -> np.ndarray:
        """Lookup table ``row[b] = a * b`` over the whole field."""
        return _mul_row(self.m, self.poly, self.check(a))

    def mul_table(self) -> np.ndarray:
        """Full ``q x q`` multiplication table; only for ``m <= 8``."""
        if self.m > 8:
            raise ValueError("full multiplication table limited to m <= 8")
        return np.stack([self.mul_row(a) for a in range(self.q)])


@functools.lru_cache(maxsize=256)
def _mul_row(m: int, poly: int, a: int) -> np.ndarray:
    # Row of a*b built by repeated doubling of a: b -> sum of a*x^i over set bits.
    q = 1 << m
    powers = []
    t = a
    for _ in range(m):
        powers.append(t)
        t <<= 1
        if t >> m:
            t ^= poly
    b = np.arange(q, dtype=np.int64)
    row = np.zeros(q, dtype=np.int64)
    for i, p in enumerate(powers):
        row ^= np.where((b >> i) & 1, p, 0)
    row.setflags(write=False)
    return row


@functools.lru_cache(maxsize=None)
def field(m: int) -> FieldParams:
    """Default field of degree m (cached)."""
    return FieldParams(m)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldParams

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.field.check(self.value))

    def _same(self, other: object) -> FieldElement:
        if not isinstance(other, FieldElement):
            return NotImplemented  # type: ignore[return-value]
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other: FieldElement) -> FieldElement:
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.value ^ other.value, self.field)

    __sub__ = __add__

    def __neg__(self) -> FieldElement:
        return self

    def __mul__(self, other: FieldElement) -> FieldElement:
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field.mul_int(self.value, other.value), self.field)

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field.pow_int(self.value, e), self.field)

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inv_int(self.value), self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * self._same(other).inverse()

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value:#0{self.field.m + 2}b}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def from_bits(bits: Sequence[int], params: FieldParams) -> FieldElement:
    """Element whose ``x**i`` coefficient is ``bits[i]``."""
    bits = list(bits)
    if len(bits) != params.m:
        raise ValueError(f"expected {params.m} bits, got {len(bits)}")
    value = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i} is {b!r}, not 0 or 1")
        value |= int(b) << i
    return FieldElement(value, params)


def to_bits(a: FieldElement) -> tuple[int, ...]:
    """Inverse of :func:`from_bits`; bit ``i`` is the ``x**i`` coefficient."""
    return tuple((a.value >> i) & 1 for i in range(a.field.m))


def linear_combination(alphas: Iterable[FieldElement], values: Iterable[FieldElement]) -> FieldElement:
    terms = [a * w for a, w in zip(alphas, values, strict=True)]
    if not terms:
        raise ValueError("empty linear combination")
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out
