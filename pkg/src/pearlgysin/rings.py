"""Graded coefficient rings over Z2: Laurent polynomials in one variable.

Three kinds share one element representation:

* ``laurent``  -- Z2[t^-1, t], one generator t of degree N (N = the minimal
  positive grading step of the theory the ring serves);
* ``positive`` -- Z2[t], the nonnegative part of the above;
* ``ambient``  -- Z2[q^-1, q] with |q| = 2, the ring the bundle total space
  carries.  Only reachable from a laurent ring whose N is even, via
  ``to_ambient`` (t maps to q^(N/2)).

An element is a finite set of exponents: over Z2 a polynomial is exactly the
set of its monomials, addition is symmetric difference and multiplication is
convolution with parity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RingMismatch

LAURENT = "laurent"
POSITIVE = "positive"
AMBIENT = "ambient"
_KINDS = (LAURENT, POSITIVE, AMBIENT)


@dataclass(frozen=True)
class RingSpec:
    """Which ring we are in: its kind and the degree of its generator."""

    kind: str
    generator_degree: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.generator_degree < 1:
            raise ValueError("generator_degree must be >= 1")
        if self.kind == AMBIENT and self.generator_degree != 2:
            raise ValueError("ambient ring generator q has degree 2")

    @property
    def symbol(self) -> str:
        return "q" if self.kind == AMBIENT else "t"


def laurent_ring(n: int) -> RingSpec:
    return RingSpec(LAURENT, n)


def positive_ring(n: int) -> RingSpec:
    return RingSpec(POSITIVE, n)


def ambient_ring(base_degree: int) -> RingSpec:
    """The ambient ring reached from a laurent ring of even degree."""
    if base_degree % 2 != 0:
        raise ValueError(f"ambient ring needs an even base degree, got {base_degree}")
    return RingSpec(AMBIENT, 2)


def xor_convolve(a: frozenset[int], b: frozenset[int]) -> frozenset[int]:
    """Product of two exponent sets over Z2 (convolution modulo 2)."""
    out: set[int] = set()
    for i in a:
        for j in b:
            out ^= {i + j}
    return frozenset(out)


@dataclass(frozen=True)
class LaurentElement:
    """A ring element: the finite set of exponents with coefficient 1."""

    ring: RingSpec
    exponents: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "exponents", frozenset(self.exponents))
        if self.ring.kind == POSITIVE and any(e < 0 for e in self.exponents):
            raise ValueError(
                f"negative exponent in positive-kind element: {sorted(self.exponents)}"
            )

    def _same_ring(self, other: "LaurentElement") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"cannot combine {self.ring} with {other.ring}")

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        self._same_ring(other)
        return LaurentElement(self.ring, self.exponents ^ other.exponents)

    def __mul__(self, other: "LaurentElement") -> "LaurentElement":
        # For the positive kind the result is automatically valid: sums of
        # nonnegative exponents stay nonnegative.
        self._same_ring(other)
        return LaurentElement(self.ring, xor_convolve(self.exponents, other.exponents))

    def is_zero(self) -> bool:
        return not self.exponents

    def degrees(self) -> frozenset[int]:
        """Degrees of the monomials present (exponent times |generator|)."""
        n = self.ring.generator_degree
        return frozenset(e * n for e in self.exponents)

    def __str__(self) -> str:
        return format_exponents(self.exponents, self.ring.symbol)


def element(ring: RingSpec, exponents) -> LaurentElement:
    return LaurentElement(ring, frozenset(exponents))


def zero(ring: RingSpec) -> LaurentElement:
    return LaurentElement(ring, frozenset())


def one(ring: RingSpec) -> LaurentElement:
    return LaurentElement(ring, frozenset({0}))


def gen_power(ring: RingSpec, k: int) -> LaurentElement:
    return LaurentElement(ring, frozenset({k}))


def to_ambient(a: LaurentElement) -> LaurentElement:
    """Extend coefficients along t -> q^(N/2).  Needs laurent kind, even N."""
    if a.ring.kind != LAURENT:
        raise RingMismatch(f"to_ambient expects a laurent-kind element, got {a.ring.kind}")
    n = a.ring.generator_degree
    if n % 2 != 0:
        raise ValueError(f"to_ambient needs even generator degree, got {n}")
    half = n // 2
    return LaurentElement(ambient_ring(n), frozenset(e * half for e in a.exponents))


def sigma_specialize(a: LaurentElement) -> int:
    """Evaluation at t = 0 on the positive part: 1 iff exponent 0 occurs."""
    if a.ring.kind != POSITIVE:
        raise RingMismatch(
            f"sigma_specialize is defined on positive-kind elements, got {a.ring.kind}"
        )
    return int(0 in a.exponents)


def format_exponents(exponents: frozenset[int], symbol: str = "t") -> str:
    """Stable text form of an exponent set, e.g. '1 + t + t^-2'."""
    if not exponents:
        return "0"
    parts = []
    for e in sorted(exponents):
        if e == 0:
            parts.append("1")
        elif e == 1:
            parts.append(symbol)
        else:
            parts.append(f"{symbol}^{e}")
    return " + ".join(parts)
