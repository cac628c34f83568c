"""Formal Z2-linear combinations of generators with Laurent coefficients.

A cochain is a finite sum  sum_g c_g . g  with c_g a nonempty set of
exponents (the coefficient in Z2[t^-1,t] written as its monomial set).  The
ring kind is carried by the complex, not here; this module is pure exponent
algebra.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .rings import xor_convolve

Coeff = frozenset


class Cochain:
    """Immutable formal sum; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, Iterable[int]] | None = None):
        clean: dict[str, frozenset[int]] = {}
        if terms:
            for g, exps in terms.items():
                s = frozenset(exps)
                if s:
                    clean[g] = s
        object.__setattr__(self, "terms", clean)

    @classmethod
    def term(cls, g: str, k: int = 0) -> "Cochain":
        return cls({g: {k}})

    @classmethod
    def zero(cls) -> "Cochain":
        return cls()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cochain) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((g, s) for g, s in self.terms.items()))

    def __add__(self, other: "Cochain") -> "Cochain":
        out = dict(self.terms)
        for g, s in other.terms.items():
            merged = out.get(g, frozenset()) ^ s
            if merged:
                out[g] = merged
            else:
                out.pop(g, None)
        res = Cochain()
        object.__setattr__(res, "terms", out)
        return res

    def shift(self, k: int) -> "Cochain":
        """Multiply by t^k."""
        if k == 0:
            return self
        return Cochain({g: frozenset(e + k for e in s) for g, s in self.terms.items()})

    def scale(self, coeff: frozenset[int]) -> "Cochain":
        """Multiply by a coefficient (exponent set)."""
        if not coeff:
            return Cochain()
        return Cochain({g: xor_convolve(s, coeff) for g, s in self.terms.items()})

    def coefficient(self, g: str) -> frozenset[int]:
        return self.terms.get(g, frozenset())

    def support(self) -> list[str]:
        return list(self.terms)

    def items(self) -> Iterator[tuple[str, frozenset[int]]]:
        return iter(self.terms.items())

    def rename(self, mapping: Mapping[str, str]) -> "Cochain":
        return Cochain({mapping.get(g, g): s for g, s in self.terms.items()})

    def __repr__(self) -> str:
        return f"Cochain({format_cochain(self)})"


class LinearMap:
    """A t-linear map given by the images of generators.

    Composition and sums stay in this representation, so commutators like
    twist o d + d o twist come out as explicit generator-to-cochain tables.
    """

    __slots__ = ("images",)

    def __init__(self, images: Mapping[str, Cochain] | None = None):
        clean = {g: c for g, c in (images or {}).items() if c}
        object.__setattr__(self, "images", clean)

    def image_of(self, g: str) -> Cochain:
        return self.images.get(g, Cochain.zero())

    def __call__(self, c: Cochain) -> Cochain:
        out = Cochain.zero()
        for g, coeff in c.items():
            img = self.images.get(g)
            if img is not None:
                out = out + img.scale(coeff)
        return out

    def then(self, other: "LinearMap") -> "LinearMap":
        """self followed by other."""
        return LinearMap({g: other(img) for g, img in self.images.items()})

    def __add__(self, other: "LinearMap") -> "LinearMap":
        keys = list(self.images)
        keys += [g for g in other.images if g not in self.images]
        return LinearMap({g: self.image_of(g) + other.image_of(g) for g in keys})

    def entries(self) -> Iterator[tuple[str, str, frozenset[int]]]:
        """All (source, target, exponents) triples, in stored order."""
        for g, img in self.images.items():
            for tgt, exps in img.items():
                yield g, tgt, exps

    def is_zero(self) -> bool:
        return not self.images


def format_cochain(
    c: Cochain, symbol: str = "t", order: Iterable[str] | None = None
) -> str:
    """Stable text form, e.g. 'm*t + a2'.  Ordering follows `order` if given."""
    if not c:
        return "0"
    gens = list(order) if order is not None else sorted(c.terms)
    parts = []
    for g in gens:
        for e in sorted(c.coefficient(g)):
            if e == 0:
                parts.append(g)
            elif e == 1:
                parts.append(f"{g}*{symbol}")
            else:
                parts.append(f"{g}*{symbol}^{e}")
    return " + ".join(parts)
