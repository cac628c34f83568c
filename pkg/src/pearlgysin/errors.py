"""Exception taxonomy shared across the package."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error this package raises on purpose."""


class RingMismatch(EngineError):
    """Two elements (or an element and a context) disagree about the ring."""


class UnknownGenerator(EngineError):
    """A term references a generator id that the data never declared."""

    def __init__(self, gen_id: str, where: str = ""):
        self.gen_id = gen_id
        suffix = f" in {where}" if where else ""
        super().__init__(f"unknown generator {gen_id!r}{suffix}")


class DegreeViolation(EngineError):
    """A term breaks its degree law.  Carries the offending term."""

    def __init__(self, term, message: str):
        self.term = term
        super().__init__(f"{message}: {term}")


class TwistDegreeViolation(DegreeViolation):
    """A twist term breaks index(x) + mu_bar*N == index(y) + 2."""


class TwistNotCocycle(EngineError):
    """The twist fails to commute with the differential.

    `pairs` lists the (source, target, exponents) entries of
    twist o d + d o twist that are nonzero.
    """

    def __init__(self, pairs):
        self.pairs = list(pairs)
        shown = ", ".join(f"{src}->{tgt}" for src, tgt, _ in self.pairs[:6])
        more = "" if len(self.pairs) <= 6 else f" (+{len(self.pairs) - 6} more)"
        super().__init__(f"twist does not commute with d; nonzero at {shown}{more}")


class NotCocycle(EngineError):
    """An operation that needs a cocycle got a cochain with nonzero d."""


class NotInvertible(EngineError):
    """A class has no two-sided inverse in the cohomology ring."""


class SchemaError(EngineError):
    """A dataset file violates the JSON schema.  Carries a field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
