"""Pearl cochain complexes from combinatorial count data.

The input is purely combinatorial: generators with an integer index, plus
differential terms (x, y, mu_bar, count) meaning "dy contains count . x .
t^mu_bar".  Terms are only admissible on the dimension-zero locus, which
here is the degree law

    index(x) + mu_bar * N == index(y) + 1.

Nothing is assumed beyond the data: d^2 = 0 is a checkable verdict, not a
hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gf2
from .chains import Cochain, LinearMap, format_cochain
from .errors import DegreeViolation, EngineError, NotCocycle, UnknownGenerator
from .rings import AMBIENT, LAURENT, POSITIVE, RingSpec, laurent_ring
from .snake import Check, Z2Complex, periodic_succ, window_succ


@dataclass(frozen=True)
class Generator:
    id: str
    index: int


@dataclass(frozen=True)
class DiffTerm:
    """dy gains count * x * t^mu_bar."""

    x: str
    y: str
    mu_bar: int
    count: int = 1


def check_gen_id(gen_id: str) -> None:
    if not isinstance(gen_id, str) or not gen_id:
        raise EngineError(f"generator id must be a nonempty string, got {gen_id!r}")
    if "'" in gen_id:
        raise EngineError(
            f"generator id {gen_id!r} contains an apostrophe; those are reserved "
            "for the doubled bundle generators"
        )


@dataclass
class PearlData:
    """Raw combinatorial input for one complex."""

    name: str
    N: int
    generators: list[Generator]
    diff_terms: list[DiffTerm] = field(default_factory=list)
    unit: list[str] | None = None
    betti_hint: list[int] | None = None

    def index_map(self) -> dict[str, int]:
        return {g.id: g.index for g in self.generators}

    def validate(self) -> None:
        if self.N < 1:
            raise EngineError(f"N must be a positive integer, got {self.N}")
        seen: set[str] = set()
        for g in self.generators:
            check_gen_id(g.id)
            if g.id in seen:
                raise EngineError(f"duplicate generator id {g.id!r}")
            seen.add(g.id)
        idx = self.index_map()
        pairs: set[tuple[str, str]] = set()
        for t in self.diff_terms:
            if t.x not in idx:
                raise UnknownGenerator(t.x, "diff_terms")
            if t.y not in idx:
                raise UnknownGenerator(t.y, "diff_terms")
            if t.count not in (0, 1):
                raise EngineError(f"counts live in Z2; got {t.count} on {t}")
            if t.mu_bar < 0:
                raise DegreeViolation(t, "mu_bar must be nonnegative")
            if idx[t.x] + t.mu_bar * self.N != idx[t.y] + 1:
                raise DegreeViolation(
                    t,
                    f"index({t.x}) + mu_bar*{self.N} != index({t.y}) + 1",
                )
            # The degree law pins mu_bar for a given (x, y), so a repeated
            # pair is necessarily a data error.
            if (t.x, t.y) in pairs:
                raise EngineError(f"duplicate differential pair ({t.x!r}, {t.y!r})")
            pairs.add((t.x, t.y))
        if self.unit is not None:
            for gid in self.unit:
                if gid not in idx:
                    raise UnknownGenerator(gid, "unit")
                if idx[gid] != 0:
                    raise EngineError(
                        f"unit must sit in degree 0; {gid!r} has index {idx[gid]}"
                    )


class PearlComplex:
    """A built complex: ordered generators, ring, differential."""

    def __init__(
        self,
        ring: RingSpec,
        generators: Sequence[Generator],
        differential: LinearMap,
        unit: Cochain | None = None,
        name: str = "",
    ):
        self.ring = ring
        self.generators = list(generators)
        self.index = {g.id: g.index for g in self.generators}
        self.order = list(self.index)
        self.differential = differential
        self.unit = unit
        self.name = name

    @property
    def step(self) -> int:
        """Degree of the coefficient generator (grading period)."""
        return self.ring.generator_degree

    def d(self, c: Cochain) -> Cochain:
        return self.differential(c)

    def _index_of(self, g: str) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise UnknownGenerator(g, self.name or "complex") from None

    def degree_of(self, c: Cochain) -> int | None:
        """Total degree of a homogeneous cochain; None for zero."""
        degs = {
            self._index_of(g) + e * self.step
            for g, exps in c.items()
            for e in exps
        }
        if not degs:
            return None
        if len(degs) > 1:
            raise EngineError(f"cochain is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def residue_of(self, c: Cochain) -> int | None:
        """Degree mod step of a collapsed-homogeneous cochain; None for zero."""
        res = {self._index_of(g) % self.step for g in c.support()}
        if not res:
            return None
        if len(res) > 1:
            raise EngineError(f"cochain mixes residue classes {sorted(res)}")
        return res.pop()

    def is_cocycle(self, c: Cochain) -> bool:
        return not self.d(c)

    def format(self, c: Cochain) -> str:
        return format_cochain(c, self.ring.symbol, self.order)


def build_complex(data: PearlData, ring: RingSpec | None = None) -> PearlComplex:
    """Validate the data and assemble the complex over the given ring."""
    data.validate()
    if ring is None:
        ring = laurent_ring(data.N)
    if ring.kind in (LAURENT, POSITIVE) and ring.generator_degree != data.N:
        raise EngineError(
            f"ring generator degree {ring.generator_degree} != data N {data.N}"
        )
    images: dict[str, Cochain] = {}
    for t in data.diff_terms:
        if t.count == 0:
            continue
        images[t.y] = images.get(t.y, Cochain.zero()) + Cochain.term(t.x, t.mu_bar)
    unit = None
    if data.unit is not None:
        unit = Cochain({g: {0} for g in data.unit})
    return PearlComplex(ring, data.generators, LinearMap(images), unit, data.name)


def check_d_squared(cx: PearlComplex) -> Check:
    """Verdict on d o d = 0, listing every nonzero (source, target) entry."""
    square = cx.differential.then(cx.differential)
    failures = [
        f"d^2({src}) contains {tgt} with exponents {sorted(exps)}"
        for src, tgt, exps in square.entries()
    ]
    return Check("d squared vanishes", not failures, failures)


# ---------------------------------------------------------------------------
# collapse to the Z/N-graded complex (laurent and ambient kinds)
# ---------------------------------------------------------------------------


def collapse_to_periodic(cx: PearlComplex) -> Z2Complex:
    """Set t = 1 and grade by index mod N.

    Over a graded field the result computes the same cohomology, one Z/N
    class per degree; an independent windowed computation cross-checks this
    in the test suite.
    """
    n = cx.step
    spaces = {r: [g.id for g in cx.generators if g.index % n == r] for r in range(n)}
    pos = {r: {gid: i for i, gid in enumerate(spaces[r])} for r in range(n)}
    mats = {r: gf2.zeros(len(spaces[(r + 1) % n]), len(spaces[r])) for r in range(n)}
    for src, tgt, exps in cx.differential.entries():
        if len(exps) % 2 == 0:
            continue
        r = cx.index[src] % n
        mats[r][pos[(r + 1) % n][tgt], pos[r][src]] ^= 1
    return Z2Complex(spaces, mats, periodic_succ(n))


def windowed_complex(cx: PearlComplex, lo: int, hi: int) -> Z2Complex:
    """Honest Z-graded slice with coefficient exponents retained.

    Basis of degree d: pairs (g, k) with index(g) + k*step == d (k >= 0 for
    the positive kind).  Used for positive-coefficient cohomology and for
    classical (Morse) complexes via mu_bar = 0 truncations elsewhere.
    """
    nonneg = cx.ring.kind == POSITIVE
    spaces: dict[int, list[tuple[str, int]]] = {}
    for d in range(lo, hi + 1):
        basis = []
        for g in cx.generators:
            k, rem = divmod(d - g.index, cx.step)
            if rem == 0 and (k >= 0 or not nonneg):
                basis.append((g.id, k))
        spaces[d] = basis
    pos = {d: {lab: i for i, lab in enumerate(spaces[d])} for d in spaces}
    mats = {d: gf2.zeros(len(spaces.get(d + 1, [])), len(spaces[d])) for d in spaces}
    for src, tgt, exps in cx.differential.entries():
        for d in spaces:
            if (src_k := _exp_for(cx, src, d, nonneg)) is None:
                continue
            for e in exps:
                lab = (tgt, src_k + e)
                if d + 1 in pos and lab in pos[d + 1]:
                    mats[d][pos[d + 1][lab], pos[d][(src, src_k)]] ^= 1
    return Z2Complex(spaces, mats, window_succ)


def _exp_for(cx: PearlComplex, gid: str, degree: int, nonneg: bool) -> int | None:
    k, rem = divmod(degree - cx.index[gid], cx.step)
    if rem != 0 or (nonneg and k < 0):
        return None
    return k


def classical_complex(
    cx: PearlComplex, window: tuple[int, int] | None = None
) -> Z2Complex:
    """The mu_bar = 0 truncation as a plain Z-graded GF(2) complex."""
    degrees = sorted({g.index for g in cx.generators})
    lo, hi = (degrees[0], degrees[-1] + 1) if window is None else window
    spaces = {
        d: [g.id for g in cx.generators if g.index == d] for d in range(lo, hi + 1)
    }
    pos = {d: {gid: i for i, gid in enumerate(spaces[d])} for d in spaces}
    mats = {d: gf2.zeros(len(spaces.get(d + 1, [])), len(spaces[d])) for d in spaces}
    for src, tgt, exps in cx.differential.entries():
        if 0 not in exps:
            continue
        d = cx.index[src]
        if d in pos and d + 1 in pos and tgt in pos[d + 1]:
            mats[d][pos[d + 1][tgt], pos[d][src]] ^= 1
    return Z2Complex(spaces, mats, window_succ)


def morse_truncation(cx: PearlComplex) -> LinearMap:
    """The exponent-zero part of the differential."""
    images = {}
    for src, img in cx.differential.images.items():
        kept = Cochain({g: {0} for g, exps in img.items() if 0 in exps})
        if kept:
            images[src] = kept
    return LinearMap(images)


# ---------------------------------------------------------------------------
# cohomology tables
# ---------------------------------------------------------------------------


class CohomologyTable:
    """Dimensions, representatives and class coordinates, degree by degree."""

    def __init__(self, cx: PearlComplex, z2: Z2Complex, periodic: bool):
        self.cx = cx
        self.z2 = z2
        self.periodic = periodic
        self.quotients = z2.cohomology()

    def degrees(self) -> list:
        return list(self.z2.spaces)

    def dim(self, d) -> int:
        d = self._deg(d)
        return self.quotients[d].dim if d in self.quotients else 0

    def dims(self) -> dict:
        return {d: q.dim for d, q in self.quotients.items()}

    def total_dim(self) -> int:
        return sum(q.dim for q in self.quotients.values())

    def _deg(self, d):
        return d % self.cx.step if self.periodic else d

    def _label_cochain(self, label) -> Cochain:
        if self.periodic:
            return Cochain.term(label)
        gid, k = label
        return Cochain.term(gid, k)

    def representatives(self, d) -> list[Cochain]:
        d = self._deg(d)
        q = self.quotients[d]
        labels = self.z2.spaces[d]
        reps = []
        for j in range(q.dim):
            col = q.representatives[:, j]
            c = Cochain.zero()
            for i in range(len(labels)):
                if col[i]:
                    c = c + self._label_cochain(labels[i])
            reps.append(c)
        return reps

    def representative_at(self, residue: int, j: int, degree: int) -> Cochain:
        """Periodic representative pinned at an honest integer degree."""
        if not self.periodic:
            raise EngineError("degree pinning only applies to periodic tables")
        if degree % self.cx.step != residue % self.cx.step:
            raise EngineError("degree and residue class disagree")
        rep = self.representatives(residue)[j]
        return pin_at_degree(self.cx, rep, degree)

    def vector_of(self, c: Cochain, d=None):
        """(degree key, coordinate vector in the chain basis) for a cochain."""
        if self.periodic:
            r = self.cx.residue_of(c) if d is None else d % self.cx.step
            if r is None:
                raise EngineError("zero cochain has no residue; pass the degree")
            labels = self.z2.spaces[r]
            stray = [g for g in c.support() if g not in set(labels)]
            if stray:
                raise EngineError(
                    f"generator {stray[0]!r} does not live in residue class {r}"
                )
            vec = gf2.zeros(len(labels), 1)[:, 0]
            for i, gid in enumerate(labels):
                if len(c.coefficient(gid)) % 2:
                    vec[i] = 1
            return r, vec
        deg = self.cx.degree_of(c) if d is None else d
        if deg is None:
            raise EngineError("zero cochain has no degree; pass the degree")
        if deg not in self.z2.spaces:
            raise EngineError(f"degree {deg} is outside the computed window")
        labels = self.z2.spaces[deg]
        pos = {lab: i for i, lab in enumerate(labels)}
        vec = gf2.zeros(len(labels), 1)[:, 0]
        for g, exps in c.items():
            for e in exps:
                if (g, e) not in pos:
                    raise EngineError(f"term ({g}, t^{e}) outside degree {deg}")
                vec[pos[(g, e)]] ^= 1
        return deg, vec

    def coords(self, c: Cochain, d=None):
        """Cohomology-class coordinates of a cocycle; NotCocycle otherwise."""
        deg, vec = self.vector_of(c, d)
        try:
            return deg, self.quotients[deg].coords(vec)
        except gf2.NotInSpan as exc:
            raise NotCocycle(str(exc)) from exc

    def is_zero_class(self, c: Cochain, d=None) -> bool:
        _, coord = self.coords(c, d)
        return not coord.any()


def pin_at_degree(cx: PearlComplex, collapsed: Cochain, degree: int) -> Cochain:
    """Give a collapsed (exponent-0) cochain an honest degree via t-powers."""
    terms: dict[str, set[int]] = {}
    for g, exps in collapsed.items():
        if exps != frozenset({0}):
            raise EngineError("expected a collapsed representative (exponents 0)")
        k, rem = divmod(degree - cx.index[g], cx.step)
        if rem != 0:
            raise EngineError(
                f"generator {g} (index {cx.index[g]}) cannot sit in degree {degree}"
            )
        terms[g] = {k}
    return Cochain(terms)


def default_positive_window(cx: PearlComplex) -> tuple[int, int]:
    indices = [g.index for g in cx.generators]
    return min(0, min(indices)), max(indices) + 2 * cx.step


def cohomology(cx: PearlComplex, window: tuple[int, int] | None = None) -> CohomologyTable:
    """Cohomology of the complex.

    laurent / ambient kinds: Z/N-collapsed, one class per residue.
    positive kind: degreewise over a window (defaults to
    [min(0, min index), max index + 2N]); the tail of the default window is
    asserted to be t-shift stable.
    """
    if cx.ring.kind in (LAURENT, AMBIENT):
        return CohomologyTable(cx, collapse_to_periodic(cx), periodic=True)
    defaulted = window is None
    lo, hi = default_positive_window(cx) if defaulted else window
    table = CohomologyTable(cx, windowed_complex(cx, lo - 1, hi + 1), periodic=False)
    if defaulted:
        n = cx.step
        for d in range(hi - n + 1, hi + 1):
            if table.dim(d) != table.dim(d - n):
                raise EngineError(
                    f"positive cohomology not t-shift stable at degree {d}"
                )
    return table


def check_euler_balance(cx: PearlComplex) -> Check:
    """Rank-nullity bookkeeping over the graded field.

    Even N: alternating sums of chain and cohomology dimensions over the
    residue classes agree.  Odd N: total chain dimension minus twice the
    total rank of d equals the total cohomology dimension.
    """
    z2 = collapse_to_periodic(cx)
    table = z2.cohomology()
    n = cx.step
    ranks = sum(gf2.rank(z2.mats[r]) for r in range(n))
    if n % 2 == 0:
        chain = sum((-1) ** r * z2.dim(r) for r in range(n))
        homol = sum((-1) ** r * table[r].dim for r in range(n))
        ok = chain == homol
        detail = f"alternating sums: chain {chain}, cohomology {homol}"
    else:
        chain = sum(z2.dim(r) for r in range(n))
        homol = sum(table[r].dim for r in range(n))
        ok = chain - 2 * ranks == homol
        detail = f"chain {chain} - 2*{ranks} vs cohomology {homol}"
    return Check("euler characteristic balance", ok, [] if ok else [detail])
