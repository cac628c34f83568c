"""Quantum products from structure-constant data, and what they satisfy.

`ProductData` lists counts (z, x, y, mu_bar, count): the product x * y
contains count . z . t^mu_bar.  The degree law is

    index(z) + mu_bar * N == index(x) + index(y).

Everything downstream is a verdict: the Leibniz rule at chain level,
associativity and unitality in cohomology, the lift of the product to the
bundle complex, the identity delta(alpha) = alpha * e_F = e_F * alpha, and
two-sided invertibility of classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .bundle import (
    BundleComplex,
    ConnectingMap,
    EulerClass,
    dprime,
    euler_class,
    map_i,
    map_p,
    prime,
)
from .chains import Cochain, LinearMap
from .complexes import CohomologyTable, PearlComplex, cohomology, pin_at_degree
from .errors import (
    DegreeViolation,
    EngineError,
    NotCocycle,
    NotInvertible,
    UnknownGenerator,
)
from .rings import xor_convolve
from .snake import Check, merge_checks


@dataclass(frozen=True)
class ProductTerm:
    """x * y gains count * z * t^mu_bar."""

    z: str
    x: str
    y: str
    mu_bar: int
    count: int = 1


@dataclass
class ProductData:
    terms: list[ProductTerm]
    unit: list[str] | None = None

    def validate(self, cx: PearlComplex) -> None:
        idx = cx.index
        triples: set[tuple[str, str, str]] = set()
        for t in self.terms:
            for gid in (t.z, t.x, t.y):
                if gid not in idx:
                    raise UnknownGenerator(gid, "product terms")
            if t.count not in (0, 1):
                raise EngineError(f"counts live in Z2; got {t.count} on {t}")
            if t.mu_bar < 0:
                raise DegreeViolation(t, "mu_bar must be nonnegative")
            if idx[t.z] + t.mu_bar * cx.step != idx[t.x] + idx[t.y]:
                raise DegreeViolation(
                    t,
                    f"index({t.z}) + mu_bar*{cx.step} != index({t.x}) + index({t.y})",
                )
            if (t.z, t.x, t.y) in triples:
                raise EngineError(
                    f"duplicate product triple ({t.z!r}, {t.x!r}, {t.y!r})"
                )
            triples.add((t.z, t.x, t.y))
        if self.unit is not None:
            for gid in self.unit:
                if gid not in idx:
                    raise UnknownGenerator(gid, "product unit")
                if idx[gid] != 0:
                    raise EngineError(
                        f"product unit must sit in degree 0; {gid!r} has index {idx[gid]}"
                    )

    def unit_cochain(self, cx: PearlComplex) -> Cochain:
        gens = self.unit if self.unit is not None else None
        if gens is None:
            if cx.unit is None:
                raise EngineError("no unit available for the product")
            return cx.unit
        return Cochain({g: {0} for g in gens})


class QuantumProduct:
    """A product bound to its complex, with the pair table precomputed."""

    def __init__(self, data: ProductData, cx: PearlComplex):
        data.validate(cx)
        self.data = data
        self.cx = cx
        self.pairs: dict[tuple[str, str], Cochain] = {}
        for t in data.terms:
            if not t.count:
                continue
            key = (t.x, t.y)
            self.pairs[key] = self.pairs.get(key, Cochain.zero()) + Cochain.term(
                t.z, t.mu_bar
            )

    def __call__(self, a: Cochain, b: Cochain) -> Cochain:
        out = Cochain.zero()
        for x, ca in a.items():
            for y, cb in b.items():
                img = self.pairs.get((x, y))
                if img is not None:
                    out = out + img.scale(xor_convolve(ca, cb))
        return out

    def unit(self) -> Cochain:
        return self.data.unit_cochain(self.cx)


def chain_product(data: ProductData, cx: PearlComplex, a: Cochain, b: Cochain) -> Cochain:
    return QuantumProduct(data, cx)(a, b)


def check_leibniz(data: ProductData, cx: PearlComplex) -> Check:
    """d(x*y) + dx*y + x*dy = 0 for every generator pair, at chain level."""
    prod = QuantumProduct(data, cx)
    d = cx.differential
    bad = []
    for gx in cx.order:
        x = Cochain.term(gx)
        for gy in cx.order:
            y = Cochain.term(gy)
            leak = d(prod(x, y)) + prod(d(x), y) + prod(x, d(y))
            if leak:
                bad.append(f"Leibniz fails on ({gx}, {gy}): {cx.format(leak)}")
    return Check("Leibniz rule", not bad, bad)


def _pinned_reps(table: CohomologyTable) -> list[tuple[int, int, Cochain]]:
    """All homology representatives pinned at degree = residue."""
    out = []
    for r in table.degrees():
        for j in range(table.dim(r)):
            out.append((r, j, table.representative_at(r, j, r)))
    return out


def check_homology_ring(
    data: ProductData, cx: PearlComplex, table: CohomologyTable | None = None
) -> Check:
    """Associativity and two-sided unitality on cohomology classes."""
    prod = QuantumProduct(data, cx)
    table = table if table is not None else cohomology(cx)
    unit = prod.unit()
    if cx.d(unit):
        return Check("homology ring", False, ["the unit is not a cocycle"])
    reps = _pinned_reps(table)
    n = cx.step
    bad = []
    for r, j, alpha in reps:
        left = prod(unit, alpha)
        right = prod(alpha, unit)
        for tag, val in (("1*x", left), ("x*1", right)):
            try:
                _, got = table.coords(val, r)
            except NotCocycle as exc:
                bad.append(f"{tag} not a cocycle on H^{r}[{j}]: {exc}")
                continue
            _, want = table.coords(alpha, r)
            if (got != want).any():
                bad.append(f"unit fails ({tag}) on H^{r}[{j}]")
    for ra, ja, a in reps:
        for rb, jb, b in reps:
            ab = prod(a, b)
            for rc, jc, c in reps:
                left = prod(ab, c)
                right = prod(a, prod(b, c))
                res = (ra + rb + rc) % n
                try:
                    _, lv = table.coords(left, res)
                    _, rv = table.coords(right, res)
                except NotCocycle as exc:
                    bad.append(
                        f"associativity product not a cocycle at "
                        f"H^{ra}[{ja}],H^{rb}[{jb}],H^{rc}[{jc}]: {exc}"
                    )
                    continue
                if (lv != rv).any():
                    bad.append(
                        f"associativity fails at H^{ra}[{ja}],H^{rb}[{jb}],H^{rc}[{jc}]"
                    )
    return Check("homology ring (associative, unital)", not bad, bad)


# ---------------------------------------------------------------------------
# the lifted product on the bundle complex
# ---------------------------------------------------------------------------


def lift_product(data: ProductData, bundle: BundleComplex) -> ProductData:
    """Structure constants on the doubled generators.

    (z'; x', y'), (z''; x'', y') and (z''; x', y'') inherit the base count;
    a pair of doubled generators contributes nothing.
    """
    terms = []
    for t in data.terms:
        if not t.count:
            continue
        terms.append(ProductTerm(prime(t.z), prime(t.x), prime(t.y), t.mu_bar, t.count))
        terms.append(
            ProductTerm(dprime(t.z), dprime(t.x), prime(t.y), t.mu_bar, t.count)
        )
        terms.append(
            ProductTerm(dprime(t.z), prime(t.x), dprime(t.y), t.mu_bar, t.count)
        )
    unit = [prime(g) for g in data.unit] if data.unit is not None else None
    return ProductData(terms, unit)


def check_product_lift(data: ProductData, bundle: BundleComplex) -> Check:
    """The three chain-level identities tying i, p and the lifted product."""
    base_prod = QuantumProduct(data, bundle.base)
    lifted = QuantumProduct(lift_product(data, bundle), bundle.total)
    i, p = map_i(bundle), map_p(bundle)
    bad = []
    for gx in bundle.base.order:
        x = Cochain.term(gx)
        for gy in bundle.base.order:
            y = Cochain.term(gy)
            if i(base_prod(x, y)) != lifted(i(x), i(y)):
                bad.append(f"i(x*y) != i(x)*i(y) on ({gx}, {gy})")
            for tag in (prime, dprime):
                xt = Cochain.term(tag(gx))
                if p(lifted(xt, i(y))) != base_prod(p(xt), y):
                    bad.append(f"p(x~*i(y)) != p(x~)*y on ({tag(gx)}, {gy})")
                yt = Cochain.term(tag(gy))
                if p(lifted(i(x), yt)) != base_prod(x, p(yt)):
                    bad.append(f"p(i(x)*y~) != x*p(y~) on ({gx}, {tag(gy)})")
    return Check("product lift identities", not bad, bad)


def check_lifted_unit(data: ProductData, bundle: BundleComplex) -> Check:
    """unit' acts as the unit on bundle cohomology classes."""
    lifted_data = lift_product(data, bundle)
    lifted = QuantumProduct(lifted_data, bundle.total)
    unit = lifted_data.unit_cochain(bundle.total)
    table = cohomology(bundle.total)
    bad = []
    for r, j, alpha in _pinned_reps(table):
        for tag, val in (("1'*x", lifted(unit, alpha)), ("x*1'", lifted(alpha, unit))):
            try:
                _, got = table.coords(val, r)
            except NotCocycle as exc:
                bad.append(f"{tag} not a cocycle on H^{r}[{j}]: {exc}")
                continue
            _, want = table.coords(alpha, r)
            if (got != want).any():
                bad.append(f"lifted unit fails ({tag}) on H^{r}[{j}]")
    return Check("lifted unit", not bad, bad)


# ---------------------------------------------------------------------------
# delta = multiplication by the Euler class
# ---------------------------------------------------------------------------


def delta_equals_mult_eF(
    bundle: BundleComplex, data: ProductData, table: CohomologyTable | None = None
) -> Check:
    """The connecting map is two-sided multiplication by e_F, as matrices."""
    delta = ConnectingMap(bundle, table)
    table = delta.table
    e = euler_class(bundle, delta)
    prod = QuantumProduct(data, bundle.base)
    n = bundle.base.step
    bad = []
    for r in table.degrees():
        tgt = (r + 2) % n
        cols_l, cols_r = [], []
        for j in range(table.dim(r)):
            alpha = table.representative_at(r, j, r)
            _, lv = table.coords(prod(alpha, e.rep), tgt)
            _, rv = table.coords(prod(e.rep, alpha), tgt)
            cols_l.append(lv)
            cols_r.append(rv)
        shape = (table.dim(tgt), table.dim(r))
        left = np.stack(cols_l, axis=1).astype(np.uint8) if cols_l else gf2.zeros(*shape)
        right = np.stack(cols_r, axis=1).astype(np.uint8) if cols_r else gf2.zeros(*shape)
        d_mat = delta.matrices[r]
        if (d_mat != left).any():
            bad.append(f"delta != (.)*e_F on residue {r}")
        if (d_mat != right).any():
            bad.append(f"delta != e_F*(.) on residue {r}")
    return Check("delta = multiplication by e_F (two-sided)", not bad, bad)


# ---------------------------------------------------------------------------
# invertibility
# ---------------------------------------------------------------------------


@dataclass
class Inverse:
    """A two-sided inverse: its residue class, coordinates and a representative."""

    residue: int
    coords: np.ndarray
    rep: Cochain
    degree: int


def invertibility(
    data: ProductData,
    cx: PearlComplex,
    target: Cochain,
    table: CohomologyTable | None = None,
) -> Inverse:
    """Two-sided inverse of a degree-2 class, or NotInvertible.

    Solves (target * x) = unit block-wise: the inverse of a homogeneous
    degree-2 class is homogeneous of degree -2, so only the residue class
    of -2 matters.  The right solve is checked against left multiplication.
    """
    prod = QuantumProduct(data, cx)
    table = table if table is not None else cohomology(cx)
    n = cx.step
    if table.total_dim() == 0:
        raise NotInvertible("total cohomology vanishes; no unit to invert against")
    unit = prod.unit()
    _, unit_coords = table.coords(unit, 0)
    if not unit_coords.any():
        raise NotInvertible("the unit class is zero")
    src = (-2) % n
    dim_src = table.dim(src)
    cols = []
    reps = [table.representative_at(src, j, src - n) for j in range(dim_src)]
    for rep in reps:
        _, col = table.coords(prod(target, rep), 0)
        cols.append(col)
    left_mat = (
        np.stack(cols, axis=1).astype(np.uint8) if cols else gf2.zeros(table.dim(0), 0)
    )
    x = gf2.solve(left_mat, unit_coords)
    if x is None:
        raise NotInvertible("no right inverse: the unit is not in the image")
    inv = Cochain.zero()
    for j in range(dim_src):
        if x[j]:
            inv = inv + reps[j]
    _, check_right = table.coords(prod(inv, target), 0)
    if (check_right != unit_coords).any():
        raise NotInvertible("right inverse is not a left inverse")
    return Inverse(residue=src, coords=x, rep=inv, degree=src - n)


# ---------------------------------------------------------------------------
# ambient module action and the disk-count formula
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmbientClass:
    id: str
    degree: int


@dataclass(frozen=True)
class ActionTerm:
    """a . g gains count * z * t^mu_bar (a an ambient class)."""

    z: str
    a: str
    g: str
    mu_bar: int
    count: int = 1


@dataclass
class ModuleActionData:
    ambient_classes: list[AmbientClass]
    action_terms: list[ActionTerm] = field(default_factory=list)

    def validate(self, cx: PearlComplex) -> None:
        degs: dict[str, int] = {}
        for a in self.ambient_classes:
            if not a.id or a.id in degs:
                raise EngineError(f"bad or duplicate ambient class id {a.id!r}")
            if a.degree < 0:
                raise EngineError(f"ambient class {a.id!r} has negative degree")
            degs[a.id] = a.degree
        idx = cx.index
        triples: set[tuple[str, str, str]] = set()
        for t in self.action_terms:
            if t.a not in degs:
                raise UnknownGenerator(t.a, "action terms (ambient class)")
            if t.z not in idx:
                raise UnknownGenerator(t.z, "action terms")
            if t.g not in idx:
                raise UnknownGenerator(t.g, "action terms")
            if t.count not in (0, 1):
                raise EngineError(f"counts live in Z2; got {t.count} on {t}")
            if t.mu_bar < 0:
                raise DegreeViolation(t, "mu_bar must be nonnegative")
            if idx[t.z] + t.mu_bar * cx.step != degs[t.a] + idx[t.g]:
                raise DegreeViolation(
                    t,
                    f"index({t.z}) + mu_bar*{cx.step} != deg({t.a}) + index({t.g})",
                )
            if (t.z, t.a, t.g) in triples:
                raise EngineError(f"duplicate action triple ({t.z!r},{t.a!r},{t.g!r})")
            triples.add((t.z, t.a, t.g))


def quantum_restriction(
    mad: ModuleActionData,
    cx: PearlComplex,
    ambient_id: str | None = None,
) -> Cochain:
    """r_L(c) = c . unit, the module action of an ambient class on the unit."""
    mad.validate(cx)
    if cx.unit is None:
        raise EngineError("quantum restriction needs the unit")
    if ambient_id is None:
        degree2 = [a.id for a in mad.ambient_classes if a.degree == 2]
        if len(degree2) != 1:
            raise EngineError(
                "pass ambient_id explicitly: need exactly one degree-2 ambient class"
            )
        ambient_id = degree2[0]
    out = Cochain.zero()
    unit_support = set(cx.unit.support())
    for t in mad.action_terms:
        if t.count and t.a == ambient_id and t.g in unit_support:
            out = out + Cochain.term(t.z, t.mu_bar)
    return out


def euler_from_disk_counts(
    entries: Sequence[tuple[str, int, int]], n: int, unit: Cochain
) -> Cochain:
    """e_F = (sum of nu(A) * <c, A>) . t . unit; only defined when N = 2.

    `entries` lists (class name, nu count, pairing value) per disk class.
    """
    if n != 2:
        raise EngineError(f"the disk-count formula needs N = 2, got N = {n}")
    total = sum(nu * pairing for _, nu, pairing in entries) % 2
    return unit.shift(1) if total else Cochain.zero()
