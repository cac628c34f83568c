"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own linear algebra:
ranks are computed with integer bitmasks, and the Laurent-coefficient
cohomology oracle builds its matrices straight from the raw terms over an
honest integer-degree window instead of the package's Z/N collapse.
"""

from __future__ import annotations

import random

import pytest

from pearlgysin import io as dio
from pearlgysin.bundle import TwistTerm
from pearlgysin.complexes import DiffTerm, Generator, PearlData

# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def corpus() -> dict[str, dio.DatasetFile]:
    return {name: dio.load_bundled(name) for name in dio.BUNDLED}


@pytest.fixture(scope="session")
def ladder_reports(corpus):
    """Comparison and theta ladders for every bundled dataset, computed once."""
    from pearlgysin import positive

    out = {}
    for name, ds in corpus.items():
        twist = ds.twist if ds.twist is not None else []
        out[name] = (
            positive.comparison_ladder(ds.pearl, twist),
            positive.theta_ladder(ds.pearl, twist),
        )
    return out


# ---------------------------------------------------------------------------
# independent GF(2) rank via integer bitmasks
# ---------------------------------------------------------------------------


def bitmask_rank(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for x in rows:
        while x:
            h = x.bit_length()
            if h in pivots:
                x ^= pivots[h]
            else:
                pivots[h] = x
                rank += 1
                break
    return rank


# ---------------------------------------------------------------------------
# Laurent-coefficient cohomology over an integer window (independent oracle)
# ---------------------------------------------------------------------------


def lambda_windowed_dims(data: PearlData, margin: int = 1) -> dict[int, int]:
    """dim QH^k for k in [0, N), from the honest Z-graded Laurent complex.

    Basis elements are generator-times-t-power pairs (g, j) of degree
    index(g) + j*N, kept inside a window wide enough that every degree in
    the central period [0, N) sees its full incoming and outgoing maps.
    """
    n = data.N
    index = {g.id: g.index for g in data.generators}
    lo = min(index.values()) - (margin + 1) * n
    hi = max(index.values()) + (margin + 2) * n

    basis: dict[int, list[tuple[str, int]]] = {}
    for g in data.generators:
        j = -((index[g.id] - lo) // n)
        while index[g.id] + j * n < hi:
            d = index[g.id] + j * n
            if d >= lo:
                basis.setdefault(d, []).append((g.id, j))
            j += 1
    pos = {d: {b: i for i, b in enumerate(row)} for d, row in basis.items()}

    by_source: dict[str, list[DiffTerm]] = {}
    for t in data.diff_terms:
        if t.count % 2:
            by_source.setdefault(t.y, []).append(t)

    def matrix_cols(d: int) -> list[int]:
        cols = []
        target = pos.get(d + 1, {})
        for gid, j in basis.get(d, []):
            col = 0
            for t in by_source.get(gid, []):
                key = (t.x, j + t.mu_bar)
                if key in target:
                    col |= 1 << target[key]
            cols.append(col)
        return cols

    dims = {}
    for k in range(n):
        dim_k = len(basis.get(k, []))
        rank_out = bitmask_rank(matrix_cols(k))
        rank_in = bitmask_rank(matrix_cols(k - 1))
        dims[k] = dim_k - rank_out - rank_in
    return dims


# ---------------------------------------------------------------------------
# random complexes with d^2 = 0 by construction
# ---------------------------------------------------------------------------


def random_bipartite(rng: random.Random, n: int, name: str = "synthetic") -> PearlData:
    """A unit dot, a few free dots, and a random source-to-sink differential.

    Sources never appear as targets and sinks map to zero, so d^2 = 0 holds
    for any bipartite term set; the matrix itself is arbitrary.
    """
    gens = [Generator("u0", 0)]
    for i in range(rng.randrange(0, 3)):
        gens.append(Generator(f"dot{i}", rng.randrange(-2, 2 * n + 2)))
    sinks = [Generator(f"snk{i}", rng.randrange(-2, 2 * n + 2)) for i in range(rng.randrange(1, 4))]
    sources = [Generator(f"src{i}", rng.randrange(-2, 2 * n + 2)) for i in range(rng.randrange(1, 4))]
    gens += sinks + sources
    terms = []
    for s in sources:
        for t in sinks:
            diff = s.index + 1 - t.index
            if diff % n == 0 and diff >= 0 and rng.random() < 0.6:
                terms.append(DiffTerm(t.id, s.id, diff // n, 1))
    return PearlData(name, n, gens, terms, unit=["u0"])


def random_homotopy_terms(
    rng: random.Random, data: PearlData, density: float = 0.4
) -> list[tuple[str, str, int]]:
    """Random degree-law-respecting (target, source, exponent) triples for a
    degree-(+1 - mu*N) map h, the shape a differential term has."""
    out = []
    for src in data.generators:
        for tgt in data.generators:
            diff = src.index + 1 - tgt.index
            if diff % data.N == 0 and diff >= 0 and rng.random() < density:
                out.append((tgt.id, src.id, diff // data.N))
    return out


# symbolic map algebra on plain dicts: images are {target: set(exponents)}


def map_from_terms(terms) -> dict[str, dict[str, set[int]]]:
    images: dict[str, dict[str, set[int]]] = {}
    for tgt, src, mu in terms:
        exps = images.setdefault(src, {}).setdefault(tgt, set())
        exps.symmetric_difference_update({mu})
    return images


def apply_map(images: dict[str, dict[str, set[int]]], vec: dict[str, set[int]]):
    out: dict[str, set[int]] = {}
    for gid, exps in vec.items():
        for tgt, mus in images.get(gid, {}).items():
            acc = out.setdefault(tgt, set())
            for e in exps:
                for m in mus:
                    acc.symmetric_difference_update({e + m})
    return {k: v for k, v in out.items() if v}


def compose_anticommutator(f, g, gen_ids):
    """(f o g + g o f)(generator) for each generator, as plain dicts."""
    out = {}
    for gid in gen_ids:
        one = {gid: {0}}
        a = apply_map(f, apply_map(g, one))
        b = apply_map(g, apply_map(f, one))
        acc: dict[str, set[int]] = {}
        for part in (a, b):
            for tgt, exps in part.items():
                cur = acc.setdefault(tgt, set())
                cur.symmetric_difference_update(exps)
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[gid] = acc
    return out


def homotopy_twist(data: PearlData, h_terms) -> list[TwistTerm]:
    """T = d o h + h o d as explicit twist terms (always commutes with d)."""
    d_map = map_from_terms([(t.x, t.y, t.mu_bar) for t in data.diff_terms if t.count % 2])
    h_map = map_from_terms(h_terms)
    terms = []
    for g in data.generators:
        one = {g.id: {0}}
        img: dict[str, set[int]] = {}
        for part in (apply_map(d_map, apply_map(h_map, one)), apply_map(h_map, apply_map(d_map, one))):
            for tgt, exps in part.items():
                cur = img.setdefault(tgt, set())
                cur.symmetric_difference_update(exps)
        for tgt, exps in img.items():
            for e in sorted(exps):
                terms.append(TwistTerm(tgt, g.id, e, 1))
    return terms
