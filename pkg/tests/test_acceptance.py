"""Top-level acceptance criteria, one test and one printed verdict line each.

Each test prints `criterion N: PASS/FAIL - summary` on the real stdout (so
the line shows up even under pytest's capture) and then asserts.  Everything
is exact: dimensions, matrices, and class representatives are compared for
equality, never approximately.
"""

from __future__ import annotations

import random

import numpy as np

from conftest import (
    compose_anticommutator,
    homotopy_twist,
    map_from_terms,
    random_bipartite,
    random_homotopy_terms,
)
from pearlgysin import gf2
from pearlgysin.bundle import (
    TwistTerm,
    ambient_variant,
    build_bundle_complex,
    bundle_ses,
    classical_gysin,
    connecting_map,
    euler_class,
    long_exact_sequence,
)
from pearlgysin.chains import Cochain
from pearlgysin.complexes import build_complex, check_d_squared, cohomology
from pearlgysin.errors import TwistNotCocycle
from pearlgysin.positive import (
    injectivity_window,
    periodicity_check,
    positive_bundle,
    positive_complex,
    sigma_euler_check,
    sigma_map,
)
from pearlgysin.products import delta_equals_mult_eF, check_lifted_unit, check_product_lift, invertibility
from pearlgysin.snake import induced_map


def _report(num: int, ok: bool, summary: str, capsys) -> None:
    with capsys.disabled():
        print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} - {summary}")
    assert ok, f"criterion {num}: {summary}"


def _bundles(corpus):
    for name, ds in corpus.items():
        yield name, ds, build_bundle_complex(build_complex(ds.pearl), ds.twist or [])


def test_criterion_1_structural_suite(corpus, capsys):
    failures = []
    for name, ds, bundle in _bundles(corpus):
        ses = bundle_ses(bundle)
        les = long_exact_sequence(bundle)
        for label, ok in [
            ("d^2 = 0", check_d_squared(bundle.base).ok),
            ("twisted d^2 = 0", check_d_squared(bundle.total).ok),
            ("i and p are chain maps", ses.check_chain_maps().ok),
            ("im(i) = ker(p)", ses.check_chain_exactness().ok),
            ("LES exact at every node", les.ok() and les.chain_checks.ok),
        ]:
            if not ok:
                failures.append(f"{name}: {label}")
    _report(
        1,
        not failures,
        f"d^2, twisted d^2, chain maps, im(i)=ker(p), LES exact on "
        f"{len(corpus)}/{len(corpus)} datasets"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_2_clifford_torus(corpus, capsys):
    failures = []
    for name in ("clifford_torus_1", "clifford_torus_2"):
        ds = corpus[name]
        bundle = build_bundle_complex(build_complex(ds.pearl), ds.twist)
        table = cohomology(bundle.base)
        e = euler_class(bundle)
        _, t_unit = table.coords(bundle.base.unit.shift(1), 0)
        if str(e) != "m*t" or not (e.coords == t_unit).all():
            failures.append(f"{name}: e_F = {e} != [t*unit]")
        les = long_exact_sequence(bundle)
        if not les.gamma_vanishes():
            failures.append(f"{name}: QH(total) != 0")
        delta = connecting_map(bundle, table)
        for r in range(2):
            mat = delta.matrices[r]
            if mat.shape[0] != mat.shape[1] or gf2.rank(mat) != mat.shape[0]:
                failures.append(f"{name}: delta not iso at residue {r}")
        amb = ambient_variant(bundle)
        if not euler_class(amb).is_zero():
            failures.append(f"{name}: ambient Euler class nonzero")
        les_m = long_exact_sequence(amb)
        for k in range(2):
            want = table.dim(k % 2) + table.dim((k - 1) % 2)
            if les_m.gamma_dims[k] != want:
                failures.append(f"{name}: dim QH_M^{k} = {les_m.gamma_dims[k]} != {want}")
    _report(
        2,
        not failures,
        "Clifford torus: e_F = [t*unit], QH(total) = 0, delta iso in every "
        "degree, ambient e'_F = 0 with wide total space"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_3_projective_spaces(corpus, capsys):
    failures = []
    frozen_inverse = {"rp2": "a1*t^-1", "rp3": "a2*t^-1"}
    for name in ("rp2", "rp3"):
        ds = corpus[name]
        n = ds.pearl.N
        cx = build_complex(ds.pearl)
        table = cohomology(cx)
        betti = ds.pearl.betti_hint
        collapsed = [
            sum(b for i, b in enumerate(betti) if i % n == k) for k in range(n)
        ]
        got = [table.dim(k) for k in range(n)]
        if got != collapsed:
            failures.append(f"{name}: QH dims {got} != collapsed Betti {collapsed}")
        if not sigma_euler_check(ds.pearl, ds.twist).ok:
            failures.append(f"{name}: sigma(e_F+) != classical Euler class")
        pos = positive_bundle(ds.pearl, ds.twist)
        sm = sigma_map(pos.base)
        _, vec = sm.positive_table.coords(pos.twist_map(pos.base.unit), 2)
        img = gf2.matmul(sm.matrices[2], vec[:, None])[:, 0]
        if not img.any():
            failures.append(f"{name}: classical Euler class vanishes")
        e = euler_class(build_bundle_complex(cx, ds.twist))
        inv = invertibility(ds.product, cx, e.rep, table)
        inv_str = cx.format(inv.rep)
        if inv_str != frozen_inverse[name]:
            failures.append(f"{name}: inverse {inv_str} != {frozen_inverse[name]}")
    _report(
        3,
        not failures,
        "RP^2 and RP^3: QH dims match Z/N-collapsed Betti numbers, "
        "sigma(e_F) = e != 0, e_F invertible"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_4_classical_gysin_oracles(corpus, capsys):
    oracles = {"hopf": [1, 0, 0, 1], "trivial_t2": [1, 3, 3, 1]}
    failures = []
    for name, want in oracles.items():
        ds = corpus[name]
        bundle = build_bundle_complex(build_complex(ds.pearl), ds.twist)
        rep = classical_gysin(bundle)
        got = [rep.total_dims.get(k, 0) for k in range(len(want))]
        if got != want or not rep.ok():
            failures.append(f"{name}: total space dims {got} != {want}")
    _report(
        4,
        not failures,
        "classical total spaces: hopf -> (1,0,0,1), trivial_t2 -> (1,3,3,1)"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_5_snake_equals_closed_form(corpus, capsys):
    failures = []
    compared = 0
    for name, ds, bundle in _bundles(corpus):
        n = bundle.base.step
        ses = bundle_ses(bundle)
        # ConnectingMap.apply asserts snake lift == closed form on every
        # basis cocycle while the matrices are built.
        delta = connecting_map(bundle)
        for r in range(n):
            generic = ses.connecting((r + 1) % n)
            if not np.array_equal(generic, delta.matrices[r]):
                failures.append(f"{name}: residue {r}")
            compared += 1
    _report(
        5,
        not failures and compared > 0,
        f"generic pivot connecting map equals closed-form twist on all "
        f"{compared} residue matrices across {len(corpus)} datasets"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_6_delta_is_multiplication_by_euler(corpus, capsys):
    failures = []
    with_product = 0
    for name, ds, bundle in _bundles(corpus):
        if ds.product is None:
            continue
        with_product += 1
        table = cohomology(bundle.base)
        for chk in (
            delta_equals_mult_eF(bundle, ds.product, table),
            check_product_lift(ds.product, bundle),
            check_lifted_unit(ds.product, bundle),
        ):
            if not chk.ok:
                failures.append(f"{name}: {chk.name}: {chk.details}")
    _report(
        6,
        not failures and with_product >= 5,
        f"delta(a) = a*e_F = e_F*a and the three chain-level lifted product "
        f"identities hold on {with_product} datasets with product data"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_7_ambient_relations(corpus, capsys):
    failures = []
    even = 0
    for name, ds, bundle in _bundles(corpus):
        n = bundle.base.step
        if n % 2:
            continue
        even += 1
        half = n // 2
        amb = ambient_variant(bundle)

        def rescale(c: Cochain) -> Cochain:
            return Cochain({g: frozenset(e * half for e in exps) for g, exps in c.items()})

        # chain identity: T_M(g) = rescaled T_W(g) + q*g for every generator
        for g in bundle.base.generators:
            want = rescale(bundle.twist_map(Cochain.term(g.id))) + Cochain.term(g.id, 1)
            if amb.twist_map(Cochain.term(g.id)) != want:
                failures.append(f"{name}: chain identity fails on {g.id}")

        # class identity: e'_F = rescaled e_F + q*unit
        table_m = cohomology(amb.base)
        e_amb = euler_class(amb)
        want = rescale(euler_class(bundle).rep) + bundle.base.unit.shift(1)
        _, want_coords = table_m.coords(want, 2 % amb.base.step)
        if not (want_coords == e_amb.coords).all():
            failures.append(f"{name}: class identity e'_F != e_F + q")

        # matrix identity: delta_M == induced matrix of rescaled T_W + q*id
        delta_m = connecting_map(amb, table_m)
        step = amb.base.step
        z2 = table_m.z2
        for r in range(step):
            tgt = (r + 2) % step
            cols, rows = z2.spaces[r], z2.spaces[tgt]
            pos = {h: i for i, h in enumerate(rows)}
            mat = gf2.zeros(len(rows), len(cols))
            for j, gid in enumerate(cols):
                image = rescale(bundle.twist_map(Cochain.term(gid))) + Cochain.term(gid, 1)
                for h, exps in image.items():
                    if len(exps) % 2:
                        mat[pos[h], j] ^= 1
            induced = induced_map(table_m.quotients[r], table_m.quotients[tgt], mat)
            if not np.array_equal(induced, delta_m.matrices[r]):
                failures.append(f"{name}: delta_M != delta_W + q at residue {r}")
    _report(
        7,
        not failures and even >= 5,
        f"ambient relations delta_M = delta_W + q and e'_F = e_F + q hold as "
        f"matrices and classes on all {even} even-period datasets"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_8_positive_sigma_ladder(corpus, ladder_reports, capsys):
    failures = []
    for name, ds in corpus.items():
        comparison, theta = ladder_reports[name]
        pos = positive_complex(ds.pearl)
        sm = sigma_map(pos)
        for label, ok in [
            ("sigma chain map", sm.chain_check.ok),
            ("comparison squares", comparison.ok()),
            ("sigma injective in [0, N)", injectivity_window(pos, sm).ok),
            ("theta ladder incl. theta(e_F+) = e_F", theta.ok()),
        ]:
            if not ok:
                failures.append(f"{name}: {label}")
    _report(
        8,
        not failures,
        "positive theory: sigma chain map, commuting comparison squares, "
        "injectivity below the period, theta carries e_F+ to e_F on all datasets"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )


def test_criterion_9_randomized_properties(capsys):
    rng = random.Random(31415926)
    trials = failures = 0

    for trial in range(350):  # homotopy perturbations keep the twist valid
        trials += 1
        data = random_bipartite(rng, rng.choice([2, 3, 4]), f"acc_h{trial}")
        twist = homotopy_twist(data, random_homotopy_terms(rng, data))
        try:
            bundle = build_bundle_complex(build_complex(data), twist)
            if not check_d_squared(bundle.total).ok:
                failures += 1
        except TwistNotCocycle:
            failures += 1

    rejected = 0
    for trial in range(350):  # non-commuting twists are rejected, precisely
        trials += 1
        data = random_bipartite(rng, rng.choice([2, 3, 4]), f"acc_r{trial}")
        twist = []
        for src in data.generators:
            for tgt in data.generators:
                diff = src.index + 2 - tgt.index
                if diff % data.N == 0 and diff >= 0 and rng.random() < 0.35:
                    twist.append(TwistTerm(tgt.id, src.id, diff // data.N, 1))
        d_map = map_from_terms([(t.x, t.y, t.mu_bar) for t in data.diff_terms if t.count % 2])
        t_map = map_from_terms([(t.x, t.y, t.mu_bar) for t in twist])
        comm = compose_anticommutator(d_map, t_map, [g.id for g in data.generators])
        try:
            build_bundle_complex(build_complex(data), twist)
            if comm:
                failures += 1
        except TwistNotCocycle as exc:
            rejected += 1
            if {p[0] for p in exc.pairs} != set(comm):
                failures += 1

    for trial in range(350):  # dimensions are invariant under relabeling
        trials += 1
        data = random_bipartite(rng, rng.choice([2, 3, 4]), f"acc_l{trial}")
        names = {g.id: f"z{i}_{g.id}" for i, g in enumerate(data.generators)}
        from pearlgysin.complexes import DiffTerm, Generator, PearlData

        gens = [Generator(names[g.id], g.index) for g in data.generators]
        rng.shuffle(gens)
        other = PearlData(
            "relabeled",
            data.N,
            gens,
            [DiffTerm(names[t.x], names[t.y], t.mu_bar, t.count) for t in data.diff_terms],
            unit=[names[u] for u in data.unit],
        )
        ta, tb = cohomology(build_complex(data)), cohomology(build_complex(other))
        if [ta.dim(k) for k in range(data.N)] != [tb.dim(k) for k in range(data.N)]:
            failures += 1

    _report(
        9,
        failures == 0 and trials >= 1000 and rejected >= 30,
        f"{trials} seeded randomized trials (homotopy twists accepted, "
        f"non-commuting twists rejected [{rejected} rejections], relabeling "
        f"invariance), {failures} failures",
        capsys,
    )


def test_criterion_10_two_periodicity(corpus, capsys):
    failures = []
    applicable = 0
    for name, ds, bundle in _bundles(corpus):
        les = long_exact_sequence(bundle)
        if not les.gamma_vanishes():
            continue
        applicable += 1
        n = bundle.base.step
        table = cohomology(bundle.base)
        verdict = periodicity_check(
            {k: table.dim(k) for k in range(n)}, n, gamma_vanishes=True
        )
        if not verdict.ok:
            failures.append(f"{name}: {verdict.details}")
    _report(
        10,
        not failures and applicable >= 4,
        f"dim QH^k = dim QH^(k+2) on all {applicable} datasets whose bundle "
        "cohomology vanishes"
        + (f"; failures: {failures}" if failures else ""),
        capsys,
    )
