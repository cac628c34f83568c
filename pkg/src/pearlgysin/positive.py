"""Positive (polynomial) coefficients, the Morse specialization, and ladders.

Over Z2[t] the complex carries two comparison maps: sigma (kill every
positive power of t; lands in the Morse complex) and theta (include into
full Laurent coefficients).  Both are chain maps; on cohomology they give
the comparison ladders between the positive circle-bundle sequence, the
classical Gysin sequence, and the Laurent one.  Everything here is checked
at the matrix level, square by square.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2
from .bundle import (
    BundleComplex,
    TwistTerm,
    build_bundle_complex,
    classical_ses,
    dprime,
    euler_class,
    prime,
    shifted_copy,
)
from .chains import Cochain, LinearMap
from .complexes import (
    CohomologyTable,
    PearlComplex,
    PearlData,
    build_complex,
    classical_complex,
    cohomology,
    morse_truncation,
    windowed_complex,
)
from .errors import EngineError
from .rings import POSITIVE, positive_ring
from .snake import ChainSES, Check, Z2Complex, induced_map, merge_checks


def positive_complex(data: PearlData) -> PearlComplex:
    """The same count data over Z2[t] (no negative powers)."""
    return build_complex(data, positive_ring(data.N))


def positive_bundle(data: PearlData, twist: Sequence[TwistTerm]) -> BundleComplex:
    return build_bundle_complex(data, twist, positive_ring(data.N))


def sigma_cochain(c: Cochain) -> Cochain:
    """Drop every positive power of t (the t = 0 specialization)."""
    return Cochain({g: {0} for g, exps in c.items() if 0 in exps})


def default_ladder_window(bundle: BundleComplex) -> tuple[int, int]:
    idx = [g.index for g in bundle.total.generators]
    step = bundle.base.step
    return min(0, min(idx)) - 1, max(idx) + 2 * step + 1


# ---------------------------------------------------------------------------
# sigma: chain map, induced matrices, injectivity window
# ---------------------------------------------------------------------------


@dataclass
class SigmaMap:
    """sigma on one positive complex: chain check plus induced matrices."""

    cx: PearlComplex
    window: tuple[int, int]
    chain_check: Check
    positive_table: CohomologyTable
    morse: Z2Complex
    morse_quotients: dict
    matrices: dict[int, np.ndarray]

    def morse_dims(self) -> dict[int, int]:
        return {d: q.dim for d, q in self.morse_quotients.items()}


def _sigma_chain_check(cx: PearlComplex) -> Check:
    morse = morse_truncation(cx)
    bad = []
    for g in cx.order:
        left = sigma_cochain(cx.differential.image_of(g))
        right = morse.image_of(g)
        if left != right:
            bad.append(f"sigma o d != d_morse o sigma on {g}")
    return Check("sigma is a chain map", not bad, bad)


def _sigma_vertical(pos: Z2Complex, cls: Z2Complex, d: int) -> np.ndarray:
    """Chain matrix of sigma from windowed-positive basis to Morse basis."""
    pos_labels = pos.spaces.get(d, [])
    cls_labels = cls.spaces.get(d, [])
    cls_pos = {lab: i for i, lab in enumerate(cls_labels)}
    mat = gf2.zeros(len(cls_labels), len(pos_labels))
    for j, (gid, k) in enumerate(pos_labels):
        if k == 0 and gid in cls_pos:
            mat[cls_pos[gid], j] = 1
    return mat


def sigma_map(cx: PearlComplex, window: tuple[int, int] | None = None) -> SigmaMap:
    if cx.ring.kind != POSITIVE:
        raise EngineError("sigma_map expects positive coefficients")
    if window is None:
        idx = [g.index for g in cx.generators]
        window = (min(0, min(idx)) - 1, max(idx) + 2 * cx.step + 1)
    lo, hi = window
    table = cohomology(cx, (lo, hi))
    morse = classical_complex(cx, window=(lo - 1, hi + 1))
    morse_quot = morse.cohomology()
    mats = {}
    for d in range(lo, hi + 1):
        mats[d] = induced_map(
            table.quotients[d], morse_quot[d], _sigma_vertical(table.z2, morse, d)
        )
    return SigmaMap(cx, window, _sigma_chain_check(cx), table, morse, morse_quot, mats)


def injectivity_window(cx: PearlComplex, sigma: SigmaMap | None = None) -> Check:
    """sigma must be injective on cohomology in degrees [0, N).

    This is forced by the coefficient sequence 0 -> tC+ -> C+ -> CM -> 0
    whenever the complex has no generators below index 0; data that breaks
    the conclusion (e.g. synthetic negative-index generators) is flagged.
    """
    sigma = sigma if sigma is not None else sigma_map(cx)
    bad = []
    for d in range(0, cx.step):
        mat = sigma.matrices.get(d)
        dim = sigma.positive_table.dim(d)
        if mat is None:
            continue
        if gf2.rank(mat) != dim:
            bad.append(f"sigma has a kernel on H^{d} (dim {dim}, rank {gf2.rank(mat)})")
    negative = [g.id for g in cx.generators if g.index < 0]
    if bad and negative:
        bad.append(f"data has negative-index generators: {', '.join(negative)}")
    return Check(f"sigma injective in degrees [0, {cx.step})", not bad, bad)


def coefficient_ses(cx: PearlComplex, window: tuple[int, int]) -> ChainSES:
    """0 -> tC+ (degrees shifted by N) -> C+ -> CM -> 0 as based complexes."""
    lo, hi = window
    total = windowed_complex(cx, lo, hi)
    sub_spaces = {d: [(g, k) for (g, k) in total.spaces[d] if k >= 1] for d in total.spaces}
    sub_mats = {}
    for d in total.spaces:
        rows = [(g, k) for (g, k) in total.spaces.get(d + 1, []) if k >= 1]
        row_pos = {lab: i for i, lab in enumerate(rows)}
        tot_rows = {lab: i for i, lab in enumerate(total.spaces.get(d + 1, []))}
        mat = gf2.zeros(len(rows), len(sub_spaces[d]))
        for j, lab in enumerate(sub_spaces[d]):
            col = total.mats[d][:, total.spaces[d].index(lab)]
            for tot_lab, i in tot_rows.items():
                if col[i]:
                    if tot_lab not in row_pos:
                        raise EngineError("tC+ is not closed under d")
                    mat[row_pos[tot_lab], j] = 1
        sub_mats[d] = mat
    sub = Z2Complex(sub_spaces, sub_mats, lambda d: d + 1)
    quot = classical_complex(cx, window=(lo, hi))
    inj, surj = {}, {}
    for d in total.spaces:
        t_pos = {lab: i for i, lab in enumerate(total.spaces[d])}
        mat_i = gf2.zeros(len(total.spaces[d]), len(sub_spaces[d]))
        for j, lab in enumerate(sub_spaces[d]):
            mat_i[t_pos[lab], j] = 1
        inj[d] = mat_i
        surj[d] = _sigma_vertical(total, quot, d)
    return ChainSES(sub, total, quot, inj, surj)


def coefficient_sequence_check(cx: PearlComplex) -> Check:
    """Exactness of the long sequence of the coefficient SES, windowed."""
    idx = [g.index for g in cx.generators]
    lo = min(0, min(idx)) - 1
    hi = max(idx) + 2 * cx.step + 1
    ses = coefficient_ses(cx, (lo, hi))
    checks = [
        ses.check_chain_maps(),
        ses.check_chain_exactness(),
        ses.sub.check_d_squared(),
    ]
    checks += ses.les_node_checks(list(range(lo + 1, hi - 1)))
    return merge_checks("coefficient sequence (tC+ -> C+ -> CM)", checks)


# ---------------------------------------------------------------------------
# bundle ladders
# ---------------------------------------------------------------------------


def positive_bundle_ses(bundle: BundleComplex, window: tuple[int, int]) -> ChainSES:
    """The windowed short exact sequence of a positive-coefficient bundle."""
    lo, hi = window
    sub = windowed_complex(bundle.base, lo, hi)
    total = windowed_complex(bundle.total, lo, hi)
    quot = windowed_complex(shifted_copy(bundle.base, 1), lo, hi)
    inj, surj = {}, {}
    for d in range(lo, hi + 1):
        t_pos = {lab: i for i, lab in enumerate(total.spaces[d])}
        mat_i = gf2.zeros(len(total.spaces[d]), len(sub.spaces[d]))
        for j, (gid, k) in enumerate(sub.spaces[d]):
            mat_i[t_pos[(prime(gid), k)], j] = 1
        inj[d] = mat_i
        q_pos = {lab: i for i, lab in enumerate(quot.spaces[d])}
        mat_p = gf2.zeros(len(quot.spaces[d]), len(total.spaces[d]))
        for j, (gid, k) in enumerate(total.spaces[d]):
            if gid.endswith("''"):
                mat_p[q_pos[(gid[:-2], k)], j] = 1
        surj[d] = mat_p
    return ChainSES(sub, total, quot, inj, surj)


@dataclass
class LadderReport:
    window: tuple[int, int]
    checks: Check

    def ok(self) -> bool:
        return self.checks.ok


def comparison_ladder(
    data: PearlData,
    twist: Sequence[TwistTerm],
    window: tuple[int, int] | None = None,
) -> LadderReport:
    """sigma maps the positive bundle sequence onto the classical one.

    Verifies, per degree: the three vertical sigma squares (with i, with p,
    with the connecting map) commute on cohomology, and both long sequences
    are exact at the interior nodes.
    """
    pos = positive_bundle(data, twist)
    if window is None:
        window = default_ladder_window(pos)
    lo, hi = window
    pos_ses = positive_bundle_ses(pos, (lo, hi))
    cls_ses = classical_ses(pos, window=(lo, hi))
    checks = [
        pos_ses.check_chain_maps(),
        pos_ses.check_chain_exactness(),
        cls_ses.check_chain_maps(),
        cls_ses.check_chain_exactness(),
        _sigma_chain_check(pos.base),
        _sigma_chain_check(pos.total),
    ]
    hp_sub, hp_total, hp_quot = pos_ses.cohomologies()
    hc_sub, hc_total, hc_quot = cls_ses.cohomologies()

    interior = list(range(lo + 1, hi - 1))
    checks += [
        merge_checks("positive sequence exact", pos_ses.les_node_checks(interior))
    ]
    checks += [
        merge_checks("classical sequence exact", cls_ses.les_node_checks(interior))
    ]

    v_sub = {
        d: induced_map(
            hp_sub[d], hc_sub[d], _sigma_vertical(pos_ses.sub, cls_ses.sub, d)
        )
        for d in interior + [hi - 1]
    }
    v_total = {
        d: induced_map(
            hp_total[d], hc_total[d], _sigma_vertical(pos_ses.total, cls_ses.total, d)
        )
        for d in interior
    }
    v_quot = {
        d: induced_map(
            hp_quot[d], hc_quot[d], _sigma_vertical(pos_ses.quot, cls_ses.quot, d)
        )
        for d in interior
    }
    bad = []
    for d in interior:
        left = gf2.matmul(v_total[d], pos_ses.induced_i(d))
        right = gf2.matmul(cls_ses.induced_i(d), v_sub[d])
        if (left != right).any():
            bad.append(f"sigma square with i fails at degree {d}")
        left = gf2.matmul(v_quot[d], pos_ses.induced_p(d))
        right = gf2.matmul(cls_ses.induced_p(d), v_total[d])
        if (left != right).any():
            bad.append(f"sigma square with p fails at degree {d}")
        if d + 1 <= hi - 1:
            left = gf2.matmul(v_sub[d + 1], pos_ses.connecting(d))
            right = gf2.matmul(cls_ses.connecting(d), v_quot[d])
            if (left != right).any():
                bad.append(f"sigma square with delta fails at degree {d}")
    checks.append(Check("sigma ladder squares", not bad, bad))
    return LadderReport(window, merge_checks("comparison ladder", checks))


def theta_ladder(
    data: PearlData,
    twist: Sequence[TwistTerm],
    window: tuple[int, int] | None = None,
) -> LadderReport:
    """Inclusion of positive into Laurent coefficients, square by square.

    theta is the identity on cochains; on cohomology it sends a windowed
    positive class of degree d to its Z/N-collapsed class.  All three
    squares against the Laurent sequence must commute, and theta carries
    the positive Euler class to the Laurent one.
    """
    from .bundle import ConnectingMap, bundle_ses

    pos = positive_bundle(data, twist)
    lau = build_bundle_complex(data, twist)
    if window is None:
        window = default_ladder_window(pos)
    lo, hi = window
    pos_ses = positive_bundle_ses(pos, (lo, hi))
    lau_ses = bundle_ses(lau)
    hp_sub, hp_total, hp_quot = pos_ses.cohomologies()
    hl_sub, hl_total, hl_quot = lau_ses.cohomologies()
    base_table = cohomology(lau.base)
    total_table = cohomology(lau.total)
    n = lau.base.step

    def theta_vert(pos_z2, lau_z2, d: int) -> np.ndarray:
        """Chain matrix of the collapse from windowed degree d to residue d%N."""
        r = d % n
        lau_labels = lau_z2.spaces[r]
        lau_pos = {lab: i for i, lab in enumerate(lau_labels)}
        pos_labels = pos_z2.spaces.get(d, [])
        mat = gf2.zeros(len(lau_labels), len(pos_labels))
        for j, (gid, _k) in enumerate(pos_labels):
            mat[lau_pos[gid], j] ^= 1
        return mat

    interior = list(range(lo + 1, hi - 1))
    bad = []
    for d in interior:
        r = d % n
        v_sub_d = induced_map(hp_sub[d], hl_sub[r], theta_vert(pos_ses.sub, lau_ses.sub, d))
        v_sub_d1 = induced_map(
            hp_sub[d + 1], hl_sub[(r + 1) % n], theta_vert(pos_ses.sub, lau_ses.sub, d + 1)
        )
        v_total_d = induced_map(
            hp_total[d], hl_total[r], theta_vert(pos_ses.total, lau_ses.total, d)
        )
        v_quot_d = induced_map(
            hp_quot[d], hl_quot[r], theta_vert(pos_ses.quot, lau_ses.quot, d)
        )
        left = gf2.matmul(v_total_d, pos_ses.induced_i(d))
        right = gf2.matmul(lau_ses.induced_i(r), v_sub_d)
        if (left != right).any():
            bad.append(f"theta square with i fails at degree {d}")
        left = gf2.matmul(v_quot_d, pos_ses.induced_p(d))
        right = gf2.matmul(lau_ses.induced_p(r), v_total_d)
        if (left != right).any():
            bad.append(f"theta square with p fails at degree {d}")
        left = gf2.matmul(v_sub_d1, pos_ses.connecting(d))
        right = gf2.matmul(lau_ses.connecting(r), v_quot_d)
        if (left != right).any():
            bad.append(f"theta square with delta fails at degree {d}")

    checks = [Check("theta ladder squares", not bad, bad)]

    # theta(e_F+) = e_F
    if pos.base.unit is not None:
        e_pos = pos.twist_map(pos.base.unit)
        if pos.base.d(pos.base.unit):
            checks.append(Check("positive unit is a cocycle", False))
        else:
            _, theta_coords = base_table.coords(e_pos, 2 % n)
            lau_euler = euler_class(lau)
            ok = (theta_coords == lau_euler.coords).all()
            checks.append(Check("theta carries e_F+ to e_F", bool(ok)))
    _ = total_table
    return LadderReport(window, merge_checks("theta ladder", checks))


def sigma_euler_check(data: PearlData, twist: Sequence[TwistTerm]) -> Check:
    """sigma sends the positive Euler class to the classical Euler class."""
    pos = positive_bundle(data, twist)
    if pos.base.unit is None:
        raise EngineError("sigma_euler_check needs the unit")
    sm = sigma_map(pos.base)
    e_pos = pos.twist_map(pos.base.unit)
    if pos.base.d(pos.base.unit):
        return Check("sigma of the Euler class", False, ["unit is not a cocycle"])
    classical_twist = LinearMap(
        {
            t.y: Cochain.term(t.x)
            for t in pos.twist
            if t.count and t.mu_bar == 0
        }
    )
    e_classical = classical_twist(pos.base.unit)
    # both sides as Morse classes in degree 2
    _, pos_vec = sm.positive_table.coords(e_pos, 2)
    img = gf2.matmul(sm.matrices[2], pos_vec[:, None])[:, 0] if pos_vec.size else (
        np.zeros(sm.morse_quotients[2].dim, dtype=np.uint8)
    )
    labels = sm.morse.spaces.get(2, [])
    pos_map = {lab: i for i, lab in enumerate(labels)}
    vec = gf2.zeros(len(labels), 1)[:, 0]
    for g, exps in e_classical.items():
        if 0 in exps:
            vec[pos_map[g]] ^= 1
    want = sm.morse_quotients[2].coords(vec)
    ok = (img == want).all() if img.size == want.size else not (img.any() or want.any())
    return Check("sigma(e_F+) equals the classical Euler class", bool(ok))


# ---------------------------------------------------------------------------
# periodicity and the narrowness obstruction
# ---------------------------------------------------------------------------


@dataclass
class PeriodicityVerdict:
    applicable: bool
    ok: bool
    details: list[str]

    def line(self) -> str:
        if not self.applicable:
            return "2-periodicity: not applicable (QH(total) != 0)"
        status = "OK" if self.ok else "FAIL"
        extra = f" ({'; '.join(self.details)})" if self.details else ""
        return f"2-periodicity: {status}{extra}"


def periodicity_check(
    dims: dict[int, int], n: int, gamma_vanishes: bool
) -> PeriodicityVerdict:
    """dim QH^k == dim QH^(k+2) for all k, when the bundle cohomology vanishes."""
    if not gamma_vanishes:
        return PeriodicityVerdict(False, True, [])
    bad = [
        f"dim QH^{k} = {dims[k % n]} but dim QH^{k + 2} = {dims[(k + 2) % n]}"
        for k in range(n)
        if dims[k % n] != dims[(k + 2) % n]
    ]
    return PeriodicityVerdict(True, not bad, bad)


def narrowness_obstruction(betti: Sequence[int], n: int) -> Check:
    """All Betti numbers in residue -1 mod N must vanish for the criterion.

    When they do, degree bookkeeping forbids the narrow case, so the
    cohomology of the complex cannot vanish.
    """
    offenders = [
        f"b_{i} = {b}" for i, b in enumerate(betti) if i % n == n - 1 and b != 0
    ]
    return Check(
        f"narrowness obstruction (no Betti numbers in residue {n - 1} mod {n})",
        not offenders,
        offenders,
    )
