"""GF(2) chain complexes with explicit finite bases, and the snake lemma.

A `Z2Complex` is a family of based GF(2) vector spaces indexed by "degrees"
(hashable keys) with a successor function and one matrix per degree mapping
into the successor.  Both shapes used in this package fit: the Z/N-collapsed
periodic complex (degrees are residues, successor wraps around) and honest
degree windows (degrees are integers, successor is +1, spaces vanish off the
window).

`ChainSES` is a degreewise short exact sequence of such complexes.  It can
verify chain-level exactness, push the three maps to cohomology, compute the
connecting homomorphism by a pivot-based lift, and check exactness of the
resulting long sequence node by node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping

import numpy as np

from . import gf2
from .errors import EngineError


@dataclass
class Check:
    """Outcome of one verification step."""

    name: str
    ok: bool
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def line(self) -> str:
        status = "OK" if self.ok else "FAIL"
        extra = f" ({'; '.join(self.details)})" if self.details and not self.ok else ""
        return f"{self.name}: {status}{extra}"


def merge_checks(name: str, checks: list[Check]) -> Check:
    bad = [c for c in checks if not c.ok]
    details = [d for c in bad for d in ([f"{c.name}"] + c.details)]
    return Check(name, not bad, details)


class Z2Complex:
    """Finitely based GF(2) cochain complex over an abstract degree set."""

    def __init__(
        self,
        spaces: Mapping[Hashable, list[Any]],
        mats: Mapping[Hashable, np.ndarray],
        succ: Callable[[Hashable], Hashable],
    ):
        self.spaces = {d: list(labels) for d, labels in spaces.items()}
        self.succ = succ
        self.mats = {}
        for d in self.spaces:
            m = mats.get(d)
            rows = len(self.spaces.get(succ(d), []))
            cols = len(self.spaces[d])
            if m is None:
                m = gf2.zeros(rows, cols)
            m = gf2.as_matrix(m)
            if m.shape != (rows, cols):
                raise EngineError(
                    f"matrix at degree {d!r} has shape {m.shape}, expected {(rows, cols)}"
                )
            self.mats[d] = m
        self.pred = {}
        for d in self.spaces:
            s = succ(d)
            if s in self.spaces:
                self.pred[s] = d

    def degrees(self) -> list:
        return list(self.spaces)

    def dim(self, d) -> int:
        return len(self.spaces.get(d, []))

    def check_d_squared(self) -> Check:
        bad = []
        for d, m in self.mats.items():
            s = self.succ(d)
            if s in self.mats and self.mats[s].size and m.size:
                if gf2.matmul(self.mats[s], m).any():
                    bad.append(f"d^2 != 0 from degree {d!r}")
        return Check("d squared vanishes", not bad, bad)

    def cohomology(self) -> dict[Hashable, gf2.Quotient]:
        out = {}
        for d in self.spaces:
            cycles = gf2.kernel(self.mats[d])
            p = self.pred.get(d)
            boundaries = self.mats[p] if p is not None else None
            out[d] = gf2.Quotient(cycles, boundaries)
        return out


def periodic_succ(n: int) -> Callable[[int], int]:
    return lambda d: (d + 1) % n


def window_succ(d: int) -> int:
    return d + 1


def exact_at(incoming: np.ndarray, outgoing: np.ndarray, dim_mid: int) -> bool:
    """Is im(incoming) = ker(outgoing) inside a space of dimension dim_mid?"""
    if dim_mid == 0:
        return True
    if incoming.size and outgoing.size:
        if gf2.matmul(outgoing, incoming).any():
            return False
    return gf2.rank(incoming) + gf2.rank(outgoing) == dim_mid


def induced_map(
    quot_src: gf2.Quotient, quot_tgt: gf2.Quotient, chain_mat: np.ndarray
) -> np.ndarray:
    """Matrix of a chain map on cohomology coordinates."""
    cols = []
    for j in range(quot_src.dim):
        rep = quot_src.representatives[:, j]
        img = gf2.matmul(chain_mat, rep[:, None])[:, 0] if chain_mat.size else np.zeros(
            chain_mat.shape[0], dtype=np.uint8
        )
        cols.append(quot_tgt.coords(img))
    if not cols:
        return gf2.zeros(quot_tgt.dim, 0)
    return np.stack(cols, axis=1).astype(np.uint8)


class ChainSES:
    """A degreewise short exact sequence 0 -> sub -> total -> quot -> 0."""

    def __init__(
        self,
        sub: Z2Complex,
        total: Z2Complex,
        quot: Z2Complex,
        inj: Mapping[Hashable, np.ndarray],
        surj: Mapping[Hashable, np.ndarray],
    ):
        self.sub, self.total, self.quot = sub, total, quot
        self.inj = {d: gf2.as_matrix(m) for d, m in inj.items()}
        self.surj = {d: gf2.as_matrix(m) for d, m in surj.items()}
        self._h_sub = None
        self._h_total = None
        self._h_quot = None

    # -- chain level ---------------------------------------------------

    def check_chain_maps(self) -> Check:
        bad = []
        for d in self.sub.spaces:
            s = self.sub.succ(d)
            if s not in self.sub.spaces:
                continue
            left = gf2.matmul(self.total.mats[d], self.inj[d])
            right = gf2.matmul(self.inj[s], self.sub.mats[d])
            if (left != right).any():
                bad.append(f"inclusion vs d at degree {d!r}")
            left = gf2.matmul(self.quot.mats[d], self.surj[d])
            right = gf2.matmul(self.surj[s], self.total.mats[d])
            if (left != right).any():
                bad.append(f"projection vs d at degree {d!r}")
        return Check("i and p are chain maps", not bad, bad)

    def check_chain_exactness(self) -> Check:
        bad = []
        for d in self.sub.spaces:
            inj, surj = self.inj[d], self.surj[d]
            if inj.size and surj.size and gf2.matmul(surj, inj).any():
                bad.append(f"p o i != 0 at degree {d!r}")
            if gf2.rank(inj) != self.sub.dim(d):
                bad.append(f"i not injective at degree {d!r}")
            if gf2.rank(surj) != self.quot.dim(d):
                bad.append(f"p not surjective at degree {d!r}")
            if self.sub.dim(d) + self.quot.dim(d) != self.total.dim(d):
                bad.append(f"im(i) != ker(p) at degree {d!r}")
        return Check("chain-level exactness", not bad, bad)

    # -- cohomology level ----------------------------------------------

    def cohomologies(self):
        if self._h_sub is None:
            self._h_sub = self.sub.cohomology()
            self._h_total = self.total.cohomology()
            self._h_quot = self.quot.cohomology()
        return self._h_sub, self._h_total, self._h_quot

    def induced_i(self, d) -> np.ndarray:
        h_sub, h_total, _ = self.cohomologies()
        return induced_map(h_sub[d], h_total[d], self.inj[d])

    def induced_p(self, d) -> np.ndarray:
        _, h_total, h_quot = self.cohomologies()
        return induced_map(h_total[d], h_quot[d], self.surj[d])

    def connecting(self, d) -> np.ndarray:
        """delta: H^d(quot) -> H^(succ d)(sub), by a pivot-based lift."""
        h_sub, _, h_quot = self.cohomologies()
        s = self.sub.succ(d)
        if s not in self.sub.spaces:
            return gf2.zeros(0, h_quot[d].dim)
        cols = []
        for j in range(h_quot[d].dim):
            rep = h_quot[d].representatives[:, j]
            lift = gf2.solve(self.surj[d], rep)
            if lift is None:
                raise EngineError(f"projection not surjective at degree {d!r}")
            dx = gf2.matmul(self.total.mats[d], lift[:, None])[:, 0]
            back = gf2.solve(self.inj[s], dx)
            if back is None:
                raise EngineError(
                    f"snake image escapes the subcomplex at degree {d!r}"
                )
            cols.append(h_sub[s].coords(back))
        if not cols:
            return gf2.zeros(h_sub[s].dim, 0)
        return np.stack(cols, axis=1).astype(np.uint8)

    def les_node_checks(self, degrees) -> list[Check]:
        """Exactness of the long sequence at every node over the degrees."""
        h_sub, h_total, h_quot = self.cohomologies()
        checks = []
        for d in degrees:
            if d not in self.sub.spaces:
                continue
            s = self.sub.succ(d)
            i_d = self.induced_i(d)
            p_d = self.induced_p(d)
            delta_d = self.connecting(d)
            checks.append(
                Check(
                    f"exact at H{d!r}(total)",
                    exact_at(i_d, p_d, h_total[d].dim),
                )
            )
            checks.append(
                Check(
                    f"exact at H{d!r}(quotient)",
                    exact_at(p_d, delta_d, h_quot[d].dim),
                )
            )
            if s in self.sub.spaces:
                checks.append(
                    Check(
                        f"exact at H{s!r}(sub)",
                        exact_at(delta_d, self.induced_i(s), h_sub[s].dim),
                    )
                )
        return checks
