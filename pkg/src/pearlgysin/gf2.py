"""Exact dense linear algebra over GF(2).

Matrices are numpy uint8 arrays with entries in {0, 1}; a linear map sends
basis vector j of its source to column j.  The row-reduction kernel, the one
hot loop in the package, exists twice: a numba-compiled version and a pure
numpy one.  The ENGINE_GF2_BACKEND environment variable picks one at import
time ("numba", "numpy"; unset or "auto" prefers numba when it is available).
"""

from __future__ import annotations

import os

import numpy as np

from .errors import EngineError


def _rref_numpy(a: np.ndarray) -> np.ndarray:
    """In-place reduced row echelon form; returns the pivot column indices."""
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        hits = np.nonzero(a[:, c])[0]
        hits = hits[hits != r]
        if hits.size:
            a[np.ix_(hits, np.arange(c, cols))] ^= a[r, c:]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def _build_numba_rref():
    from numba import njit

    @njit("int64[:](uint8[:, ::1])", cache=True)
    def _rref_numba(a):  # pragma: no cover - exercised via the dispatcher
        rows, cols = a.shape
        cap = rows if rows < cols else cols
        pivots = np.empty(cap, np.int64)
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            p = -1
            for i in range(r, rows):
                if a[i, c]:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[p, j]
                    a[p, j] = tmp
            for i in range(rows):
                if i != r and a[i, c]:
                    for j in range(c, cols):
                        a[i, j] ^= a[r, j]
            pivots[r] = c
            r += 1
        return pivots[:r]

    return _rref_numba


def _select_backend():
    choice = os.environ.get("ENGINE_GF2_BACKEND", "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise EngineError(f"ENGINE_GF2_BACKEND must be numba, numpy or auto, not {choice!r}")
    if choice == "numpy":
        return "numpy", _rref_numpy
    try:
        return "numba", _build_numba_rref()
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", _rref_numpy


BACKEND, _rref_inplace = _select_backend()


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.uint8)


def as_matrix(a) -> np.ndarray:
    m = np.ascontiguousarray(np.asarray(a, dtype=np.uint8) & 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    return m


def rref(a) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form (a copy) plus the pivot columns."""
    m = as_matrix(a).copy()
    pivots = _rref_inplace(m)
    return m, pivots


def rank(a) -> int:
    if a is None:
        return 0
    m = as_matrix(a)
    if m.size == 0:
        return 0
    return int(len(rref(m)[1]))


def matmul(a, b) -> np.ndarray:
    """Matrix product over GF(2)."""
    return ((as_matrix(a).astype(np.int64) @ as_matrix(b).astype(np.int64)) & 1).astype(np.uint8)


def kernel(a) -> np.ndarray:
    """Columns spanning the nullspace {x : a x = 0}.

    Free variables are taken in column order, so the basis is deterministic
    and 'pivoted in input order'.
    """
    m = as_matrix(a)
    rows, cols = m.shape
    r, pivots = rref(m)
    pivot_set = set(int(p) for p in pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    out = zeros(cols, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, p in enumerate(pivots):
            out[int(p), k] = r[i, f]
    return out


def solve(a, b) -> np.ndarray | None:
    """One solution of a x = b (pivot solution, free variables zero), or None."""
    m = as_matrix(a)
    rhs = np.asarray(b, dtype=np.uint8) & 1
    if rhs.ndim != 1 or rhs.shape[0] != m.shape[0]:
        raise ValueError("right-hand side has the wrong length")
    aug = np.concatenate([m, rhs[:, None]], axis=1)
    r, pivots = rref(aug)
    if any(int(p) == m.shape[1] for p in pivots):
        return None
    x = np.zeros(m.shape[1], dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[int(p)] = r[i, m.shape[1]]
    return x


class NotInSpan(EngineError):
    """Requested coordinates of a vector outside the spanning set."""


class Quotient:
    """Coordinates in span(cycles)/span(boundaries) over GF(2).

    `boundaries` must lie inside the span of `cycles`.  Representatives are
    the cycle columns that enlarge the boundary span, kept in input order, so
    the choice is deterministic.
    """

    def __init__(self, cycles: np.ndarray, boundaries: np.ndarray | None):
        cycles = as_matrix(cycles) if cycles is not None and cycles.size else zeros(
            cycles.shape[0] if cycles is not None else 0, 0
        )
        self.ambient_dim = cycles.shape[0]
        if boundaries is None or boundaries.size == 0:
            boundaries = zeros(self.ambient_dim, 0)
        boundaries = as_matrix(boundaries)

        basis_cols: list[np.ndarray] = []
        for j in range(boundaries.shape[1]):
            col = boundaries[:, j]
            if self._enlarges(basis_cols, col):
                basis_cols.append(col)
        self.boundary_rank = len(basis_cols)

        self.rep_indices: list[int] = []
        for j in range(cycles.shape[1]):
            col = cycles[:, j]
            if self._enlarges(basis_cols, col):
                basis_cols.append(col)
                self.rep_indices.append(j)
        self.dim = len(self.rep_indices)
        self.representatives = (
            cycles[:, self.rep_indices] if self.rep_indices else zeros(self.ambient_dim, 0)
        )
        self._basis = (
            np.stack(basis_cols, axis=1) if basis_cols else zeros(self.ambient_dim, 0)
        )

    @staticmethod
    def _enlarges(cols: list[np.ndarray], col: np.ndarray) -> bool:
        if not col.any():
            return False
        if not cols:
            return True
        m = np.stack(cols, axis=1)
        return rank(np.concatenate([m, col[:, None]], axis=1)) > rank(m)

    def coords(self, vec: np.ndarray) -> np.ndarray:
        """Class coordinates of a cycle vector; raises NotInSpan otherwise."""
        v = np.asarray(vec, dtype=np.uint8) & 1
        if v.shape != (self.ambient_dim,):
            raise ValueError("vector has the wrong length")
        if self._basis.shape[1] == 0:
            if v.any():
                raise NotInSpan("nonzero vector in a zero space")
            return np.zeros(0, dtype=np.uint8)
        x = solve(self._basis, v)
        if x is None:
            raise NotInSpan("vector is not a cycle (outside the cycle span)")
        return x[self.boundary_rank:]

    def is_zero_class(self, vec: np.ndarray) -> bool:
        return not self.coords(vec).any()
