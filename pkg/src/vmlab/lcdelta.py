"""The change on ``U`` caused by complementing at every vertex of ``W``.

Given ``V = U + W`` and an ordering ``w_1, ..., w_r`` of ``W``, let
``G' = G * w_1 * ... * w_r``.  The change ``G'[U] ^ G[U]`` can be obtained
two ways: by running the complementations (:func:`sequential_delta`), or in
closed form as ``off_diag(X M X^T)`` where ``X`` is the ``U x W``
biadjacency matrix and ``M = L^-1 (L^-1)^T`` is determined by ``G[W]``
alone (:func:`delta_via_m`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from numba import njit

from .f2core import F2Matrix, F2Vector, invert, off_diag, transpose
from .graph import Graph, induced, lc_rows, local_complement, symmetric_difference

__all__ = [
    "LCInstance",
    "DeltaCertificate",
    "sequential_delta",
    "simulated_z_columns",
    "build_l",
    "build_m",
    "delta_via_m",
    "biadjacency",
    "sample_delta_codes",
]


@dataclass(frozen=True)
class LCInstance:
    """A graph with its vertices split into a kept part and an ordered part."""

    g: Graph
    u_set: tuple
    w_order: tuple

    def __init__(self, g: Graph, u_set: Sequence[Hashable], w_order: Sequence[Hashable]):
        u_set, w_order = tuple(u_set), tuple(w_order)
        if set(u_set) & set(w_order):
            raise ValueError("u_set and w_order overlap")
        if len(set(u_set)) != len(u_set) or len(set(w_order)) != len(w_order):
            raise ValueError("repeated vertex")
        if set(u_set) | set(w_order) != set(g.labels):
            raise ValueError("u_set and w_order must cover the vertex set")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "u_set", u_set)
        object.__setattr__(self, "w_order", w_order)

    @property
    def s(self) -> int:
        return len(self.u_set)

    @property
    def r(self) -> int:
        return len(self.w_order)

    def with_graph(self, g: Graph) -> "LCInstance":
        return LCInstance(g, self.u_set, self.w_order)


@dataclass(frozen=True)
class DeltaCertificate:
    x: F2Matrix
    l: F2Matrix
    m: F2Matrix
    z_cols: tuple[F2Vector, ...]
    delta: Graph

    def check(self) -> dict[str, bool]:
        """Every structural property the certificate is expected to have."""
        r = self.l.nrows
        l_ok = self.l.is_unit_upper_triangular()
        z_ok = False
        if l_ok:
            z_ok = tuple((self.x @ invert(self.l)).columns()) == self.z_cols
        return {
            "l_unit_upper": l_ok,
            "m_symmetric": self.m.is_symmetric(),
            "m_invertible": self.m.rank() == r,
            "z_columns": z_ok,
            "delta_form": off_diag(self.x @ self.m @ transpose(self.x)) == self.delta.adj,
        }


def biadjacency(g: Graph, rows: Sequence[Hashable], cols: Sequence[Hashable]) -> F2Matrix:
    """0/1 matrix of ``g`` restricted to ``rows x cols``."""
    ci = [g.index(c) for c in cols]
    out = []
    for v in rows:
        r = g.rows[g.index(v)]
        out.append(sum(1 << k for k, j in enumerate(ci) if (r >> j) & 1))
    return F2Matrix(len(rows), len(cols), out)


def sequential_delta(inst: LCInstance) -> Graph:
    """Run the complementations one by one and diff the result on ``U``."""
    g = inst.g
    for w in inst.w_order:
        g = local_complement(g, w)
    return symmetric_difference(induced(g, inst.u_set), induced(inst.g, inst.u_set))


def simulated_z_columns(inst: LCInstance) -> tuple[F2Vector, ...]:
    """Neighbourhood of ``w_i`` inside ``U`` at the moment it is complemented."""
    g = inst.g
    out = []
    for w in inst.w_order:
        out.append(biadjacency(g, inst.u_set, [w]).col(0))
        g = local_complement(g, w)
    return tuple(out)


def build_l(inst: LCInstance) -> F2Matrix:
    """Unit upper triangular ``L`` from ``G[W]`` only.

    ``L[j, i] = 1`` for ``j < i`` iff ``w_i w_j`` is an edge just before the
    complementation at ``w_j``.  Complementing at ``w in W`` restricted to
    ``W`` is the same as complementing ``G[W]``, so a private copy of
    ``G[W]`` is evolved in the same sweep.
    """
    sub = induced(inst.g, inst.w_order)
    rows = list(sub.rows)
    r = len(rows)
    lrows = []
    for j in range(r):
        later = rows[j] >> (j + 1) << (j + 1)
        lrows.append(later | (1 << j))
        rows = lc_rows(rows, j)
    return F2Matrix(r, r, lrows)


def build_m(inst: LCInstance) -> F2Matrix:
    l_inv = invert(build_l(inst))
    return l_inv @ transpose(l_inv)


def delta_via_m(inst: LCInstance) -> DeltaCertificate:
    x = biadjacency(inst.g, inst.u_set, inst.w_order)
    l = build_l(inst)
    l_inv = invert(l)
    m = l_inv @ transpose(l_inv)
    z_cols = tuple((x @ l_inv).columns())
    adj = off_diag(x @ m @ transpose(x))
    return DeltaCertificate(x, l, m, z_cols, Graph(adj, inst.u_set))


# ----------------------------------------------------------------------
# batched sampling
# ----------------------------------------------------------------------

_CHUNK = 4096


@njit(cache=True)
def _fill_rows(rows, draws, iu, ju):
    one = np.uint64(1)
    for smp in range(draws.shape[0]):
        for k in range(iu.size):
            if draws[smp, k]:
                i, j = iu[k], ju[k]
                rows[smp, i, j // 64] |= one << np.uint64(j % 64)
                rows[smp, j, i // 64] |= one << np.uint64(i % 64)


@njit(cache=True)
def _complement_prefix(rows, r, diag_clear):
    """Complement at vertices 0..r-1 in order, for every sample in the batch."""
    b, n, words = rows.shape
    one = np.uint64(1)
    for smp in range(b):
        for c in range(r):
            for t in range(c + 1, n):
                if (rows[smp, c, t // 64] >> np.uint64(t % 64)) & one:
                    for w in range(words):
                        rows[smp, t, w] = (rows[smp, t, w] ^ rows[smp, c, w]) & diag_clear[t, w]


def sample_delta_codes(s: int, r: int, p: float, samples: int, rng: np.random.Generator,
                       gw: Graph | None = None) -> np.ndarray:
    """Edge-bitmask codes of ``G_delta`` over independent draws of ``G(s + r, p)``.

    ``W`` has ``r`` vertices complemented in order and ``U`` has ``s``.  If
    ``gw`` is given, ``G[W]`` is held fixed at ``gw`` (vertex order = the
    complementation order) and only the edges touching ``U`` are random.

    The complementations are simulated directly on bit-packed rows, vectorised
    across a chunk of samples.  Rows of already processed vertices are never
    read again and are left stale.
    """
    n = s + r
    words = max(1, (n + 63) // 64)
    # internal order: W first (in complementation order), then U, so the rows
    # still in play at step c are the contiguous block c+1 .. n-1
    iu, ju = np.triu_indices(n, 1)
    in_w = ju < r
    fixed = None
    if gw is not None:
        if gw.n != r:
            raise ValueError("gw must have r vertices")
        fixed = gw.adj.to_array().astype(bool)[iu[in_w], ju[in_w]]
    upair = [(r + i, r + j) for i in range(s) for j in range(i + 1, s)]
    pair_pos = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(iu, ju))}
    upair_k = [pair_pos[pr] for pr in upair]
    diag_clear = np.full((n, words), ~np.uint64(0), dtype=np.uint64)
    for t in range(n):
        diag_clear[t, t // 64] = ~(np.uint64(1) << np.uint64(t % 64))
    codes = np.empty(samples, dtype=np.int64)
    done = 0
    while done < samples:
        b = min(_CHUNK, samples - done)
        draws = rng.random((b, iu.size)) < p
        if fixed is not None:
            draws[:, in_w] = fixed
        rows = np.zeros((b, n, words), dtype=np.uint64)
        _fill_rows(rows, draws, iu, ju)
        start_u = np.stack([draws[:, pk] for pk in upair_k], axis=1) if upair else None
        _complement_prefix(rows, r, diag_clear)
        code = np.zeros(b, dtype=np.int64)
        for k, (i, j) in enumerate(upair):
            bit = ((rows[:, i, j // 64] >> np.uint64(j % 64)) & np.uint64(1)).astype(bool)
            code |= (bit ^ start_u[:, k]).astype(np.int64) << k
        codes[done:done + b] = code
        done += b
    return codes
