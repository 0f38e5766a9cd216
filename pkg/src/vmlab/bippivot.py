"""Ordered bipartite graphs, pivots on them, and pivot-pair finding.

A pivot at an edge ``uv`` (``u`` on the left, ``v`` on the right) updates the
biadjacency matrix by ``A[x, y] ^= A[x, v] & A[u, y]`` for ``x != u`` and
``y != v`` and then moves ``u`` to the right and ``v`` to the left.  The new
vertex takes the position of the old one, so in positional terms row ``u``
and column ``v`` are left as they were.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .f2core import (
    F2Matrix,
    F2Vector,
    SingularMatrixError,
    independent_rows,
    invert,
    rank,
    solve_unit_upper_triangular,
    transpose,
)
from .graph import Graph, pivot

__all__ = [
    "OrderedBipartiteGraph",
    "PivotStep",
    "PivotPairing",
    "BipartiteDeltaResult",
    "RankTailResult",
    "bipartite_pivot",
    "find_pivot_pairs",
    "invertible_submatrix",
    "bipartite_delta_via_m",
    "rank_tail_bound",
    "rank_tail_experiment",
]


@dataclass(frozen=True)
class OrderedBipartiteGraph:
    left: tuple
    right: tuple
    biadj: F2Matrix

    def __init__(self, left: Sequence[Hashable], right: Sequence[Hashable], biadj: F2Matrix):
        left, right = tuple(left), tuple(right)
        if set(left) & set(right):
            raise ValueError("left and right sides overlap")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("repeated vertex")
        if biadj.shape != (len(left), len(right)):
            raise ValueError(f"biadjacency shape {biadj.shape} does not match sides")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "biadj", biadj)

    @classmethod
    def from_graph(cls, g: Graph, left: Sequence[Hashable], right: Sequence[Hashable]) -> "OrderedBipartiteGraph":
        li = [g.index(v) for v in left]
        ri = [g.index(v) for v in right]
        if set(left) | set(right) != set(g.labels):
            raise ValueError("sides must cover the vertex set")
        rows = []
        for i in li:
            if any((g.rows[i] >> j) & 1 for j in li):
                raise ValueError("edge inside the left side")
            rows.append(sum(1 << k for k, j in enumerate(ri) if (g.rows[i] >> j) & 1))
        for i in ri:
            if any((g.rows[i] >> j) & 1 for j in ri):
                raise ValueError("edge inside the right side")
        return cls(left, right, F2Matrix(len(left), len(right), rows))

    @property
    def a(self) -> int:
        return len(self.left)

    @property
    def b(self) -> int:
        return len(self.right)

    def has_edge(self, u: Hashable, v: Hashable) -> bool:
        if u in self.right:
            u, v = v, u
        return bool(self.biadj[self.left.index(u), self.right.index(v)])

    def to_graph(self) -> Graph:
        """Unordered view, labels ``left + right``."""
        a = self.a
        n = a + self.b
        rows = [0] * n
        for i, r in enumerate(self.biadj.rows):
            rows[i] = r << a
            for j in range(self.b):
                if (r >> j) & 1:
                    rows[a + j] |= 1 << i
        return Graph._from_rows(rows, self.left + self.right)

    def restrict(self, left: Sequence[Hashable], right: Sequence[Hashable]) -> "OrderedBipartiteGraph":
        li = [self.left.index(v) for v in left]
        ri = [self.right.index(v) for v in right]
        return OrderedBipartiteGraph(left, right, self.biadj.submatrix(li, ri))

    def __repr__(self):
        m = sum(bin(r).count("1") for r in self.biadj.rows)
        return f"OrderedBipartiteGraph(left={self.left}, right={self.right}, edges={m})"


def _pivot_biadj(rows: list[int], i: int, j: int) -> list[int]:
    """Positional pivot at entry (i, j) of a biadjacency given as row ints."""
    ri = rows[i]
    mask = ri & ~(1 << j)
    out = list(rows)
    for x, rx in enumerate(rows):
        if x != i and (rx >> j) & 1:
            out[x] = rx ^ mask
    return out


def bipartite_pivot(g: OrderedBipartiteGraph, u: Hashable, v: Hashable) -> OrderedBipartiteGraph:
    """Pivot at the edge ``uv`` and swap the sides of ``u`` and ``v``."""
    if u in g.right:
        u, v = v, u
    if u not in g.left or v not in g.right:
        raise ValueError("u and v must lie on opposite sides")
    i, j = g.left.index(u), g.right.index(v)
    if not g.biadj[i, j]:
        raise ValueError(f"{u!r}{v!r} is not an edge")
    rows = _pivot_biadj(list(g.biadj.rows), i, j)
    left = g.left[:i] + (v,) + g.left[i + 1:]
    right = g.right[:j] + (u,) + g.right[j + 1:]
    return OrderedBipartiteGraph(left, right, F2Matrix(g.a, g.b, rows))


def unordered_pivot_view(g: OrderedBipartiteGraph, u: Hashable, v: Hashable) -> Graph:
    """``graph.pivot`` on the unordered view, for cross-checking."""
    return pivot(g.to_graph(), u, v)


# ----------------------------------------------------------------------
# pivot pairs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PivotStep:
    pair: tuple
    was_edge: bool
    block_matches: bool
    schur_invertible: bool

    @property
    def ok(self) -> bool:
        return self.was_edge and self.block_matches and self.schur_invertible


@dataclass(frozen=True)
class PivotPairing:
    pairs: tuple
    steps: tuple = ()
    rank: int = 0
    rows: tuple = ()
    cols: tuple = ()

    def __len__(self):
        return len(self.pairs)

    @property
    def ok(self) -> bool:
        return len(self.pairs) == self.rank and all(s.ok for s in self.steps)


def invertible_submatrix(a: F2Matrix) -> tuple[list[int], list[int]]:
    """Row and column indices of a ``rank(a)``-square invertible submatrix."""
    rows = independent_rows(a)
    sub = a.submatrix(rows, range(a.ncols))
    cols = independent_rows(transpose(sub))
    return rows, cols


def find_pivot_pairs(g: OrderedBipartiteGraph) -> PivotPairing:
    """Disjoint pairs ``w_i w'_i``, each an edge after the earlier pivots, ``rank(A)`` of them.

    Works on an invertible block ``B``.  At each step the first one-entry of
    ``B`` in row-major order is used, and ``B`` is replaced by its Schur
    complement ``B' + beta alpha``.  Every step is checked against the graph
    obtained by actually performing the pivots so far.
    """
    rows, cols = invertible_submatrix(g.biadj)
    gamma = len(rows)
    left = [g.left[i] for i in rows]
    right = [g.right[j] for j in cols]
    block = g.biadj.submatrix(rows, cols)
    cur = g
    pairs, steps = [], []
    while block.nrows:
        i, j = next((i, j) for i, r in enumerate(block.rows) if r
                    for j in range(block.ncols) if (r >> j) & 1)
        u, v = left[i], right[j]
        # the tracked block should equal the current graph on the remaining vertices
        actual = cur.restrict(left, right).biadj
        block_ok = actual == block
        was_edge = cur.has_edge(u, v)
        pairs.append((u, v))
        if not was_edge:
            steps.append(PivotStep((u, v), False, block_ok, False))
            break
        cur = bipartite_pivot(cur, u, v)
        keep_r = [k for k in range(block.nrows) if k != i]
        keep_c = [k for k in range(block.ncols) if k != j]
        alpha = block.submatrix([i], keep_c)
        beta = block.submatrix(keep_r, [j])
        block = block.submatrix(keep_r, keep_c) + beta @ alpha
        try:
            invert(block)
            inv_ok = True
        except SingularMatrixError:
            inv_ok = False
        steps.append(PivotStep((u, v), was_edge, block_ok, inv_ok))
        del left[i]
        del right[j]
    return PivotPairing(tuple(pairs), tuple(steps), gamma,
                        tuple(g.left[i] for i in rows), tuple(g.right[j] for j in cols))


# ----------------------------------------------------------------------
# bipartite delta
# ----------------------------------------------------------------------

@dataclass
class BipartiteDeltaResult:
    """Outcome of the bipartite change-of-``U`` check.

    ``sum_holds`` is the identity ``delta = sum_i z_i^L (z_i^R)^T``.  The
    factorisation through ``M = Q_L Q_R^T`` is recorded separately:
    ``q_left``/``q_right`` are ``None`` when no unit upper triangular solution
    exists, and ``m_holds`` is only meaningful when both exist.
    """

    pairs: tuple
    delta: F2Matrix
    x_left: F2Matrix
    x_right: F2Matrix
    z_left: F2Matrix
    z_right: F2Matrix
    sum_holds: bool
    q_left: F2Matrix | None = None
    q_right: F2Matrix | None = None
    m: F2Matrix | None = None
    m_holds: bool | None = None
    m_invertible: bool | None = None
    refutations: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.sum_holds and bool(self.m_holds)


def _cols_to_matrix(nrows: int, cols: list[int]) -> F2Matrix:
    return F2Matrix.from_columns(nrows, cols) if cols else F2Matrix(nrows, 0, [0] * nrows)


def bipartite_delta_via_m(g: OrderedBipartiteGraph, u_left: Sequence[Hashable], u_right: Sequence[Hashable],
                          pairing: Sequence[tuple] | None = None) -> BipartiteDeltaResult:
    """Pivot along ``pairing`` (default: :func:`find_pivot_pairs` on ``G[W_L, W_R]``) and test the factorisation.

    ``z_i^L`` is read from the graph just before the ``i``-th pivot: it is the
    neighbourhood of ``w'_i`` inside ``U_L``, and likewise ``z_i^R`` is the
    neighbourhood of ``w_i`` inside ``U_R``.
    """
    u_left, u_right = tuple(u_left), tuple(u_right)
    w_left = [v for v in g.left if v not in u_left]
    w_right = [v for v in g.right if v not in u_right]
    if pairing is None:
        pairing = find_pivot_pairs(g.restrict(w_left, w_right)).pairs
    pairing = tuple(tuple(p) for p in pairing)
    wl_set, wr_set = set(w_left), set(w_right)
    for w, w2 in pairing:
        if w not in wl_set or w2 not in wr_set:
            raise ValueError(f"pair {(w, w2)!r} is not in W_L x W_R")
    s1, s2 = len(u_left), len(u_right)
    start = g.restrict(u_left, u_right).biadj
    x_left = g.restrict(u_left, [w2 for _, w2 in pairing]).biadj
    x_right = transpose(g.restrict([w for w, _ in pairing], u_right).biadj)
    cur = g
    zl, zr = [], []
    for w, w2 in pairing:
        zl.append(cur.restrict(u_left, [w2]).biadj.col_bits(0))
        zr.append(cur.restrict([w], u_right).biadj.rows[0])
        cur = bipartite_pivot(cur, w, w2)
    delta = cur.restrict(u_left, u_right).biadj + start
    z_left, z_right = _cols_to_matrix(s1, zl), _cols_to_matrix(s2, zr)
    total = F2Matrix.zeros(s1, s2)
    for a, b in zip(zl, zr):
        total = total + F2Matrix.outer(F2Vector(s1, a), F2Vector(s2, b))
    res = BipartiteDeltaResult(pairing, delta, x_left, x_right, z_left, z_right, total == delta)
    if not res.sum_holds:
        res.refutations.append("delta != sum z_L z_R^T")
    r = len(pairing)
    if r == 0:
        res.q_left = res.q_right = res.m = F2Matrix.zeros(0, 0)
        res.m_holds = delta.is_zero()
        res.m_invertible = True
        return res
    res.q_left = solve_unit_upper_triangular(x_left, z_left)
    res.q_right = solve_unit_upper_triangular(x_right, z_right)
    if res.q_left is None:
        res.refutations.append("no unit upper triangular Q_L")
    if res.q_right is None:
        res.refutations.append("no unit upper triangular Q_R")
    if res.q_left is not None and res.q_right is not None:
        res.m = res.q_left @ transpose(res.q_right)
        res.m_invertible = res.m.rank() == r
        # U_L and U_R are disjoint, so the full product is compared (no diagonal to drop)
        res.m_holds = x_left @ res.m @ transpose(x_right) == delta
        if not res.m_holds:
            res.refutations.append("delta != X_L M X_R^T")
    return res


# ----------------------------------------------------------------------
# rank tail
# ----------------------------------------------------------------------

def rank_tail_bound(r: int, q: float, gamma0: float) -> float:
    """``r (1 - q)^(r - gamma0) / (r - gamma0)``."""
    if not 0 < gamma0 < r:
        raise ValueError(f"need 0 < gamma0 < r, got gamma0={gamma0}, r={r}")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    return r * (1.0 - q) ** (r - gamma0) / (r - gamma0)


@dataclass(frozen=True)
class RankTailResult:
    r: int
    p: float
    gamma0: int
    trials: int
    hits: int
    frequency: float
    stderr: float
    bound: float

    @property
    def within(self) -> bool:
        return self.frequency <= self.bound + 3 * self.stderr


def rank_tail_experiment(r: int, p: float, trials: int, seed=None) -> RankTailResult:
    """Frequency of ``rank(A) <= r // 2`` for ``A`` an ``r x r`` Bernoulli(p) matrix."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    gamma0 = r // 2
    q = min(p, 1.0 - p)
    bound = rank_tail_bound(r, q, gamma0)  # rejects r = 1 via the domain check
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(trials):
        a = F2Matrix.from_array(rng.random((r, r)) < p)
        if rank(a) <= gamma0:
            hits += 1
    freq = hits / trials
    stderr = math.sqrt(freq * (1.0 - freq) / trials)
    return RankTailResult(r, p, gamma0, trials, hits, freq, stderr, bound)
