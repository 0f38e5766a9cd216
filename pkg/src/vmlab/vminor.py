"""Orbit search for local equivalence and pivot equivalence, and minor tests built on it.

Deleting ``u`` commutes with complementing at any ``v != u``, so every
vertex-minor is an induced subgraph of some locally equivalent graph.  The
searches below therefore enumerate the (labeled) orbit by breadth-first
search and then compare induced subgraphs.  The same argument with
``(G x uv) - w = (G - w) x uv`` for ``w`` outside ``{u, v}`` justifies the
pivot version.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .f2core import iter_bits
from .graph import Graph, lc_rows, pivot_rows, rows_to_bitmask

__all__ = [
    "DEFAULT_MEMBER_CAP",
    "Orbit",
    "PivotOrbit",
    "MinorDecision",
    "UniversalityResult",
    "BudgetExceeded",
    "lc_orbit",
    "is_vertex_minor",
    "is_k_vm_universal",
    "pivot_orbit",
    "is_pivot_minor",
]

DEFAULT_MEMBER_CAP = 1 << 20


class BudgetExceeded(RuntimeError):
    """The requested check would exceed its work budget."""


@dataclass
class Orbit:
    """Labeled graphs reachable from ``seed`` by local complementations.

    ``members`` maps edge bitmask -> ``(parent bitmask, vertex)`` (``None`` for
    the seed); ``rows`` keeps the packed adjacency of every member in BFS
    order.  ``layers[d]`` is the number of members first reached at depth ``d``.
    """

    seed: Graph
    members: dict
    rows: list
    layers: list[int]
    truncated: bool

    def __len__(self):
        return len(self.members)

    def __contains__(self, g: Graph) -> bool:
        if set(g.labels) != set(self.seed.labels):
            return False
        return g.reorder(self.seed.labels).edge_bitmask() in self.members

    def graphs(self):
        for r in self.rows:
            yield Graph._from_rows(r, self.seed.labels)

    def word(self, key) -> list:
        """Shortest complementation sequence (vertex labels) from the seed to ``key``."""
        out = []
        while True:
            parent = self.members[key]
            if parent is None:
                break
            key, v = parent
            out.append(self.seed.labels[v])
        return out[::-1]


@dataclass
class PivotOrbit:
    """Ordered bipartite graphs reachable by pivots; keys are ``(edges, right-side word)``."""

    seed: object
    members: dict
    states: list
    layers: list[int]
    truncated: bool

    def __len__(self):
        return len(self.members)

    def word(self, key) -> list:
        """Shortest pivot sequence (pairs of labels) from the seed to ``key``."""
        labels = tuple(self.seed.left) + tuple(self.seed.right)
        out = []
        while True:
            parent = self.members[key]
            if parent is None:
                break
            key, (i, j) = parent
            out.append((labels[i], labels[j]))
        return out[::-1]


@dataclass
class MinorDecision:
    """``verdict`` is ``True``/``False``, or ``None`` when the orbit was truncated."""

    verdict: bool | None
    witness: Graph | object | None = None
    word: list = field(default_factory=list)


@dataclass
class UniversalityResult:
    verdict: bool | None
    k: int
    subsets_checked: int
    counterexample: tuple | None = None
    per_subset: dict | None = None


def _expand(orbit_members: dict, layers: list, start_rows, step, keyfn, cap: int):
    """Generic BFS.  ``step(state)`` yields ``(move, new_state)``."""
    states = [start_rows]
    queue = deque([(start_rows, 0)])
    truncated = False
    layers.append(1)
    while queue:
        state, depth = queue.popleft()
        key = keyfn(state)
        for move, new in step(state):
            nkey = keyfn(new)
            if nkey in orbit_members:
                continue
            if len(orbit_members) >= cap:
                truncated = True
                break
            orbit_members[nkey] = (key, move)
            states.append(new)
            queue.append((new, depth + 1))
            if len(layers) <= depth + 1:
                layers.append(0)
            layers[depth + 1] += 1
        if truncated:
            break
    return states, truncated


def lc_orbit(g: Graph, member_cap: int = DEFAULT_MEMBER_CAP) -> Orbit:
    """Breadth-first closure of ``g`` under ``G -> G * v``.

    Vertices are tried in label order, so the recorded words are shortest and
    deterministic.  If the cap is hit the orbit is marked ``truncated``.
    """
    n = g.n

    def step(rows):
        for v in range(n):
            if rows[v]:
                yield v, tuple(lc_rows(rows, v))

    members = {g.edge_bitmask(): None}
    layers: list[int] = []
    states, truncated = _expand(members, layers, tuple(g.rows), step, rows_to_bitmask, member_cap)
    return Orbit(g, members, states, layers, truncated)


def _induced_code(rows: Sequence[int], idx: Sequence[int]) -> int:
    code, k = 0, 0
    for a in range(len(idx)):
        ra = rows[idx[a]]
        for b in range(a + 1, len(idx)):
            if (ra >> idx[b]) & 1:
                code |= 1 << k
            k += 1
    return code


def is_vertex_minor(g: Graph, h: Graph, member_cap: int = DEFAULT_MEMBER_CAP,
                    orbit: Orbit | None = None) -> MinorDecision:
    """Is ``h`` (on a subset of ``g``'s labels) a vertex-minor of ``g``?"""
    for v in h.labels:
        g.index(v)
    orbit = orbit or lc_orbit(g, member_cap)
    idx = [g.index(v) for v in h.labels]
    target = h.edge_bitmask()
    for rows in orbit.rows:
        if _induced_code(rows, idx) == target:
            key = rows_to_bitmask(rows)
            return MinorDecision(True, Graph._from_rows(rows, g.labels), orbit.word(key))
    return MinorDecision(None if orbit.truncated else False)


def is_k_vm_universal(g: Graph, k: int, member_cap: int = DEFAULT_MEMBER_CAP,
                      budget: int = 1 << 28, record_subsets: bool = False) -> UniversalityResult:
    """Check that every graph on every ``k``-subset appears as an induced subgraph of the orbit.

    Subsets are visited in lexicographic label-index order, one at a time,
    mirroring a union bound over subsets.  The first failing subset is returned
    with one missing graph.
    """
    if k < 0 or k > g.n:
        raise ValueError("k must be between 0 and n")
    if k <= 1:
        return UniversalityResult(True, k, comb(g.n, k))
    need = 1 << comb(k, 2)
    orbit = lc_orbit(g, member_cap)
    if need * comb(g.n, k) > budget or len(orbit) * comb(g.n, k) > budget:
        raise BudgetExceeded("universality check exceeds the work budget")
    per = {} if record_subsets else None
    checked = 0
    for idx in combinations(range(g.n), k):
        seen = {_induced_code(rows, idx) for rows in orbit.rows}
        checked += 1
        labels = tuple(g.labels[i] for i in idx)
        if per is not None:
            per[labels] = len(seen)
        if len(seen) < need:
            if orbit.truncated:
                return UniversalityResult(None, k, checked, None, per)
            missing = next(c for c in range(need) if c not in seen)
            return UniversalityResult(False, k, checked,
                                      (labels, Graph.from_edge_bitmask(missing, labels)), per)
    return UniversalityResult(True, k, checked, None, per)


# ----------------------------------------------------------------------
# pivot orbits for ordered bipartite graphs
# ----------------------------------------------------------------------

def _bip_state(g) -> tuple[tuple[int, ...], int, tuple]:
    labels = tuple(g.left) + tuple(g.right)
    und = g.to_graph()
    right_word = sum(1 << i for i in range(len(g.left), len(labels)))
    return tuple(und.rows), right_word, labels


def pivot_orbit(g, member_cap: int = DEFAULT_MEMBER_CAP) -> PivotOrbit:
    """Closure of an ordered bipartite graph under pivots at its edges (with side swaps)."""
    rows0, word0, labels = _bip_state(g)
    n = len(labels)

    def key(state):
        return (rows_to_bitmask(state[0]), state[1])

    def step(state):
        rows, word = state
        for i in range(n):
            if (word >> i) & 1:
                continue
            for j in iter_bits(rows[i]):
                yield (i, j), (tuple(pivot_rows(rows, i, j)), word ^ (1 << i) ^ (1 << j))

    members = {key((rows0, word0)): None}
    layers: list[int] = []
    states, truncated = _expand(members, layers, (rows0, word0), step, key, member_cap)
    return PivotOrbit(g, members, states, layers, truncated)


def is_pivot_minor(g, h, member_cap: int = DEFAULT_MEMBER_CAP,
                   orbit: PivotOrbit | None = None) -> MinorDecision:
    """Is the ordered bipartite graph ``h`` a labeled pivot-minor of ``g``?

    ``h``'s left and right sides must match the sides of its vertices in the
    orbit member, and its edges must match the induced subgraph.
    """
    from .bippivot import OrderedBipartiteGraph

    orbit = orbit or pivot_orbit(g, member_cap)
    labels = tuple(g.left) + tuple(g.right)
    pos = {v: i for i, v in enumerate(labels)}
    hl = [pos[v] for v in h.left]
    hr = [pos[v] for v in h.right]
    idx = hl + hr
    target = _induced_code(h.to_graph().rows, range(len(idx)))
    hr_mask = sum(1 << i for i in hr)
    sub_mask = sum(1 << i for i in idx)
    for rows, word in orbit.states:
        if word & sub_mask != hr_mask:
            continue
        if _induced_code(rows, idx) == target:
            left = [labels[i] for i in range(len(labels)) if not (word >> i) & 1]
            right = [labels[i] for i in range(len(labels)) if (word >> i) & 1]
            und = Graph._from_rows(rows, labels)
            word_key = (rows_to_bitmask(rows), word)
            return MinorDecision(True, OrderedBipartiteGraph.from_graph(und, left, right),
                                 orbit.word(word_key))
    return MinorDecision(None if orbit.truncated else False)
