"""Labeled simple graphs, local complementation and pivoting.

A :class:`Graph` is a symmetric zero-diagonal :class:`~vmlab.f2core.F2Matrix`
plus an ordered tuple of vertex labels.  All rewriting operations return new
graphs; labels stay attached to the same vertices across rewrites.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .f2core import F2Matrix, iter_bits

__all__ = [
    "Graph",
    "Graph6Error",
    "local_complement",
    "pivot",
    "pivot_tripartite",
    "induced",
    "delete_vertex",
    "symmetric_difference",
    "to_graph6",
    "from_graph6",
    "to_json",
    "from_json",
    "edge_pairs",
    "lc_rows",
    "pivot_rows",
]


class Graph6Error(ValueError):
    """Malformed graph6 input."""


def edge_pairs(n: int) -> list[tuple[int, int]]:
    """Vertex-index pairs ``(i, j)``, ``i < j``, in lexicographic order.

    This is the edge-bitmask convention shared across the package: bit ``k``
    of a bitmask refers to ``edge_pairs(n)[k]``.
    """
    return list(combinations(range(n), 2))


class Graph:
    """Simple undirected graph on labeled vertices."""

    __slots__ = ("adj", "labels", "_index")

    def __init__(self, adj: F2Matrix, labels: Sequence[Hashable] | None = None):
        if not adj.is_square():
            raise ValueError("adjacency matrix must be square")
        if not adj.diagonal_is_zero():
            raise ValueError("self-loops are not allowed")
        if not adj.is_symmetric():
            raise ValueError("adjacency matrix must be symmetric")
        labels = tuple(range(adj.nrows)) if labels is None else tuple(labels)
        if len(labels) != adj.nrows:
            raise ValueError("label count does not match vertex count")
        index = {v: i for i, v in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("duplicate vertex labels")
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- construction --------------------------------------------------
    @classmethod
    def _from_rows(cls, rows: Sequence[int], labels: Sequence[Hashable]) -> "Graph":
        # trusted internal path: rows already symmetric with zero diagonal
        g = object.__new__(cls)
        object.__setattr__(g, "adj", F2Matrix(len(rows), len(rows), rows))
        object.__setattr__(g, "labels", tuple(labels))
        object.__setattr__(g, "_index", {v: i for i, v in enumerate(labels)})
        return g

    @classmethod
    def empty(cls, labels: int | Sequence[Hashable]) -> "Graph":
        labels = range(labels) if isinstance(labels, int) else labels
        labels = tuple(labels)
        return cls._from_rows([0] * len(labels), labels)

    @classmethod
    def complete(cls, labels: int | Sequence[Hashable]) -> "Graph":
        labels = tuple(range(labels) if isinstance(labels, int) else labels)
        n = len(labels)
        full = (1 << n) - 1
        return cls._from_rows([full & ~(1 << i) for i in range(n)], labels)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[Hashable, Hashable]],
                   labels: int | Sequence[Hashable] | None = None) -> "Graph":
        edges = list(edges)
        if labels is None:
            seen: dict = {}
            for u, v in edges:
                seen.setdefault(u, None)
                seen.setdefault(v, None)
            labels = tuple(seen)
        elif isinstance(labels, int):
            labels = tuple(range(labels))
        labels = tuple(labels)
        index = {v: i for i, v in enumerate(labels)}
        rows = [0] * len(labels)
        for u, v in edges:
            i, j = index[u], index[v]
            if i == j:
                raise ValueError(f"self-loop at {u!r}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls._from_rows(rows, labels)

    @classmethod
    def from_edge_bitmask(cls, mask: int, labels: int | Sequence[Hashable]) -> "Graph":
        labels = tuple(range(labels) if isinstance(labels, int) else labels)
        rows = [0] * len(labels)
        for k, (i, j) in enumerate(edge_pairs(len(labels))):
            if (mask >> k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        return cls._from_rows(rows, labels)

    # -- queries -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def rows(self) -> tuple[int, ...]:
        return self.adj.rows

    def index(self, v: Hashable) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def __contains__(self, v) -> bool:
        return v in self._index

    def has_edge(self, u: Hashable, v: Hashable) -> bool:
        return bool((self.rows[self.index(u)] >> self.index(v)) & 1)

    def neighbors(self, v: Hashable) -> list:
        return [self.labels[j] for j in iter_bits(self.rows[self.index(v)])]

    def degree(self, v: Hashable) -> int:
        return bin(self.rows[self.index(v)]).count("1")

    def edges(self) -> list[tuple]:
        out = []
        for i, r in enumerate(self.rows):
            for j in iter_bits(r >> (i + 1)):
                out.append((self.labels[i], self.labels[i + 1 + j]))
        return out

    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def edge_bitmask(self) -> int:
        """Edge set as an int, bit ``k`` <-> ``edge_pairs(n)[k]``."""
        return rows_to_bitmask(self.rows)

    def reorder(self, labels: Sequence[Hashable]) -> "Graph":
        """Same graph with vertices listed in a different order."""
        labels = tuple(labels)
        if len(labels) != self.n or set(labels) != set(self.labels):
            raise ValueError("reorder needs a permutation of the vertex labels")
        return induced(self, labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.labels == other.labels:
            return self.adj == other.adj
        if set(self.labels) != set(other.labels):
            return False
        return self.adj == other.reorder(self.labels).adj

    def __hash__(self):
        return hash((frozenset(self.labels), frozenset(frozenset(e) for e in self.edges())))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


# ----------------------------------------------------------------------
# row-level kernels (also used by the orbit searches)
# ----------------------------------------------------------------------

def rows_to_bitmask(rows: Sequence[int]) -> int:
    mask, k = 0, 0
    n = len(rows)
    for i in range(n):
        r = rows[i] >> (i + 1)
        mask |= r << k
        k += n - i - 1
    return mask


def lc_rows(rows: Sequence[int], i: int) -> list[int]:
    """Local complementation at vertex index ``i`` on packed rows."""
    out = list(rows)
    nb = out[i]
    for x in iter_bits(nb):
        out[x] ^= nb & ~(1 << x)
    return out


def pivot_rows(rows: Sequence[int], i: int, j: int) -> list[int]:
    return lc_rows(lc_rows(lc_rows(rows, i), j), i)


# ----------------------------------------------------------------------
# rewriting
# ----------------------------------------------------------------------

def local_complement(g: Graph, v: Hashable) -> Graph:
    """``G * v``: complement the subgraph induced on the neighbourhood of ``v``."""
    return Graph._from_rows(lc_rows(g.rows, g.index(v)), g.labels)


def _require_edge(g: Graph, u, v) -> tuple[int, int]:
    i, j = g.index(u), g.index(v)
    if not (g.rows[i] >> j) & 1:
        raise ValueError(f"{u!r}{v!r} is not an edge")
    return i, j


def pivot(g: Graph, u: Hashable, v: Hashable) -> Graph:
    """``G x uv`` computed as ``G * u * v * u``."""
    i, j = _require_edge(g, u, v)
    return Graph._from_rows(pivot_rows(g.rows, i, j), g.labels)


def pivot_tripartite(g: Graph, u: Hashable, v: Hashable) -> Graph:
    """``G x uv`` via the complete-tripartite description.

    Toggles every pair between distinct parts of
    ``N(u) & N(v)``, ``N(u) - N(v) - {v}``, ``N(v) - N(u) - {u}``,
    then exchanges the neighbourhoods of ``u`` and ``v``.
    """
    i, j = _require_edge(g, u, v)
    rows = list(g.rows)
    nu, nv = rows[i], rows[j]
    ends = (1 << i) | (1 << j)
    a = nu & nv
    b = nu & ~nv & ~ends
    c = nv & ~nu & ~ends
    for part, others in ((a, b | c), (b, a | c), (c, a | b)):
        for x in iter_bits(part):
            rows[x] ^= others
    # swap u and v: exchange both rows and columns
    rows[i], rows[j] = rows[j], rows[i]
    bi, bj = 1 << i, 1 << j
    for x in range(len(rows)):
        r = rows[x]
        if bool(r & bi) != bool(r & bj):
            rows[x] = r ^ bi ^ bj
    return Graph._from_rows(rows, g.labels)


def induced(g: Graph, u_set: Iterable[Hashable]) -> Graph:
    """Subgraph induced on ``u_set``, vertices listed in the given order."""
    labels = tuple(u_set)
    idx = [g.index(v) for v in labels]
    if len(set(idx)) != len(idx):
        raise ValueError("repeated vertex in subset")
    rows = []
    for a in idx:
        r = g.rows[a]
        out = 0
        for k, b in enumerate(idx):
            if (r >> b) & 1:
                out |= 1 << k
        rows.append(out)
    return Graph._from_rows(rows, labels)


def delete_vertex(g: Graph, v: Hashable) -> Graph:
    return induced(g, [w for w in g.labels if w != v])


def symmetric_difference(g: Graph, h: Graph) -> Graph:
    """Graph whose edge set is the XOR of the two edge sets."""
    if set(g.labels) != set(h.labels):
        raise ValueError("graphs are on different vertex sets")
    if h.labels != g.labels:
        h = induced(h, g.labels)
    return Graph._from_rows([a ^ b for a, b in zip(g.rows, h.rows)], g.labels)


# ----------------------------------------------------------------------
# graph6 and JSON
# ----------------------------------------------------------------------

def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode in graph6 (upper triangle read column by column)."""
    bits = []
    rows = g.rows
    for j in range(1, g.n):
        for i in range(j):
            bits.append((rows[i] >> j) & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + (bits[k] << 5 | bits[k + 1] << 4 | bits[k + 2] << 3
                  | bits[k + 3] << 2 | bits[k + 4] << 1 | bits[k + 5]))
        for k in range(0, len(bits), 6)
    )
    return (">>graph6<<" if header else "") + _encode_n(g.n) + body


def from_graph6(text: str) -> Graph:
    """Decode a graph6 string; vertices are labeled ``0 .. n-1``."""
    s = text.strip()
    offset = 0
    if s.startswith(">>graph6<<"):
        s = s[10:]
        offset = 10
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"invalid character {ch!r} at position {pos + offset}")
    if not s:
        raise Graph6Error("empty graph6 string")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] < 63:
        n, start = vals[0], 1
    elif len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise Graph6Error(f"truncated vertex count at position {offset}")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        start = 4
    else:
        if len(vals) < 8:
            raise Graph6Error(f"truncated vertex count at position {offset}")
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        start = 8
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = vals[start:]
    if len(body) != need:
        raise Graph6Error(
            f"expected {need} data characters after position {start + offset - 1}, got {len(body)}"
        )
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if nbits % 6 and body[-1] & ((1 << (6 - nbits % 6)) - 1):
        raise Graph6Error(f"nonzero padding bits at position {start + offset + need - 1}")
    return Graph._from_rows(rows, range(n))


def to_json(g: Graph) -> str:
    """Adjacency-list JSON: ``{"vertices": [...], "adjacency": {v: [...]}}``."""
    return json.dumps(
        {
            "vertices": list(g.labels),
            "adjacency": {str(v): g.neighbors(v) for v in g.labels},
        },
        sort_keys=True,
    )


def from_json(text: str) -> Graph:
    data = json.loads(text)
    labels = [tuple(v) if isinstance(v, list) else v for v in data["vertices"]]
    by_str = {str(v): v for v in labels}
    edges = []
    for key, nbrs in data["adjacency"].items():
        u = by_str[key]
        for w in nbrs:
            w = tuple(w) if isinstance(w, list) else w
            edges.append((u, w))
    adjacency = data["adjacency"]
    for u, w in edges:
        back = adjacency.get(str(w), [])
        if not any(str(x) == str(u) for x in back):
            raise ValueError(f"adjacency lists are not symmetric at {u!r}-{w!r}")
    return Graph.from_edges(edges, labels)
