"""Distributions over graphs on a small labeled vertex set, and their Fourier side.

A distribution on graphs over ``s`` labeled vertices is an array of length
``2^C(s,2)`` indexed by edge bitmask (bit ``k`` <-> ``edge_pairs(s)[k]``).
The transform is ``f^(F) = sum_H f(H) (-1)^|H & F|``, computed with a fast
Walsh-Hadamard butterfly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

import numpy as np

from .f2core import F2Matrix, rank as f2rank, tensor
from .graph import Graph, edge_pairs, induced
from .lcdelta import LCInstance, build_m, sample_delta_codes
from .quadpoly import CapExceeded, QuadPoly, sign_expectation_exact, EXHAUSTIVE_CAP
from .rankcensus import census_formula

__all__ = [
    "MAX_EDGE_BITS",
    "ENUMERATION_CAP",
    "GraphDist",
    "FourierSpectrum",
    "HypothesisViolation",
    "TVEstimate",
    "TensorCheck",
    "fwht",
    "fourier_transform",
    "inverse_fourier_transform",
    "tv_to_uniform",
    "fourier_tv_bound",
    "tv_estimate",
    "delta_distribution_from_m",
    "delta_distribution_exact",
    "delta_distribution_bruteforce",
    "delta_distribution_mc",
    "claim34_bound",
    "claim34_polynomial",
    "claim34_tensor_check",
    "lemma31_bound",
    "fourier_census_bound",
    "coupled_final_distribution",
    "edge_probability_independent_w",
    "delta_edge_probability_independent_w",
]

MAX_EDGE_BITS = 24
ENUMERATION_CAP = 24


@dataclass(frozen=True)
class GraphDist:
    """Probability vector over graphs on ``u_size`` labeled vertices.

    ``samples`` is the number of draws behind an empirical distribution and
    0 for an exact one.
    """

    u_size: int
    probs: np.ndarray
    samples: int = 0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        n_out = 1 << comb(self.u_size, 2)
        if probs.shape != (n_out,):
            raise ValueError(f"expected {n_out} probabilities, got shape {probs.shape}")
        if (probs < 0).any():
            raise ValueError("negative probability")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_edges(self) -> int:
        return comb(self.u_size, 2)

    @classmethod
    def uniform(cls, s: int) -> "GraphDist":
        n_out = 1 << comb(s, 2)
        return cls(s, np.full(n_out, 1.0 / n_out))

    @classmethod
    def point_mass(cls, s: int, code: int = 0) -> "GraphDist":
        probs = np.zeros(1 << comb(s, 2))
        probs[code] = 1.0
        return cls(s, probs)

    @classmethod
    def gnp(cls, s: int, p: float) -> "GraphDist":
        """Law of ``G(s, p)``."""
        n = comb(s, 2)
        w = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
        return cls(s, np.power(p, w) * np.power(1.0 - p, n - w))

    @classmethod
    def from_codes(cls, s: int, codes: np.ndarray) -> "GraphDist":
        codes = np.asarray(codes)
        counts = np.bincount(codes, minlength=1 << comb(s, 2))
        return cls(s, counts / codes.size, samples=int(codes.size))

    def prob(self, g: Graph) -> float:
        return float(self.probs[g.edge_bitmask()])

    def edge_marginal(self, k: int) -> float:
        """Probability that the ``k``-th pair is an edge."""
        idx = np.arange(self.probs.size)
        return float(self.probs[(idx >> k) & 1 == 1].sum())


@dataclass(frozen=True)
class FourierSpectrum:
    u_size: int
    coeffs: np.ndarray

    def __getitem__(self, code: int) -> float:
        return float(self.coeffs[code])


@dataclass(frozen=True)
class HypothesisViolation:
    """A bound was requested outside the range where it is claimed."""

    reason: str
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return False


class TVEstimate(NamedTuple):
    tv: float
    stderr: float
    bias_bound: float
    samples: int


class TensorCheck(NamedTuple):
    passed: bool
    coef2_matches: bool
    expectation_matches: bool
    fourier_value: float
    polynomial_value: float


# ----------------------------------------------------------------------
# transform and distances
# ----------------------------------------------------------------------

def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis (length 2^N)."""
    out = np.array(a, dtype=np.float64, copy=True)
    n = out.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    lead = out.shape[:-1]
    h = 1
    while h < n:
        v = out.reshape(*lead, n // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] += y
        v[..., 1, :] = x - y
        h *= 2
    return out


def fourier_transform(d: GraphDist) -> FourierSpectrum:
    if d.n_edges > MAX_EDGE_BITS:
        raise CapExceeded(f"{d.n_edges} edge bits exceeds cap {MAX_EDGE_BITS}")
    return FourierSpectrum(d.u_size, fwht(d.probs))


def inverse_fourier_transform(spec: FourierSpectrum) -> np.ndarray:
    """``f(H) = 2^-N sum_F f^(F) (-1)^|H & F|``."""
    return fwht(spec.coeffs) / spec.coeffs.size


def tv_to_uniform(d: GraphDist) -> float:
    return 0.5 * math.fsum(np.abs(d.probs - 1.0 / d.probs.size))


def fourier_tv_bound(d: GraphDist) -> float:
    """``1/2 sum_{F != empty} |mu^(F)|``."""
    c = fourier_transform(d).coeffs
    return 0.5 * math.fsum(np.abs(c[1:]))


def tv_estimate(d: GraphDist) -> TVEstimate:
    """Plug-in TV distance to uniform for an empirical distribution.

    ``stderr`` is the delta-method standard error of the plug-in statistic;
    ``bias_bound`` is ``sum_H sqrt(p_H / N) / 2`` evaluated at the empirical
    frequencies.
    """
    if d.samples < 1:
        raise ValueError("tv_estimate needs an empirical distribution")
    u = 1.0 / d.probs.size
    diff = d.probs - u
    tv = 0.5 * math.fsum(np.abs(diff))
    sign = np.sign(diff)
    mean = float(np.dot(d.probs, sign))
    var = float(np.dot(d.probs, sign * sign)) - mean * mean
    stderr = 0.5 * math.sqrt(max(var, 0.0) / d.samples)
    bias = 0.5 * math.fsum(np.sqrt(d.probs / d.samples))
    return TVEstimate(tv, stderr, bias, d.samples)


# ----------------------------------------------------------------------
# the law of G_delta
# ----------------------------------------------------------------------

def _pair_index(s: int) -> dict[tuple[int, int], int]:
    return {pr: k for k, pr in enumerate(edge_pairs(s))}


def _linear_table(m: F2Matrix) -> np.ndarray:
    """``t[v]`` = packed row vector ``v M`` for every ``v`` in ``F2^r``."""
    t = np.zeros(1, dtype=np.int64)
    for row in m.rows:
        t = np.concatenate([t, t ^ np.int64(row)])
    return t


def _grouped_sum(codes: np.ndarray, weights: np.ndarray, size: int) -> np.ndarray:
    """Per-code totals using numpy's pairwise summation.

    ``np.bincount`` adds sequentially, which loses about 1e-12 over 2^20
    terms; sorting first keeps each group contiguous for ``np.sum``.
    """
    order = np.argsort(codes, kind="stable")
    sc, sw = codes[order], weights[order]
    keys, starts = np.unique(sc, return_index=True)
    ends = np.append(starts[1:], sc.size)
    out = np.zeros(size)
    for k, a, b in zip(keys, starts, ends):
        out[k] = sw[a:b].sum()
    return out


def delta_distribution_from_m(s: int, m: F2Matrix, p: float) -> GraphDist:
    """Exact law of ``off_diag(X M X^T)`` for ``X`` in ``F2^{s x r}`` i.i.d. Bernoulli(p).

    Rows ``v_1 .. v_{s-1}`` of ``X`` are enumerated.  The edges to the last
    vertex are the linear functionals ``y_i = (v_i M) . v_s`` of the last row,
    whose joint law follows from ``E[(-1)^(h . v)] = (1 - 2p)^|h|`` by
    inversion, so only ``2^(r (s-1))`` terms are summed.
    """
    r = m.nrows
    n_edges = comb(s, 2)
    if s <= 1 or r == 0:
        return GraphDist.point_mass(s)
    k = s - 1
    if r * k > ENUMERATION_CAP:
        raise CapExceeded(f"r*(s-1) = {r * k} exceeds enumeration cap {ENUMERATION_CAP}")
    if n_edges > MAX_EDGE_BITS:
        raise CapExceeded(f"{n_edges} edge bits exceeds cap {MAX_EDGE_BITS}")
    pidx = _pair_index(s)
    table = _linear_table(m)
    vr = np.arange(1 << r, dtype=np.int64)
    wr = np.bitwise_count(vr).astype(np.int64)
    weight = np.power(p, wr) * np.power(1.0 - p, r - wr)

    idx = np.arange(1 << (r * k), dtype=np.int64)
    full = (1 << r) - 1
    rows = [(idx >> (r * i)) & full for i in range(k)]
    hs = [table[v] for v in rows]
    wt = np.ones(idx.size)
    for v in rows:
        wt *= weight[v]
    base = np.zeros(idx.size, dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            bit = np.bitwise_count(hs[i] & rows[j]).astype(np.int64) & 1
            base |= bit << pidx[(i, j)]

    # characteristic function of the last-row functionals, then invert
    ncls = 1 << k
    char = np.empty((idx.size, ncls))
    q = 1.0 - 2.0 * p
    for c in range(ncls):
        hc = np.zeros(idx.size, dtype=np.int64)
        for i in range(k):
            if (c >> i) & 1:
                hc ^= hs[i]
        char[:, c] = np.power(q, np.bitwise_count(hc).astype(np.int64))
    had = np.array([[(-1) ** bin(c & y).count("1") for y in range(ncls)] for c in range(ncls)],
                   dtype=np.float64)
    py = (char @ had) / ncls
    np.maximum(py, 0.0, out=py)
    yoff = np.zeros(ncls, dtype=np.int64)
    for y in range(ncls):
        for i in range(k):
            if (y >> i) & 1:
                yoff[y] |= 1 << pidx[(i, k)]
    codes = (base[:, None] | yoff[None, :]).ravel()
    probs = _grouped_sum(codes, (wt[:, None] * py).ravel(), 1 << n_edges)
    probs /= probs.sum()
    return GraphDist(s, probs)


def _w_graph(inst: LCInstance, conditioned_gw: Graph | None) -> Graph:
    if conditioned_gw is None:
        return induced(inst.g, inst.w_order)
    if set(conditioned_gw.labels) == set(inst.w_order):
        return induced(conditioned_gw, inst.w_order)
    if conditioned_gw.n == inst.r:
        return Graph._from_rows(conditioned_gw.rows, inst.w_order)
    raise ValueError("conditioned graph does not match W")


def _m_for(gw: Graph) -> F2Matrix:
    return build_m(LCInstance(gw, (), gw.labels))


def delta_distribution_exact(inst: LCInstance, p: float,
                             conditioned_gw: Graph | None = None) -> GraphDist:
    """Law of ``G_delta`` given ``G[W]`` (default: the instance's own ``G[W]``)."""
    gw = _w_graph(inst, conditioned_gw)
    return delta_distribution_from_m(inst.s, _m_for(gw), p)


def delta_distribution_bruteforce(s: int, m: F2Matrix, p: float) -> GraphDist:
    """Reference enumeration over every ``X`` in ``F2^{s x r}``; small sizes only."""
    r = m.nrows
    if s * r > 16:
        raise CapExceeded("brute force limited to s*r <= 16")
    marr = m.to_array().astype(np.int64)
    pairs = edge_pairs(s)
    probs = np.zeros(1 << len(pairs))
    for code in range(1 << (s * r)):
        x = np.array([(code >> b) & 1 for b in range(s * r)], dtype=np.int64).reshape(s, r)
        w = p ** int(x.sum()) * (1 - p) ** (s * r - int(x.sum()))
        prod = (x @ marr @ x.T) & 1
        out = sum(int(prod[i, j]) << k for k, (i, j) in enumerate(pairs))
        probs[out] += w
    return GraphDist(s, probs)


def delta_distribution_mc(inst: LCInstance | tuple[int, int], p: float, samples: int,
                          seed=None, conditioned_gw: Graph | None = None) -> GraphDist:
    """Empirical law of ``G_delta`` from seeded draws of ``G(s + r, p)``.

    ``inst`` may be an instance (only its sizes are used unless
    ``conditioned_gw`` fixes ``G[W]``) or a plain ``(s, r)`` pair.
    """
    if isinstance(inst, LCInstance):
        s, r = inst.s, inst.r
        gw = _w_graph(inst, conditioned_gw) if conditioned_gw is not None else None
    else:
        s, r = inst
        gw = conditioned_gw
    if comb(s, 2) > 20:
        raise CapExceeded("empirical distributions limited to C(s,2) <= 20")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    if r == 0:
        return GraphDist.from_codes(s, np.zeros(samples, dtype=np.int64))
    codes = sample_delta_codes(s, r, p, samples, rng, gw=gw)
    return GraphDist.from_codes(s, codes)


# ----------------------------------------------------------------------
# bounds
# ----------------------------------------------------------------------

def claim34_bound(F: Graph | F2Matrix | int, r: int, q: float, floor: bool = False) -> float:
    """``(1 - 2q^2)^(r rank(F)/6 - 1)``; with ``floor=True`` the sharper
    ``(1 - 2q^2)^floor(r rank(F)/6)``.  ``F`` may also be given as its rank."""
    if isinstance(F, Graph):
        a = f2rank(F.adj)
    elif isinstance(F, F2Matrix):
        a = f2rank(F)
    else:
        a = int(F)
    base = 1.0 - 2.0 * q * q
    if floor:
        return base ** ((r * a) // 6)
    return base ** (r * a / 6 - 1)


def fourier_census_bound(s: int, r: int, q: float) -> float:
    """``1/2 sum_{a>=1} census(s, a) * claim34_bound(a)``."""
    return 0.5 * math.fsum(census_formula(s, a) * claim34_bound(a, r, q) for a in range(1, s + 1))


def claim34_polynomial(s: int, m: F2Matrix, F: Graph | int) -> QuadPoly:
    """``f(X) = sum_{{i,j} in F} v_i M v_j^T`` over the variables ``X_ij``.

    Variable ``X_ij`` has index ``i * r + j``.  The polynomial is assembled
    monomial by monomial; it is not derived from any tensor product.
    """
    r = m.nrows
    code = F.edge_bitmask() if isinstance(F, Graph) else int(F)
    nvar = s * r
    monomials = []
    for k, (i, kk) in enumerate(edge_pairs(s)):
        if not (code >> k) & 1:
            continue
        for j in range(r):
            for l in range(r):
                if m[j, l]:
                    monomials.append((i * r + j, kk * r + l))
    return QuadPoly.from_terms(nvar, monomials)


def claim34_tensor_check(inst: LCInstance, p: float, conditioned_gw: Graph | None,
                         F: Graph | int, tol: float = 1e-12) -> TensorCheck:
    """Cross-check one Fourier coefficient of the ``G_delta`` law two ways.

    Builds the quadratic polynomial behind ``mu^(F)``, checks that its
    degree-two coefficient matrix is ``A_F (x) M``, and compares its exact sign
    expectation with the coefficient read off the exact distribution.
    """
    s = inst.s
    if s * inst.r > EXHAUSTIVE_CAP:
        raise CapExceeded(f"s*r = {s * inst.r} exceeds cap {EXHAUSTIVE_CAP}")
    gw = _w_graph(inst, conditioned_gw)
    m = _m_for(gw)
    if isinstance(F, Graph):
        if set(F.labels) == set(inst.u_set):
            fgraph = induced(F, inst.u_set)
        else:
            fgraph = Graph._from_rows(F.rows, inst.u_set)
    else:
        fgraph = Graph.from_edge_bitmask(int(F), inst.u_set)
    code = fgraph.edge_bitmask()
    f = claim34_polynomial(s, m, code)
    coef_ok = f.coef2 == tensor(fgraph.adj, m)
    dist = delta_distribution_from_m(s, m, p)
    fourier_value = fourier_transform(dist)[code]
    poly_value = float(sign_expectation_exact(f, p))
    exp_ok = abs(fourier_value - poly_value) <= tol
    return TensorCheck(coef_ok and exp_ok, coef_ok, exp_ok, fourier_value, poly_value)


def lemma31_bound(s: int, r: int, q: float) -> float | HypothesisViolation:
    """``2^(-q^2 r / 6)`` when ``s <= q^2 r / 6``; otherwise a violation marker."""
    cap = q * q * r / 6
    if s > cap:
        return HypothesisViolation("s > q^2 r / 6", {"s": s, "r": r, "q": q, "limit": cap})
    return 2.0 ** (-cap)


def coupled_final_distribution(d_delta: GraphDist, p: float) -> GraphDist:
    """Law of ``G[U] ^ G_delta`` with ``G[U] ~ G(s, p)`` independent of ``G_delta``.

    XOR-convolution is a pointwise product on the Fourier side, and the
    transform of the ``G(s, p)`` law is ``(1 - 2p)^|F|``.
    """
    n = d_delta.n_edges
    w = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
    spec = fwht(d_delta.probs) * np.power(1.0 - 2.0 * p, w)
    out = fwht(spec) / spec.size
    np.maximum(out, 0.0, out=out)
    return GraphDist(d_delta.u_size, out / out.sum(), samples=d_delta.samples)


def delta_edge_probability_independent_w(p: float, r: int) -> float:
    """P(a given pair in ``U`` is toggled) when ``W`` is independent: ``(1 - (1-2p^2)^r)/2``."""
    return (1.0 - (1.0 - 2.0 * p * p) ** r) / 2.0


def edge_probability_independent_w(p: float, r: int) -> float:
    """P(``uv`` is an edge of ``G'[U]``) when ``W`` is independent.

    ``uv`` starts as an edge with probability ``p`` and is toggled an odd
    number of times with probability ``(1 - (1-2p^2)^r)/2``, giving
    ``(1 - (1-2p)(1-2p^2)^r)/2``.
    """
    return (1.0 - (1.0 - 2.0 * p) * (1.0 - 2.0 * p * p) ** r) / 2.0
