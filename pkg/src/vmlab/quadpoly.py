"""Multilinear polynomials of degree at most two over GF(2).

The central quantity is the sign expectation ``E[(-1)^f(X)]`` for ``X`` with
independent Bernoulli(p) coordinates, and its upper bound
``(1 - 2q^2)^floor(rank(coef2)/6)`` with ``q = min(p, 1 - p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .f2core import F2Matrix, F2Vector, iter_bits, popcount, rank

__all__ = [
    "EXHAUSTIVE_CAP",
    "CapExceeded",
    "QuadPoly",
    "AffineForm",
    "Estimate",
    "evaluate",
    "evaluate_many",
    "sign_expectation_exact",
    "sign_expectation_mc",
    "lemma21_bound",
    "multilinearize_product",
    "all_polynomials",
]

EXHAUSTIVE_CAP = 24


class CapExceeded(ValueError):
    """Exhaustive computation requested beyond its size cap."""


@dataclass(frozen=True)
class QuadPoly:
    """``constant + sum linear_i x_i + sum_{i<j} coef2_ij x_i x_j``.

    ``coef2`` is stored symmetrically: the monomial ``x_i x_j`` sets both
    ``(i, j)`` and ``(j, i)``.  The diagonal is always zero.
    """

    m: int
    constant: int
    linear: F2Vector
    coef2: F2Matrix

    def __post_init__(self):
        if self.linear.len != self.m or self.coef2.shape != (self.m, self.m):
            raise ValueError("component sizes do not match m")
        if not self.coef2.is_symmetric() or not self.coef2.diagonal_is_zero():
            raise ValueError("coef2 must be symmetric with zero diagonal")
        object.__setattr__(self, "constant", self.constant & 1)

    @classmethod
    def zero(cls, m: int) -> "QuadPoly":
        return cls(m, 0, F2Vector.zeros(m), F2Matrix.zeros(m))

    @classmethod
    def from_terms(cls, m: int, pairs: Iterable[tuple[int, int]] = (),
                   linear: Iterable[int] = (), constant: int = 0) -> "QuadPoly":
        """Build from monomials; repeated monomials cancel mod 2."""
        rows = [0] * m
        for i, j in pairs:
            if i == j:
                raise ValueError("x_i^2 is not multilinear; use the linear term")
            rows[i] ^= 1 << j
            rows[j] ^= 1 << i
        lin = 0
        for i in linear:
            lin ^= 1 << i
        return cls(m, constant, F2Vector(m, lin), F2Matrix(m, m, rows))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.coef2.rows) for j in iter_bits(r) if j > i]

    def rank(self) -> int:
        return rank(self.coef2)

    def with_linear(self, linear: F2Vector, constant: int | None = None) -> "QuadPoly":
        return QuadPoly(self.m, self.constant if constant is None else constant, linear, self.coef2)

    def __add__(self, other: "QuadPoly") -> "QuadPoly":
        if self.m != other.m:
            raise ValueError("variable counts differ")
        return QuadPoly(self.m, self.constant ^ other.constant,
                        self.linear + other.linear, self.coef2 + other.coef2)

    def __call__(self, x) -> int:
        return evaluate(self, x)


@dataclass(frozen=True)
class AffineForm:
    """``constant + sum linear_i x_i``."""

    m: int
    linear: F2Vector
    constant: int = 0

    @classmethod
    def from_terms(cls, m: int, linear: Iterable[int] = (), constant: int = 0) -> "AffineForm":
        bits = 0
        for i in linear:
            bits ^= 1 << i
        return cls(m, F2Vector(m, bits), constant & 1)

    def __call__(self, x) -> int:
        xb = _as_bits(x, self.m)
        return (popcount(self.linear.bits & xb) + self.constant) & 1

    def as_poly(self) -> QuadPoly:
        return QuadPoly(self.m, self.constant, self.linear, F2Matrix.zeros(self.m))


class Estimate(NamedTuple):
    mean: float
    stderr: float
    samples: int


def _as_bits(x, m: int) -> int:
    if isinstance(x, F2Vector):
        if x.len != m:
            raise ValueError(f"expected {m} coordinates, got {x.len}")
        return x.bits
    if isinstance(x, (int, np.integer)):
        if x >> m:
            raise ValueError("assignment has bits beyond m")
        return int(x)
    x = list(x)
    if len(x) != m:
        raise ValueError(f"expected {m} coordinates, got {len(x)}")
    return sum((int(b) & 1) << i for i, b in enumerate(x))


def evaluate(f: QuadPoly, x) -> int:
    """``f(x)`` for ``x`` given as bits, an ``F2Vector`` or a packed int."""
    xb = _as_bits(x, f.m)
    acc = f.constant + popcount(f.linear.bits & xb)
    for i in iter_bits(xb):
        # each unordered pair once: partner index above i
        acc += popcount(f.coef2.rows[i] & xb & ~((2 << i) - 1))
    return acc & 1


def _upper_array(f: QuadPoly) -> np.ndarray:
    return np.triu(f.coef2.to_array().astype(np.int64), 1)


def evaluate_many(f: QuadPoly, xs: np.ndarray) -> np.ndarray:
    """Vectorised evaluation on the rows of a (N, m) 0/1 array."""
    xs = np.asarray(xs, dtype=np.int64)
    up = _upper_array(f)
    lin = f.linear.to_array().astype(np.int64)
    val = f.constant + xs @ lin + np.einsum("ni,ij,nj->n", xs, up, xs)
    return (val & 1).astype(np.uint8)


def _bit_table(k: int) -> np.ndarray:
    """(2^k, k) array whose row ``v`` holds the bits of ``v``."""
    idx = np.arange(1 << k, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k)) & 1).astype(np.int64)


def _signed_weight_counts(f: QuadPoly) -> np.ndarray:
    """``c[w] = #{x : |x| = w, f(x) = 0} - #{x : |x| = w, f(x) = 1}``.

    Variables are split into a low block and a high block; ``f`` restricted to
    each block is tabulated once and the cross term is a bilinear form, so the
    whole hypercube is one (2^hi x 2^lo) array.
    """
    m = f.m
    lo = (m + 1) // 2
    hi = m - lo
    up = _upper_array(f)
    lin = f.linear.to_array().astype(np.int64)
    xl, xh = _bit_table(lo), _bit_table(hi)
    f_lo = (xl @ lin[:lo] + np.einsum("ni,ij,nj->n", xl, up[:lo, :lo], xl)) & 1
    f_hi = (f.constant + xh @ lin[lo:] + np.einsum("ni,ij,nj->n", xh, up[lo:, lo:], xh)) & 1
    # x_hi . C . x_lo with C the cross block (only i<j entries: low index < high index)
    cross = (xh @ up[:lo, lo:].T) & 1  # (2^hi, lo)
    w_lo = xl.sum(axis=1)
    w_hi = xh.sum(axis=1)
    onehot = (w_lo[:, None] == np.arange(lo + 1)).astype(np.float64)
    by_lo = np.empty((1 << hi, lo + 1), dtype=np.int64)
    step = 256
    for start in range(0, 1 << hi, step):
        stop = min(start + step, 1 << hi)
        par = (cross[start:stop] @ xl.T) & 1
        val = par ^ f_hi[start:stop, None] ^ f_lo[None, :]
        by_lo[start:stop] = np.rint((1.0 - 2.0 * val) @ onehot).astype(np.int64)
    counts = np.zeros(m + 1, dtype=np.int64)
    for wh in range(hi + 1):
        rows = w_hi == wh
        if rows.any():
            counts[wh:wh + lo + 1] += by_lo[rows].sum(axis=0)
    return counts


def _check_p(pv: float) -> None:
    if not 0.0 <= pv <= 1.0:
        raise ValueError(f"p={pv} outside [0, 1]")


def sign_expectation_exact(f: QuadPoly, p):
    """Exact ``E[(-1)^f(X)]`` with ``X_i ~ Bernoulli(p)`` independent.

    The hypercube is enumerated once into integer signed counts per Hamming
    weight; the probability sum then has only ``m + 1`` terms, added with
    ``math.fsum``.  ``p`` may be a scalar or a sequence of probabilities.
    """
    if f.m > EXHAUSTIVE_CAP:
        raise CapExceeded(
            f"m={f.m} exceeds the exhaustive cap {EXHAUSTIVE_CAP}; use sign_expectation_mc"
        )
    m = f.m
    if not f.linear.bits and not any(f.coef2.rows):
        # constant polynomial: skip the weight sum so the answer is exact
        const = float(1 - 2 * f.constant)
        for pv in np.atleast_1d(p):
            _check_p(float(pv))
        return const if np.ndim(p) == 0 else np.full(len(p), const)
    counts = _signed_weight_counts(f)

    def one(pv: float) -> float:
        _check_p(pv)
        return math.fsum(int(c) * pv ** w * (1.0 - pv) ** (m - w)
                         for w, c in enumerate(counts) if c)

    if np.ndim(p) == 0:
        return one(float(p))
    return np.array([one(float(pv)) for pv in p])


def sign_expectation_mc(f: QuadPoly, p: float, samples: int, seed=None) -> Estimate:
    """Monte-Carlo mean of ``(-1)^f(X)`` with its standard error."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not f.pairs() and not f.linear.bits:
        return Estimate(1.0 - 2.0 * f.constant, 0.0, samples)
    rng = np.random.default_rng(seed)
    total = 0
    chunk = 1 << 16
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        xs = (rng.random((b, f.m)) < p).astype(np.int64)
        total += int((1 - 2 * evaluate_many(f, xs).astype(np.int64)).sum())
        done += b
    mean = total / samples
    var = max(0.0, 1.0 - mean * mean) * samples / max(samples - 1, 1)
    return Estimate(mean, math.sqrt(var / samples), samples)


def lemma21_bound(f: QuadPoly, p: float) -> float:
    """``(1 - 2 q^2) ** floor(rank(coef2) / 6)`` with ``q = min(p, 1 - p)``."""
    q = min(p, 1.0 - p)
    return (1.0 - 2.0 * q * q) ** (f.rank() // 6)


def multilinearize_product(f1: AffineForm, f2: AffineForm) -> QuadPoly:
    """The multilinear polynomial equal to ``f1 * f2`` on ``{0,1}^m``.

    With ``f1 = a.x + c1`` and ``f2 = b.x + c2`` the square terms
    ``a_i b_i x_i^2`` fold into the linear part and the pair coefficient of
    ``x_i x_j`` is ``a_i b_j + a_j b_i``.
    """
    if f1.m != f2.m:
        raise ValueError("forms are over different variable counts")
    m = f1.m
    a, b = f1.linear.bits, f2.linear.bits
    rows = []
    for i in range(m):
        row = 0
        if (a >> i) & 1:
            row ^= b
        if (b >> i) & 1:
            row ^= a
        rows.append(row & ~(1 << i))
    lin = (a & b) ^ (a if f2.constant else 0) ^ (b if f1.constant else 0)
    return QuadPoly(m, f1.constant & f2.constant, F2Vector(m, lin), F2Matrix(m, m, rows))


def all_polynomials(m: int):
    """Every multilinear polynomial of degree <= 2 in ``m`` variables."""
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for pmask in range(1 << len(pairs)):
        chosen = [pairs[k] for k in iter_bits(pmask)]
        base = QuadPoly.from_terms(m, chosen)
        for lin in range(1 << m):
            for c in (0, 1):
                yield QuadPoly(m, c, F2Vector(m, lin), base.coef2)
