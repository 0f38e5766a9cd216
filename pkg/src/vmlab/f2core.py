"""Dense linear algebra over GF(2).

Matrices are stored row-major with each row packed into a Python ``int``:
bit ``j`` of ``rows[i]`` is the entry in column ``j``.  Row XOR is a single
machine-level operation on arbitrarily wide rows, which is what every
elimination routine below is built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "SingularMatrixError",
    "F2Vector",
    "F2Matrix",
    "iter_bits",
    "popcount",
    "rank",
    "invert",
    "multiply",
    "tensor",
    "off_diag",
    "transpose",
    "solve_unit_upper_triangular",
]


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class SingularMatrixError(ValueError):
    """Matrix has no inverse over GF(2)."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _pack(bits: Iterable) -> int:
    out = 0
    for j, b in enumerate(bits):
        if int(b) & 1:
            out |= 1 << j
    return out


def _pack_array(a: np.ndarray) -> list[int]:
    """Pack the rows of a 2-d 0/1 array into ints (bit j = column j)."""
    a = np.asarray(a, dtype=np.uint8) & 1
    if a.shape[1] == 0:
        return [0] * a.shape[0]
    packed = np.packbits(a, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


@dataclass(frozen=True)
class F2Vector:
    """A vector over GF(2) of length ``len`` packed into ``bits``."""

    len: int
    bits: int = 0

    def __post_init__(self):
        if self.len < 0:
            raise ValueError("negative length")
        if self.bits >> self.len:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_bits(cls, values: Sequence) -> "F2Vector":
        return cls(len(values), _pack(values))

    @classmethod
    def zeros(cls, n: int) -> "F2Vector":
        return cls(n, 0)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.len:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self):
        return (self[j] for j in range(self.len))

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.len != other.len:
            raise DimensionError(f"length {self.len} vs {other.len}")
        return F2Vector(self.len, self.bits ^ other.bits)

    def dot(self, other: "F2Vector") -> int:
        if self.len != other.len:
            raise DimensionError(f"length {self.len} vs {other.len}")
        return popcount(self.bits & other.bits) & 1

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def support(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_array(self) -> np.ndarray:
        return np.array([self[j] for j in range(self.len)], dtype=np.uint8)

    def __repr__(self):
        return "F2Vector(" + "".join(str(b) for b in self) + ")"


class F2Matrix:
    """Immutable dense matrix over GF(2) with bit-packed rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[int] | None = None):
        rows = tuple(rows) if rows is not None else (0,) * nrows
        if len(rows) != nrows:
            raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond the column count")
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("F2Matrix is immutable")

    # -- construction --------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "F2Matrix":
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_array(cls, a) -> "F2Matrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], _pack_array(a))

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[int]) -> "F2Matrix":
        """Build from packed columns (bit i of ``cols[j]`` is entry (i, j))."""
        rows = [0] * nrows
        for j, c in enumerate(cols):
            for i in iter_bits(c):
                rows[i] |= 1 << j
        return cls(nrows, len(cols), rows)

    @classmethod
    def outer(cls, u: F2Vector, v: F2Vector) -> "F2Matrix":
        return cls(u.len, v.len, [v.bits if (u.bits >> i) & 1 else 0 for i in range(u.len)])

    # -- access --------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(idx)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.ncols, self.rows[i])

    def col_bits(self, j: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    def col(self, j: int) -> F2Vector:
        return F2Vector(self.nrows, self.col_bits(j))

    def columns(self) -> list[F2Vector]:
        return [self.col(j) for j in range(self.ncols)]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                out[i, j] = 1
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "F2Matrix":
        out = []
        for i in rows:
            r = self.rows[i]
            out.append(_pack((r >> j) & 1 for j in cols))
        return F2Matrix(len(rows), len(cols), out)

    # -- algebra -------------------------------------------------------
    @property
    def T(self) -> "F2Matrix":
        return transpose(self)

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        return multiply(self, other)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} vs {other.shape}")
        return F2Matrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    __xor__ = __add__

    def rank(self) -> int:
        return rank(self)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == transpose(self)

    def diagonal_is_zero(self) -> bool:
        return all(not (r >> i) & 1 for i, r in enumerate(self.rows))

    def is_unit_upper_triangular(self) -> bool:
        if not self.is_square():
            return False
        for i, r in enumerate(self.rows):
            # bit i set, nothing below the diagonal
            if (r & ((1 << (i + 1)) - 1)) != (1 << i):
                return False
        return True

    # -- dunder --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        body = "; ".join("".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows)
        return f"F2Matrix({self.nrows}x{self.ncols}: {body})"


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def transpose(m: F2Matrix) -> F2Matrix:
    cols = [0] * m.ncols
    for i, r in enumerate(m.rows):
        bit = 1 << i
        for j in iter_bits(r):
            cols[j] |= bit
    return F2Matrix(m.ncols, m.nrows, cols)


def _row_basis(rows: Iterable[int]) -> dict[int, int]:
    """Reduce rows into a basis keyed by leading (highest) bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                break
            r ^= b
    return basis


def rank(m: F2Matrix) -> int:
    """Row rank of ``m`` over GF(2)."""
    return len(_row_basis(m.rows))


def independent_rows(m: F2Matrix) -> list[int]:
    """Indices of the rows that are independent of the rows before them."""
    basis: dict[int, int] = {}
    picked = []
    for i, r in enumerate(m.rows):
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                picked.append(i)
                break
            r ^= b
    return picked


def invert(m: F2Matrix) -> F2Matrix:
    """Gauss-Jordan inverse; pivots are taken column by column, first nonzero row."""
    if not m.is_square():
        raise DimensionError(f"cannot invert a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    aug = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    for c in range(n):
        bit = 1 << c
        piv = next((i for i in range(c, n) if aug[i] & bit), None)
        if piv is None:
            raise SingularMatrixError(f"singular: no pivot in column {c}")
        aug[c], aug[piv] = aug[piv], aug[c]
        pr = aug[c]
        for i in range(n):
            if i != c and aug[i] & bit:
                aug[i] ^= pr
    return F2Matrix(n, n, [r >> n for r in aug])


def multiply(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    brows = b.rows
    out = []
    for r in a.rows:
        acc = 0
        for j in iter_bits(r):
            acc ^= brows[j]
        out.append(acc)
    return F2Matrix(a.nrows, b.ncols, out)


def tensor(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    """Kronecker product; row (i, i') sits at ``i * b.nrows + i'``."""
    out = []
    for ar in a.rows:
        for br in b.rows:
            acc = 0
            for j in iter_bits(ar):
                acc |= br << (j * b.ncols)
            out.append(acc)
    return F2Matrix(a.nrows * b.nrows, a.ncols * b.ncols, out)


def off_diag(m: F2Matrix) -> F2Matrix:
    if not m.is_square():
        raise DimensionError("off_diag needs a square matrix")
    return F2Matrix(m.nrows, m.ncols, [r & ~(1 << i) for i, r in enumerate(m.rows)])


def solve_unit_upper_triangular(x: F2Matrix, z: F2Matrix) -> F2Matrix | None:
    """Find a unit upper triangular ``Q`` with ``x @ Q == z``.

    Column ``i`` of ``Q`` must satisfy ``x_i + sum_{j<i} Q_ji x_j = z_i``, so
    columns are solved left to right against an incrementally grown basis of
    ``x_0 .. x_{i-1}``.  Coefficients of dependent columns are left at zero.
    Returns ``None`` if some column has no solution.
    """
    if x.shape != z.shape:
        raise DimensionError(f"x is {x.shape} but z is {z.shape}")
    r = x.ncols
    xcols = [x.col_bits(j) for j in range(r)]
    zcols = [z.col_bits(j) for j in range(r)]
    # entries: (leading bit, reduced vector, combination of x-columns)
    basis: list[tuple[int, int, int]] = []
    qcols = []
    for i in range(r):
        target = zcols[i] ^ xcols[i]
        combo = 0
        for lead, vec, comb in basis:
            if (target >> lead) & 1:
                target ^= vec
                combo ^= comb
        if target:
            return None
        qcols.append(combo | (1 << i))
        v, c = xcols[i], 1 << i
        for lead, vec, comb in basis:
            if (v >> lead) & 1:
                v ^= vec
                c ^= comb
        if v:
            basis.append((v.bit_length() - 1, v, c))
    return F2Matrix.from_columns(r, qcols)
