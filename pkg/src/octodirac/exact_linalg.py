"""Exact rational dense linear algebra.

Every algebraic identity in the package is checked with :class:`ExactMatrix`,
whose entries are :class:`fractions.Fraction`.  Floating point is confined to
:func:`expm`, which only the G2 exponentiation path uses.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "ExactMatrix",
    "ShapeError",
    "RowSpace",
    "as_rational",
    "kron",
    "matmul",
    "nullspace",
    "rank",
    "inverse",
    "span_dimension",
    "float_matrix",
    "expm",
]


class ShapeError(ValueError):
    """Raised when matrix shapes are incompatible for an operation."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} cannot be made exact")
        return Fraction(x)
    return Fraction(x)


class ExactMatrix:
    """Immutable dense matrix of rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash", "_int")

    def __init__(self, data: Iterable[Iterable]):
        rows = tuple(tuple(as_rational(x) for x in row) for row in data)
        if not rows:
            raise ShapeError("matrix needs at least one row")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ShapeError("ragged rows")
        self._init(rows, len(rows), cols)

    def _init(self, rows, nrows, ncols):
        self._data = rows
        self.rows = nrows
        self.cols = ncols
        self._hash = None
        self._int = None

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "ExactMatrix":
        # trusted constructor: rows already tuples of Fraction
        m = object.__new__(cls)
        m._init(rows, nrows, ncols)
        return m

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> "ExactMatrix":
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries cannot fill {rows}x{cols}")
        return cls(entries[i * cols:(i + 1) * cols] for i in range(rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        one, zero = _SMALL[1], _SMALL[0]
        return cls._raw(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
            n, n,
        )

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        vals = [as_rational(v) for v in values]
        z = Fraction(0)
        return cls._raw(
            tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)),
            n, n,
        )

    @classmethod
    def column(cls, values: Sequence) -> "ExactMatrix":
        return cls([v] for v in values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self._data for x in row)

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._raw(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._data, other._data)),
            self.rows, self.cols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._raw(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self._data, other._data)),
            self.rows, self.cols,
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def scale(self, c) -> "ExactMatrix":
        c = as_rational(c)
        return ExactMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return matmul(self, other)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._raw(tuple(zip(*self._data)), self.cols, self.rows)

    def transpose(self) -> "ExactMatrix":
        return self.T

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def max_abs(self) -> Fraction:
        return max((abs(x) for r in self._data for x in r), default=Fraction(0))

    def is_signed_permutation(self) -> bool:
        if not self.is_square():
            return False
        col_hits = [0] * self.cols
        for r in self._data:
            nz = [j for j, x in enumerate(r) if x != 0]
            if len(nz) != 1 or abs(r[nz[0]]) != 1:
                return False
            col_hits[nz[0]] += 1
        return all(h == 1 for h in col_hits)

    def vec(self) -> tuple:
        """Row-major flattening (same as :attr:`entries`)."""
        return self.entries

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data], dtype=float)


_SMALL = {i: Fraction(i) for i in range(-8, 9)}


def _frac(x: int) -> Fraction:
    return _SMALL[x] if -8 <= x <= 8 else Fraction(x)


def _integerize(m: ExactMatrix):
    """Return (integer rows, common denominator) with m = rows / den; cached per matrix."""
    if m._int is None:
        m._int = _integerize_uncached(m)
    return m._int


def _integerize_uncached(m: ExactMatrix):
    den = 1
    for r in m._data:
        for x in r:
            d = x.denominator
            if d != 1:
                den = math.lcm(den, d)
    if den == 1:
        return [[x.numerator for x in r] for r in m._data], 1
    return [[x.numerator * (den // x.denominator) for x in r] for r in m._data], den


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact matrix product.

    Works on integer numerators over a common denominator and skips zeros,
    which keeps signed-permutation products cheap.
    """
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    ai, da = _integerize(a)
    bi, db = _integerize(b)
    b_nz = [[(j, v) for j, v in enumerate(r) if v] for r in bi]
    den = da * db
    n = b.cols
    out = []
    for arow in ai:
        acc = [0] * n
        for k, av in enumerate(arow):
            if av:
                for j, bv in b_nz[k]:
                    acc[j] += av * bv
        if den == 1:
            out.append(tuple(map(_frac, acc)))
        else:
            out.append(tuple(Fraction(x, den) for x in acc))
    return ExactMatrix._raw(tuple(out), a.rows, n)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    rows = []
    for arow in a._data:
        for brow in b._data:
            rows.append(tuple(x * y for x in arow for y in brow))
    return ExactMatrix._raw(tuple(rows), a.rows * b.rows, a.cols * b.cols)


class RowSpace:
    """Incrementally maintained row-echelon basis over the rationals.

    Rows are kept sparse (column -> value) with pivot value 1; the pivot of a
    row is its first nonzero column at insertion time.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, dict[int, Fraction]] = {}

    def __len__(self):
        return len(self._pivots)

    @property
    def dimension(self) -> int:
        return len(self._pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {c: v for c, v in row.items() if v}
        pivots = self._pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = min(hits)
            f = row[c]
            for j, v in pivots[c].items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)

    def add(self, row) -> bool:
        """Insert a row (dict or dense sequence); return True if it was independent."""
        if not isinstance(row, dict):
            row = {j: as_rational(v) for j, v in enumerate(row) if v}
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self._pivots[p] = {j: v * inv for j, v in r.items()}
        return True

    def contains(self, row) -> bool:
        if not isinstance(row, dict):
            row = {j: as_rational(v) for j, v in enumerate(row) if v}
        return not self.reduce(row)

    def rref(self) -> dict[int, dict[int, Fraction]]:
        """Fully reduced rows keyed by pivot column."""
        rows = {p: dict(r) for p, r in self._pivots.items()}
        for q in sorted(rows, reverse=True):
            rq = rows[q]
            for p, rp in rows.items():
                if p != q and q in rp:
                    f = rp[q]
                    for j, v in rq.items():
                        nv = rp.get(j, 0) - f * v
                        if nv:
                            rp[j] = nv
                        else:
                            rp.pop(j, None)
        return rows

    def nullspace_vectors(self) -> list[list[Fraction]]:
        rows = self.rref()
        free = [c for c in range(self.ncols) if c not in rows]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for p, rp in rows.items():
                x = rp.get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return basis


def _row_space_of(a: ExactMatrix) -> RowSpace:
    rs = RowSpace(a.cols)
    for r in a._data:
        rs.add(r)
    return rs


def nullspace(a: ExactMatrix) -> list[ExactMatrix]:
    """Exact basis of the right nullspace, as column vectors.

    Free columns are taken in increasing order, so the basis is in the
    usual reduced-row-echelon form.  Empty iff ``a`` has full column rank.
    """
    return [ExactMatrix.column(v) for v in _row_space_of(a).nullspace_vectors()]


def rank(a: ExactMatrix) -> int:
    return _row_space_of(a).dimension


def inverse(a: ExactMatrix) -> ExactMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    if not a.is_square():
        raise ShapeError(f"cannot invert non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a._data)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        pr = m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], pr)]
    return ExactMatrix(r[n:] for r in m)


def span_dimension(generators: Sequence[ExactMatrix], max_word_length: int | None = None) -> int:
    """Dimension of the real span of all generator words of length <= max_word_length.

    The empty word (identity) is included.  Words of length L+1 only need to
    be formed from words of length L that enlarged the span, so the search
    runs over a frontier and stops as soon as a length adds nothing.
    """
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].rows
    for g in generators:
        if g.shape != (n, n):
            raise ShapeError("generators must be square and of equal size")
    if max_word_length is None:
        max_word_length = 2 * len(generators) + 1

    space = RowSpace(n * n)
    ident = ExactMatrix.identity(n)
    space.add(ident.entries)
    frontier = [ident]
    for _ in range(max_word_length):
        new = []
        for w in frontier:
            for g in generators:
                p = matmul(g, w)
                if space.add(p.entries):
                    new.append(p)
        if not new:
            break
        frontier = new
    return space.dimension


def float_matrix(a) -> np.ndarray:
    """Validate and return a finite 2-D float array."""
    if isinstance(a, ExactMatrix):
        return a.to_float()
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf")
    return arr


_TAYLOR_ORDER = 18


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    The argument is scaled by 2**-s until its 1-norm is at most 1/2; the
    degree-18 Taylor remainder is then below 1e-22 relative, far under
    double precision, and s squarings undo the scaling.
    """
    a = float_matrix(a)
    n, m = a.shape
    if n != m:
        raise ShapeError("expm needs a square matrix")
    norm = np.linalg.norm(a, 1)
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    x = a / (2.0 ** s)
    term = np.eye(n)
    out = np.eye(n)
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ x / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def word_products(generators: Sequence[ExactMatrix], length: int):
    """All products g_i1 ... g_iL (used by tests as a brute-force span oracle)."""
    n = generators[0].rows
    for idx in product(range(len(generators)), repeat=length):
        m = ExactMatrix.identity(n)
        for i in idx:
            m = matmul(m, generators[i])
        yield m
