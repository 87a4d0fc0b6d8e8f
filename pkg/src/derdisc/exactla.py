"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (or plain ``int``). Matrices can be
passed as :class:`QMatrix`, as integer numpy arrays, or as nested sequences.

The elimination itself runs on integer rows: each rational row is scaled by
the lcm of its denominators, then reduced fraction-free in ``int64`` by a
kernel that is numba-compiled when available. The kernel reports overflow
instead of wrapping, in which case the computation is redone with
``Fraction`` arithmetic, so every result is exact either way.
"""

from __future__ import annotations

import types
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from . import _accel

Rational = Fraction

# products stay below 2**63 as long as every update is bounded by this
_LIMIT = float(2**62)


class DimensionMismatch(ValueError):
    pass


class QMatrix:
    """Dense matrix of rationals with value semantics."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows_ = tuple(tuple(_q(x) for x in row) for row in entries)
        if cols is None:
            cols = len(rows_[0]) if rows_ else 0
        for row in rows_:
            if len(row) != cols:
                raise DimensionMismatch("ragged matrix rows")
        self.rows = len(rows_)
        self.cols = cols
        self.entries = rows_

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def column(cls, values: Sequence) -> "QMatrix":
        return cls([[v] for v in values], cols=1)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "QMatrix":
        return QMatrix(zip(*self.entries), cols=self.rows) if self.rows else QMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return QMatrix(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in ocols] for row in self.entries],
            cols=other.cols,
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _f(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(int(x))


def _norm(x):
    """Return an ``int`` when the rational is integral."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------
# integer kernel


def _row_gcd_loop(a, i):
    g = 0
    for j in range(a.shape[1]):
        v = abs(a[i, j])
        while v:
            g, v = v, g % v
    return g


def _row_gcd_numpy(a, i):
    return int(np.gcd.reduce(np.abs(a[i]))) if a.shape[1] else 0


def _rref_int(a, npiv):
    """Fraction-free reduced row echelon form of ``a`` in place.

    Pivots are searched in the first ``npiv`` columns only. Returns
    ``(rank, pivot_columns, ok)``; ``ok`` is False when an update could
    leave the int64 range, and ``a`` is then garbage.
    """
    m = a.shape[0]
    pivcols = np.full(m, -1, np.int64)
    rowmax = np.zeros(m, np.float64)
    for i in range(m):
        g = _row_gcd(a, i)
        if g > 1:
            a[i, :] //= g
        rowmax[i] = np.abs(a[i, :]).max() if a.shape[1] else 0.0
    rank = 0
    for col in range(npiv):
        if rank == m:
            break
        piv = -1
        best = 0
        for i in range(rank, m):
            v = abs(a[i, col])
            if v != 0 and (piv == -1 or v < best):
                piv = i
                best = v
        if piv == -1:
            continue
        if piv != rank:
            tmp = a[rank, :].copy()
            a[rank, :] = a[piv, :]
            a[piv, :] = tmp
            t = rowmax[rank]
            rowmax[rank] = rowmax[piv]
            rowmax[piv] = t
        p = a[rank, col]
        for i in range(m):
            if i == rank:
                continue
            f = a[i, col]
            if f == 0:
                continue
            x, y = abs(p), abs(f)
            while y:
                x, y = y, x % y
            cp = p // x
            cf = f // x
            if abs(cp) * rowmax[i] + abs(cf) * rowmax[rank] >= _LIMIT:
                return rank, pivcols, False
            a[i, :] = cp * a[i, :] - cf * a[rank, :]
            g = _row_gcd(a, i)
            if g > 1:
                a[i, :] //= g
            rowmax[i] = np.abs(a[i, :]).max()
        pivcols[rank] = col
        rank += 1
    return rank, pivcols, True


# the kernel looks up ``_row_gcd`` as a global: numba sees the compiled loop,
# the fallback is the same code object bound to the numpy version
_row_gcd = _accel.njit(_row_gcd_loop) if _accel.NUMBA_AVAILABLE else _row_gcd_numpy
_rref_numpy = types.FunctionType(_rref_int.__code__, {**globals(), "_row_gcd": _row_gcd_numpy}, "_rref_numpy")
_rref_numba = _accel.njit(_rref_int) if _accel.NUMBA_AVAILABLE else None


def rref_kernel(use_numba: bool | None = None):
    """Return the integer elimination kernel for the requested backend."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba and _rref_numba is not None:
        return _rref_numba
    return _rref_numpy


# ---------------------------------------------------------------------------
# conversions


def _as_rows(m) -> tuple[list[list], int]:
    if isinstance(m, QMatrix):
        return [list(r) for r in m.entries], m.cols
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise DimensionMismatch("expected a 2-d array")
        return m.tolist(), m.shape[1]
    rows = [list(r) for r in m]
    return rows, (len(rows[0]) if rows else 0)


def _integer_rows(rows: list[list], cols: int) -> np.ndarray | None:
    """Scale each row to integers; None if an entry leaves the safe range."""
    out = np.zeros((len(rows), cols), np.int64)
    for i, row in enumerate(rows):
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        for j, x in enumerate(row):
            if isinstance(x, Fraction):
                v = x.numerator * (den // x.denominator)
            else:
                v = int(x) * den
            if abs(v) >= 2**62:
                return None
            out[i, j] = v
    return out


def _rref_fraction(rows: list[list], cols: int, npiv: int):
    a = [[_q(x) for x in r] for r in rows]
    m = len(a)
    pivcols = []
    rank = 0
    for col in range(npiv):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        a[rank] = [x / p for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        pivcols.append(col)
        rank += 1
    return a, rank, pivcols


def _reduce(m, npiv: int | None = None, use_numba: bool | None = None):
    """Row-reduce ``m``; returns (rows, rank, pivot columns, ncols).

    ``rows`` are either int64 rows (scaled pivots) or Fraction rows
    (unit pivots); callers only rely on ratios within a row.
    """
    if isinstance(m, np.ndarray) and m.ndim == 2 and m.dtype.kind in "iu":
        cols = m.shape[1]
        a = np.array(m, dtype=np.int64, copy=True)
        rows = None
    else:
        rows, cols = _as_rows(m)
        a = _integer_rows(rows, cols)
    if npiv is None:
        npiv = cols
    if a is not None:
        if a.shape[0] == 0 or cols == 0:
            return a, 0, [], cols
        rank, pivcols, ok = rref_kernel(use_numba)(a, npiv)
        if ok:
            return a, int(rank), [int(c) for c in pivcols[:rank]], cols
        if rows is None:
            rows = m.tolist()
    red, rank, pivcols = _rref_fraction(rows, cols, npiv)
    return red, rank, pivcols, cols


# ---------------------------------------------------------------------------
# public operations


def rank(m, use_numba: bool | None = None) -> int:
    """Exact rank over Q."""
    return _reduce(m, use_numba=use_numba)[1]


def nullspace(m, use_numba: bool | None = None) -> list[tuple]:
    """Basis of the right kernel as primitive integer vectors.

    One vector per non-pivot column, in increasing column order; entries are
    Python ints (a rational kernel basis scaled to clear denominators).
    """
    red, r, pivcols, cols = _reduce(m, use_numba=use_numba)
    pivset = set(pivcols)
    basis = []
    for f in range(cols):
        if f in pivset:
            continue
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivcols):
            vec[c] = -_f(red[i][f]) / _f(red[i][c])
        basis.append(_primitive(vec))
    return basis


def _primitive(vec: list[Fraction]) -> tuple:
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def solve(m, b, use_numba: bool | None = None):
    """Some exact x with m @ x == b, or None when the system is inconsistent.

    ``b`` may be a single vector (returns a tuple of rationals) or a matrix
    with several right-hand sides (returns a :class:`QMatrix`).
    """
    rows, cols = _as_rows(m)
    vector = False
    if isinstance(b, QMatrix):
        brows = [list(r) for r in b.entries]
    elif isinstance(b, np.ndarray) and b.ndim == 1 or (
        not isinstance(b, np.ndarray) and len(b) and not isinstance(b[0], (list, tuple, np.ndarray))
    ):
        vector = True
        brows = [[x] for x in b]
    else:
        brows = [list(r) for r in b]
    if len(brows) != len(rows):
        raise DimensionMismatch(f"matrix has {len(rows)} rows but right-hand side has {len(brows)}")
    nrhs = len(brows[0]) if brows else (1 if vector else 0)
    aug = [list(r) + list(s) for r, s in zip(rows, brows)]
    red, r, pivcols, _ = _reduce(aug if aug else np.zeros((0, cols + nrhs), np.int64), npiv=cols, use_numba=use_numba)
    for i in range(r, len(aug)):
        if any(red[i][cols + j] != 0 for j in range(nrhs)):
            return None
    x = [[Fraction(0)] * nrhs for _ in range(cols)]
    for i, c in enumerate(pivcols):
        p = _f(red[i][c])
        for j in range(nrhs):
            x[c][j] = _f(red[i][cols + j]) / p
    if vector:
        return tuple(_norm(row[0]) for row in x)
    return QMatrix(x, cols=nrhs)


def matvec(m, v: Sequence) -> tuple:
    rows, cols = _as_rows(m)
    if len(v) != cols:
        raise DimensionMismatch("vector length does not match column count")
    return tuple(_norm(sum((_q(a) * _q(x) for a, x in zip(row, v)), Fraction(0))) for row in rows)
