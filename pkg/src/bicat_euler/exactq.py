"""Exact rational linear algebra over label-indexed matrices.

Everything here is a pure function over immutable values; entries are
`fractions.Fraction` throughout and no floating point is ever introduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


class IndexMismatch(Exception):
    """Row and column label sets of a square-only operation differ."""


def rational(value) -> Fraction:
    """Coerce ints, strings like '-3/7', and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical 'p/q' form, 'p' when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class QVector:
    """Exact rational vector indexed by an ordered tuple of labels."""

    index: tuple[str, ...]
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.index) != len(self.entries):
            raise ValueError("index/entries length mismatch")
        if len(set(self.index)) != len(self.index):
            raise ValueError("duplicate labels in vector index")

    def __getitem__(self, label: str) -> Fraction:
        return self.entries[self.index.index(label)]

    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def to_json(self) -> dict:
        return {label: format_rational(v) for label, v in zip(self.index, self.entries)}


@dataclass(frozen=True)
class QMatrix:
    """Exact rational matrix indexed by ordered row/column label tuples.

    `entries` is row-major and total: one Fraction per (row, col) pair.
    """

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("duplicate labels")
        if len(self.entries) != len(self.rows):
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != len(self.cols):
                raise ValueError("column count mismatch")

    @classmethod
    def build(cls, rows: Sequence[str], cols: Sequence[str], at) -> "QMatrix":
        """Construct from a callback (row_label, col_label) -> rational."""
        return cls(
            tuple(rows),
            tuple(cols),
            tuple(tuple(rational(at(r, c)) for c in cols) for r in rows),
        )

    def at(self, row: str, col: str) -> Fraction:
        return self.entries[self.rows.index(row)][self.cols.index(col)]

    def transpose(self) -> "QMatrix":
        n, m = len(self.rows), len(self.cols)
        return QMatrix(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(n)) for j in range(m)),
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_json(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }


@dataclass(frozen=True)
class MatrixEuler:
    """Weighting/coweighting pair and their common sum, when both exist."""

    weighting: Optional[QVector]
    coweighting: Optional[QVector]
    chi: Optional[Fraction]

    def has_euler(self) -> bool:
        return self.chi is not None

    def missing(self) -> tuple[str, ...]:
        out = []
        if self.weighting is None:
            out.append("weighting")
        if self.coweighting is None:
            out.append("coweighting")
        return tuple(out)


def _solve_linear(a: list[list[Fraction]], b: list[Fraction], free_value: Fraction) -> Optional[list[Fraction]]:
    """Solve a·x = b exactly by Gaussian elimination.

    Pivots on the first nonzero entry in column order (magnitude is
    irrelevant in exact arithmetic).  Returns None when inconsistent;
    free variables of underdetermined systems are set to `free_value`.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    a = [list(row) for row in a]
    b = list(b)
    pivot_of_col: dict[int, int] = {}
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        b[rank], b[pivot] = b[pivot], b[rank]
        inv = 1 / a[rank][col]
        a[rank] = [v * inv for v in a[rank]]
        b[rank] = b[rank] * inv
        for r in range(rows):
            if r != rank and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[rank])]
                b[r] = b[r] - factor * b[rank]
        pivot_of_col[col] = rank
        rank += 1
    for r in range(rank, rows):
        if b[r] != 0:
            return None
    x = [free_value] * cols
    for col, r in pivot_of_col.items():
        x[col] = b[r] - sum(
            (a[r][c] * x[c] for c in range(cols) if c != col and a[r][c] != 0),
            Fraction(0),
        )
    return x


def solve_weighting(m: QMatrix, free_value: Fraction = Fraction(0)) -> Optional[QVector]:
    """Some k with m·k = (1,...,1) exactly, or None if inconsistent.

    `free_value` is a testing hook for the choice-independence property;
    production callers rely on the deterministic free-variables-zero default.
    """
    ones = [Fraction(1)] * len(m.rows)
    solution = _solve_linear([list(row) for row in m.entries], ones, free_value)
    if solution is None:
        return None
    return QVector(m.cols, tuple(solution))


def solve_coweighting(m: QMatrix, free_value: Fraction = Fraction(0)) -> Optional[QVector]:
    """Some k with k·m = (1,...,1) exactly; equals solve_weighting(mᵀ)."""
    return solve_weighting(m.transpose(), free_value)


def matrix_euler(m: QMatrix) -> MatrixEuler:
    """Weighting, coweighting and |ζ| of a square matrix.

    The two sums are asserted equal before returning (well-definedness of
    the Euler characteristic does not depend on the choice of vectors).
    """
    if m.rows != m.cols:
        if set(m.rows) != set(m.cols):
            raise IndexMismatch(f"row labels {m.rows} != col labels {m.cols}")
        raise IndexMismatch("row/col label order differs")
    weighting = solve_weighting(m)
    coweighting = solve_coweighting(m)
    if weighting is None or coweighting is None:
        return MatrixEuler(weighting, coweighting, None)
    chi = weighting.total()
    assert chi == coweighting.total(), "weighting and coweighting sums differ"
    return MatrixEuler(weighting, coweighting, chi)


def invert(m: QMatrix) -> Optional[QMatrix]:
    """Exact inverse by Gauss-Jordan elimination; None when singular."""
    if m.rows != m.cols:
        raise IndexMismatch(f"row labels {m.rows} != col labels {m.cols}")
    n = len(m.rows)
    a = [list(row) for row in m.entries]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        scale = 1 / a[col][col]
        a[col] = [v * scale for v in a[col]]
        inv[col] = [v * scale for v in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - factor * w for v, w in zip(inv[r], inv[col])]
    return QMatrix(m.rows, m.cols, tuple(tuple(row) for row in inv))


def entry_sum(m: QMatrix) -> Fraction:
    return sum((v for row in m.entries for v in row), Fraction(0))
