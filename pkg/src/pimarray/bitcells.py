"""The latched bit-cell array and its per-cycle population counts.

The array stores M words of N bits.  Every cycle it receives an N-bit
input word and a per-column operator select; each cell combines its
stored bit with the input bit through either an XNOR or an AND gate,
and each row reduces its N cell outputs to a population count.  With
XNOR everywhere the count is the Hamming similarity between the stored
word and the input.

Rows are physically split into subrows of V = N/subrows cells, each
with a local adder; the row count is the sum of the subrow partial
counts.  The partial counts are exposed (:meth:`BitCellArray.subrow_counts`)
so the partitioning can be checked directly.

Cells default to LO before the first write.  Latches have no defined
reset in hardware, so a ``strict`` array instead refuses to read or
count rows that were never written, which catches harness bugs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, StateError


@dataclass(frozen=True)
class ArrayGeometry:
    """Array dimensions: M words of N bits, grouped in banks and subrows.

    ``banks`` must divide ``words`` (rows_per_bank rows per bank) and
    ``subrows`` must divide ``word_bits`` (subrow_bits cells each).
    """

    words: int
    word_bits: int
    banks: int = 1
    subrows: int = 1

    def __post_init__(self):
        for name in ("words", "word_bits", "banks", "subrows"):
            if getattr(self, name) < 1:
                raise GeometryError(f"{name} must be >= 1")
        if self.words % self.banks:
            raise GeometryError(
                f"banks ({self.banks}) must divide words ({self.words})"
            )
        if self.word_bits % self.subrows:
            raise GeometryError(
                f"subrows ({self.subrows}) must divide word bits "
                f"({self.word_bits})"
            )

    @property
    def rows_per_bank(self) -> int:
        return self.words // self.banks

    @property
    def subrow_bits(self) -> int:
        return self.word_bits // self.subrows


class ColumnOp(enum.Enum):
    """Bit-cell operator applied between stored and input bit."""

    XNOR = "xnor"
    AND = "and"


class ColumnOpSelect:
    """Per-column operator selection for one cycle.

    The select lines are plain cycle inputs, not latched state: a
    schedule may change them every cycle (bit-serial runs rely on it).
    """

    __slots__ = ("and_mask",)

    def __init__(self, and_mask):
        mask = np.asarray(and_mask, dtype=bool)
        if mask.ndim != 1:
            raise GeometryError("column select must be one-dimensional")
        self.and_mask = mask

    @classmethod
    def all_xnor(cls, n: int) -> "ColumnOpSelect":
        return cls(np.zeros(n, dtype=bool))

    @classmethod
    def all_and(cls, n: int) -> "ColumnOpSelect":
        return cls(np.ones(n, dtype=bool))

    @classmethod
    def from_ops(cls, ops) -> "ColumnOpSelect":
        return cls(np.array([op is ColumnOp.AND for op in ops], dtype=bool))

    @property
    def n(self) -> int:
        return self.and_mask.shape[0]

    @property
    def ops(self) -> tuple[ColumnOp, ...]:
        return tuple(
            ColumnOp.AND if a else ColumnOp.XNOR for a in self.and_mask
        )

    def __repr__(self):
        n_and = int(self.and_mask.sum())
        return f"ColumnOpSelect(n={self.n}, and={n_and}, xnor={self.n - n_and})"


class BitCellArray:
    """M x N grid of latched bits with per-cycle popcount readout."""

    def __init__(self, geometry: ArrayGeometry, *, strict: bool = False):
        self.geometry = geometry
        self.strict = strict
        self._cells = np.zeros((geometry.words, geometry.word_bits), dtype=bool)
        self._written = np.zeros(geometry.words, dtype=bool)

    def _check_row(self, row: int):
        if not 0 <= row < self.geometry.words:
            raise GeometryError(
                f"row {row} out of range [0, {self.geometry.words})"
            )

    def _coerce_word(self, bits) -> np.ndarray:
        word = np.asarray(bits, dtype=bool)
        if word.shape != (self.geometry.word_bits,):
            raise GeometryError(
                f"expected {self.geometry.word_bits} bits, got shape "
                f"{word.shape}"
            )
        return word

    def write_word(self, row: int, bits) -> None:
        """Latch an N-bit word into one row; other rows are untouched."""
        self._check_row(row)
        self._cells[row] = self._coerce_word(bits)
        self._written[row] = True

    def read_word(self, row: int) -> np.ndarray:
        """Copy of one stored row."""
        self._check_row(row)
        if self.strict and not self._written[row]:
            raise StateError(f"strict array: row {row} was never written")
        return self._cells[row].copy()

    def load_cells(self, cells) -> None:
        """Bulk write of the whole grid (matrix loads)."""
        grid = np.asarray(cells, dtype=bool)
        if grid.shape != self._cells.shape:
            raise GeometryError(
                f"expected grid of shape {self._cells.shape}, got {grid.shape}"
            )
        self._cells[:] = grid
        self._written[:] = True

    def snapshot(self) -> np.ndarray:
        """Read-only copy of the stored grid, safe to share across threads."""
        return self._cells.copy()

    def subrow_counts(self, x, select: ColumnOpSelect) -> np.ndarray:
        """Per-subrow partial population counts for one cycle.

        Returns an ``(M, subrows)`` int array; each entry is in
        ``[0, subrow_bits]``.
        """
        word = self._coerce_word(x)
        if select.n != self.geometry.word_bits:
            raise GeometryError(
                f"column select has {select.n} entries, expected "
                f"{self.geometry.word_bits}"
            )
        if self.strict and not self._written.all():
            missing = int(np.flatnonzero(~self._written)[0])
            raise StateError(f"strict array: row {missing} was never written")
        hits = np.where(
            select.and_mask, self._cells & word, ~(self._cells ^ word)
        )
        geo = self.geometry
        parts = hits.reshape(geo.words, geo.subrows, geo.subrow_bits)
        return parts.sum(axis=2, dtype=np.int64)

    def cycle_popcounts(self, x, select: ColumnOpSelect) -> np.ndarray:
        """Per-row population counts: the sum of the subrow partials."""
        return self.subrow_counts(x, select).sum(axis=1, dtype=np.int64)
