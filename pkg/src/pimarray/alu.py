"""Per-row ALU: offset stage, doubling accumulators, and bank counts.

Each row owns one ALU fed by its population count ``r``.  The datapath,
evaluated in this fixed order per cycle:

1. ``p  = 2*r`` if ``double_pop`` else ``r``
2. ``q  = p + stored_count``(if ``add_stored``) ``- offset``(if ``offset_en``)
3. ``q' = -q`` if ``vec_negate`` else ``q``
4. first accumulator: ``v = 2*vec_acc + q'`` if ``vec_accumulate`` else
   ``q'``; the register is written iff ``vec_write`` or ``vec_accumulate``
5. second accumulator: ``m_in = -v`` if ``mat_negate`` else ``v``;
   ``m = 2*mat_acc + m_in`` if ``mat_accumulate`` else ``m_in``; written
   iff ``mat_write`` or ``mat_accumulate``
6. ``y = m - threshold`` (per-row programmable threshold)
7. ``stored_count`` captures the raw ``r`` iff ``store_count``

The first accumulator serializes multi-bit input vectors, the second
multi-bit stored matrices; the negate taps flip the incoming addend
(not the running total), which is how two's-complement sign planes are
folded in.  ``stored_count`` holds a similarity against the all-ones or
all-zeros word, captured once per matrix and replayed through
``add_stored`` for mixed-format products.

Registers are simulated as 64-bit signed integers with an overflow
guard (raised as an error, not wrapped); a ``wrap_bits`` mode instead
wraps every register write to a hardware width for trace comparison.

A pipeline register sits between the population count and the ALU, so a
result for the word applied at cycle t appears at cycle t+2 while a new
result still completes every cycle; the register lives in the scheduler
(see ``controller``), the datapath here is the combinational stage.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bitcells import ArrayGeometry
from .errors import AccumulatorOverflowError, ControlError, GeometryError
from .formats import Level

#: Registers beyond this magnitude abort the run: legal schedules on
#: in-range operands stay below 2**48 even at the widest formats.
OVERFLOW_BOUND = 1 << 61

#: Cycles between applying a word and its result becoming readable,
#: from the register after the row population count.
PIPELINE_LATENCY = 2


@dataclass(frozen=True)
class ControlWord:
    """Per-cycle ALU control signals, shared by every row.

    ``offset`` is the one quantity here that is multi-bit; like the
    flags it is common to all rows for a given configuration.
    """

    double_pop: bool = False
    add_stored: bool = False
    offset_en: bool = False
    offset: int = 0
    vec_negate: bool = False
    vec_write: bool = False
    vec_accumulate: bool = False
    mat_negate: bool = False
    mat_write: bool = False
    mat_accumulate: bool = False
    store_count: bool = False

    def __post_init__(self):
        if self.vec_write and self.vec_accumulate:
            raise ControlError("vec_write and vec_accumulate are exclusive")
        if self.mat_write and self.mat_accumulate:
            raise ControlError("mat_write and mat_accumulate are exclusive")

    def flags(self) -> tuple[str, ...]:
        """Names of the asserted flags (handy in traces and tests)."""
        names = [
            name
            for name in (
                "double_pop", "add_stored", "offset_en", "vec_negate",
                "vec_write", "vec_accumulate", "mat_negate", "mat_write",
                "mat_accumulate", "store_count",
            )
            if getattr(self, name)
        ]
        return tuple(names)


IDLE = ControlWord()


@dataclass(frozen=True)
class RowAluState:
    """Registers of a single row ALU.

    ``pipe_count`` is the population count waiting in the pipeline
    register ahead of the datapath; the scheduler owns its movement,
    :func:`alu_step` itself consumes an already-pipelined count.
    """

    stored_count: int = 0
    vec_acc: int = 0
    mat_acc: int = 0
    pipe_count: int = 0


def _dataflow(count, stored, vec_acc, mat_acc, ctrl: ControlWord, threshold):
    """One combinational pass; works elementwise on ints or arrays."""
    p = 2 * count if ctrl.double_pop else count
    q = p
    if ctrl.add_stored:
        q = q + stored
    if ctrl.offset_en:
        q = q - ctrl.offset
    if ctrl.vec_negate:
        q = -q
    v = 2 * vec_acc + q if ctrl.vec_accumulate else q
    if ctrl.vec_write or ctrl.vec_accumulate:
        vec_acc = v
    m_in = -v if ctrl.mat_negate else v
    m = 2 * mat_acc + m_in if ctrl.mat_accumulate else m_in
    if ctrl.mat_write or ctrl.mat_accumulate:
        mat_acc = m
    y = m - threshold
    if ctrl.store_count:
        stored = count
    return y, stored, vec_acc, mat_acc


def alu_step(
    state: RowAluState, count: int, ctrl: ControlWord, threshold: int = 0
) -> tuple[int, RowAluState]:
    """Advance one row ALU by one cycle.

    ``count`` is the row population count feeding the stage (already
    behind the pipeline register).  Returns the row output ``y`` and the
    updated register state.
    """
    if count < 0:
        raise GeometryError(f"population count must be >= 0, got {count}")
    y, stored, vec_acc, mat_acc = _dataflow(
        int(count), state.stored_count, state.vec_acc, state.mat_acc,
        ctrl, int(threshold),
    )
    if max(abs(y), abs(vec_acc), abs(mat_acc)) > OVERFLOW_BOUND:
        raise AccumulatorOverflowError(
            f"row ALU value exceeded +/-{OVERFLOW_BOUND}"
        )
    return y, replace(
        state, stored_count=stored, vec_acc=vec_acc, mat_acc=mat_acc
    )


def msb_negated(y: int) -> Level:
    """Negated sign bit of a row output: HI iff ``y >= 0``."""
    return Level.HI if y >= 0 else Level.LO


def bank_counts(y, geometry: ArrayGeometry) -> np.ndarray:
    """Per-bank count of rows with nonnegative output.

    Each bank adds the negated sign bits of its rows' outputs; the
    result per bank lies in ``[0, rows_per_bank]``.
    """
    arr = np.asarray(y)
    if arr.shape != (geometry.words,):
        raise GeometryError(
            f"expected {geometry.words} row outputs, got shape {arr.shape}"
        )
    nonneg = (arr >= 0).reshape(geometry.banks, geometry.rows_per_bank)
    return nonneg.sum(axis=1, dtype=np.int64)


def _wrap_signed(values: np.ndarray, bits: int) -> np.ndarray:
    half = np.int64(1) << (bits - 1)
    period = np.int64(1) << bits
    return (values + half) % period - half


class RowAluBank:
    """The M row ALUs of an array, stepped together.

    Rows are independent; stepping them as int64 vectors is purely a
    simulation convenience.  With ``wrap_bits`` set, register writes and
    outputs wrap to that signed width instead of being overflow-checked
    (for comparing against fixed-width hardware traces).
    """

    def __init__(self, rows: int, *, wrap_bits: int | None = None):
        if rows < 1:
            raise GeometryError("need at least one row")
        if wrap_bits is not None and wrap_bits < 2:
            raise GeometryError("wrap_bits must be >= 2")
        self.rows = rows
        self.wrap_bits = wrap_bits
        self.stored_count = np.zeros(rows, dtype=np.int64)
        self.vec_acc = np.zeros(rows, dtype=np.int64)
        self.mat_acc = np.zeros(rows, dtype=np.int64)

    def reset(self) -> None:
        self.stored_count[:] = 0
        self.vec_acc[:] = 0
        self.mat_acc[:] = 0

    def step(self, counts, ctrl: ControlWord, thresholds) -> np.ndarray:
        """Advance all rows one cycle; returns the M row outputs."""
        counts = np.asarray(counts, dtype=np.int64)
        thresholds = np.asarray(thresholds, dtype=np.int64)
        if counts.shape != (self.rows,) or thresholds.shape != (self.rows,):
            raise GeometryError(
                f"expected {self.rows} counts and thresholds, got "
                f"{counts.shape} and {thresholds.shape}"
            )
        y, stored, vec_acc, mat_acc = _dataflow(
            counts, self.stored_count, self.vec_acc, self.mat_acc,
            ctrl, thresholds,
        )
        if self.wrap_bits is not None:
            y = _wrap_signed(y, self.wrap_bits)
            stored = _wrap_signed(stored, self.wrap_bits)
            vec_acc = _wrap_signed(vec_acc, self.wrap_bits)
            mat_acc = _wrap_signed(mat_acc, self.wrap_bits)
        else:
            worst = max(
                np.abs(y).max(), np.abs(vec_acc).max(), np.abs(mat_acc).max()
            )
            if worst > OVERFLOW_BOUND:
                raise AccumulatorOverflowError(
                    f"row ALU value exceeded +/-{OVERFLOW_BOUND}"
                )
        # Copy: the dataflow may pass inputs through unchanged, and the
        # caller's count vector must not become a live register alias.
        self.stored_count = np.array(stored, dtype=np.int64)
        self.vec_acc = np.array(vec_acc, dtype=np.int64)
        self.mat_acc = np.array(mat_acc, dtype=np.int64)
        return np.array(y, dtype=np.int64)

    def state_of(self, row: int) -> RowAluState:
        """Register snapshot of one row (traces and tests)."""
        if not 0 <= row < self.rows:
            raise GeometryError(f"row {row} out of range [0, {self.rows})")
        return RowAluState(
            stored_count=int(self.stored_count[row]),
            vec_acc=int(self.vec_acc[row]),
            mat_acc=int(self.mat_acc[row]),
        )
