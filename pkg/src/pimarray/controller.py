"""Mode planning and execution on top of the array and row ALUs.

The :class:`Simulator` owns one bit-cell array, its row ALUs, the
pipeline register between them, and the per-row thresholds.  Mode
runners build per-cycle stimuli (input bits, column operator selects,
and an ALU control word), clock them through, and decode the raw row
outputs into mode-level results.

Multi-bit products run bit-serially.  A stored matrix with K-bit
entries occupies K columns per entry (most significant bit first), so a
row holds J = N/K entries; input vectors are split into L planes.  A
product walks matrix planes outermost, from most to least significant,
with the vector planes innermost, for exactly K*L array cycles; the two
doubling accumulators stitch the plane products back together.

Operand formats with -1/+1 levels are handled through population-count
identities.  For 1-bit-entry matrices the correction term is a stored
similarity against the all-ones or all-zeros word, captured once per
matrix into the ALUs' ``stored_count`` register and replayed through
``add_stored`` with offset N.  For multi-bit matrices that register
cannot track the per-plane similarities within a K*L-cycle run, so the
whole per-matrix correction folds into the per-row thresholds instead
(computed from the stored bits at preparation time, exactly what a
configuration pass through the accumulator chain would produce); the
per-cycle offset N/K still comes from the control word.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .alu import (
    IDLE,
    PIPELINE_LATENCY,
    ControlWord,
    RowAluBank,
    RowAluState,
    bank_counts,
)
from .bitcells import ArrayGeometry, BitCellArray, ColumnOpSelect
from .errors import GeometryError, PlaProgramError, ScheduleError, StateError
from .formats import (
    FormatKind,
    NumberFormat,
    check_range,
    decompose_planes,
)
from .modes import (
    CamComplete,
    CamSimilarity,
    Gate,
    Gf2Mvp,
    HammingSimilarity,
    ModeSpec,
    Mvp,
    Pla,
    PlaProgram,
)

@dataclass(frozen=True)
class StoredMatrixLayout:
    """Mapping of a K-bit-entry matrix onto physical columns.

    Entry j owns the contiguous columns ``[j*K, (j+1)*K)``, most
    significant bit first; ``column_of`` is a bijection onto
    ``[0, word_bits)``.
    """

    entries: int
    entry_bits: int
    word_bits: int

    def __post_init__(self):
        if self.entries < 1 or self.entry_bits < 1:
            raise GeometryError("layout needs >= 1 entry of >= 1 bit")
        if self.entries * self.entry_bits != self.word_bits:
            raise GeometryError(
                f"{self.entries} entries of {self.entry_bits} bits do not "
                f"fill {self.word_bits} columns"
            )

    def column_of(self, entry: int, significance: int) -> int:
        """Column holding bit ``significance`` (1 = least) of ``entry``."""
        if not 0 <= entry < self.entries:
            raise GeometryError(f"entry {entry} out of range")
        if not 1 <= significance <= self.entry_bits:
            raise GeometryError(f"significance {significance} out of range")
        return entry * self.entry_bits + (self.entry_bits - significance)

    def plane_columns(self, significance: int) -> np.ndarray:
        """Columns of one significance level across all entries."""
        if not 1 <= significance <= self.entry_bits:
            raise GeometryError(f"significance {significance} out of range")
        start = self.entry_bits - significance
        return np.arange(self.entries) * self.entry_bits + start


def matrix_to_cells(
    matrix, fmt: NumberFormat, geometry: ArrayGeometry
) -> tuple[np.ndarray, StoredMatrixLayout]:
    """Encode an integer matrix into array cell contents.

    ``matrix`` must be ``words x entries`` with ``entries * fmt.width``
    equal to the word width.  Returns the boolean cell grid and the
    column layout.
    """
    a = np.asarray(matrix)
    if a.ndim != 2:
        raise GeometryError(f"matrix must be 2-D, got shape {a.shape}")
    rows, entries = a.shape
    if rows != geometry.words:
        raise GeometryError(
            f"matrix has {rows} rows, array stores {geometry.words} words"
        )
    if entries * fmt.width != geometry.word_bits:
        raise GeometryError(
            f"{entries} entries of {fmt.width} bits do not fill "
            f"{geometry.word_bits} columns"
        )
    layout = StoredMatrixLayout(entries, fmt.width, geometry.word_bits)
    values = check_range(a, fmt)
    planes = decompose_planes(values.ravel(), fmt)
    planes = planes.reshape(fmt.width, rows, entries)
    cells = np.zeros((geometry.words, geometry.word_bits), dtype=bool)
    for significance in range(1, fmt.width + 1):
        cells[:, layout.plane_columns(significance)] = planes[
            fmt.width - significance
        ]
    return cells, layout


def pla_to_cells(
    program: PlaProgram, geometry: ArrayGeometry
) -> tuple[np.ndarray, np.ndarray]:
    """Encode a two-level program into cell contents and row thresholds.

    Term t of bank b lands on row ``b*rows_per_bank + t`` and stores HI
    exactly at its literal columns; its threshold realizes the term
    gate.  Rows without a term get threshold ``word_bits + 1`` so they
    can never assert.
    """
    if len(program.banks) > geometry.banks:
        raise PlaProgramError(
            f"program has {len(program.banks)} banks, array has "
            f"{geometry.banks}"
        )
    if program.columns_used > geometry.word_bits:
        raise PlaProgramError(
            f"{program.num_vars} variables need {program.columns_used} "
            f"columns, array has {geometry.word_bits}"
        )
    cells = np.zeros((geometry.words, geometry.word_bits), dtype=bool)
    thresholds = np.full(geometry.words, geometry.word_bits + 1, dtype=np.int64)
    for b, bank in enumerate(program.banks):
        if len(bank.terms) > geometry.rows_per_bank:
            raise PlaProgramError(
                f"bank {b} has {len(bank.terms)} terms, only "
                f"{geometry.rows_per_bank} rows per bank"
            )
        for t, term in enumerate(bank.terms):
            row = b * geometry.rows_per_bank + t
            cells[row, list(term.columns())] = True
            thresholds[row] = term.threshold
    return cells, thresholds


def assignment_bits(
    program: PlaProgram, assignment, word_bits: int
) -> np.ndarray:
    """Input word for a variable assignment.

    Column ``2i`` carries variable i, column ``2i + 1`` its complement
    (consistent by construction); remaining columns stay LO.
    """
    values = np.asarray(assignment, dtype=bool)
    if values.shape != (program.num_vars,):
        raise GeometryError(
            f"expected {program.num_vars} assignment values, got shape "
            f"{values.shape}"
        )
    x = np.zeros(word_bits, dtype=bool)
    x[0 : 2 * program.num_vars : 2] = values
    x[1 : 2 * program.num_vars : 2] = ~values
    return x


@dataclass(eq=False)
class CycleStimulus:
    """Everything the array and ALUs consume in one cycle."""

    x: np.ndarray
    select: ColumnOpSelect
    ctrl: ControlWord
    label: str = ""


def _mvp_family(mode: Mvp) -> str:
    """Level pairing: pm = -1/+1 levels, zo = 0/1 levels."""
    if mode.matrix_signed_levels:
        return "pm_pm" if mode.vector_signed_levels else "pm_zo"
    return "zo_pm" if mode.vector_signed_levels else "zo_zo"


def _coerce_bits(x, n: int) -> np.ndarray:
    bits = np.asarray(x, dtype=bool)
    if bits.shape != (n,):
        raise GeometryError(f"expected {n} input bits, got shape {bits.shape}")
    return bits


def plan_schedule(
    mode: ModeSpec,
    geometry: ArrayGeometry,
    layout: StoredMatrixLayout | None,
    data,
) -> list[CycleStimulus]:
    """Build the per-cycle stimulus list for one operation.

    ``data`` is the mode input: an integer vector for products, a bit
    vector for similarity/lookup/field modes, a Boolean assignment for
    logic mode.  Single-cycle modes yield one stimulus; a product over
    K-bit matrix entries and L-bit vector entries yields exactly K*L.
    """
    n = geometry.word_bits
    if isinstance(mode, (HammingSimilarity, CamComplete, CamSimilarity)):
        return [
            CycleStimulus(
                _coerce_bits(data, n), ColumnOpSelect.all_xnor(n), IDLE,
                label="query",
            )
        ]
    if isinstance(mode, Gf2Mvp):
        return [
            CycleStimulus(
                _coerce_bits(data, n), ColumnOpSelect.all_and(n), IDLE,
                label="gf2",
            )
        ]
    if isinstance(mode, Pla):
        x = assignment_bits(mode.program, data, n)
        return [
            CycleStimulus(x, ColumnOpSelect.all_and(n), IDLE, label="assign")
        ]
    if isinstance(mode, Mvp):
        return _mvp_schedule(mode, geometry, layout, data)
    raise ScheduleError(f"unknown mode {mode!r}")


def _mvp_schedule(
    mode: Mvp,
    geometry: ArrayGeometry,
    layout: StoredMatrixLayout | None,
    x,
) -> list[CycleStimulus]:
    if layout is None:
        raise ScheduleError("product mode needs a loaded matrix layout")
    if layout.entry_bits != mode.matrix_bits:
        raise ScheduleError(
            f"layout stores {layout.entry_bits}-bit entries, mode expects "
            f"{mode.matrix_bits}"
        )
    if layout.word_bits != geometry.word_bits:
        raise ScheduleError("layout does not match the array geometry")
    n = geometry.word_bits
    big_k = mode.matrix_bits
    big_l = mode.vector_bits
    family = _mvp_family(mode)
    values = check_range(np.atleast_1d(x), mode.vector_format)
    if values.shape != (layout.entries,):
        raise GeometryError(
            f"expected a vector of {layout.entries} entries, got shape "
            f"{values.shape}"
        )
    planes = decompose_planes(values, mode.vector_format)
    uses_offset = family != "zo_zo"
    offset = (n if big_k == 1 else n // big_k) if uses_offset else 0
    vec_int = mode.vector_format.kind is FormatKind.INT
    mat_int = mode.matrix_format.kind is FormatKind.INT
    stims: list[CycleStimulus] = []
    for k in range(big_k, 0, -1):
        cols = layout.plane_columns(k)
        and_mask = np.ones(n, dtype=bool)
        if mode.matrix_signed_levels:
            and_mask[cols] = False
        select = ColumnOpSelect(and_mask)
        for level in range(big_l, 0, -1):
            xbits = np.zeros(n, dtype=bool)
            xbits[cols] = planes[big_l - level]
            ctrl = ControlWord(
                double_pop=family in ("pm_pm", "zo_pm"),
                add_stored=(big_k == 1 and family in ("pm_zo", "zo_pm")),
                offset_en=uses_offset,
                offset=offset,
                vec_negate=(level == big_l and vec_int),
                vec_write=(level == big_l and big_l > 1),
                vec_accumulate=(level < big_l),
                mat_negate=(k == big_k and level == 1 and mat_int),
                mat_write=(k == big_k and level == 1 and big_k > 1),
                mat_accumulate=(k < big_k and level == 1),
            )
            stims.append(
                CycleStimulus(xbits, select, ctrl, label=f"k={k} l={level}")
            )
    return stims


@dataclass(eq=False)
class CycleTrace:
    """State observed at one machine tick.

    ``counts`` is the population-count vector the ALUs consumed this
    tick (None while the pipeline is still filling); register fields
    are snapshots taken after the tick.
    """

    tick: int
    issued: str | None
    completed: str | None
    counts: np.ndarray | None
    y: np.ndarray | None
    stored_count: np.ndarray
    vec_acc: np.ndarray
    mat_acc: np.ndarray


@dataclass(eq=False)
class ModeResult:
    """Raw and decoded outputs of one mode run.

    ``y`` holds the final per-row ALU outputs, ``bank_counts`` the
    per-bank totals of nonnegative outputs, ``cycles`` the steady-state
    array cycles the run costs (results lag issues by
    :data:`PIPELINE_LATENCY`), and ``decoded`` the mode payload:
    similarities, a match mask, the integer product, field-sum bits, or
    per-bank Boolean outputs.
    """

    y: np.ndarray
    bank_counts: np.ndarray
    cycles: int
    decoded: object
    trace: list[CycleTrace] | None = None


class Simulator:
    """One array, its row ALUs, and the pipeline between them.

    A simulator instance is a single-threaded state machine; run
    independent instances for concurrent workloads (a loaded matrix can
    be replicated cheaply through :meth:`BitCellArray.snapshot`).
    """

    def __init__(
        self,
        geometry: ArrayGeometry,
        *,
        strict: bool = False,
        wrap_bits: int | None = None,
    ):
        self.geometry = geometry
        self.array = BitCellArray(geometry, strict=strict)
        self.alu = RowAluBank(geometry.words, wrap_bits=wrap_bits)
        self.thresholds = np.zeros(geometry.words, dtype=np.int64)
        self.ticks = 0
        self._pipe: tuple[np.ndarray, ControlWord, str] | None = None
        self._last_completed: str | None = None
        self._last_counts: np.ndarray | None = None
        self._layout: StoredMatrixLayout | None = None
        self._matrix_format: NumberFormat | None = None
        self._prepared_for: tuple[NumberFormat, NumberFormat] | None = None
        self._format_offsets = np.zeros(geometry.words, dtype=np.int64)
        self._program: PlaProgram | None = None
        self._program_thresholds: np.ndarray | None = None

    # -- clocking -----------------------------------------------------

    def clock(self, stim: CycleStimulus) -> np.ndarray | None:
        """Advance one cycle: apply a stimulus, emit the pipelined result.

        The returned vector belongs to the stimulus applied on the
        previous cycle (None while the pipeline is still filling); it
        models the value registered at the end of this cycle, readable
        on the next.
        """
        counts = self.array.cycle_popcounts(stim.x, stim.select)
        out = None
        self._last_completed = None
        self._last_counts = None
        if self._pipe is not None:
            pending, ctrl, label = self._pipe
            out = self.alu.step(pending, ctrl, self.thresholds)
            self._last_completed = label
            self._last_counts = pending
        self._pipe = (counts, stim.ctrl, stim.label)
        self.ticks += 1
        return out

    def drain(self) -> np.ndarray | None:
        """Flush the pipeline with one idle cycle (no array activity)."""
        if self._pipe is None:
            return None
        counts, ctrl, label = self._pipe
        out = self.alu.step(counts, ctrl, self.thresholds)
        self._last_completed = label
        self._last_counts = counts
        self._pipe = None
        self.ticks += 1
        return out

    def run_schedule(
        self, stims: list[CycleStimulus], record: bool = False
    ) -> tuple[list[np.ndarray], list[CycleTrace] | None]:
        """Clock a whole schedule through, draining the pipeline.

        Returns one output vector per stimulus, in issue order, plus
        the per-tick trace when ``record`` is set.
        """
        outputs: list[np.ndarray] = []
        traces: list[CycleTrace] | None = [] if record else None
        for stim in stims:
            y = self.clock(stim)
            if traces is not None:
                traces.append(self._trace_entry(stim.label, y))
            if y is not None:
                outputs.append(y)
        y = self.drain()
        if traces is not None:
            traces.append(self._trace_entry(None, y))
        if y is not None:
            outputs.append(y)
        return outputs, traces

    def _trace_entry(self, issued: str | None, y) -> CycleTrace:
        counts = self._last_counts
        return CycleTrace(
            tick=self.ticks,
            issued=issued,
            completed=self._last_completed,
            counts=None if counts is None else counts.copy(),
            y=None if y is None else y.copy(),
            stored_count=self.alu.stored_count.copy(),
            vec_acc=self.alu.vec_acc.copy(),
            mat_acc=self.alu.mat_acc.copy(),
        )

    # -- matrix and program loading ------------------------------------

    def load_matrix(self, matrix, fmt: NumberFormat) -> StoredMatrixLayout:
        """Encode and latch a matrix; invalidates prior preparation."""
        cells, layout = matrix_to_cells(matrix, fmt, self.geometry)
        self.array.load_cells(cells)
        self._layout = layout
        self._matrix_format = fmt
        self._prepared_for = None
        self._format_offsets = np.zeros(self.geometry.words, dtype=np.int64)
        self._program = None
        self._program_thresholds = None
        return layout

    def program_pla(self, program: PlaProgram) -> None:
        """Store a two-level program's terms and row thresholds."""
        cells, thresholds = pla_to_cells(program, self.geometry)
        self.array.load_cells(cells)
        self._program = program
        self._program_thresholds = thresholds
        self._layout = None
        self._matrix_format = None
        self._prepared_for = None

    @property
    def layout(self) -> StoredMatrixLayout | None:
        return self._layout

    def state_of(self, row: int) -> "RowAluState":
        """Full register snapshot of one row, pipeline count included."""
        state = self.alu.state_of(row)
        if self._pipe is not None:
            state = replace(state, pipe_count=int(self._pipe[0][row]))
        return state

    # -- preparation for mixed-level products ---------------------------

    def prepare_mode(self, mode: Mvp) -> None:
        """Capture the per-matrix offsets a product mode needs.

        Same-level format pairs need nothing.  Mixed pairs with a 1-bit
        matrix run one probe cycle (all-ones word for a -1/+1 matrix,
        all-zeros for a -1/+1 vector) whose popcount is captured into
        ``stored_count``.  Mixed pairs with a multi-bit matrix fold the
        per-plane corrections into the per-row thresholds instead.
        Preparation survives until the matrix changes.
        """
        self._require_matrix(mode)
        key = (mode.matrix_format, mode.vector_format)
        if not mode.mixed_levels:
            self._format_offsets = np.zeros(
                self.geometry.words, dtype=np.int64
            )
            self._prepared_for = key
            return
        n = self.geometry.word_bits
        if mode.matrix_bits == 1:
            probe_high = mode.matrix_signed_levels
            stim = CycleStimulus(
                np.full(n, probe_high, dtype=bool),
                ColumnOpSelect.all_xnor(n),
                ControlWord(store_count=True),
                label="probe",
            )
            self.run_schedule([stim])
            self._format_offsets = np.zeros(
                self.geometry.words, dtype=np.int64
            )
        else:
            self._format_offsets = self._plane_offsets(mode)
        self._prepared_for = key

    def _plane_offsets(self, mode: Mvp) -> np.ndarray:
        """Threshold fold of the mixed-level correction, multi-bit matrix.

        Per plane k the exact per-cycle value needs the stored-word
        similarity against all-ones (-1/+1 matrix) or all-zeros (0/1
        matrix); weighting each by its plane significance and by the sum
        of the vector plane weights gives the per-row constant that the
        threshold subtracts away.
        """
        assert self._layout is not None
        cells = self.array.snapshot()
        entries = self._layout.entries
        if mode.vector_format.kind is FormatKind.INT:
            vec_weight_sum = -1
        else:
            vec_weight_sum = (1 << mode.vector_bits) - 1
        mat_int = mode.matrix_format.kind is FormatKind.INT
        correction = np.zeros(self.geometry.words, dtype=np.int64)
        for k in range(1, mode.matrix_bits + 1):
            pop = cells[:, self._layout.plane_columns(k)].sum(
                axis=1, dtype=np.int64
            )
            hsim = pop if mode.matrix_signed_levels else entries - pop
            weight = 1 << (k - 1)
            if mat_int and k == mode.matrix_bits:
                weight = -weight
            correction += weight * hsim
        return -vec_weight_sum * correction

    # -- mode runners ---------------------------------------------------

    def _require_matrix(self, mode: Mvp) -> None:
        if self._layout is None:
            raise StateError("no matrix loaded; call load_matrix first")
        if self._matrix_format != mode.matrix_format:
            raise ScheduleError(
                f"matrix was loaded as {self._matrix_format}, mode expects "
                f"{mode.matrix_format}"
            )

    def _require_onebit_words(self, what: str) -> None:
        if self._program is not None:
            raise ScheduleError(
                f"array holds a logic program; reload words before {what}"
            )
        if self._layout is not None and self._layout.entry_bits != 1:
            raise ScheduleError(
                f"{what} needs 1-bit stored words, matrix entries have "
                f"{self._layout.entry_bits} bits"
            )

    def _finish(
        self, sched: list[CycleStimulus], decoded, record: bool,
    ) -> ModeResult:
        outputs, traces = self.run_schedule(sched, record=record)
        y = outputs[-1]
        return ModeResult(
            y=y,
            bank_counts=bank_counts(y, self.geometry),
            cycles=len(sched),
            decoded=decoded(y),
            trace=traces,
        )

    def run_hamming(self, query, *, record: bool = False) -> ModeResult:
        """Similarity of every stored word against a query word."""
        self._require_onebit_words("similarity")
        self.thresholds = np.zeros(self.geometry.words, dtype=np.int64)
        sched = plan_schedule(HammingSimilarity(), self.geometry, None, query)
        return self._finish(sched, lambda y: y.copy(), record)

    def run_cam(
        self, query, thresholds=None, *, record: bool = False
    ) -> ModeResult:
        """Lookup: rows whose similarity meets the threshold match.

        ``thresholds`` may be a scalar or per-row vector in
        ``[0, word_bits]``; None means complete match (threshold N).
        The decoded payload is the Boolean match mask (output >= 0).
        """
        self._require_onebit_words("lookup")
        n = self.geometry.word_bits
        if thresholds is None:
            thr = np.full(self.geometry.words, n, dtype=np.int64)
        else:
            thr = np.broadcast_to(
                np.asarray(thresholds, dtype=np.int64), (self.geometry.words,)
            ).copy()
        if (thr < 0).any() or (thr > n).any():
            raise GeometryError(f"match thresholds must lie in [0, {n}]")
        self.thresholds = thr
        sched = plan_schedule(CamComplete(), self.geometry, None, query)
        return self._finish(sched, lambda y: y >= 0, record)

    def run_gf2(self, x, *, record: bool = False) -> ModeResult:
        """Product over the two-element field: per-row AND-popcount parity.

        The decoded payload is the least significant bit of each row
        output.
        """
        self._require_onebit_words("field product")
        self.thresholds = np.zeros(self.geometry.words, dtype=np.int64)
        sched = plan_schedule(Gf2Mvp(), self.geometry, None, x)
        return self._finish(sched, lambda y: (y & 1).astype(np.int64), record)

    def run_mvp(
        self, mode: Mvp, x, bias=None, *, record: bool = False
    ) -> ModeResult:
        """Exact integer product of the stored matrix with a vector.

        Mixed-level format pairs must be prepared first
        (:meth:`prepare_mode`).  ``bias`` is an optional per-row integer
        vector added to the product through the thresholds; it lands on
        the final plane cycle's output.
        """
        self._require_matrix(mode)
        if mode.mixed_levels:
            key = (mode.matrix_format, mode.vector_format)
            if self._prepared_for != key:
                raise StateError(
                    "mixed-level formats need prepare_mode after load_matrix"
                )
            thr = self._format_offsets.copy()
        else:
            # Same-level pairs carry no correction; never reuse offsets
            # left behind by a mixed-pair preparation.
            thr = np.zeros(self.geometry.words, dtype=np.int64)
        if bias is not None:
            bias_arr = np.asarray(bias, dtype=np.int64)
            if bias_arr.shape != (self.geometry.words,):
                raise GeometryError(
                    f"bias must have {self.geometry.words} entries"
                )
            thr -= bias_arr
        self.thresholds = thr
        sched = plan_schedule(mode, self.geometry, self._layout, x)
        return self._finish(sched, lambda y: y.copy(), record)

    def run_pla(self, assignment, *, record: bool = False) -> ModeResult:
        """Evaluate the programmed two-level functions on an assignment.

        The decoded payload holds one Boolean per programmed bank,
        derived from the bank counts through each bank's output gate.
        """
        if self._program is None or self._program_thresholds is None:
            raise StateError("no logic program loaded; call program_pla")
        program = self._program
        self.thresholds = self._program_thresholds.copy()
        sched = plan_schedule(Pla(program), self.geometry, None, assignment)

        def decode(y: np.ndarray) -> np.ndarray:
            counts = bank_counts(y, self.geometry)
            outs = np.zeros(len(program.banks), dtype=bool)
            for b, bank in enumerate(program.banks):
                hits = int(counts[b])
                total = len(bank.terms)
                if bank.output_gate is Gate.AND:
                    outs[b] = hits == total
                elif bank.output_gate is Gate.OR:
                    outs[b] = hits > 0
                else:
                    outs[b] = hits >= (total + 1) // 2
            return outs

        return self._finish(sched, decode, record)
