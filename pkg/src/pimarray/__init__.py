"""Bit-exact simulator for an associative popcount-array accelerator.

The device is a content-addressable memory extended with per-bit-cell
XNOR/AND operators and one small ALU per row.  On top of a single
primitive, per-row population counts of bit-wise operator outputs, it
runs word similarity search, threshold and complete-match lookup, exact
integer matrix-vector products in three number formats (bit-serially
for multi-bit operands), products over the two-element field, and
two-level Boolean logic.

The package mirrors that structure: :mod:`pimarray.formats` holds the
number formats and plane codecs, :mod:`pimarray.bitcells` the latched
array, :mod:`pimarray.alu` the row datapath, :mod:`pimarray.controller`
the scheduler plus the :class:`Simulator` front end,
:mod:`pimarray.oracle` independent golden references,
:mod:`pimarray.perf` the throughput/energy arithmetic, and
:mod:`pimarray.cli` the workload runner.
"""

from .alu import (
    IDLE,
    OVERFLOW_BOUND,
    ControlWord,
    RowAluBank,
    RowAluState,
    alu_step,
    bank_counts,
    msb_negated,
)
from .bitcells import ArrayGeometry, BitCellArray, ColumnOp, ColumnOpSelect
from .controller import (
    PIPELINE_LATENCY,
    CycleStimulus,
    CycleTrace,
    ModeResult,
    Simulator,
    StoredMatrixLayout,
    assignment_bits,
    matrix_to_cells,
    plan_schedule,
    pla_to_cells,
)
from .errors import (
    AccumulatorOverflowError,
    ControlError,
    FileFormatError,
    FormatError,
    GeometryError,
    PerfError,
    PlaProgramError,
    ScheduleError,
    SimError,
    StateError,
)
from .formats import (
    MAX_WIDTH,
    FormatKind,
    Level,
    NumberFormat,
    decode_value,
    decompose_planes,
    encode_value,
    in_range,
    recombine_planes,
    value_range,
)
from .harness import DifftestConfig, DifftestResult, run_difftest
from .modes import (
    BankProgram,
    CamComplete,
    CamSimilarity,
    Gate,
    Gf2Mvp,
    HammingSimilarity,
    Literal,
    ModeSpec,
    Mvp,
    Pla,
    PlaProgram,
    Term,
)
from .perf import (
    EnergyReport,
    PerfParams,
    PerfTable,
    energy_report,
    load_params,
    mode_throughput,
    mvp_cycles,
    ops_per_cycle,
    peak_throughput,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "BitCellArray",
    "ColumnOp",
    "ColumnOpSelect",
    "ControlWord",
    "RowAluBank",
    "RowAluState",
    "alu_step",
    "bank_counts",
    "msb_negated",
    "IDLE",
    "OVERFLOW_BOUND",
    "PIPELINE_LATENCY",
    "CycleStimulus",
    "CycleTrace",
    "ModeResult",
    "Simulator",
    "StoredMatrixLayout",
    "assignment_bits",
    "matrix_to_cells",
    "plan_schedule",
    "pla_to_cells",
    "Level",
    "FormatKind",
    "NumberFormat",
    "MAX_WIDTH",
    "value_range",
    "in_range",
    "encode_value",
    "decode_value",
    "decompose_planes",
    "recombine_planes",
    "HammingSimilarity",
    "CamComplete",
    "CamSimilarity",
    "Mvp",
    "Gf2Mvp",
    "Pla",
    "ModeSpec",
    "Gate",
    "Literal",
    "Term",
    "BankProgram",
    "PlaProgram",
    "DifftestConfig",
    "DifftestResult",
    "run_difftest",
    "PerfParams",
    "PerfTable",
    "EnergyReport",
    "ops_per_cycle",
    "peak_throughput",
    "mvp_cycles",
    "mode_throughput",
    "energy_report",
    "load_params",
    "SimError",
    "FormatError",
    "GeometryError",
    "ControlError",
    "AccumulatorOverflowError",
    "ScheduleError",
    "StateError",
    "PlaProgramError",
    "PerfError",
    "FileFormatError",
]
