"""Exception hierarchy.

Every error raised by this package derives from :class:`SimError` and
carries a short machine-parsable ``code`` slug, which the command-line
front end prints as ``error: <code>: <message>``.
"""


class SimError(Exception):
    """Base class for all simulator errors."""

    code = "error"


class FormatError(SimError):
    """Value outside a number format's range, or a malformed format."""

    code = "format"


class GeometryError(SimError):
    """Array geometry violation (divisibility, index, or length)."""

    code = "geometry"


class ControlError(SimError):
    """Contradictory control word (write and accumulate both set)."""

    code = "control"


class AccumulatorOverflowError(SimError):
    """Row ALU register left the configured safe range.

    Signals a schedule or width bug: correctly planned runs on in-range
    operands stay far below the bound.
    """

    code = "alu-overflow"


class ScheduleError(SimError):
    """Mode request inconsistent with the stored matrix layout."""

    code = "schedule"


class StateError(SimError):
    """Operation issued against a machine in the wrong state.

    Covers running a product before the matrix is loaded or prepared,
    and strict-mode reads of never-written rows.
    """

    code = "state"


class PlaProgramError(SimError):
    """Two-level logic program does not fit the array or is malformed."""

    code = "pla-program"


class PerfError(SimError):
    """Performance parameter lookup failed (unknown geometry or mode)."""

    code = "perf"


class FileFormatError(SimError):
    """Workload input file could not be parsed."""

    code = "file-parse"

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno
