"""Randomized differential testing of simulated products vs. the oracle.

Each trial draws an array geometry, a format pair, a matrix, and a
vector; loads and prepares a fresh simulator; and compares the decoded
product entry-for-entry against the plain-integer reference.  Trials
are deterministic functions of (seed, trial index), and the nine
format-kind pairs are cycled round-robin so every pairing gets even
coverage regardless of the trial count.

On the first mismatch the failing instance is shrunk (single row,
simplified entries, dropped columns, re-checking after every step) and
reported together with the failing row's cycle-by-cycle register trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import oracle
from .bitcells import ArrayGeometry
from .controller import Simulator
from .formats import FormatKind, NumberFormat
from .modes import Mvp

KIND_PAIRS: tuple[tuple[FormatKind, FormatKind], ...] = tuple(
    (mk, vk) for mk in FormatKind for vk in FormatKind
)


@dataclass(frozen=True)
class DifftestConfig:
    trials: int
    seed: int
    max_words: int = 64
    max_bits: int = 256
    widths: tuple[int, ...] = (1, 2, 3, 4)


@dataclass(eq=False)
class Counterexample:
    """A minimized failing product instance."""

    trial: int
    mode: Mvp
    geometry: ArrayGeometry
    matrix: np.ndarray
    vector: np.ndarray
    expected: list[int]
    actual: list[int]
    trace_lines: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"counterexample (trial {self.trial}, "
            f"{self.mode.matrix_format} matrix x "
            f"{self.mode.vector_format} vector):",
            f"  geometry: words={self.geometry.words} "
            f"word_bits={self.geometry.word_bits} "
            f"subrows={self.geometry.subrows}",
            f"  matrix:    {self.matrix.tolist()}",
            f"  vector:    {self.vector.tolist()}",
            f"  expected:  {self.expected}",
            f"  simulated: {self.actual}",
            "  cycle trace (row 0 of the minimized instance):",
        ]
        out.extend("    " + line for line in self.trace_lines)
        return out


@dataclass(eq=False)
class DifftestResult:
    trials: int
    passed: int
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def summary(self) -> str:
        return f"{self.passed}/{self.trials} pass"


def sample_values(rng: np.random.Generator, fmt: NumberFormat, size) -> np.ndarray:
    """Uniform sample of representable values of ``fmt``."""
    amplitude = 1 << fmt.width
    if fmt.kind is FormatKind.UINT:
        return rng.integers(0, amplitude, size=size, dtype=np.int64)
    if fmt.kind is FormatKind.INT:
        return rng.integers(
            -(amplitude // 2), amplitude // 2, size=size, dtype=np.int64
        )
    return 2 * rng.integers(0, amplitude, size=size, dtype=np.int64) - (
        amplitude - 1
    )


def _divisor_choice(rng: np.random.Generator, n: int) -> int:
    options = [d for d in (1, 2, 4, 8, 16) if n % d == 0]
    return int(options[rng.integers(0, len(options))])


def _run_instance(
    mode: Mvp,
    geometry: ArrayGeometry,
    matrix: np.ndarray,
    vector: np.ndarray,
    fault: Callable[[Simulator], None] | None = None,
    record: bool = False,
):
    sim = Simulator(geometry)
    sim.load_matrix(matrix, mode.matrix_format)
    sim.prepare_mode(mode)
    if fault is not None:
        fault(sim)
    result = sim.run_mvp(mode, vector, record=record)
    return result


def _instance_fails(
    mode: Mvp,
    geometry: ArrayGeometry,
    matrix: np.ndarray,
    vector: np.ndarray,
    fault,
) -> bool:
    got = _run_instance(mode, geometry, matrix, vector, fault).decoded
    want = oracle.mvp(matrix, vector)
    return list(got) != list(want)


def _geometry_for(matrix: np.ndarray, entry_bits: int, subrows: int = 1):
    words, entries = matrix.shape
    word_bits = entries * entry_bits
    if word_bits % subrows:
        subrows = 1
    return ArrayGeometry(words, word_bits, banks=1, subrows=subrows)


def _simplest(fmt: NumberFormat) -> int:
    return 1 if fmt.kind is FormatKind.ODDINT else 0


def _minimize(
    mode: Mvp, matrix: np.ndarray, vector: np.ndarray, fault
) -> tuple[np.ndarray, np.ndarray]:
    """Greedy shrink keeping the instance failing."""
    k = mode.matrix_bits
    # Single failing row first.
    for row in range(matrix.shape[0]):
        candidate = matrix[row : row + 1].copy()
        if _instance_fails(mode, _geometry_for(candidate, k), candidate,
                           vector, fault):
            matrix = candidate
            break
    # Drop entries (columns) while the failure persists.
    j = matrix.shape[1] - 1
    while j >= 0 and matrix.shape[1] > 1:
        m2 = np.delete(matrix, j, axis=1)
        v2 = np.delete(vector, j)
        if _instance_fails(mode, _geometry_for(m2, k), m2, v2, fault):
            matrix, vector = m2, v2
        j -= 1
    # Simplify surviving entries.
    for target, fmt in ((vector, mode.vector_format),
                        (matrix, mode.matrix_format)):
        plain = _simplest(fmt)
        flat = target.reshape(-1)
        for idx in range(flat.size):
            if flat[idx] == plain:
                continue
            saved = flat[idx]
            flat[idx] = plain
            if not _instance_fails(mode, _geometry_for(matrix, k), matrix,
                                   vector, fault):
                flat[idx] = saved
    return matrix, vector


def _trace_lines(mode: Mvp, matrix, vector, fault) -> list[str]:
    geometry = _geometry_for(matrix, mode.matrix_bits)
    result = _run_instance(mode, geometry, matrix, vector, fault, record=True)
    lines = []
    for entry in result.trace or []:
        parts = [f"tick {entry.tick}"]
        if entry.issued:
            parts.append(f"issue {entry.issued}")
        if entry.completed:
            count = "-" if entry.counts is None else int(entry.counts[0])
            parts.append(
                f"complete {entry.completed}: count={count} "
                f"stored={int(entry.stored_count[0])} "
                f"vec_acc={int(entry.vec_acc[0])} "
                f"mat_acc={int(entry.mat_acc[0])} "
                f"y={int(entry.y[0])}"
            )
        lines.append(" | ".join(parts))
    return lines


def run_difftest(
    config: DifftestConfig,
    fault: Callable[[Simulator], None] | None = None,
) -> DifftestResult:
    """Run the oracle-equivalence suite; stops at the first mismatch.

    ``fault`` is a harness self-test hook applied to each prepared
    simulator before the run (used to verify that injected datapath
    faults are caught and reported).
    """
    passed = 0
    for trial in range(config.trials):
        rng = np.random.default_rng([config.seed, trial])
        mat_kind, vec_kind = KIND_PAIRS[trial % len(KIND_PAIRS)]
        widths = np.asarray(config.widths)
        k = int(widths[rng.integers(0, len(widths))])
        level_bits = int(widths[rng.integers(0, len(widths))])
        mode = Mvp(NumberFormat(mat_kind, k), NumberFormat(vec_kind, level_bits))
        entries = int(rng.integers(1, max(config.max_bits // k, 1) + 1))
        words = int(rng.integers(1, config.max_words + 1))
        subrows = _divisor_choice(rng, entries * k)
        geometry = ArrayGeometry(
            words, entries * k, banks=1, subrows=subrows
        )
        matrix = sample_values(rng, mode.matrix_format, (words, entries))
        vector = sample_values(rng, mode.vector_format, entries)
        result = _run_instance(mode, geometry, matrix, vector, fault)
        expected = oracle.mvp(
            matrix, vector, mode.matrix_format, mode.vector_format
        )
        if list(result.decoded) == expected:
            passed += 1
            continue
        small_m, small_v = _minimize(mode, matrix.copy(), vector.copy(), fault)
        small_geometry = _geometry_for(small_m, k)
        actual = _run_instance(
            mode, small_geometry, small_m, small_v, fault
        ).decoded
        counterexample = Counterexample(
            trial=trial,
            mode=mode,
            geometry=small_geometry,
            matrix=small_m,
            vector=small_v,
            expected=[int(v) for v in oracle.mvp(small_m, small_v)],
            actual=[int(v) for v in actual],
            trace_lines=_trace_lines(mode, small_m, small_v, fault),
        )
        return DifftestResult(config.trials, passed, counterexample)
    return DifftestResult(config.trials, passed)
