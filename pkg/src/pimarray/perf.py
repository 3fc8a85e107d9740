"""Cycle, throughput, and energy accounting.

Throughput counts 1-bit multiplies and 1-bit adds as one OP each, so a
row inner product of dimension N is 2N-1 OP and an array performs
``words * (2*word_bits - 1)`` OP per cycle regardless of the operation
mode; peak OP/s is therefore format-relative and quoted per 1-bit work.
Clock frequencies and power draws are opaque calibration constants
loaded from a parameter file (defaults ship with the package for four
reference builds); lookups for geometries outside the table are
refused rather than interpolated.

Single-cycle modes (similarity, lookup, field products, logic) finish
one full-array pass per cycle with a two-cycle pipeline latency;
multi-bit products take K*L cycles per pass, with consecutive passes
overlapping across the pipeline stage (steady-state accounting).

The subrow partitioning detail: each subrow adder feeds the row ALU
over ``ceil(log2(V+1))`` wires instead of V, which is why large arrays
stay routable; the simulator itself always carries exact integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .alu import PIPELINE_LATENCY
from .bitcells import ArrayGeometry
from .errors import PerfError
from .modes import (
    CamComplete,
    CamSimilarity,
    Gf2Mvp,
    HammingSimilarity,
    ModeSpec,
    Mvp,
    Pla,
)

__all__ = [
    "PIPELINE_LATENCY",
    "EnergyReport",
    "PerfParams",
    "PerfTable",
    "energy_report",
    "load_params",
    "mode_key",
    "mode_throughput",
    "mvp_cycles",
    "ops_per_cycle",
    "peak_throughput",
]


def ops_per_cycle(geometry: ArrayGeometry) -> int:
    """1-bit operations per clock cycle: ``words * (2*word_bits - 1)``."""
    return geometry.words * (2 * geometry.word_bits - 1)


def peak_throughput(geometry: ArrayGeometry, clock_hz: float) -> float:
    """Peak OP/s at a clock frequency."""
    if clock_hz <= 0:
        raise PerfError(f"clock must be positive, got {clock_hz}")
    return ops_per_cycle(geometry) * clock_hz


def mvp_cycles(mode: ModeSpec) -> int:
    """Steady-state array cycles per result for a mode."""
    if isinstance(mode, Mvp):
        return mode.matrix_bits * mode.vector_bits
    return 1


def mode_throughput(mode: ModeSpec, clock_hz: float) -> float:
    """Full-array passes per second for a mode."""
    if clock_hz <= 0:
        raise PerfError(f"clock must be positive, got {clock_hz}")
    return clock_hz / mvp_cycles(mode)


def mode_key(mode: ModeSpec) -> str:
    """Canonical name used to key per-mode power tables."""
    if isinstance(mode, HammingSimilarity):
        return "hamming"
    if isinstance(mode, (CamComplete, CamSimilarity)):
        return "cam"
    if isinstance(mode, Gf2Mvp):
        return "gf2"
    if isinstance(mode, Pla):
        return "pla"
    if isinstance(mode, Mvp):
        return f"mvp_{mode.matrix_format}_{mode.vector_format}"
    raise PerfError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class PerfParams:
    """Calibration constants for one array build.

    ``power_w`` is the whole-array draw used for energy per OP;
    ``mode_power_w`` holds per-mode draws for energy per pass.  The
    ``reported_*`` fields carry published reference figures when the
    parameter file provides them.
    """

    geometry: ArrayGeometry
    clock_hz: float
    power_w: float
    mode_power_w: Mapping[str, float]
    reported_peak_tops: float | None = None
    reported_fj_per_op: float | None = None
    reported_modes: Mapping[str, Mapping[str, float]] | None = None
    # Opaque layout figures (area, density, cell area) carried through
    # to reports as constants; nothing is derived from them.
    layout_constants: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.clock_hz <= 0:
            raise PerfError("clock frequency must be positive")
        if self.power_w <= 0:
            raise PerfError("power must be positive")
        for name, watts in self.mode_power_w.items():
            if watts <= 0:
                raise PerfError(f"mode power for {name!r} must be positive")


@dataclass(frozen=True)
class EnergyReport:
    """Energy figures for one run: total, per pass, per OP."""

    joules: float
    joules_per_pass: float
    joules_per_op: float


def energy_report(
    mode: ModeSpec, cycles: int, params: PerfParams
) -> EnergyReport:
    """Energy accounting for ``cycles`` of a mode on a calibrated build."""
    if cycles < 0:
        raise PerfError(f"cycle count must be >= 0, got {cycles}")
    key = mode_key(mode)
    if key not in params.mode_power_w:
        raise PerfError(
            f"no calibrated power for mode {key!r} on "
            f"{params.geometry.words}x{params.geometry.word_bits}"
        )
    mode_power = params.mode_power_w[key]
    joules = mode_power * cycles / params.clock_hz
    per_pass = mode_power / mode_throughput(mode, params.clock_hz)
    per_op = params.power_w / peak_throughput(params.geometry, params.clock_hz)
    return EnergyReport(
        joules=joules, joules_per_pass=per_pass, joules_per_op=per_op
    )


class PerfTable:
    """Geometry-keyed calibration table loaded from a parameter file."""

    def __init__(self, params: list[PerfParams]):
        self._by_size: dict[tuple[int, int], PerfParams] = {}
        for p in params:
            key = (p.geometry.words, p.geometry.word_bits)
            if key in self._by_size:
                raise PerfError(f"duplicate geometry {key} in parameter table")
            self._by_size[key] = p

    def geometries(self) -> list[ArrayGeometry]:
        return [p.geometry for p in self._by_size.values()]

    def for_geometry(self, geometry: ArrayGeometry) -> PerfParams:
        """Exact lookup; unknown sizes are refused, never interpolated."""
        key = (geometry.words, geometry.word_bits)
        if key not in self._by_size:
            known = ", ".join(f"{w}x{n}" for w, n in sorted(self._by_size))
            raise PerfError(
                f"no calibration for a {key[0]}x{key[1]} array "
                f"(known: {known}); refusing to interpolate"
            )
        return self._by_size[key]

    def has_geometry(self, geometry: ArrayGeometry) -> bool:
        return (geometry.words, geometry.word_bits) in self._by_size


def _params_from_dict(doc: dict) -> list[PerfParams]:
    mode_doc = doc.get("mode_table", {})
    mode_size = (mode_doc.get("words"), mode_doc.get("word_bits"))
    out = []
    for entry in doc.get("arrays", []):
        try:
            geometry = ArrayGeometry(
                words=entry["words"],
                word_bits=entry["word_bits"],
                banks=entry.get("banks", 1),
                subrows=entry.get("subrows", 1),
            )
            clock_hz = float(entry["clock_ghz"]) * 1e9
            power_w = float(entry["power_mw"]) * 1e-3
        except KeyError as exc:
            raise PerfError(f"parameter entry missing field {exc}") from exc
        mode_power: dict[str, float] = {}
        reported_modes = None
        if (geometry.words, geometry.word_bits) == mode_size:
            mode_power = {
                name: float(mw) * 1e-3
                for name, mw in mode_doc.get("power_mw", {}).items()
            }
            reported_modes = mode_doc.get("reported")
        reported = entry.get("reported", {})
        out.append(
            PerfParams(
                geometry=geometry,
                clock_hz=clock_hz,
                power_w=power_w,
                mode_power_w=mode_power,
                reported_peak_tops=reported.get("peak_tops"),
                reported_fj_per_op=reported.get("fj_per_op"),
                reported_modes=reported_modes,
                layout_constants=entry.get("layout_constants"),
            )
        )
    return out


def load_params(path=None) -> PerfTable:
    """Load a calibration table; None loads the packaged defaults."""
    if path is None:
        text = (
            resources.files("pimarray.data")
            .joinpath("perf_defaults.json")
            .read_text()
        )
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PerfError(f"parameter file is not valid JSON: {exc}") from exc
    return PerfTable(_params_from_dict(doc))
