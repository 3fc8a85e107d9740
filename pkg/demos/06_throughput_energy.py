"""Throughput and energy arithmetic for the calibrated builds.

Clock and power are measured constants shipped with the package for
four reference builds (28nm, 0.9V); everything else is arithmetic:
an M x N array does M*(2N-1) single-bit operations per cycle, peak
OP/s is that times the clock, single-cycle modes sustain one full
pass per cycle, and K*L-cycle products divide the pass rate down.
Derived numbers are printed next to the published reference values.
"""

from pimarray import (
    ArrayGeometry,
    Gf2Mvp,
    HammingSimilarity,
    Mvp,
    NumberFormat,
    energy_report,
    load_params,
    mode_throughput,
    mvp_cycles,
    ops_per_cycle,
    peak_throughput,
)
from pimarray.modes import BankProgram, Gate, Pla, PlaProgram
from pimarray.perf import mode_key

table = load_params()

print("build          OP/cycle   peak TOP/s (ref)     fJ/OP (ref)")
for geometry in table.geometries():
    params = table.for_geometry(geometry)
    tops = peak_throughput(geometry, params.clock_hz) / 1e12
    fj = params.power_w / peak_throughput(geometry, params.clock_hz) * 1e15
    name = f"{geometry.words}x{geometry.word_bits}"
    print(
        f"{name:<12}{ops_per_cycle(geometry):>11,}"
        f"{tops:>9.2f} ({params.reported_peak_tops:>5})   "
        f"{fj:>8.2f} ({params.reported_fj_per_op})"
    )

big = ArrayGeometry(256, 256, banks=16, subrows=16)
params = table.for_geometry(big)

modes = [
    ("similarity", HammingSimilarity()),
    ("1-bit signed product", Mvp(NumberFormat.oddint(1), NumberFormat.oddint(1))),
    ("4-bit unsigned product", Mvp(NumberFormat.uint(4), NumberFormat.uint(4))),
    ("field product", Gf2Mvp()),
    ("two-level logic", Pla(PlaProgram(1, (BankProgram((), Gate.OR),)))),
]

print(f"\n256x256 build at {params.clock_hz / 1e9:.3f} GHz:")
print("mode                    cycles  Gpass/s (ref)      pJ/pass (ref)")
for name, mode in modes:
    cycles = mvp_cycles(mode)
    rate = mode_throughput(mode, params.clock_hz) / 1e9
    report = energy_report(mode, cycles, params)
    ref = (params.reported_modes or {}).get(mode_key(mode), {})
    print(
        f"{name:<24}{cycles:>5}{rate:>9.3f} ({ref.get('gmvp_per_s')})"
        f"{report.joules_per_pass * 1e12:>11.0f} ({ref.get('pj_per_mvp')})"
    )

print("\nnote: OP counts weigh 1-bit multiplies and adds only, so peak")
print("OP/s is a 1-bit figure regardless of the mode's operand widths.")

# Unknown geometries are refused outright rather than interpolated.
try:
    table.for_geometry(ArrayGeometry(64, 64))
except Exception as exc:
    print(f"\n64x64 lookup: {exc}")
