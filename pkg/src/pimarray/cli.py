"""Command-line workload runner.

Subcommands:

``run``
    Load a matrix (or logic program) and a batch of input vectors,
    execute one operation mode, and emit a JSON report with decoded
    results, cycle counts, and performance estimates.
``difftest``
    Run the randomized oracle-equivalence suite; deterministic for a
    given seed, prints the first (minimized) counterexample on failure.
``perf``
    Print the throughput/energy arithmetic for a calibrated geometry.

Input files are whitespace-separated text, diff-friendly and
hand-editable.  A matrix file starts with a header ``M J K <kind>``
(M rows of J entries, K bits each, kind one of uint/int/oddint)
followed by M rows of J integers.  A vector file starts with
``J L <kind>`` followed by one row of J integers per input vector.
A logic program file holds ``vars V`` plus per-bank ``stage <bank>
<and|or|maj>`` and ``term <bank> <and|or|maj> <literals>`` lines, with
literals written ``x3`` / ``!x3``; ``#`` starts a comment.

Reports are byte-identical across runs with the same inputs and seed.
Every failure exits nonzero after printing a single line of the form
``error: <code>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bitcells import ArrayGeometry
from .controller import PIPELINE_LATENCY, Simulator
from .errors import FileFormatError, SimError
from .formats import FormatKind, NumberFormat, check_range
from .harness import DifftestConfig, run_difftest
from .modes import (
    BankProgram,
    CamComplete,
    CamSimilarity,
    Gate,
    Gf2Mvp,
    HammingSimilarity,
    Literal,
    Mvp,
    Pla,
    PlaProgram,
    Term,
)
from . import perf


# -- input files --------------------------------------------------------


def _content_lines(path):
    """Yield (lineno, tokens) for non-blank, non-comment lines."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield lineno, text.split()


def _parse_int(path, lineno, token, what):
    try:
        return int(token)
    except ValueError:
        raise FileFormatError(path, lineno, f"expected integer {what}, got {token!r}")


def _parse_kind(path, lineno, token) -> FormatKind:
    try:
        return FormatKind(token)
    except ValueError:
        raise FileFormatError(
            path, lineno,
            f"unknown format kind {token!r} (expected uint, int, or oddint)",
        )


def read_matrix(path) -> tuple[np.ndarray, NumberFormat]:
    """Read a matrix file: header ``M J K <kind>`` then M rows of J ints."""
    lines = _content_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise FileFormatError(path, 1, "empty matrix file")
    if len(tokens) != 4:
        raise FileFormatError(
            path, lineno, f"matrix header needs 'M J K kind', got {len(tokens)} tokens"
        )
    rows = _parse_int(path, lineno, tokens[0], "row count")
    entries = _parse_int(path, lineno, tokens[1], "entry count")
    width = _parse_int(path, lineno, tokens[2], "entry width")
    fmt = NumberFormat(_parse_kind(path, lineno, tokens[3]), width)
    data = np.zeros((rows, entries), dtype=np.int64)
    for r in range(rows):
        try:
            lineno, tokens = next(lines)
        except StopIteration:
            raise FileFormatError(
                path, 0, f"file ended after {r} data rows, header said {rows}"
            )
        if len(tokens) != entries:
            raise FileFormatError(
                path, lineno, f"expected {entries} integers, got {len(tokens)}"
            )
        data[r] = [_parse_int(path, lineno, t, "matrix entry") for t in tokens]
    for lineno, _ in lines:
        raise FileFormatError(path, lineno, f"unexpected extra row (header said {rows})")
    return data, fmt


def read_vectors(path) -> tuple[np.ndarray, NumberFormat]:
    """Read a vector file: header ``J L <kind>`` then one row per vector."""
    lines = _content_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise FileFormatError(path, 1, "empty vector file")
    if len(tokens) != 3:
        raise FileFormatError(
            path, lineno, f"vector header needs 'J L kind', got {len(tokens)} tokens"
        )
    entries = _parse_int(path, lineno, tokens[0], "entry count")
    width = _parse_int(path, lineno, tokens[1], "entry width")
    fmt = NumberFormat(_parse_kind(path, lineno, tokens[2]), width)
    rows = []
    for lineno, tokens in lines:
        if len(tokens) != entries:
            raise FileFormatError(
                path, lineno, f"expected {entries} integers, got {len(tokens)}"
            )
        rows.append([_parse_int(path, lineno, t, "vector entry") for t in tokens])
    if not rows:
        raise FileFormatError(path, 0, "vector file holds no vectors")
    return np.array(rows, dtype=np.int64), fmt


def _parse_gate(path, lineno, token) -> Gate:
    try:
        return Gate(token)
    except ValueError:
        raise FileFormatError(
            path, lineno, f"unknown gate {token!r} (expected and, or, or maj)"
        )


def _parse_literal(path, lineno, token) -> Literal:
    negated = token.startswith("!") or token.startswith("~")
    name = token[1:] if negated else token
    if not name.startswith("x") or not name[1:].isdigit():
        raise FileFormatError(
            path, lineno, f"bad literal {token!r} (expected x<i> or !x<i>)"
        )
    return Literal(var=int(name[1:]), negated=negated)


def read_pla(path) -> PlaProgram:
    """Read a two-level logic program file."""
    num_vars = None
    terms: dict[int, list[Term]] = {}
    stages: dict[int, Gate] = {}
    max_bank = -1
    for lineno, tokens in _content_lines(path):
        keyword = tokens[0]
        if keyword == "vars":
            if len(tokens) != 2:
                raise FileFormatError(path, lineno, "vars line needs one count")
            num_vars = _parse_int(path, lineno, tokens[1], "variable count")
        elif keyword == "stage":
            if len(tokens) != 3:
                raise FileFormatError(path, lineno, "stage line needs 'stage bank gate'")
            bank = _parse_int(path, lineno, tokens[1], "bank index")
            stages[bank] = _parse_gate(path, lineno, tokens[2])
            max_bank = max(max_bank, bank)
        elif keyword == "term":
            if len(tokens) < 3:
                raise FileFormatError(
                    path, lineno, "term line needs 'term bank gate [literals]'"
                )
            bank = _parse_int(path, lineno, tokens[1], "bank index")
            gate = _parse_gate(path, lineno, tokens[2])
            lits = tuple(_parse_literal(path, lineno, t) for t in tokens[3:])
            terms.setdefault(bank, []).append(Term(gate, lits))
            max_bank = max(max_bank, bank)
        else:
            raise FileFormatError(
                path, lineno, f"unknown directive {keyword!r} (vars/stage/term)"
            )
    if num_vars is None:
        raise FileFormatError(path, 0, "program never declared 'vars'")
    banks = tuple(
        BankProgram(
            terms=tuple(terms.get(b, ())),
            output_gate=stages.get(b, Gate.OR),
        )
        for b in range(max_bank + 1)
    )
    return PlaProgram(num_vars=num_vars, banks=banks)


# -- geometry and report helpers ----------------------------------------


def parse_geometry(text: str) -> ArrayGeometry:
    parts = text.lower().split("x")
    if len(parts) not in (2, 3, 4) or not all(p.isdigit() for p in parts):
        raise SimError(
            f"bad geometry {text!r} (expected WORDSxBITS[xBANKS[xSUBROWS]])"
        )
    nums = [int(p) for p in parts]
    while len(nums) < 4:
        nums.append(1)
    return ArrayGeometry(*nums)


def _geometry_dict(geometry: ArrayGeometry) -> dict:
    return {
        "words": geometry.words,
        "word_bits": geometry.word_bits,
        "banks": geometry.banks,
        "subrows": geometry.subrows,
    }


def _performance_block(mode, geometry, table) -> dict:
    if not table.has_geometry(geometry):
        return {
            "available": False,
            "reason": f"no calibration for {geometry.words}x{geometry.word_bits}",
        }
    params = table.for_geometry(geometry)
    block = {
        "available": True,
        "clock_ghz": round(params.clock_hz / 1e9, 6),
        "ops_per_cycle": perf.ops_per_cycle(geometry),
        "peak_tops": round(
            perf.peak_throughput(geometry, params.clock_hz) / 1e12, 6
        ),
        "fj_per_op": round(
            params.power_w
            / perf.peak_throughput(geometry, params.clock_hz)
            * 1e15,
            6,
        ),
    }
    if params.reported_peak_tops is not None:
        block["peak_tops_reported"] = params.reported_peak_tops
    if params.reported_fj_per_op is not None:
        block["fj_per_op_reported"] = params.reported_fj_per_op
    if params.layout_constants:
        block["layout_constants"] = dict(params.layout_constants)
    if mode is not None:
        mode_block = {
            "cycles_per_pass": perf.mvp_cycles(mode),
            "gmvp_per_s": round(
                perf.mode_throughput(mode, params.clock_hz) / 1e9, 6
            ),
        }
        key = perf.mode_key(mode)
        if key in params.mode_power_w:
            report = perf.energy_report(mode, perf.mvp_cycles(mode), params)
            mode_block["power_mw"] = round(params.mode_power_w[key] * 1e3, 6)
            mode_block["pj_per_pass"] = round(report.joules_per_pass * 1e12, 6)
        reported = (params.reported_modes or {}).get(key)
        if reported:
            mode_block["gmvp_per_s_reported"] = reported.get("gmvp_per_s")
            mode_block["pj_per_mvp_reported"] = reported.get("pj_per_mvp")
        block["mode"] = mode_block
    return block


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------


def cmd_run(args) -> int:
    table = perf.load_params(args.perf_params)
    workload: dict = {"mode": args.mode}
    results = []
    raw = []

    if args.mode == "pla":
        if not args.program or not args.geometry:
            raise SimError("pla mode needs --program and --geometry")
        program = read_pla(args.program)
        geometry = parse_geometry(args.geometry)
        sim = Simulator(geometry)
        sim.program_pla(program)
        assignments, afmt = read_vectors(args.vectors)
        if afmt != NumberFormat.uint(1):
            raise SimError("pla assignments must use format 'uint' with L=1")
        check_range(assignments, afmt)
        mode = Pla(program)
        workload.update({
            "geometry": _geometry_dict(geometry),
            "program_file": args.program,
            "vectors_file": args.vectors,
            "variables": program.num_vars,
        })
        for row in assignments:
            res = sim.run_pla(row.astype(bool))
            results.append([int(v) for v in res.decoded])
            raw.append([int(v) for v in res.y])
        cycles_per_pass = 1
    else:
        if not args.matrix:
            raise SimError(f"{args.mode} mode needs --matrix")
        matrix, mat_fmt = read_matrix(args.matrix)
        rows, entries = matrix.shape
        geometry = ArrayGeometry(
            rows, entries * mat_fmt.width,
            banks=args.banks, subrows=args.subrows,
        )
        sim = Simulator(geometry)
        sim.load_matrix(matrix, mat_fmt)
        vectors, vec_fmt = read_vectors(args.vectors)
        if vectors.shape[1] != entries:
            raise SimError(
                f"vectors have {vectors.shape[1]} entries, matrix rows "
                f"have {entries}"
            )
        workload.update({
            "geometry": _geometry_dict(geometry),
            "matrix_file": args.matrix,
            "matrix_format": str(mat_fmt),
            "vectors_file": args.vectors,
            "vector_format": str(vec_fmt),
        })
        bit_formats = (NumberFormat.uint(1), NumberFormat.oddint(1),
                       NumberFormat.int_(1))
        if args.mode == "mvp":
            mode = Mvp(mat_fmt, vec_fmt)
            sim.prepare_mode(mode)
            for row in vectors:
                res = sim.run_mvp(mode, row)
                results.append([int(v) for v in res.decoded])
                raw.append([int(v) for v in res.y])
        else:
            if mat_fmt.width != 1:
                raise SimError(f"{args.mode} mode needs a 1-bit matrix")
            if vec_fmt not in bit_formats or vec_fmt.width != 1:
                raise SimError(f"{args.mode} mode needs 1-bit query vectors")
            check_range(vectors, vec_fmt)
            bits = vectors != 0 if vec_fmt.kind is not FormatKind.ODDINT \
                else vectors > 0
            if args.mode == "hamming":
                mode = HammingSimilarity()
                runner = lambda b: sim.run_hamming(b)
            elif args.mode == "gf2":
                mode = Gf2Mvp()
                runner = lambda b: sim.run_gf2(b)
            else:
                threshold = args.threshold
                if threshold is None:
                    mode = CamComplete()
                else:
                    mode = CamSimilarity(
                        (threshold,) * geometry.words
                    )
                workload["threshold"] = (
                    "complete" if threshold is None else threshold
                )
                runner = lambda b: sim.run_cam(b, thresholds=threshold)
            for row in bits:
                res = runner(row)
                results.append([int(v) for v in res.decoded])
                raw.append([int(v) for v in res.y])
        cycles_per_pass = perf.mvp_cycles(mode)

    passes = len(results)
    report = {
        "workload": workload,
        "cycles": {
            "per_pass": cycles_per_pass,
            "passes": passes,
            "total": cycles_per_pass * passes,
            "pipeline_latency": PIPELINE_LATENCY,
        },
        "results": results,
    }
    if args.verbose:
        report["raw_outputs"] = raw
    report["performance"] = _performance_block(mode, geometry, table)
    _emit(report, args.output)
    return 0


def cmd_difftest(args) -> int:
    config = DifftestConfig(
        trials=args.trials,
        seed=args.seed,
        max_words=args.max_words,
        max_bits=args.max_bits,
        widths=tuple(range(1, args.max_width + 1)),
    )
    result = run_difftest(config)
    print(result.summary())
    if result.counterexample is not None:
        for line in result.counterexample.lines():
            print(line)
        return 1
    return 0


def cmd_perf(args) -> int:
    table = perf.load_params(args.params)
    geometry = parse_geometry(args.geometry)
    params = table.for_geometry(geometry)
    report = {
        "geometry": _geometry_dict(params.geometry),
        "overall": _performance_block(None, geometry, table),
        "modes": {},
    }
    mode_specs = {
        "hamming": HammingSimilarity(),
        "mvp_oddint1_oddint1": Mvp(NumberFormat.oddint(1), NumberFormat.oddint(1)),
        "mvp_uint4_uint4": Mvp(NumberFormat.uint(4), NumberFormat.uint(4)),
        "gf2": Gf2Mvp(),
        "pla": Pla(PlaProgram(1, (BankProgram((), Gate.OR),))),
    }
    for key, mode in mode_specs.items():
        if key not in params.mode_power_w:
            continue
        block = _performance_block(mode, geometry, table)
        report["modes"][key] = block.get("mode", {})
    _emit(report, args.output)
    return 0


# -- entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pimarray",
        description="Bit-exact in-memory accelerator simulator workloads",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one operation mode on files")
    run.add_argument("--mode", required=True,
                     choices=["hamming", "cam", "mvp", "gf2", "pla"])
    run.add_argument("--matrix", help="matrix file (header: M J K kind)")
    run.add_argument("--vectors", required=True,
                     help="vector file (header: J L kind)")
    run.add_argument("--program", help="logic program file (pla mode)")
    run.add_argument("--geometry",
                     help="WORDSxBITS[xBANKS[xSUBROWS]] (pla mode)")
    run.add_argument("--banks", type=int, default=1)
    run.add_argument("--subrows", type=int, default=1)
    run.add_argument("--threshold", type=int,
                     help="similarity threshold (cam mode; default complete)")
    run.add_argument("--perf-params", help="calibration JSON (default: built-in)")
    run.add_argument("--verbose", action="store_true",
                     help="include raw per-row outputs in the report")
    run.add_argument("--output", help="write the JSON report here")
    run.set_defaults(func=cmd_run)

    diff = sub.add_parser("difftest", help="randomized oracle equivalence")
    diff.add_argument("--trials", type=int, required=True)
    diff.add_argument("--seed", type=int, default=0)
    diff.add_argument("--max-words", type=int, default=64)
    diff.add_argument("--max-bits", type=int, default=256)
    diff.add_argument("--max-width", type=int, default=4,
                      help="largest entry width drawn for either operand")
    diff.set_defaults(func=cmd_difftest)

    pf = sub.add_parser("perf", help="throughput/energy arithmetic")
    pf.add_argument("--geometry", required=True,
                    help="WORDSxBITS[xBANKS[xSUBROWS]]")
    pf.add_argument("--params", help="calibration JSON (default: built-in)")
    pf.add_argument("--output", help="write the JSON report here")
    pf.set_defaults(func=cmd_perf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "difftest":
        if args.trials < 1:
            parser.error("--trials must be >= 1")
        if args.max_width < 1:
            parser.error("--max-width must be >= 1")
    try:
        return args.func(args)
    except SimError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
