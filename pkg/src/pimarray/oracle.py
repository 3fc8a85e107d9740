"""Golden reference implementations for differential testing.

Everything here is computed directly from the mathematical definitions
with unbounded Python integers, deliberately sharing no code with the
bit-cell array, row ALU, or controller modules (only the plain data
types for formats and logic programs).  Agreement between these
functions and the simulated datapaths is the package's central
correctness evidence, so keeping the two sides independent is what
makes that agreement meaningful.
"""

from __future__ import annotations

from .errors import GeometryError
from .formats import NumberFormat, in_range
from .modes import Gate, PlaProgram


def hamming_similarity(a, x) -> int:
    """Number of positions where two equal-length bit vectors agree."""
    a = [bool(v) for v in a]
    x = [bool(v) for v in x]
    if len(a) != len(x):
        raise GeometryError(
            f"length mismatch: {len(a)} vs {len(x)}"
        )
    return sum(1 for u, v in zip(a, x) if u == v)


def mvp(
    A,
    x,
    matrix_format: NumberFormat | None = None,
    vector_format: NumberFormat | None = None,
) -> list[int]:
    """Exact integer matrix-vector product.

    Optional formats add range validation; the arithmetic itself is
    unbounded either way, so a width bug in the simulated ALU shows up
    as a mismatch instead of being mirrored.
    """
    rows = [[int(v) for v in row] for row in A]
    vec = [int(v) for v in x]
    for row in rows:
        if len(row) != len(vec):
            raise GeometryError(
                f"row of length {len(row)} against vector of length {len(vec)}"
            )
    if matrix_format is not None:
        for row in rows:
            for v in row:
                if not in_range(v, matrix_format):
                    raise GeometryError(
                        f"matrix entry {v} not representable in {matrix_format}"
                    )
    if vector_format is not None:
        for v in vec:
            if not in_range(v, vector_format):
                raise GeometryError(
                    f"vector entry {v} not representable in {vector_format}"
                )
    return [sum(a * b for a, b in zip(row, vec)) for row in rows]


def gf2_mvp(A, x) -> list[int]:
    """Matrix-vector product over the two-element field.

    Multiplication is AND, addition is XOR; each output bit is the
    parity of the row-wise AND.
    """
    vec = [int(bool(v)) for v in x]
    out = []
    for row in A:
        bits = [int(bool(v)) for v in row]
        if len(bits) != len(vec):
            raise GeometryError(
                f"row of length {len(bits)} against vector of length {len(vec)}"
            )
        acc = 0
        for a, b in zip(bits, vec):
            acc ^= a & b
        out.append(acc)
    return out


def _gate(gate: Gate, values: list[bool]) -> bool:
    """Multi-operand gate with the threshold-style majority (ties pass).

    Over an empty operand list AND and MAJ are vacuously true, OR is
    false; this mirrors how threshold-0 rows behave.
    """
    if gate is Gate.AND:
        return all(values)
    if gate is Gate.OR:
        return any(values)
    return sum(values) >= (len(values) + 1) // 2


def pla(program: PlaProgram, assignment) -> list[bool]:
    """Two-level logic evaluation, one Boolean output per bank."""
    values = [bool(v) for v in assignment]
    if len(values) != program.num_vars:
        raise GeometryError(
            f"expected {program.num_vars} assignment values, got {len(values)}"
        )
    outputs = []
    for bank in program.banks:
        firsts = []
        for term in bank.terms:
            lits = [
                not values[lit.var] if lit.negated else values[lit.var]
                for lit in term.literals
            ]
            firsts.append(_gate(term.gate, lits))
        outputs.append(_gate(bank.output_gate, firsts))
    return outputs
