"""Operation-mode descriptors and two-level logic programs.

Pure data: these types carry no array or ALU machinery, so both the
simulator and the independent reference implementations can share them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import PlaProgramError
from .formats import FormatKind, NumberFormat


@dataclass(frozen=True)
class HammingSimilarity:
    """Per-row similarity between the stored words and a query word."""


@dataclass(frozen=True)
class CamComplete:
    """Content-addressable lookup: match rows equal to the query."""


@dataclass(frozen=True)
class CamSimilarity:
    """Match rows whose similarity meets a per-row threshold."""

    thresholds: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(
            int(t) for t in self.thresholds
        ))


@dataclass(frozen=True)
class Mvp:
    """Integer matrix-vector product in a pair of number formats."""

    matrix_format: NumberFormat
    vector_format: NumberFormat

    @property
    def matrix_bits(self) -> int:
        return self.matrix_format.width

    @property
    def vector_bits(self) -> int:
        return self.vector_format.width

    @property
    def matrix_signed_levels(self) -> bool:
        """Stored planes carry -1/+1 levels (rather than 0/1)."""
        return self.matrix_format.kind is FormatKind.ODDINT

    @property
    def vector_signed_levels(self) -> bool:
        return self.vector_format.kind is FormatKind.ODDINT

    @property
    def mixed_levels(self) -> bool:
        """Exactly one operand uses -1/+1 levels.

        These pairs need a per-matrix offset preparation pass before
        products can run.
        """
        return self.matrix_signed_levels != self.vector_signed_levels

    @property
    def uses_offset(self) -> bool:
        """Whether the ALU offset input participates (any -1/+1 side)."""
        return self.matrix_signed_levels or self.vector_signed_levels


@dataclass(frozen=True)
class Gf2Mvp:
    """Matrix-vector product over the two-element field."""


class Gate(enum.Enum):
    """Multi-operand gate: AND, OR, or majority.

    Majority follows the row-threshold realization: true when at least
    ``ceil(n/2)`` of the n operands are true (ties included for even n).
    Empty operand lists give the threshold-0 behavior: AND and MAJ are
    vacuously true, OR is false.
    """

    AND = "and"
    OR = "or"
    MAJ = "maj"


@dataclass(frozen=True)
class Literal:
    """One Boolean variable or its complement.

    Variable ``var`` owns two array columns: ``2*var`` carries its
    value, ``2*var + 1`` the complement.
    """

    var: int
    negated: bool = False

    @property
    def column(self) -> int:
        return 2 * self.var + (1 if self.negated else 0)

    def __str__(self) -> str:
        return ("!x" if self.negated else "x") + str(self.var)


@dataclass(frozen=True)
class Term:
    """First-stage gate over a set of literals, computed by one row."""

    gate: Gate
    literals: tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))
        columns = [lit.column for lit in self.literals]
        if len(set(columns)) != len(columns):
            raise PlaProgramError(
                f"duplicate literal in term: {' '.join(map(str, self.literals))}"
            )

    @property
    def threshold(self) -> int:
        """Row threshold realizing the gate over the stored literals."""
        n = len(self.literals)
        if self.gate is Gate.AND:
            return n
        if self.gate is Gate.OR:
            return 1
        return (n + 1) // 2

    def columns(self) -> tuple[int, ...]:
        return tuple(lit.column for lit in self.literals)


@dataclass(frozen=True)
class BankProgram:
    """One bank: first-stage terms plus the second-stage output gate."""

    terms: tuple[Term, ...]
    output_gate: Gate = Gate.OR

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class PlaProgram:
    """Two-level Boolean program over ``num_vars`` variables.

    Bank b computes ``output_gate`` over its terms; a sum of min-terms
    is OR over AND terms, a product of max-terms is AND over OR terms.
    """

    num_vars: int
    banks: tuple[BankProgram, ...]

    def __post_init__(self):
        object.__setattr__(self, "banks", tuple(self.banks))
        if self.num_vars < 1:
            raise PlaProgramError("need at least one variable")
        for bank in self.banks:
            for term in bank.terms:
                for lit in term.literals:
                    if not 0 <= lit.var < self.num_vars:
                        raise PlaProgramError(
                            f"literal {lit} outside the {self.num_vars} "
                            "declared variables"
                        )

    @property
    def columns_used(self) -> int:
        """Input columns consumed: one true/complement pair per variable."""
        return 2 * self.num_vars


CamMode = Union[CamComplete, CamSimilarity]
ModeSpec = Union[
    HammingSimilarity, CamComplete, CamSimilarity, Mvp, Gf2Mvp, "Pla"
]


@dataclass(frozen=True)
class Pla:
    """Programmable-logic mode wrapping a two-level program."""

    program: PlaProgram
