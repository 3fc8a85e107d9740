"""Number formats, logic-level codecs, and bit-plane decomposition.

Three L-bit entry formats are supported:

``uint``
    Unsigned binary; logic levels LO/HI read as 0/1.
``int``
    Two's complement; levels read as 0/1 with the most significant
    plane weighted ``-2**(L-1)``.
``oddint``
    Levels read as -1/+1 with plane weights ``2**(l-1)``.  The
    representable values are exactly the 2**L odd integers in
    ``[-2**L + 1, 2**L - 1]``; zero does not exist in this format.

Values cross into the array world as *planes*: boolean vectors holding
one significance level of every entry, most significant plane first
(the schedules consume planes in that order).  ``True`` means logic HI
throughout the package.  Levels are never implicitly reinterpreted as
the numbers they encode; that mapping happens only here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

#: Widest supported entry, bounding accumulator growth in the row ALUs.
MAX_WIDTH = 16


class Level(enum.Enum):
    """Logic level on a bit-cell latch or an input line."""

    LO = "lo"
    HI = "hi"


class FormatKind(enum.Enum):
    UINT = "uint"
    INT = "int"
    ODDINT = "oddint"


@dataclass(frozen=True)
class NumberFormat:
    """An entry format: a kind from the table above plus a bit width."""

    kind: FormatKind
    width: int

    def __post_init__(self):
        if not isinstance(self.kind, FormatKind):
            object.__setattr__(self, "kind", FormatKind(self.kind))
        if not 1 <= self.width <= MAX_WIDTH:
            raise FormatError(
                f"width must be in [1, {MAX_WIDTH}], got {self.width}"
            )

    @classmethod
    def uint(cls, width: int) -> "NumberFormat":
        return cls(FormatKind.UINT, width)

    @classmethod
    def int_(cls, width: int) -> "NumberFormat":
        return cls(FormatKind.INT, width)

    @classmethod
    def oddint(cls, width: int) -> "NumberFormat":
        return cls(FormatKind.ODDINT, width)

    @classmethod
    def parse(cls, text: str) -> "NumberFormat":
        """Parse a compact spelling such as ``uint4`` or ``oddint1``."""
        for kind in FormatKind:
            if text.startswith(kind.value):
                digits = text[len(kind.value):]
                if digits.isdigit():
                    return cls(kind, int(digits))
        raise FormatError(f"cannot parse number format {text!r}")

    def __str__(self) -> str:
        return f"{self.kind.value}{self.width}"


def value_range(fmt: NumberFormat) -> tuple[int, int]:
    """Smallest and largest representable value of ``fmt``."""
    amplitude = 1 << fmt.width
    if fmt.kind is FormatKind.UINT:
        return 0, amplitude - 1
    if fmt.kind is FormatKind.INT:
        return -(amplitude // 2), amplitude // 2 - 1
    return -(amplitude - 1), amplitude - 1


def in_range(value: int, fmt: NumberFormat) -> bool:
    """Whether ``value`` is representable in ``fmt`` (oddint: odd only)."""
    lo, hi = value_range(fmt)
    if not lo <= value <= hi:
        return False
    if fmt.kind is FormatKind.ODDINT and value % 2 == 0:
        return False
    return True


def check_range(values, fmt: NumberFormat) -> np.ndarray:
    """Validate an array of integers against ``fmt``.

    Returns the values as an int64 array; raises :class:`FormatError`
    naming the first offender otherwise.
    """
    arr = np.asarray(values)
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise FormatError(f"{fmt} entries must be integers, got {arr.dtype}")
    arr = arr.astype(np.int64)
    lo, hi = value_range(fmt)
    bad = (arr < lo) | (arr > hi)
    if fmt.kind is FormatKind.ODDINT:
        bad |= arr % 2 == 0
    if bad.any():
        culprit = arr[bad].flat[0]
        raise FormatError(f"value {culprit} not representable in {fmt}")
    return arr


def _to_code(values: np.ndarray, fmt: NumberFormat) -> np.ndarray:
    """Map format values onto their unsigned bit patterns in [0, 2**L)."""
    if fmt.kind is FormatKind.UINT:
        return values
    if fmt.kind is FormatKind.INT:
        return values & ((1 << fmt.width) - 1)
    # oddint: HI bits of the pattern carry +1, LO bits -1, so the
    # pattern is the offset-by-(2**L - 1) half of the value.
    return (values + (1 << fmt.width) - 1) >> 1


def _from_code(codes: np.ndarray, fmt: NumberFormat) -> np.ndarray:
    """Inverse of :func:`_to_code`."""
    if fmt.kind is FormatKind.UINT:
        return codes
    if fmt.kind is FormatKind.INT:
        half = 1 << (fmt.width - 1)
        return np.where(codes >= half, codes - (1 << fmt.width), codes)
    return 2 * codes - ((1 << fmt.width) - 1)


def encode_value(value: int, fmt: NumberFormat) -> tuple[Level, ...]:
    """Encode one value as its L logic levels, most significant first."""
    if not in_range(value, fmt):
        raise FormatError(f"value {value} not representable in {fmt}")
    code = int(_to_code(np.int64(value), fmt))
    return tuple(
        Level.HI if (code >> (fmt.width - 1 - i)) & 1 else Level.LO
        for i in range(fmt.width)
    )


def decode_value(levels, fmt: NumberFormat) -> int:
    """Decode L logic levels (most significant first) back to a value."""
    levels = tuple(levels)
    if len(levels) != fmt.width:
        raise FormatError(
            f"expected {fmt.width} levels for {fmt}, got {len(levels)}"
        )
    code = 0
    for lvl in levels:
        code = (code << 1) | (1 if lvl is Level.HI else 0)
    return int(_from_code(np.int64(code), fmt))


def decompose_planes(values, fmt: NumberFormat) -> np.ndarray:
    """Split a vector into its L bit planes.

    Returns a boolean array of shape ``(L, J)`` whose row 0 is the most
    significant plane; element ``[i, j]`` is the logic level of bit
    ``L - i`` of entry ``j``.
    """
    arr = check_range(np.atleast_1d(values), fmt)
    codes = _to_code(arr, fmt)
    shifts = np.arange(fmt.width - 1, -1, -1, dtype=np.int64)
    return ((codes[None, :] >> shifts[:, None]) & 1).astype(bool)


def recombine_planes(planes, fmt: NumberFormat) -> np.ndarray:
    """Reassemble a vector from its planes (inverse of decomposition)."""
    bits = np.asarray(planes, dtype=bool)
    if bits.ndim != 2 or bits.shape[0] != fmt.width:
        raise FormatError(
            f"expected {fmt.width} planes for {fmt}, got shape {bits.shape}"
        )
    shifts = np.arange(fmt.width - 1, -1, -1, dtype=np.int64)
    codes = (bits.astype(np.int64) << shifts[:, None]).sum(axis=0)
    return _from_code(codes, fmt)


def levels_to_bits(levels) -> np.ndarray:
    """Convert a sequence of :class:`Level` to a boolean vector."""
    return np.array([lvl is Level.HI for lvl in levels], dtype=bool)


def bits_to_levels(bits) -> tuple[Level, ...]:
    """Convert a boolean vector to a tuple of :class:`Level`."""
    return tuple(Level.HI if b else Level.LO for b in np.asarray(bits, bool))
