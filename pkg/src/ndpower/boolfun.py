"""Truth-table Boolean functions and the Post-class predicates.

A function of arity ``k`` is stored as a Python int whose bit ``i`` is the
value on the assignment where ``x_j`` equals bit ``j - 1`` of ``i``
(``x_1`` is the least significant index bit).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ArityError, LiteralParseError

#: Largest arity allowed for gate functions and closure computations.
MAX_ARITY = int(os.environ.get("NDPOWER_MAX_ARITY", "6"))

#: Largest arity for any table, including circuit truth tables.
MAX_TABLE_ARITY = 24


def set_max_arity(k: int) -> None:
    global MAX_ARITY
    if not 0 <= k <= MAX_TABLE_ARITY:
        raise ArityError(f"maximum arity must lie in 0..{MAX_TABLE_ARITY}")
    MAX_ARITY = k


def full_mask(arity: int) -> int:
    return (1 << (1 << arity)) - 1


@lru_cache(maxsize=None)
def var_pattern(j: int, arity: int) -> int:
    """Table of the projection onto ``x_j`` (1-based) among ``arity`` variables."""
    if not 1 <= j <= arity:
        raise ArityError(f"variable index {j} out of range 1..{arity}")
    half = 1 << (j - 1)
    pattern = ((1 << half) - 1) << half
    width = half << 1
    size = 1 << arity
    while width < size:
        pattern |= pattern << width
        width <<= 1
    return pattern


@dataclass(frozen=True, order=True)
class BoolFun:
    arity: int
    table: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_TABLE_ARITY:
            raise ArityError(f"arity {self.arity} out of range")
        if not 0 <= self.table <= full_mask(self.arity):
            raise ValueError(f"table {self.table:#x} does not fit arity {self.arity}")

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> BoolFun:
        """Build from table bits listed from index 0 upward."""
        bits = [int(b) for b in bits]
        size = len(bits)
        if size == 0 or size & (size - 1):
            raise ValueError(f"table length {size} is not a power of two")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("table bits must be 0 or 1")
        table = sum(b << i for i, b in enumerate(bits))
        return cls(size.bit_length() - 1, table)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[..., object]) -> BoolFun:
        table = 0
        for i in range(1 << arity):
            if fn(*((i >> j) & 1 for j in range(arity))):
                table |= 1 << i
        return cls(arity, table)

    @property
    def size(self) -> int:
        return 1 << self.arity

    def bits(self) -> str:
        return "".join(str((self.table >> i) & 1) for i in range(self.size))

    def hex(self) -> str:
        digits = max(1, self.size // 4)
        return format(self.table, f"0{digits}x")

    def __call__(self, *args: int) -> int:
        return eval_fun(self, args)

    def __str__(self) -> str:
        return f"{self.arity} {self.bits()}"


def check_gate_arity(f: BoolFun) -> None:
    if f.arity > MAX_ARITY:
        raise ArityError(f"arity {f.arity} exceeds the configured maximum {MAX_ARITY}")


def index_of(bits: Sequence[int]) -> int:
    return sum((int(b) & 1) << j for j, b in enumerate(bits))


def bits_of(index: int, width: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(width))


def eval_fun(f: BoolFun, a: Sequence[int]) -> int:
    if len(a) != f.arity:
        raise ArityError(f"expected {f.arity} arguments, got {len(a)}")
    return (f.table >> index_of(a)) & 1


def constant(value: int, arity: int = 0) -> BoolFun:
    return BoolFun(arity, full_mask(arity) if value else 0)


def projection(k: int, j: int) -> BoolFun:
    if not 1 <= j <= k:
        raise ArityError(f"projection index {j} out of range 1..{k}")
    return BoolFun(k, var_pattern(j, k))


def negate(f: BoolFun) -> BoolFun:
    return BoolFun(f.arity, f.table ^ full_mask(f.arity))


def dual(f: BoolFun) -> BoolFun:
    # f(~x) reverses the index order; complementing gives the dual
    width = f.size
    reversed_table = int(format(f.table, f"0{width}b")[::-1], 2)
    return BoolFun(f.arity, reversed_table ^ full_mask(f.arity))


def _flip(table: int, j: int, arity: int) -> int:
    """Table of ``a -> f(a xor e_j)``."""
    hi = var_pattern(j, arity)
    lo = full_mask(arity) ^ hi
    shift = 1 << (j - 1)
    return ((table & hi) >> shift) | ((table & lo) << shift)


def is_monotone(f: BoolFun) -> bool:
    for j in range(1, f.arity + 1):
        hi = var_pattern(j, f.arity)
        lo_vals = f.table & ~hi
        hi_vals = (f.table & hi) >> (1 << (j - 1))
        if lo_vals & ~hi_vals:
            return False
    return True


def is_affine(f: BoolFun) -> bool:
    full = full_mask(f.arity)
    for j in range(1, f.arity + 1):
        diff = f.table ^ _flip(f.table, j, f.arity)
        if diff not in (0, full):
            return False
    return True


def is_self_dual(f: BoolFun) -> bool:
    return dual(f) == f


def preserves_zero(f: BoolFun) -> bool:
    return f.table & 1 == 0


def preserves_one(f: BoolFun) -> bool:
    return (f.table >> (f.size - 1)) & 1 == 1


def separating_index(f: BoolFun, polarity: int) -> int | None:
    """Smallest 1-based ``i`` with ``x_i == polarity`` on every row where ``f == polarity``.

    For a constant function the condition holds vacuously for every index,
    so index 1 is returned whenever ``f`` has at least one variable.
    """
    full = full_mask(f.arity)
    rows = f.table if polarity else full ^ f.table
    for j in range(1, f.arity + 1):
        p = var_pattern(j, f.arity)
        if polarity and rows & ~p == 0:
            return j
        if not polarity and rows & p == 0:
            return j
    return None


def depends_on(f: BoolFun, j: int) -> bool:
    return _flip(f.table, j, f.arity) != f.table


def extend(f: BoolFun, arity: int) -> BoolFun:
    """Same function viewed over ``arity >= f.arity`` variables (new ones ignored)."""
    if arity < f.arity:
        raise ArityError("cannot extend to a smaller arity")
    table, width = f.table, f.size
    while width < (1 << arity):
        table |= table << width
        width <<= 1
    return BoolFun(arity, table)


def restrict_low(f: BoolFun, arity: int) -> BoolFun:
    """Drop the top variables, which ``f`` must not depend on."""
    if any(depends_on(f, j) for j in range(arity + 1, f.arity + 1)):
        raise ArityError(f"function depends on variables above x_{arity}")
    return BoolFun(arity, f.table & full_mask(arity))


def to_array(table: int, arity: int) -> np.ndarray:
    """Bool array of shape ``(2,) * arity``; axis ``arity - j`` carries ``x_j``."""
    nbytes = max(1, (1 << arity) // 8)
    raw = np.frombuffer(table.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[: 1 << arity].astype(bool)
    return bits.reshape((2,) * arity) if arity else bits.reshape(())


def from_array(arr: np.ndarray) -> int:
    flat = np.asarray(arr, dtype=bool).reshape(-1)
    packed = np.packbits(flat, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def fix_variable(table: int, arity: int, j: int, value: int) -> int:
    """Table over ``arity - 1`` variables with ``x_j`` fixed to ``value``."""
    arr = to_array(table, arity)
    return from_array(np.take(arr, value, axis=arity - j))


# -- literal syntax: "<name> <arity> <table-bits>" ---------------------------


def parse_literal(text: str, lineno: int | None = None) -> tuple[str, BoolFun]:
    where = f"line {lineno}: " if lineno is not None else ""
    parts = text.split()
    if len(parts) != 3:
        raise LiteralParseError(f"{where}expected '<name> <arity> <bits>', got {text!r}", lineno)
    name, arity_s, bits = parts
    if not name.isidentifier():
        raise LiteralParseError(f"{where}bad gate name {name!r}", lineno)
    try:
        arity = int(arity_s)
    except ValueError:
        raise LiteralParseError(f"{where}arity {arity_s!r} is not an integer", lineno) from None
    if arity < 0 or arity > MAX_ARITY:
        raise LiteralParseError(f"{where}arity {arity} outside 0..{MAX_ARITY}", lineno)
    if len(bits) != 1 << arity or set(bits) - {"0", "1"}:
        raise LiteralParseError(
            f"{where}expected {1 << arity} table bits for arity {arity}, got {bits!r}", lineno
        )
    return name, BoolFun.from_bits(bits)


def format_literal(name: str, f: BoolFun) -> str:
    return f"{name} {f.arity} {f.bits()}"


def all_functions(arity: int) -> Iterable[BoolFun]:
    for t in range(1 << (1 << arity)):
        yield BoolFun(arity, t)


# -- named functions ---------------------------------------------------------

ZERO = constant(0)
ONE = constant(1)
ID = projection(1, 1)
NOT = BoolFun.from_bits("10")
AND = BoolFun.from_bits("0001")
OR = BoolFun.from_bits("0111")
NAND = BoolFun.from_bits("1110")
NOR = BoolFun.from_bits("1000")
XOR = BoolFun.from_bits("0110")
XNOR = BoolFun.from_bits("1001")
MAJ = BoolFun.from_callable(3, lambda a, b, c: a + b + c >= 2)
#: generator of the self-dual clone: (x1 & ~x2) | (~x2 & ~x3) | (~x3 & x1)
D = BoolFun.from_callable(
    3, lambda a, b, c: (a and not b) or (not b and not c) or (not c and a)
)
GADGET_AND = BoolFun.from_callable(3, lambda x, y, z: x and (y or not z))
GADGET_OR = BoolFun.from_callable(3, lambda x, y, z: x or (y and not z))
AND_OR = BoolFun.from_callable(3, lambda x, y, z: x and (y or z))
OR_AND = BoolFun.from_callable(3, lambda x, y, z: x or (y and z))
