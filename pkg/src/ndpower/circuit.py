"""Circuit IR with deterministic and existential (non-deterministic) semantics.

Evaluation is bit-parallel: each node's value over every assignment is one
Python int, with ordinary inputs in the low-order index bits and
non-deterministic inputs above them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from . import boolfun as bf
from .boolfun import BoolFun
from .errors import ArityError, BoundExceeded, CircuitParseError, InvalidCircuit
from .gatebase import GateBase

DEFAULT_EXHAUSTIVE_BOUND = 20


def exhaustive_bound() -> int:
    return int(os.environ.get("NDPOWER_EXHAUSTIVE_BOUND", DEFAULT_EXHAUSTIVE_BOUND))


class Semantics(str, Enum):
    DET = "det"
    NONDET = "nondet"


@dataclass(frozen=True)
class Input:
    index: int


@dataclass(frozen=True)
class Nondet:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Gate:
    name: str
    operands: tuple[int, ...]


Node = Union[Input, Nondet, Const, Gate]


@dataclass(frozen=True)
class Circuit:
    base: GateBase
    n: int
    m: int
    nodes: tuple[Node, ...]
    output: int
    names: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        """Number of gate nodes; inputs and constants are free."""
        return sum(isinstance(v, Gate) for v in self.nodes)

    @property
    def const_count(self) -> int:
        return sum(isinstance(v, Const) for v in self.nodes)

    def gates_used(self) -> set[str]:
        return {v.name for v in self.nodes if isinstance(v, Gate)}

    def check(self) -> Circuit:
        report = validate(self)
        if not report.ok:
            raise InvalidCircuit(report.message)
        return self

    def with_names(self, names: Sequence[str] | None) -> Circuit:
        return Circuit(self.base, self.n, self.m, self.nodes, self.output,
                       tuple(names) if names is not None else None)


class CircuitBuilder:
    """Append-only node list; inputs and constants are shared, gates optionally."""

    def __init__(self, base: GateBase, n: int, m: int = 0, share_gates: bool = False):
        self.base = base
        self.n = n
        self.m = m
        self.nodes: list[Node] = []
        self._ids: dict[Node, int] = {}
        self.share_gates = share_gates

    def _add(self, node: Node, share: bool = True) -> int:
        if share and node in self._ids:
            return self._ids[node]
        self.nodes.append(node)
        self._ids.setdefault(node, len(self.nodes) - 1)
        return len(self.nodes) - 1

    def input(self, i: int) -> int:
        return self._add(Input(i))

    def nondet(self, j: int) -> int:
        return self._add(Nondet(j))

    def const(self, value: int) -> int:
        return self._add(Const(int(value)))

    def gate(self, name: str, *operands: int) -> int:
        return self._add(Gate(name, tuple(operands)), self.share_gates)

    def build(self, output: int) -> Circuit:
        return Circuit(self.base, self.n, self.m, tuple(self.nodes), output)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    node: int | None = None
    message: str = ""
    warnings: tuple[str, ...] = ()


def _violation(c: Circuit) -> tuple[int | None, str] | None:
    if c.n < 0 or c.m < 0:
        return None, f"negative input counts n={c.n} m={c.m}"
    for k, node in enumerate(c.nodes):
        if isinstance(node, Input):
            if not 1 <= node.index <= c.n:
                return k, f"node {k}: input index {node.index} outside 1..{c.n}"
        elif isinstance(node, Nondet):
            if not 1 <= node.index <= c.m:
                return k, f"node {k}: nondet index {node.index} outside 1..{c.m}"
        elif isinstance(node, Const):
            if node.value not in (0, 1):
                return k, f"node {k}: constant {node.value!r} is not a bit"
        elif isinstance(node, Gate):
            if node.name not in c.base:
                return k, f"node {k}: gate {node.name!r} is not in base {c.base}"
            arity = c.base[node.name].arity
            if len(node.operands) != arity:
                return k, (f"node {k}: gate {node.name} takes {arity} operands, "
                           f"got {len(node.operands)}")
            for op in node.operands:
                if not 0 <= op < k:
                    return k, f"node {k}: operand {op} does not precede the gate (acyclicity)"
        else:
            return k, f"node {k}: unknown node kind {type(node).__name__}"
    if not 0 <= c.output < len(c.nodes):
        return None, f"output id {c.output} does not name a node"
    return None


def validate(c: Circuit) -> ValidationReport:
    bad = _violation(c)
    if bad is not None:
        return ValidationReport(False, bad[0], bad[1])
    warnings = []
    values = {v.value for v in c.nodes if isinstance(v, Const)}
    if values:
        from .clone import closure

        unary = closure(c.base, 1)
        for value in sorted(values):
            if unary.member(bf.constant(value, 1)) is None:
                warnings.append(f"constant {value} is not generated by base {c.base}")
    return ValidationReport(True, warnings=tuple(warnings))


# -- evaluation ---------------------------------------------------------------


def apply_gate(f: BoolFun, args: Sequence[int], full: int) -> int:
    """Apply ``f`` pointwise to bit-parallel argument values."""
    if f.arity == 0:
        return full if f.table else 0
    ones = bin(f.table).count("1")
    complement = ones > f.size // 2
    rows = (f.table ^ bf.full_mask(f.arity)) if complement else f.table
    negs = [None] * f.arity
    acc = 0
    for r in range(f.size):
        if not (rows >> r) & 1:
            continue
        term = full
        for i, a in enumerate(args):
            if (r >> i) & 1:
                term &= a
            else:
                if negs[i] is None:
                    negs[i] = full ^ a
                term &= negs[i]
            if not term:
                break
        acc |= term
    return full ^ acc if complement else acc


def _simulate(c: Circuit, x: Sequence[int] | None = None) -> int:
    """Output over all ``(x, y)`` (``x`` is None) or over all ``y`` with ``x`` fixed."""
    width = c.n + c.m if x is None else c.m
    full = bf.full_mask(width)
    vals: list[int] = []
    for node in c.nodes:
        if isinstance(node, Input):
            if x is None:
                vals.append(bf.var_pattern(node.index, width))
            else:
                vals.append(full if x[node.index - 1] else 0)
        elif isinstance(node, Nondet):
            offset = c.n if x is None else 0
            vals.append(bf.var_pattern(offset + node.index, width))
        elif isinstance(node, Const):
            vals.append(full if node.value else 0)
        else:
            f = c.base[node.name]
            vals.append(apply_gate(f, [vals[i] for i in node.operands], full))
    return vals[c.output]


def _check_bits(bits: Sequence[int], expected: int, what: str) -> None:
    if len(bits) != expected:
        raise ArityError(f"{what} has length {len(bits)}, expected {expected}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"{what} must contain bits")


def _check_bound(width: int, bound: int | None) -> None:
    bound = exhaustive_bound() if bound is None else bound
    if width > bound:
        raise BoundExceeded(f"{width} inputs exceed the exhaustive bound {bound}")


def eval_det(c: Circuit, x: Sequence[int], y: Sequence[int] = ()) -> int:
    _check_bits(x, c.n, "x")
    _check_bits(y, c.m, "y")
    vals: list[int] = []
    for node in c.nodes:
        if isinstance(node, Input):
            vals.append(x[node.index - 1])
        elif isinstance(node, Nondet):
            vals.append(y[node.index - 1])
        elif isinstance(node, Const):
            vals.append(node.value)
        else:
            vals.append(bf.eval_fun(c.base[node.name], [vals[i] for i in node.operands]))
    return vals[c.output]


def eval_nondet(c: Circuit, x: Sequence[int], bound: int | None = None) -> int:
    """1 iff some assignment to the non-deterministic inputs makes ``c`` output 1."""
    _check_bits(x, c.n, "x")
    _check_bound(c.m, bound)
    return int(_simulate(c, x) != 0)


def det_table(c: Circuit, bound: int | None = None) -> int:
    _check_bound(c.n + c.m, bound)
    return _simulate(c)


def exists_fold(table: int, n: int, m: int) -> int:
    """Project a table over ``(x, y)`` to ``x`` by existential quantification."""
    width = 1 << (n + m)
    low = 1 << n
    while width > low:
        width >>= 1
        table = (table & ((1 << width) - 1)) | (table >> width)
    return table


def nondet_table(c: Circuit, bound: int | None = None) -> int:
    return exists_fold(det_table(c, bound), c.n, c.m)


def truth_table(c: Circuit, semantics: Semantics = Semantics.DET,
                bound: int | None = None) -> BoolFun:
    """DET: arity ``n + m`` over ``(x, y)``. NONDET: arity ``n`` over ``x``."""
    if Semantics(semantics) is Semantics.DET:
        return BoolFun(c.n + c.m, det_table(c, bound))
    return BoolFun(c.n, nondet_table(c, bound))


def x_function(c: Circuit, semantics: Semantics = Semantics.NONDET,
               bound: int | None = None) -> BoolFun:
    """Function of the ordinary inputs; DET is only meaningful when ``m == 0``."""
    if Semantics(semantics) is Semantics.DET and c.m:
        raise ArityError("deterministic semantics of a circuit with nondet inputs depends on y")
    return truth_table(c, Semantics.NONDET, bound)


@dataclass(frozen=True)
class EquivResult:
    equal: bool
    counterexample: tuple[int, ...] | None = None
    left: int | None = None
    right: int | None = None

    def __bool__(self) -> bool:
        return self.equal


def equiv(c1: Circuit, c2: Circuit, sem1: Semantics = Semantics.DET,
          sem2: Semantics = Semantics.DET, bound: int | None = None) -> EquivResult:
    """Compare two circuits exhaustively.

    A side under DET with non-deterministic inputs is compared over ``(x, y)``;
    that requires the other side to be DET with the same ``m``.
    """
    if c1.n != c2.n:
        raise ArityError(f"input counts differ: {c1.n} vs {c2.n}")
    sem1, sem2 = Semantics(sem1), Semantics(sem2)
    joint1 = sem1 is Semantics.DET and c1.m > 0
    joint2 = sem2 is Semantics.DET and c2.m > 0
    if joint1 or joint2:
        if not (sem1 is sem2 is Semantics.DET and c1.m == c2.m):
            raise ArityError("DET comparison over (x, y) needs both sides DET with equal m")
        t1, t2, width = det_table(c1, bound), det_table(c2, bound), c1.n + c1.m
    else:
        t1, t2, width = nondet_table(c1, bound), nondet_table(c2, bound), c1.n
    diff = t1 ^ t2
    if not diff:
        return EquivResult(True)
    idx = (diff & -diff).bit_length() - 1
    return EquivResult(False, bf.bits_of(idx, width), (t1 >> idx) & 1, (t2 >> idx) & 1)


def find_separating_input(c: Circuit, polarity: int, bound: int | None = None) -> int | None:
    return bf.separating_index(truth_table(c, Semantics.NONDET, bound), polarity)


# -- text format -------------------------------------------------------------


def default_names(c: Circuit) -> tuple[str, ...]:
    names, used = [], set()
    counts: dict[str, int] = {}
    for k, node in enumerate(c.nodes):
        if isinstance(node, Input):
            name = f"x{node.index}"
        elif isinstance(node, Nondet):
            name = f"y{node.index}"
        elif isinstance(node, Const):
            name = f"c{node.value}"
        else:
            name = f"g{k}"
        if name in used:
            counts[name] = counts.get(name, 0) + 1
            name = f"{name}_{counts[name]}"
            while name in used:
                name += "_"
        used.add(name)
        names.append(name)
    return tuple(names)


def serialize(c: Circuit) -> str:
    names = c.names or default_names(c)
    lines = [f"inputs n={c.n} m={c.m}"]
    for name, node in zip(names, c.nodes):
        if isinstance(node, Input):
            rhs = f"input {node.index}"
        elif isinstance(node, Nondet):
            rhs = f"nondet {node.index}"
        elif isinstance(node, Const):
            rhs = f"const {node.value}"
        else:
            rhs = " ".join([node.name, *(names[i] for i in node.operands)])
        lines.append(f"{name} = {rhs}")
    lines.append(f"output {names[c.output]}")
    return "\n".join(lines) + "\n"


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitParseError(f"line {lineno}: {what} {token!r} is not an integer", lineno) from None


def parse_circuit(text: str, base: GateBase) -> Circuit:
    n = m = None
    output = None
    nodes: list[Node] = []
    names: list[str] = []
    ids: dict[str, int] = {}
    node_line: list[int] = []

    def fail(msg, lineno):
        raise CircuitParseError(f"line {lineno}: {msg}", lineno)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("inputs"):
            if n is not None:
                fail("duplicate 'inputs' declaration", lineno)
            fields = dict(tok.split("=", 1) for tok in line.split()[1:] if "=" in tok)
            if set(fields) != {"n", "m"} or len(line.split()) != 3:
                fail("expected 'inputs n=<int> m=<int>'", lineno)
            n, m = _int(fields["n"], lineno, "n"), _int(fields["m"], lineno, "m")
            continue
        if line.startswith("output"):
            parts = line.split()
            if len(parts) != 2:
                fail("expected 'output <node>'", lineno)
            if output is not None:
                fail("duplicate 'output' statement", lineno)
            if parts[1] not in ids:
                fail(f"output names undefined node {parts[1]!r}", lineno)
            output = ids[parts[1]]
            continue
        if "=" not in line:
            fail(f"cannot parse statement {line!r}", lineno)
        if n is None:
            fail("node defined before the 'inputs' declaration", lineno)
        lhs, rhs = (s.strip() for s in line.split("=", 1))
        if not lhs.isidentifier():
            fail(f"bad node name {lhs!r}", lineno)
        if lhs in ids:
            fail(f"duplicate node name {lhs!r}", lineno)
        parts = rhs.split()
        if not parts:
            fail("empty right-hand side", lineno)
        head, args = parts[0], parts[1:]
        if head in ("input", "nondet", "const"):
            if len(args) != 1:
                fail(f"'{head}' takes one integer", lineno)
            value = _int(args[0], lineno, head)
            node = {"input": Input, "nondet": Nondet, "const": Const}[head](value)
        else:
            if head not in base:
                fail(f"unknown gate {head!r} (base {base})", lineno)
            arity = base[head].arity
            if len(args) != arity:
                fail(f"gate {head} takes {arity} operands, got {len(args)}", lineno)
            for a in args:
                if a not in ids:
                    fail(f"operand {a!r} is not defined earlier", lineno)
            node = Gate(head, tuple(ids[a] for a in args))
        ids[lhs] = len(nodes)
        nodes.append(node)
        names.append(lhs)
        node_line.append(lineno)
    if n is None:
        raise CircuitParseError("missing 'inputs n=<int> m=<int>' declaration")
    if output is None:
        raise CircuitParseError("missing 'output' statement")
    c = Circuit(base, n, m, tuple(nodes), output, tuple(names))
    bad = _violation(c)
    if bad is not None:
        k, msg = bad
        lineno = node_line[k] if k is not None else None
        raise CircuitParseError(f"line {lineno}: {msg}" if lineno else msg, lineno)
    return c
