"""Circuit-to-circuit rewrites: base conversion, determinizers, lifts, NOT elimination.

Every transform ends with an exhaustive oracle check (``check=True``) and
raises :class:`OracleMismatch` rather than return a circuit that disagrees
with its input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from . import boolfun as bf
from .boolfun import BoolFun
from .circuit import (
    Circuit,
    CircuitBuilder,
    Const,
    Gate,
    Input,
    Nondet,
    Semantics,
    det_table,
    equiv,
    nondet_table,
)
from .clone import CloneClosure, closure
from .errors import (
    BaseMismatch,
    MissingMember,
    NoSeparatingInput,
    NotReproducing,
    NotSelfDual,
    OracleMismatch,
    PreconditionError,
    Unrepresentable,
)
from .gatebase import AND_OR_NOT, AND_OR_XNOR, AND_OR_XOR, GateBase

log = logging.getLogger(__name__)


def _inline(b: CircuitBuilder, w: Circuit, operands: Sequence[int]) -> int:
    """Copy witness ``w`` into ``b`` with its inputs bound to ``operands``."""
    ids = []
    for node in w.nodes:
        if isinstance(node, Input):
            ids.append(operands[node.index - 1])
        elif isinstance(node, Const):
            ids.append(b.const(node.value))
        elif isinstance(node, Gate):
            ids.append(b.gate(node.name, *(ids[o] for o in node.operands)))
        else:
            raise PreconditionError("witness circuits have no nondet inputs")
    return ids[w.output]


def _copy(b: CircuitBuilder, node, ids: list[int], rename=None) -> int:
    if isinstance(node, Input):
        return b.input(node.index)
    if isinstance(node, Nondet):
        return b.nondet(node.index)
    if isinstance(node, Const):
        return b.const(node.value)
    name = rename(node.name) if rename else node.name
    return b.gate(name, *(ids[o] for o in node.operands))


def _require(base: GateBase, predicate, what: str) -> None:
    bad = [name for name, f in base if not predicate(f)]
    if bad:
        raise BaseMismatch(f"gate(s) {', '.join(bad)} of base {base} are not {what}")


def _check_equiv(c: Circuit, out: Circuit, sem_in: Semantics, sem_out: Semantics,
                 what: str) -> None:
    res = equiv(c, out, sem_in, sem_out)
    if not res:
        raise OracleMismatch(f"{what}: output differs from input on {res.counterexample}",
                             res.counterexample)


def convert_base(c: Circuit, target: CloneClosure, check: bool = True) -> Circuit:
    """Replace each gate of ``c`` by its witness over ``target.base``."""
    witnesses = {}
    for name, f in c.base:
        w = target.member(f)
        if w is None:
            raise MissingMember(
                f"gate {name} ({bf.format_literal(name, f)}) is not a member of the "
                f"closure of {target.base}", f)
        witnesses[name] = w
    b = CircuitBuilder(target.base, c.n, c.m)
    ids: list[int] = []
    for node in c.nodes:
        if isinstance(node, Gate):
            ids.append(_inline(b, witnesses[node.name], [ids[o] for o in node.operands]))
        else:
            ids.append(_copy(b, node, ids))
    out = b.build(ids[c.output])
    blowup = max((witnesses[name].size for name in c.gates_used()), default=0)
    if out.size > blowup * c.size:
        raise OracleMismatch(f"size {out.size} exceeds {blowup} x {c.size}")
    if check:
        _check_equiv(c, out, Semantics.DET, Semantics.DET, "convert_base")
    return out


def _check_determinized(c: Circuit, out: Circuit, what: str) -> None:
    _check_equiv(c, out, Semantics.NONDET, Semantics.DET, what)


def determinize_monotone(c: Circuit, check: bool = True) -> Circuit:
    """Set every nondet input to 1; sound because the gates are monotone."""
    _require(c.base, bf.is_monotone, "monotone")
    nodes = tuple(Const(1) if isinstance(v, Nondet) else v for v in c.nodes)
    out = Circuit(c.base, c.n, 0, nodes, c.output, c.names)
    if c.m and c.base.find(bf.ONE) is None:
        log.warning("constant 1 is not a gate of %s; output carries Const nodes", c.base)
    if check:
        _check_determinized(c, out, "determinize_monotone")
    return out


def determinize_self_dual(c: Circuit, check: bool = True) -> Circuit:
    """Wire every nondet input to ``x_1``.

    Substituting constants would leave the base, so the inputs are tied to an
    ordinary variable instead.  The accepted set must itself be self-dual;
    otherwise a pair ``(x, ~x)`` on which it is not is reported.
    """
    _require(c.base, bf.is_self_dual, "self-dual")
    if c.n < 1:
        raise PreconditionError("self-dual determinization needs at least one ordinary input")
    f = BoolFun(c.n, nondet_table(c))
    diff = f.table ^ bf.dual(f).table
    if diff:
        idx = (diff & -diff).bit_length() - 1
        x = bf.bits_of(idx, c.n)
        xbar = tuple(1 - v for v in x)
        raise NotSelfDual(
            f"accepted set is not self-dual: f{x} = f{xbar} = {f(*x)}", (x, xbar))
    nodes = tuple(Input(1) if isinstance(v, Nondet) else v for v in c.nodes)
    out = Circuit(c.base, c.n, 0, nodes, c.output, c.names)
    if check:
        _check_determinized(c, out, "determinize_self_dual")
    return out


@dataclass(frozen=True)
class AffineForm:
    """``c ^ XOR(x_i for a_i) ^ XOR(y_j for b_j)``."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int

    def table(self) -> int:
        n, m = len(self.a), len(self.b)
        width = n + m
        acc = bf.full_mask(width) if self.c else 0
        for j, coeff in enumerate(self.a + self.b, 1):
            if coeff:
                acc ^= bf.var_pattern(j, width)
        return acc

    def __str__(self) -> str:
        terms = [str(self.c)]
        terms += [f"x{i}" for i, v in enumerate(self.a, 1) if v]
        terms += [f"y{j}" for j, v in enumerate(self.b, 1) if v]
        return " ^ ".join(terms)


def extract_affine(c: Circuit) -> AffineForm:
    _require(c.base, bf.is_affine, "affine")
    t = det_table(c)
    const = t & 1
    width = c.n + c.m
    coeffs = tuple(((t >> (1 << j)) & 1) ^ const for j in range(width))
    form = AffineForm(coeffs[: c.n], coeffs[c.n:], const)
    if form.table() != t:
        raise OracleMismatch(f"circuit does not match its affine form {form}")
    return form


class _LinearGates:
    def __init__(self, base: GateBase):
        self.base = base
        self.xor = base.find(bf.XOR)
        self.xnor = base.find(bf.XNOR)
        self.not_ = base.find(bf.NOT)
        self.one = base.find(bf.ONE)
        self.zero = base.find(bf.ZERO)

    def constant(self, b: CircuitBuilder, value: int, n: int) -> int:
        same, other = (self.xnor, self.xor) if value else (self.xor, self.xnor)
        nullary = self.one if value else self.zero
        if n >= 1 and same:
            x1 = b.input(1)
            return b.gate(same, x1, x1)
        if nullary:
            return b.gate(nullary)
        if n >= 1 and other and self.not_:
            x1 = b.input(1)
            return b.gate(self.not_, b.gate(other, x1, x1))
        log.warning("constant %d is not realizable over %s; emitting a Const node", value, self.base)
        return b.const(value)

    def negate(self, b: CircuitBuilder, node: int) -> int:
        if self.not_:
            return b.gate(self.not_, node)
        if self.xnor and self.zero:
            return b.gate(self.xnor, node, b.gate(self.zero))
        if self.xor and self.one:
            return b.gate(self.xor, node, b.gate(self.one))
        if self.xnor and self.xor:
            return b.gate(self.xnor, node, b.gate(self.xor, node, node))
        raise Unrepresentable(f"base {self.base} cannot negate")


def determinize_linear(c: Circuit, target_base: GateBase | None = None,
                       check: bool = True) -> Circuit:
    """Rebuild the accepted set as an XOR chain of at most ``n + 1`` gates.

    If any nondet input appears in the affine form, the existential
    quantifier can always flip the output, so the result is constant 1.
    """
    form = extract_affine(c)
    target = target_base or c.base
    _require(target, bf.is_affine, "affine")
    gates = _LinearGates(target)
    b = CircuitBuilder(target, c.n, 0)
    support = [i for i, v in enumerate(form.a, 1) if v]
    if any(form.b) or not support:
        out_node = gates.constant(b, 1 if any(form.b) else form.c, c.n)
    else:
        acc = b.input(support[0])
        parity = 0
        rest = support[1:]
        for pos, i in enumerate(rest):
            last = pos == len(rest) - 1
            want_flip = last and parity != form.c
            if want_flip and gates.xnor:
                op = gates.xnor
            else:
                op = gates.xor or gates.xnor
            if op is None:
                raise Unrepresentable(f"base {target} has no XOR or XNOR gate")
            if op == gates.xnor:
                parity ^= 1
            acc = b.gate(op, acc, b.input(i))
        if parity != form.c:
            acc = gates.negate(b, acc)
        out_node = acc
    out = b.build(out_node)
    if out.size > c.n + 1:
        raise OracleMismatch(f"linear determinization used {out.size} > n + 1 gates")
    if check:
        _check_determinized(c, out, "determinize_linear")
    return out


def determinize(c: Circuit, mode: str = "auto", target_base: GateBase | None = None,
                check: bool = True) -> Circuit:
    if mode == "auto":
        from .clone import Reason, weak_class

        reason = weak_class(c.base.functions)
        if reason is None:
            raise BaseMismatch(f"base {c.base} is neither monotone, linear nor self-dual")
        mode = {Reason.MONOTONE: "monotone", Reason.LINEAR: "linear",
                Reason.SELF_DUAL: "selfdual"}[reason]
    if mode == "monotone":
        return determinize_monotone(c, check)
    if mode == "selfdual":
        return determinize_self_dual(c, check)
    if mode == "linear":
        return determinize_linear(c, target_base, check)
    raise ValueError(f"unknown determinization mode {mode!r}")


# -- lifts ----------------------------------------------------------------------

# (x', x'') rows: value of the lifted circuit, "c" meaning the original circuit
LIFT_ROWS = {
    "and": {(1, 0): "c", (1, 1): 1, (0, 0): 0, (0, 1): 0},
    "or": {(0, 1): "c", (1, 0): 1, (1, 1): 1, (0, 0): 0},
}


def lift_contract_violations(c: Circuit, out: Circuit, kind: str,
                             semantics: Semantics) -> list[tuple[tuple[int, int], str]]:
    """Rows of the padded-language contract that ``out`` breaks (empty if none)."""
    sem = Semantics(semantics)
    if out.n != c.n + 2 or out.m != c.m:
        return [((-1, -1), "shape")]
    if sem is Semantics.DET:
        width, f, g = c.n + c.m, det_table(c), det_table(out)
    else:
        width, f, g = c.n, nondet_table(c), nondet_table(out)
    full = bf.full_mask(width)
    bad = []
    for (xp, xpp), expect in LIFT_ROWS[kind].items():
        row = bf.fix_variable(g, width + 2, c.n + 2, xpp)
        row = bf.fix_variable(row, width + 1, c.n + 1, xp)
        want = f if expect == "c" else (full if expect else 0)
        if row != want:
            bad.append(((xp, xpp), str(expect)))
    return bad


def _lift(c: Circuit, gadget_closure: CloneClosure, kind: str, check: bool) -> Circuit:
    wrapper_fn = bf.AND_OR if kind == "and" else bf.OR_AND
    gadget = bf.GADGET_AND if kind == "and" else bf.GADGET_OR
    for f in (wrapper_fn, gadget):
        if f not in gadget_closure:
            raise MissingMember(f"{f.bits()} is not in the closure of {gadget_closure.base}", f)
    wrapper = gadget_closure.member(wrapper_fn)
    if wrapper.const_count:
        raise PreconditionError("the wrapper witness must be constant-free")
    target = gadget_closure.base
    for name, f in c.base:
        if name not in target or target[name] != f:
            raise BaseMismatch(f"gate {name} of the circuit is not a gate of {target}")
    b = CircuitBuilder(target, c.n + 2, c.m)
    xp, xpp = b.input(c.n + 1), b.input(c.n + 2)
    # and-lift: 1 -> x', 0 -> x''; or-lift: 0 -> x', 1 -> x''
    subst = {1: xp, 0: xpp} if kind == "and" else {0: xp, 1: xpp}
    ids: list[int] = []
    for node in c.nodes:
        if isinstance(node, Const):
            ids.append(subst[node.value])
        else:
            ids.append(_copy(b, node, ids))
    top = _inline(b, wrapper, [xp, ids[c.output], xpp])
    out = b.build(top)
    if check:
        for sem in (Semantics.DET, Semantics.NONDET):
            bad = lift_contract_violations(c, out, kind, sem)
            if bad:
                raise OracleMismatch(f"lift_{kind} breaks rows {bad} under {sem.value}")
    return out


def lift_and(c: Circuit, gadget_closure: CloneClosure, check: bool = True) -> Circuit:
    """``x' & (C | x'')`` with constants 1 -> x', 0 -> x''."""
    return _lift(c, gadget_closure, "and", check)


def lift_or(c: Circuit, gadget_closure: CloneClosure, check: bool = True) -> Circuit:
    """``x' | (C & x'')`` with constants 0 -> x', 1 -> x''."""
    return _lift(c, gadget_closure, "or", check)


# -- NOT elimination ---------------------------------------------------------------

_AON_ROLES = {bf.AND: "AND", bf.OR: "OR", bf.NOT: "NOT"}


def _aon_roles(c: Circuit) -> dict[str, str]:
    roles = {}
    for name, f in c.base:
        if f not in _AON_ROLES:
            raise BaseMismatch(f"gate {name} is not AND, OR or NOT")
        roles[name] = _AON_ROLES[f]
    return roles


def _not_eliminate(c: Circuit, polarity: int, check: bool) -> Circuit:
    roles = _aon_roles(c)
    if c.m:
        raise PreconditionError("NOT elimination works on deterministic circuits (m = 0)")
    if c.n < 1:
        raise PreconditionError("NOT elimination needs at least one input")
    f = BoolFun(c.n, det_table(c))
    if polarity == 1 and not bf.preserves_one(f):
        raise NotReproducing("circuit is not 1-reproducing: it rejects the all-ones input")
    if polarity == 0 and not bf.preserves_zero(f):
        raise NotReproducing("circuit is not 0-reproducing: it accepts the all-zeros input")
    target, chain_op, flip_op = (
        (AND_OR_XNOR, "AND", "XNOR") if polarity == 1 else (AND_OR_XOR, "OR", "XOR"))
    b = CircuitBuilder(target, c.n)
    chain = None
    if any(isinstance(v, Gate) and roles[v.name] == "NOT" for v in c.nodes):
        chain = b.input(1)
        for i in range(2, c.n + 1):
            chain = b.gate(chain_op, chain, b.input(i))
    ids: list[int] = []
    for node in c.nodes:
        if isinstance(node, Gate) and roles[node.name] == "NOT":
            ids.append(b.gate(flip_op, ids[node.operands[0]], chain))
        else:
            ids.append(_copy(b, node, ids, rename=roles.get))
    out = b.build(ids[c.output])
    if out.size > c.size + c.n - 1:
        raise OracleMismatch(f"NOT elimination grew {c.size} gates to {out.size}")
    if check:
        _check_equiv(c, out, Semantics.DET, Semantics.DET, "NOT elimination")
    return out


def not_eliminate_conj(c: Circuit, check: bool = True) -> Circuit:
    """{AND, OR, NOT} -> {AND, OR, XNOR}; each NOT g becomes XNOR(g, x_1 & ... & x_n)."""
    return _not_eliminate(c, 1, check)


def not_eliminate_disj(c: Circuit, check: bool = True) -> Circuit:
    """{AND, OR, NOT} -> {AND, OR, XOR}; each NOT g becomes XOR(g, x_1 | ... | x_n)."""
    return _not_eliminate(c, 0, check)


def separation_witness(f: BoolFun, polarity: int) -> list[tuple[int, ...]]:
    """Rows showing no input separates ``f``: for each ``i`` one row breaking it."""
    rows = []
    full = bf.full_mask(f.arity)
    relevant = f.table if polarity else full ^ f.table
    for j in range(1, f.arity + 1):
        p = bf.var_pattern(j, f.arity)
        breaking = relevant & (full ^ p) if polarity else relevant & p
        if breaking:
            idx = (breaking & -breaking).bit_length() - 1
            row = bf.bits_of(idx, f.arity)
            if row not in rows:
                rows.append(row)
    return rows


def compile_to_separating_base(c: Circuit, base: GateBase, polarity: int,
                               closure_with_const: CloneClosure | None = None,
                               check: bool = True) -> Circuit:
    """Compile an {AND, OR, NOT} circuit into a pure circuit over ``base``.

    Polarity 1: NOT elimination into {AND, OR, XNOR}, conversion into
    ``[base, 1]``, every constant 1 replaced by the separating input ``x_i``,
    and finally ``x_i & C``.  Polarity 0 is the dual with ``[base, 0]`` and
    ``x_i | C``.
    """
    if polarity not in (0, 1):
        raise ValueError("polarity must be 0 or 1")
    _aon_roles(c)
    keeps = bf.preserves_one if polarity else bf.preserves_zero
    _require(base, keeps, f"{polarity}-reproducing")
    if c.m:
        raise PreconditionError("compile_to_separating_base works on deterministic circuits")
    f = BoolFun(c.n, det_table(c))
    if not keeps(f):
        raise NotReproducing(f"circuit is not {polarity}-reproducing")
    i = bf.separating_index(f, polarity) if c.n else None
    if i is None:
        rows = separation_witness(f, polarity)
        kind = "accepting" if polarity else "rejecting"
        raise NoSeparatingInput(
            f"no {polarity}-separating input; {kind} rows {rows} cover every index", rows)
    stage1 = _not_eliminate(c, polarity, check)
    cl = closure_with_const or closure(base, 2, constants_allowed={polarity})
    if cl.base != base or cl.constants - {polarity}:
        raise PreconditionError(f"conversion closure must be over {base} with constant {polarity} only")
    needed = (bf.AND, bf.OR, bf.XNOR if polarity else bf.XOR)
    for g in needed:
        if g not in cl:
            raise MissingMember(f"{g.bits()} is not in [{base}, {polarity}]", g)
    stage2 = convert_base(stage1, cl, check)
    nodes = []
    for node in stage2.nodes:
        if isinstance(node, Const):
            if node.value != polarity:
                raise OracleMismatch(f"unexpected constant {node.value} after conversion")
            node = Input(i)
        nodes.append(node)
    stage3 = Circuit(base, c.n, 0, tuple(nodes), stage2.output)
    pure = closure(base, 3)
    wrapper_fn = bf.AND_OR if polarity else bf.OR_AND
    wrapper = pure.member(wrapper_fn)
    if wrapper is None:
        raise MissingMember(f"{wrapper_fn.bits()} is not in the closure of {base}", wrapper_fn)
    b = CircuitBuilder(base, c.n)
    ids: list[int] = []
    for node in stage3.nodes:
        ids.append(_copy(b, node, ids))
    top = _inline(b, wrapper, [b.input(i), ids[stage3.output], ids[stage3.output]])
    out = b.build(top)
    if out.const_count or out.gates_used() - set(base.names):
        raise OracleMismatch("compiled circuit is not pure over the base")
    if check:
        _check_equiv(c, out, Semantics.DET, Semantics.DET, "compile_to_separating_base")
    return out


def as_aon(c: Circuit) -> Circuit:
    """Rename the gates of an {AND, OR, NOT}-valued circuit to the canonical base."""
    roles = _aon_roles(c)
    nodes = tuple(Gate(roles[v.name], v.operands) if isinstance(v, Gate) else v for v in c.nodes)
    return Circuit(AND_OR_NOT, c.n, c.m, nodes, c.output, c.names)
