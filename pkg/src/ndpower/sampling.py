"""Seeded random circuits and bases for property checks."""

from __future__ import annotations

import random

from . import boolfun as bf
from .boolfun import BoolFun
from .circuit import Circuit, CircuitBuilder
from .gatebase import AND_OR_NOT, GateBase


def random_circuit(base: GateBase, n: int, m: int, gates: int, rng: random.Random,
                   consts: bool = False) -> Circuit:
    """Inputs first, then ``gates`` gates with operands drawn from earlier nodes.

    Operands favour recent nodes so that deep circuits are common.  The
    output is the last gate (or the last input when ``gates == 0``).
    """
    b = CircuitBuilder(base, n, m)
    pool = [b.input(i) for i in range(1, n + 1)] + [b.nondet(j) for j in range(1, m + 1)]
    if consts:
        pool += [b.const(0), b.const(1)]
    if not pool and all(f.arity for f in base.functions):
        raise ValueError("nothing to build from: no inputs and no nullary gates")
    names = list(base.names)
    for _ in range(gates):
        name = rng.choice(names)
        arity = base[name].arity
        if not pool and arity:
            name = next(nm for nm in names if base[nm].arity == 0)
            arity = 0
        ops = []
        for _ in range(arity):
            if rng.random() < 0.5:
                ops.append(pool[-1 - min(len(pool) - 1, int(rng.expovariate(0.4)))])
            else:
                ops.append(rng.choice(pool))
        pool.append(b.gate(name, *ops))
    return b.build(pool[-1])


def random_function(arity: int, rng: random.Random, predicate=None, tries: int = 10_000) -> BoolFun:
    for _ in range(tries):
        f = BoolFun(arity, rng.getrandbits(1 << arity))
        if predicate is None or predicate(f):
            return f
    raise ValueError("no function satisfying the predicate found")


def random_base(rng: random.Random, max_gates: int = 3, max_arity: int = 3,
                predicate=None) -> GateBase:
    count = rng.randint(1, max_gates)
    entries = []
    for k in range(count):
        while True:
            arity = rng.randint(0 if predicate else 1, max_arity)
            try:
                f = random_function(arity, rng, predicate, tries=500)
            except ValueError:
                continue
            break
        entries.append((f"G{k}", f))
    return GateBase(tuple(entries))


def sop_circuit(f: BoolFun) -> Circuit:
    """Sum-of-products {AND, OR, NOT} circuit computing ``f`` (``f.arity >= 1``)."""
    n = f.arity
    if n < 1:
        raise ValueError("sum of products needs at least one variable")
    b = CircuitBuilder(AND_OR_NOT, n, share_gates=True)
    lits = {}
    for i in range(1, n + 1):
        x = b.input(i)
        lits[i, 1] = x
        lits[i, 0] = b.gate("NOT", x)
    if f.table in (0, bf.full_mask(n)):
        op = "OR" if f.table else "AND"
        return b.build(b.gate(op, lits[1, 1], lits[1, 0]))
    terms = []
    for idx in range(f.size):
        if (f.table >> idx) & 1:
            acc = None
            for i, v in enumerate(bf.bits_of(idx, n), 1):
                acc = lits[i, v] if acc is None else b.gate("AND", acc, lits[i, v])
            terms.append(acc)
    out = terms[0]
    for t in terms[1:]:
        out = b.gate("OR", out, t)
    return b.build(out)
