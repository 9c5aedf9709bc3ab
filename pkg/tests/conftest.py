import itertools
from pathlib import Path

import pytest

from ndpower.circuit import Const, Gate, Input, Nondet

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_lines: list[str] = []


@pytest.fixture
def verdict_line():
    """Record one pass/fail line per acceptance criterion for the summary."""

    def record(criterion: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else "")
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def naive_closure(funs, k, consts=()):
    """Reference closure over k shared variables by repeated full enumeration."""
    size = 1 << k
    full = (1 << size) - 1
    members = {sum(((i >> j) & 1) << i for i in range(size)) for j in range(k)}
    members |= {full if v else 0 for v in consts}
    members |= {full if f.table else 0 for f in funs if f.arity == 0}
    while True:
        new = set()
        for f in funs:
            if f.arity == 0:
                continue
            for tup in itertools.product(sorted(members), repeat=f.arity):
                t = 0
                for i in range(size):
                    idx = sum(((h >> i) & 1) << p for p, h in enumerate(tup))
                    t |= ((f.table >> idx) & 1) << i
                if t not in members:
                    new.add(t)
        if not new:
            return members
        members |= new


def slow_eval(c, x, y=()):
    """Recursive per-assignment evaluation, independent of the bit-parallel path."""
    memo = {}

    def value(k):
        if k in memo:
            return memo[k]
        node = c.nodes[k]
        if isinstance(node, Input):
            v = x[node.index - 1]
        elif isinstance(node, Nondet):
            v = y[node.index - 1]
        elif isinstance(node, Const):
            v = node.value
        else:
            assert isinstance(node, Gate)
            args = [value(o) for o in node.operands]
            v = c.base[node.name](*args)
        memo[k] = v
        return v

    return value(c.output)


def slow_nondet_table(c):
    """Accepted set as a list indexed by x (x_1 least significant)."""
    out = []
    for i in range(1 << c.n):
        x = [(i >> j) & 1 for j in range(c.n)]
        out.append(int(any(slow_eval(c, x, y) for y in itertools.product((0, 1), repeat=c.m))))
    return out


def table_list(f):
    return [(f.table >> i) & 1 for i in range(f.size)]
