"""Finite named gate bases and their text format."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator

from . import boolfun as bf
from .boolfun import BoolFun
from .errors import BaseParseError, LiteralParseError


@dataclass(frozen=True)
class GateBase:
    entries: tuple[tuple[str, BoolFun], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((str(n), f) for n, f in self.entries))
        if not self.entries:
            raise ValueError("a gate base needs at least one gate")
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate gate name {dup!r}")
        for name, f in self.entries:
            if not name.isidentifier():
                raise ValueError(f"bad gate name {name!r}")
            bf.check_gate_arity(f)

    @classmethod
    def of(cls, **gates: BoolFun) -> GateBase:
        return cls(tuple(gates.items()))

    def __iter__(self) -> Iterator[tuple[str, BoolFun]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: object) -> bool:
        return any(n == name for n, _ in self.entries)

    def __getitem__(self, name: str) -> BoolFun:
        for n, f in self.entries:
            if n == name:
                return f
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    @property
    def functions(self) -> tuple[BoolFun, ...]:
        return tuple(f for _, f in self.entries)

    def find(self, f: BoolFun) -> str | None:
        """Name of the first gate computing ``f``, if any."""
        for n, g in self.entries:
            if g == f:
                return n
        return None

    def union(self, other: GateBase) -> GateBase:
        merged = list(self.entries)
        for name, f in other.entries:
            if name in self:
                if self[name] != f:
                    raise ValueError(f"gate {name!r} defined twice with different tables")
                continue
            merged.append((name, f))
        return GateBase(tuple(merged))

    def __str__(self) -> str:
        return "{" + ", ".join(self.names) + "}"


def parse_base(text: str) -> GateBase:
    entries = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            name, f = bf.parse_literal(line, lineno)
        except LiteralParseError as e:
            raise BaseParseError(str(e), lineno) from None
        if name in seen:
            raise BaseParseError(
                f"line {lineno}: gate {name!r} already defined on line {seen[name]}", lineno
            )
        seen[name] = lineno
        entries.append((name, f))
    if not entries:
        raise BaseParseError("base file defines no gates")
    return GateBase(tuple(entries))


def format_base(base: GateBase) -> str:
    return "".join(bf.format_literal(n, f) + "\n" for n, f in base)


FIXTURES = ("and", "nand", "d", "gadget-and", "gadget-or", "xor-one", "and-or-not")


def fixture_path(name: str):
    return resources.files("ndpower") / "data" / "bases" / f"{name}.base"


def load_base(spec: str | Path) -> GateBase:
    """Load a base file; a bare fixture name (``nand``, ``d``, ...) selects a shipped one."""
    path = Path(spec)
    if not path.exists() and str(spec) in FIXTURES:
        return parse_base(fixture_path(str(spec)).read_text())
    return parse_base(path.read_text())


AND_OR_NOT = GateBase.of(AND=bf.AND, OR=bf.OR, NOT=bf.NOT)
AND_OR_XNOR = GateBase.of(AND=bf.AND, OR=bf.OR, XNOR=bf.XNOR)
AND_OR_XOR = GateBase.of(AND=bf.AND, OR=bf.OR, XOR=bf.XOR)
