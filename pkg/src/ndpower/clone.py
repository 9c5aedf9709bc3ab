"""Arity-bounded clone closure with witness circuits, completeness, and classification.

The closure works over a fixed tuple of ``k`` variables: every member is a
``k``-ary truth table, and members of smaller arity are those tables that
ignore the top variables.  Variable-free members (arity 0) come from a
separate saturation with no variables at all, since a constant function of
one variable does not give a circuit without inputs.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from . import boolfun as bf
from .boolfun import BoolFun
from .circuit import Circuit, CircuitBuilder
from .errors import ArityError, ClassificationError
from .gatebase import GateBase

log = logging.getLogger(__name__)

# broadcast block size for one batch of candidate compositions
_CHUNK = 1 << 20


def _dtype(k: int):
    if k <= 3:
        return np.uint8
    return {4: np.uint16, 5: np.uint32}.get(k, np.uint64)


class _Saturation:
    """Fixpoint of gate application over ``k``-ary tables, breadth-first by round.

    Within a round every composition with at least one operand found in the
    previous round is tried; a new table keeps its cheapest candidate from
    that round.  Cost is ``1 +`` the summed cost of the distinct operands.
    """

    def __init__(self, base: GateBase, k: int, constants: frozenset[int]):
        self.k = k
        self.full = bf.full_mask(k)
        self.space = 1 << (1 << k)
        self.dtype = _dtype(k)
        self.recipes: dict[int, tuple] = {}
        self.cost: dict[int, int] = {}
        self.rounds = 0
        self._known_arr = np.zeros(self.space, dtype=bool) if k <= 4 else None
        self._run(base, constants)

    def _commit(self, table: int, cost: int, recipe: tuple) -> None:
        self.recipes[table] = recipe
        self.cost[table] = cost
        if self._known_arr is not None:
            self._known_arr[table] = True

    def _is_new(self, results: np.ndarray) -> np.ndarray:
        if self._known_arr is not None:
            return ~self._known_arr[results]
        known = np.fromiter(self.recipes, dtype=self.dtype, count=len(self.recipes))
        return np.isin(results, known, invert=True)

    def _run(self, base: GateBase, constants: frozenset[int]) -> None:
        seed = []
        for j in range(1, self.k + 1):
            t = bf.var_pattern(j, self.k)
            if t not in self.recipes:
                self._commit(t, 0, ("proj", j))
                seed.append(t)
        for v in sorted(constants):
            t = self.full if v else 0
            if t not in self.recipes:
                self._commit(t, 0, ("const", v))
                seed.append(t)
        cand: dict[int, tuple[int, tuple]] = {}
        for name, g in base:
            if g.arity == 0:
                t = self.full if g.table else 0
                if t not in self.recipes and t not in cand:
                    cand[t] = (1, ("gate", name, ()))
        gates = [(name, g) for name, g in base if g.arity > 0]
        old: list[int] = []
        delta = seed
        while True:
            self.rounds += 1
            done = self._round(gates, old, delta, cand)
            for t, (c, recipe) in cand.items():
                self._commit(t, c, recipe)
            old = old + delta
            delta = list(cand)
            cand = {}
            if done or not delta or len(self.recipes) == self.space:
                break

    def _round(self, gates, old, delta, cand) -> bool:
        if not delta:
            return False
        arrays = {
            "old": np.array(old, dtype=self.dtype),
            "delta": np.array(delta, dtype=self.dtype),
            "all": np.array(old + delta, dtype=self.dtype),
        }
        costs = {key: np.array([self.cost[int(t)] for t in arr], dtype=np.int32)
                 for key, arr in arrays.items()}
        for name, g in gates:
            r = g.arity
            for p in range(r):
                keys = ["old"] * p + ["delta"] + ["all"] * (r - p - 1)
                sets = [arrays[key] for key in keys]
                if any(len(s) == 0 for s in sets):
                    continue
                if self._apply(name, g, sets, [costs[key] for key in keys], cand):
                    return True
        return False

    def _apply(self, name, g, sets, set_costs, cand) -> bool:
        r = g.arity
        sizes = [len(s) for s in sets]
        # fix a prefix of operands so the broadcast block stays under _CHUNK
        t = 0
        while t < r and int(np.prod(sizes[t:])) > _CHUNK:
            t += 1
        tail_shape = tuple(sizes[t:])
        ones = bin(g.table).count("1")
        complement = ones > g.size // 2
        rows_mask = (g.table ^ bf.full_mask(r)) if complement else g.table
        rows = [row for row in range(g.size) if (rows_mask >> row) & 1]
        full = self.dtype(self.full)
        for prefix in itertools.product(*(range(s) for s in sizes[:t])):
            vals, cvals = [], []
            for i in range(r):
                if i < t:
                    vals.append(sets[i][prefix[i]])
                    cvals.append(set_costs[i][prefix[i]])
                else:
                    shape = [1] * len(tail_shape)
                    shape[i - t] = sizes[i]
                    vals.append(sets[i].reshape(shape))
                    cvals.append(set_costs[i].reshape(shape))
            negs = [np.bitwise_and(np.invert(v), full) for v in vals]
            acc = np.zeros(tail_shape, dtype=self.dtype)
            for row in rows:
                term = np.broadcast_to(full, tail_shape)
                for i in range(r):
                    term = term & (vals[i] if (row >> i) & 1 else negs[i])
                acc |= term
            if complement:
                acc = acc ^ full
            results = np.broadcast_to(acc, tail_shape).reshape(-1)
            new = self._is_new(results)
            if not new.any():
                continue
            cost = np.ones(tail_shape, dtype=np.int32) + cvals[0]
            for i in range(1, r):
                dup = np.zeros(tail_shape, dtype=bool)
                for j in range(i):
                    dup = dup | (vals[i] == vals[j])
                cost = cost + np.where(dup, 0, cvals[i])
            cost = np.broadcast_to(cost, tail_shape).reshape(-1)
            idx = np.flatnonzero(new)
            res_new, cost_new = results[idx], cost[idx]
            order = np.lexsort((cost_new, res_new))
            res_sorted = res_new[order]
            firsts = np.flatnonzero(np.r_[True, res_sorted[1:] != res_sorted[:-1]])
            for pos in firsts:
                table = int(res_sorted[pos])
                c = int(cost_new[order[pos]])
                if table in cand and cand[table][0] <= c:
                    continue
                flat = int(idx[order[pos]])
                tail = np.unravel_index(flat, tail_shape) if tail_shape else ()
                ops = list(prefix) + [int(a) for a in tail]
                operands = tuple(int(sets[i][ops[i]]) for i in range(r))
                cand[table] = (c, ("gate", name, operands))
            if len(self.recipes) + len(cand) == self.space:
                return True
        return False


def _normalize_constants(constants_allowed) -> frozenset[int]:
    if constants_allowed is True:
        return frozenset({0, 1})
    if not constants_allowed:
        return frozenset()
    values = frozenset(int(v) for v in constants_allowed)
    if values - {0, 1}:
        raise ValueError("constants must be bits")
    return values


class CloneClosure:
    """``[G]`` restricted to arity at most ``arity_bound``, with witness circuits."""

    def __init__(self, base: GateBase, arity_bound: int, constants_allowed=False):
        if not 0 <= arity_bound <= bf.MAX_ARITY:
            raise ArityError(f"arity bound {arity_bound} outside 0..{bf.MAX_ARITY}")
        self.base = base
        self.arity_bound = arity_bound
        self.constants = _normalize_constants(constants_allowed)
        self._top = _Saturation(base, arity_bound, self.constants)
        self._nullary = self._top if arity_bound == 0 else _Saturation(base, 0, self.constants)
        self._witnesses: dict[BoolFun, Circuit] = {}

    @property
    def constants_allowed(self) -> bool:
        return bool(self.constants)

    def _lookup(self, f: BoolFun) -> tuple[_Saturation, int] | None:
        if f.arity > self.arity_bound:
            raise ArityError(f"arity {f.arity} exceeds closure bound {self.arity_bound}")
        if f.arity == 0:
            sat, table = self._nullary, f.table
        else:
            sat, table = self._top, bf.extend(f, self.arity_bound).table
        return (sat, table) if table in sat.recipes else None

    def __contains__(self, f: BoolFun) -> bool:
        return self._lookup(f) is not None

    def member(self, f: BoolFun) -> Circuit | None:
        """Witness circuit over the base (plus allowed constants) computing ``f``."""
        if f in self._witnesses:
            return self._witnesses[f]
        found = self._lookup(f)
        if found is None:
            return None
        sat, table = found
        j = f.arity
        b = CircuitBuilder(self.base, j, 0, share_gates=True)
        memo: dict[int, int] = {}

        def build(t: int) -> int:
            if t in memo:
                return memo[t]
            recipe = sat.recipes[t]
            if recipe[0] == "proj":
                node = b.input(recipe[1] if recipe[1] <= j else 1)
            elif recipe[0] == "const":
                node = b.const(recipe[1])
            else:
                node = b.gate(recipe[1], *(build(o) for o in recipe[2]))
            memo[t] = node
            return node

        w = b.build(build(table))
        self._witnesses[f] = w
        return w

    def witness_size(self, f: BoolFun) -> int | None:
        w = self.member(f)
        return None if w is None else w.size

    def members(self, arity: int | None = None) -> list[BoolFun]:
        """Members ordered by arity, then table value."""
        arities = range(self.arity_bound + 1) if arity is None else [arity]
        out = []
        for j in arities:
            if j > self.arity_bound:
                raise ArityError(f"arity {j} exceeds closure bound {self.arity_bound}")
            if j == 0:
                out.extend(BoolFun(0, t) for t in sorted(self._nullary.recipes))
                continue
            funs = []
            for t in self._top.recipes:
                f = BoolFun(self.arity_bound, t)
                if not any(bf.depends_on(f, v) for v in range(j + 1, self.arity_bound + 1)):
                    funs.append(BoolFun(j, t & bf.full_mask(j)))
            out.extend(sorted(funs))
        return out

    def __len__(self) -> int:
        return len(self._top.recipes)

    @property
    def conversion_constant(self) -> int:
        """Largest witness size among members of the top arity."""
        return max((self.witness_size(f) for f in self.members(self.arity_bound)), default=0)

    def has_constant(self, value: int) -> bool:
        return bf.constant(value, max(1, self.arity_bound)) in self if self.arity_bound else \
            bf.constant(value, 0) in self


def closure(base: GateBase, arity_bound: int, constants_allowed=False) -> CloneClosure:
    """Closure of ``base`` up to ``arity_bound``.

    ``constants_allowed`` is a bool (both constants) or an iterable of bits.
    """
    return CloneClosure(base, arity_bound, constants_allowed)


def is_complete(base: GateBase | Iterable[BoolFun]) -> bool:
    funs = base.functions if isinstance(base, GateBase) else tuple(base)
    return not (
        all(bf.preserves_zero(f) for f in funs)
        or all(bf.preserves_one(f) for f in funs)
        or all(bf.is_monotone(f) for f in funs)
        or all(bf.is_self_dual(f) for f in funs)
        or all(bf.is_affine(f) for f in funs)
    )


class Reason(str, Enum):
    MONOTONE = "MONOTONE"
    LINEAR = "LINEAR"
    SELF_DUAL = "SELF_DUAL"


class Gadget(str, Enum):
    AND_OR_NOT = "AND_OR_NOT"  # x & (y | ~z)
    OR_AND_NOT = "OR_AND_NOT"  # x | (y & ~z)

    @property
    def function(self) -> BoolFun:
        return bf.GADGET_AND if self is Gadget.AND_OR_NOT else bf.GADGET_OR


@dataclass(frozen=True)
class PowerClassification:
    reason: Reason | None
    gadget: Gadget | None
    witness: Circuit | None
    complete: bool
    has_both_constants: bool
    gadgets_in_closure: tuple[Gadget, ...] = ()

    @property
    def lacks(self) -> bool:
        return self.reason is not None

    @property
    def kind(self) -> str:
        return "LACKS" if self.lacks else "FULL"

    def __str__(self) -> str:
        tag = self.reason.value if self.lacks else self.gadget.value
        return f"{self.kind}({tag})"


def weak_class(funs: Iterable[BoolFun]) -> Reason | None:
    funs = tuple(funs)
    if all(bf.is_monotone(f) for f in funs):
        return Reason.MONOTONE
    if all(bf.is_affine(f) for f in funs):
        return Reason.LINEAR
    if all(bf.is_self_dual(f) for f in funs):
        return Reason.SELF_DUAL
    return None


def classify(base: GateBase, ternary: CloneClosure | None = None) -> PowerClassification:
    """Place ``base`` on one side of the dichotomy.

    The gadget search runs in the constant-free ternary closure.  A base
    outside the three weak classes whose closure holds neither gadget
    contradicts the classification and raises :class:`ClassificationError`.
    """
    if ternary is None:
        ternary = closure(base, 3)
    elif ternary.base != base or ternary.arity_bound != 3 or ternary.constants:
        raise ValueError("classify needs the constant-free arity-3 closure of the same base")
    found = tuple(gd for gd in Gadget if gd.function in ternary)
    both = ternary.has_constant(0) and ternary.has_constant(1)
    complete = is_complete(base)
    reason = weak_class(base.functions)
    if reason is not None:
        return PowerClassification(reason, None, None, complete, both, found)
    if not found:
        raise ClassificationError(
            f"base {base} is neither monotone, linear nor self-dual, "
            "yet neither gadget lies in its arity-3 closure"
        )
    gadget = found[0]
    return PowerClassification(None, gadget, ternary.member(gadget.function), complete, both, found)
