"""Command-line front end.

Exit status: 0 success, 2 usage or parse error, 3 precondition failure,
4 oracle mismatch.  ``--json`` prints one machine-readable report per run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import boolfun as bf
from .circuit import Semantics, equiv, parse_circuit, serialize, truth_table, validate
from .clone import classify, closure
from .errors import NDPowerError, NoSeparatingInput, NotSelfDual, OracleMismatch, ParseError
from .gatebase import AND_OR_NOT, FIXTURES, fixture_path, load_base
from . import transform as tr

REPORT_KEYS = ("command", "status", "message", "inputs", "result", "oracle_checked",
               "counterexample", "warnings", "timing_ms")


class Run:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict[str, str] = {}
        self.result: dict = {}
        self.oracle_checked = False
        self.counterexample = None
        self.warnings: list[str] = []
        self.lines: list[str] = []
        self.start = time.perf_counter()

    def read(self, spec: str) -> str:
        path = Path(spec)
        if not path.exists() and spec in FIXTURES:
            text = fixture_path(spec).read_text()
        else:
            try:
                text = path.read_text()
            except OSError as e:
                raise ParseError(f"cannot read {spec}: {e.strerror}") from None
        self.inputs[spec] = hashlib.sha256(text.encode()).hexdigest()
        return text

    def base(self, spec: str):
        self.read(spec)
        return load_base(spec)

    def circuit(self, spec: str, base):
        c = parse_circuit(self.read(spec), base)
        self.warnings.extend(validate(c).warnings)
        return c

    def say(self, line: str) -> None:
        self.lines.append(line)

    def report(self, status: str = "ok", message: str = "") -> dict:
        return {
            "command": self.command,
            "status": status,
            "message": message,
            "inputs": self.inputs,
            "result": self.result,
            "oracle_checked": self.oracle_checked,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "warnings": self.warnings,
            "timing_ms": round((time.perf_counter() - self.start) * 1000, 3),
        }


def _emit_netlist(run: Run, args, c) -> None:
    text = serialize(c)
    run.result["netlist"] = text
    run.result["gates"] = c.size
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    elif not args.json:
        run.say(text.rstrip("\n"))


def cmd_classify(run: Run, args) -> None:
    base = run.base(args.base)
    verdict = classify(base)
    run.result.update(
        verdict=verdict.kind,
        reason=verdict.reason.value if verdict.reason else None,
        gadget=verdict.gadget.value if verdict.gadget else None,
        complete=verdict.complete,
        has_both_constants=verdict.has_both_constants,
        gadgets_in_closure=[g.value for g in verdict.gadgets_in_closure],
        witness=serialize(verdict.witness) if verdict.witness else None,
    )
    run.say(f"verdict: {verdict}")
    run.say(f"complete: {'yes' if verdict.complete else 'no'}")
    run.say(f"both constants in [G]: {'yes' if verdict.has_both_constants else 'no'}")
    if verdict.witness is not None:
        run.say(f"witness for {verdict.gadget.value}:")
        run.say(serialize(verdict.witness).rstrip("\n"))


def cmd_closure(run: Run, args) -> None:
    base = run.base(args.base)
    cl = closure(base, args.arity, args.consts)
    rows = []
    for f in cl.members():
        rows.append({"arity": f.arity, "table": f.bits(), "hex": f.hex(),
                     "size": cl.witness_size(f)})
        run.say(f"{f.arity} {f.bits()} size={cl.witness_size(f)}")
    run.result.update(members=rows, count=len(rows),
                      conversion_constant=cl.conversion_constant)
    run.say(f"# {len(rows)} members up to arity {args.arity}; "
            f"conversion constant {cl.conversion_constant}")


def _parse_target(text: str) -> bf.BoolFun:
    try:
        bits, arity = text.split(":")
        f = bf.BoolFun.from_bits(bits)
    except ValueError:
        raise ParseError(f"target must look like '<bits>:<arity>', got {text!r}") from None
    if f.arity != int(arity):
        raise ParseError(f"target table {bits!r} does not have arity {arity}")
    return f


def cmd_synthesize(run: Run, args) -> None:
    base = run.base(args.base)
    f = _parse_target(args.target)
    bound = max(args.arity or 0, f.arity)
    w = closure(base, bound, args.consts).member(f)
    run.result["member"] = w is not None
    if w is None:
        run.say("not a member")
        return
    _emit_netlist(run, args, w)


def cmd_determinize(run: Run, args) -> None:
    base = run.base(args.base)
    c = run.circuit(args.circuit, base)
    target = run.base(args.target_base) if args.target_base else None
    try:
        out = tr.determinize(c, args.mode, target)
    except NotSelfDual as e:
        run.counterexample = e.pair[0]
        run.result["pair"] = [list(e.pair[0]), list(e.pair[1])]
        raise
    run.oracle_checked = True
    run.result["input_gates"] = c.size
    _emit_netlist(run, args, out)


def cmd_lift(run: Run, args) -> None:
    base = run.base(args.base)
    c = run.circuit(args.circuit, base)
    cl = closure(base, 3)
    out = (tr.lift_and if args.gadget == "and" else tr.lift_or)(c, cl)
    run.oracle_checked = True
    rows = {f"{k[0]}{k[1]}": str(v) for k, v in tr.LIFT_ROWS[args.gadget].items()}
    run.result["contract"] = rows
    run.say("# contract rows (x', x'') -> value: "
            + ", ".join(f"{k}->{v}" for k, v in rows.items()) + " (checked)")
    _emit_netlist(run, args, out)


def cmd_noteliminate(run: Run, args) -> None:
    base = run.base(args.base) if args.base else AND_OR_NOT
    c = tr.as_aon(run.circuit(args.circuit, base))
    try:
        if args.target_base:
            target = run.base(args.target_base)
            out = tr.compile_to_separating_base(c, target, args.polarity)
        else:
            out = (tr.not_eliminate_conj if args.polarity == 1 else tr.not_eliminate_disj)(c)
    except NoSeparatingInput as e:
        run.result["rows"] = [list(r) for r in e.rows]
        raise
    run.oracle_checked = True
    run.result["table"] = truth_table(out).hex()
    _emit_netlist(run, args, out)


def cmd_convert(run: Run, args) -> None:
    base = run.base(args.base)
    c = run.circuit(args.circuit, base)
    target = run.base(args.target_base)
    out = tr.convert_base(c, closure(target, args.arity, args.consts))
    run.oracle_checked = True
    _emit_netlist(run, args, out)


def cmd_eval(run: Run, args) -> None:
    base = run.base(args.base)
    c = run.circuit(args.circuit, base)
    sem = Semantics(args.semantics)
    if args.x is not None:
        from .circuit import eval_det, eval_nondet

        x = [int(ch) for ch in args.x]
        y = [int(ch) for ch in args.y or ""]
        value = eval_nondet(c, x) if sem is Semantics.NONDET else eval_det(c, x, y)
        run.result.update(value=value)
        run.say(str(value))
        return
    f = truth_table(c, sem)
    run.result.update(arity=f.arity, hex=f.hex(), semantics=sem.value)
    run.say(f.hex())


def cmd_equiv(run: Run, args) -> None:
    base = run.base(args.base)
    c1 = run.circuit(args.left, base)
    c2 = run.circuit(args.right, run.base(args.base2) if args.base2 else base)
    res = equiv(c1, c2, Semantics(args.semantics1), Semantics(args.semantics2))
    run.oracle_checked = True
    run.result["equal"] = res.equal
    if res:
        run.say("equal")
    else:
        run.counterexample = res.counterexample
        run.say(f"differ at {''.join(map(str, res.counterexample))}: "
                f"left={res.left} right={res.right}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ndpower", description=__doc__.splitlines()[0])
    p.add_argument("--bound", type=int, help="exhaustive evaluation bound on n + m")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="print a machine-readable report")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("classify", cmd_classify, "place a base on the dichotomy")
    sp.add_argument("base")
    sp = add("closure", cmd_closure, "list the clone up to an arity")
    sp.add_argument("base")
    sp.add_argument("--arity", type=int, default=2)
    sp.add_argument("--consts", action="store_true")
    sp = add("synthesize", cmd_synthesize, "witness circuit for a target function")
    sp.add_argument("base")
    sp.add_argument("--target", required=True, help="'<bits>:<arity>', bits from index 0 up")
    sp.add_argument("--arity", type=int, help="closure arity bound (default: target arity)")
    sp.add_argument("--consts", action="store_true")
    sp.add_argument("-o", "--output")
    sp = add("determinize", cmd_determinize, "remove nondet inputs")
    sp.add_argument("base")
    sp.add_argument("circuit")
    sp.add_argument("--mode", choices=["auto", "monotone", "selfdual", "linear"], default="auto")
    sp.add_argument("--target-base")
    sp.add_argument("-o", "--output")
    sp = add("lift", cmd_lift, "constant-free padded-language lift")
    sp.add_argument("base")
    sp.add_argument("circuit")
    sp.add_argument("--gadget", choices=["and", "or"], required=True)
    sp.add_argument("-o", "--output")
    sp = add("noteliminate", cmd_noteliminate, "remove NOT gates from an AND/OR/NOT circuit")
    sp.add_argument("circuit")
    sp.add_argument("--polarity", type=int, choices=[0, 1], required=True)
    sp.add_argument("--target-base", help="compile all the way into this separating base")
    sp.add_argument("--base", help="base file naming the AND/OR/NOT gates")
    sp.add_argument("-o", "--output")
    sp = add("convert", cmd_convert, "rewrite a circuit over another base")
    sp.add_argument("base")
    sp.add_argument("circuit")
    sp.add_argument("--target-base", required=True)
    sp.add_argument("--arity", type=int, default=3)
    sp.add_argument("--consts", action="store_true")
    sp.add_argument("-o", "--output")
    sp = add("eval", cmd_eval, "truth table (hex) or a single evaluation")
    sp.add_argument("base")
    sp.add_argument("circuit")
    sp.add_argument("--semantics", choices=["det", "nondet"], default="det")
    sp.add_argument("--x", help="ordinary input bits x1..xn")
    sp.add_argument("--y", help="nondet input bits y1..ym (det semantics)")
    sp = add("equiv", cmd_equiv, "exhaustive equivalence check")
    sp.add_argument("base")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--base2", help="base of the right circuit (default: same)")
    sp.add_argument("--semantics1", choices=["det", "nondet"], default="det")
    sp.add_argument("--semantics2", choices=["det", "nondet"], default="det")
    p.epilog = "bases: a file of '<name> <arity> <bits>' lines, or a fixture: " + ", ".join(FIXTURES)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and 2
    saved = os.environ.get("NDPOWER_EXHAUSTIVE_BOUND")
    if args.bound is not None:
        os.environ["NDPOWER_EXHAUSTIVE_BOUND"] = str(args.bound)
    run = Run(args.command)
    status, message, code = "ok", "", 0
    try:
        args.fn(run, args)
    except NDPowerError as e:
        code = e.exit_code
        status = {2: "parse_error", 3: "precondition_error", 4: "oracle_failure"}.get(code, "error")
        message = str(e)
        if isinstance(e, OracleMismatch) and e.counterexample:
            run.counterexample = e.counterexample
    finally:
        if saved is None:
            os.environ.pop("NDPOWER_EXHAUSTIVE_BOUND", None)
        else:
            os.environ["NDPOWER_EXHAUSTIVE_BOUND"] = saved
    report = run.report(status, message)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in run.lines:
            print(line)
        for w in run.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if message:
            print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
