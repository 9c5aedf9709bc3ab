import json
from pathlib import Path

import pytest

from ndpower import cli
from ndpower.circuit import EquivResult, parse_circuit, truth_table
from ndpower.gatebase import load_base

from conftest import FIXTURES

GOLDEN = json.loads((Path(__file__).parent / "golden" / "report_schema.json").read_text())
TYPES = {"str": str, "list": list, "dict": dict, "bool": bool, "float": float, "int": int,
         "null": type(None)}


def fx(name):
    return str(FIXTURES / name)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def check_schema(report):
    assert sorted(report) == sorted(GOLDEN) == sorted(cli.REPORT_KEYS)
    for key, spec in GOLDEN.items():
        allowed = tuple(TYPES[t] for t in spec.split("|"))
        assert isinstance(report[key], allowed), key


@pytest.fixture
def base_file(tmp_path):
    def write(text, name="base.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_classify_text(capsys, base_file):
    code, out, _ = run(capsys, "classify", base_file("AND 2 0001\nOR 2 0111\nONE 0 1\nZERO 0 0\n"))
    assert code == 0 and "verdict: LACKS(MONOTONE)" in out
    code, out, _ = run(capsys, "classify", "d")
    assert "LACKS(SELF_DUAL)" in out
    code, out, _ = run(capsys, "classify", "nand")
    assert "FULL(" in out and "complete: yes" in out and "NAND" in out


def test_classify_json(capsys):
    code, report = run_json(capsys, "classify", "gadget-and")
    check_schema(report)
    assert report["result"]["verdict"] == "FULL" and report["result"]["gadget"] == "AND_OR_NOT"
    assert report["result"]["witness"].startswith("inputs n=3 m=0")
    assert list(report["inputs"]) == ["gadget-and"]


def test_closure_listing(capsys):
    code, report = run_json(capsys, "closure", "and", "--arity", "2")
    members = report["result"]["members"]
    assert [m["table"] for m in members if m["arity"] == 2] == ["0001", "0101", "0011"]
    keys = [(m["arity"], int(m["table"][::-1], 2)) for m in members]
    assert keys == sorted(keys)


def test_synthesize(capsys):
    code, out, _ = run(capsys, "synthesize", "nand", "--target", "10:1")
    assert code == 0
    c = parse_circuit(out, load_base("nand"))
    assert c.size == 1 and truth_table(c).bits() == "10"
    code, out, _ = run(capsys, "synthesize", "and", "--target", "0111:2")
    assert code == 0 and "not a member" in out


def test_determinize_end_to_end(capsys, tmp_path):
    dest = tmp_path / "out.circ"
    code, report = run_json(capsys, "determinize", "d", fx("d_not.circ"), "-o", str(dest))
    check_schema(report)
    assert code == 0 and report["oracle_checked"]
    c = parse_circuit(dest.read_text(), load_base("d"))
    assert c.m == 0 and truth_table(c).bits() == "10"
    code, out, _ = run(capsys, "determinize", "and-or-not-free", fx("and_nondet.circ"))
    assert code == 2


def test_determinize_modes(capsys, base_file):
    mono = base_file("AND 2 0001\nOR 2 0111\n")
    code, out, _ = run(capsys, "determinize", mono, fx("or_nondet.circ"), "--mode", "monotone")
    assert code == 0 and truth_table(parse_circuit(out, load_base(mono))).bits() == "11"
    lin = base_file("XOR 2 0110\nXNOR 2 1001\n", "lin.txt")
    code, out, _ = run(capsys, "determinize", lin, fx("xor_nondet.circ"), "--mode", "linear")
    assert code == 0 and truth_table(parse_circuit(out, load_base(lin))).bits() == "11"


def test_refuses_to_write_on_precondition_failure(capsys, tmp_path):
    dest = tmp_path / "out.circ"
    code, report = run_json(capsys, "determinize", "d", fx("d_bad.circ"), "-o", str(dest))
    assert code == 3 and report["status"] == "precondition_error"
    assert report["counterexample"] is not None and len(report["result"]["pair"]) == 2
    assert not dest.exists()


def test_refuses_to_write_on_oracle_failure(capsys, tmp_path, monkeypatch):
    from ndpower import transform

    monkeypatch.setattr(transform, "equiv",
                        lambda *a, **k: EquivResult(False, (1,), 1, 0))
    dest = tmp_path / "out.circ"
    code, report = run_json(capsys, "determinize", "d", fx("d_not.circ"), "-o", str(dest))
    assert code == 4 and report["status"] == "oracle_failure"
    assert report["counterexample"] == [1]
    assert not dest.exists()


def test_lift_reports_contract(capsys):
    code, out, _ = run(capsys, "lift", "gadget-and", fx("gadget_x1.circ"), "--gadget", "and")
    assert code == 0 and "10->c" in out and "11->1" in out and "(checked)" in out
    code, report = run_json(capsys, "lift", "and", fx("and_gate.circ"), "--gadget", "and")
    assert code == 3 and "not in the closure" in report["message"]
    code, report = run_json(capsys, "lift", "gadget-and", fx("gadget_consts.circ"), "--gadget", "and")
    check_schema(report)
    assert code == 0 and report["result"]["contract"]["00"] == "0"
    assert "const" not in report["result"]["netlist"]


def test_noteliminate(capsys):
    code, report = run_json(capsys, "noteliminate", fx("or_via_nots.circ"), "--polarity", "1")
    check_schema(report)
    assert code == 0 and report["result"]["table"] == "e"
    code, report = run_json(capsys, "noteliminate", fx("and_gate.circ"), "--polarity", "1",
                            "--target-base", "gadget-and")
    assert code == 0 and "GAND" in report["result"]["netlist"]
    code, report = run_json(capsys, "noteliminate", fx("or_via_nots.circ"), "--polarity", "1",
                            "--target-base", "gadget-and")
    assert code == 3 and sorted(report["result"]["rows"]) == [[0, 1], [1, 0]]


def test_convert(capsys, base_file):
    code, out, _ = run(capsys, "convert", base_file("AND 2 0001\n"), fx("and_gate.circ"),
                       "--target-base", "nand")
    c = parse_circuit(out, load_base("nand"))
    assert code == 0 and truth_table(c).bits() == "0001" and c.size <= 3
    code, out, _ = run(capsys, "convert", "xor-one", fx("xor_nondet.circ"), "--target-base", "and")
    assert code == 3


def test_eval(capsys):
    lib = "gadget-and"
    code, out, _ = run(capsys, "eval", "and", fx("and_nondet.circ"), "--semantics", "nondet")
    assert code == 0 and out.strip() == "2"
    code, out, _ = run(capsys, "eval", "and", fx("and_nondet.circ"), "--x", "1", "--y", "1")
    assert out.strip() == "1"
    code, report = run_json(capsys, "eval", lib, fx("gadget_x1.circ"))
    check_schema(report)
    assert report["result"]["hex"] == "2"
    code, out, _ = run(capsys, "--bound", "0", "eval", "and", fx("and_nondet.circ"))
    assert code == 3


def test_equiv(capsys, base_file):
    code, out, _ = run(capsys, "equiv", "and", fx("and_nondet.circ"), fx("identity.circ"),
                       "--semantics1", "nondet")
    assert code == 0 and out.strip() == "equal"
    mono = base_file("AND 2 0001\nOR 2 0111\n")
    code, report = run_json(capsys, "equiv", mono, fx("or_nondet.circ"), fx("identity.circ"),
                            "--semantics1", "nondet", "--base2", "and")
    check_schema(report)
    assert report["result"]["equal"] is False and report["counterexample"] == [0]


def test_bound_does_not_leak(capsys):
    import os

    before = os.environ.get("NDPOWER_EXHAUSTIVE_BOUND")
    run(capsys, "--bound", "3", "eval", "and", fx("and_gate.circ"))
    assert os.environ.get("NDPOWER_EXHAUSTIVE_BOUND") == before


def test_parse_errors_exit_two(capsys, base_file, tmp_path):
    bad = tmp_path / "bad.circ"
    bad.write_text("inputs n=1 m=0\na = input 1\ng = FOO a\noutput g\n")
    code, out, err = run(capsys, "eval", "and", str(bad))
    assert code == 2 and "line 3" in err
    code, _, err = run(capsys, "classify", base_file("AND 2 001\n"))
    assert code == 2 and "line 1" in err
    assert cli.main(["nonsense"]) == 2
    capsys.readouterr()
