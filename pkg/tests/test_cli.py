from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from hallbridge.bridgeland import BridgelandElement
from hallbridge.cli import build_parser, main, run
from hallbridge.hall import HallElement
from hallbridge.quiver import load_algebra
from hallbridge.verify import Session

from conftest import ROOT

ALGEBRAS = ROOT / "algebras"
GOLDEN = ROOT / "golden"

# (algebra, command name, argument list)
GOLDEN_CASES = [
    ("a2", "catalog", ["--bound", "2,2", "catalog"]),
    ("a2", "hom", ["hom", "P1", "S1"]),
    ("a2", "ext", ["ext", "S1", "S2"]),
    ("a2", "resolve", ["resolve", "S1"]),
    ("a2", "hall", ["hall", "S1", "S2"]),
    ("a2", "e", ["e", "S1"]),
    ("a2", "dh2", ["dh2", "S1", "S2"]),
    ("a2", "phi-check", ["--bound", "2,2", "phi-check"]),
    ("a2", "psi-check", ["--bound", "2,2", "psi-check"]),
    ("a2", "serre", ["serre", "1", "2"]),
    ("a2", "counts", ["counts", "S1", "S1"]),
    ("a2", "thm37", ["thm37", "S1", "S2"]),
    ("a2", "verify-all", ["--bound", "2,2", "verify-all"]),
    ("a2_q3", "hall", ["hall", "S1", "S2"]),
    ("a2_q3", "serre", ["serre", "2", "1"]),
    ("a3rad2", "serre", ["serre", "1", "2"]),
    ("a3rad2", "dh2", ["dh2", "S1", "S2"]),
    ("a4rad2", "ext", ["ext", "S1", "S4"]),
    ("a4rad2", "resolve", ["resolve", "S1"]),
    ("a4rad2", "thm37", ["thm37", "S1", "S4"]),
    ("a4rad2", "counts", ["counts", "S1", "S4"]),
]


def invoke(algebra: str, args: list[str], as_json: bool = True) -> tuple[int, str]:
    argv = ["--algebra", str(ALGEBRAS / f"{algebra}.alg")] + (["--json"] if as_json else []) + args
    ns = build_parser().parse_args(argv)
    out = io.StringIO()
    return run(ns, out), out.getvalue()


def regenerate() -> None:
    for algebra, name, args in GOLDEN_CASES:
        code, text = invoke(algebra, args)
        path = GOLDEN / algebra / f"{name}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        record = {"args": args, "exit": code, "output": json.loads(text)}
        path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


@pytest.mark.parametrize("algebra, name, args", GOLDEN_CASES, ids=[f"{a}-{n}" for a, n, _ in GOLDEN_CASES])
def test_golden(algebra, name, args):
    record = json.loads((GOLDEN / algebra / f"{name}.json").read_text())
    assert record["args"] == args
    code, text = invoke(algebra, args)
    assert code == record["exit"]
    assert json.loads(text) == record["output"]


def test_hall_example_output():
    code, text = invoke("a2", ["hall", "S1", "S2"])
    terms = {t["class_id"]: t["coeff"] for t in json.loads(text)}
    assert code == 0
    # v^-1 = sqrt(2)/2 and v^-1 (q - 1) at q = 2
    assert terms == {"1,1#0": {"a": "0/1", "b": "1/2"}, "1,1#1": {"a": "0/1", "b": "1/2"}}


def test_negative_comparison_output():
    code, text = invoke("a4rad2", ["thm37", "S1", "S4"])
    report = json.loads(text)
    assert code == 0
    assert report["equal"] is False and report["ext_high"] == [1] and report["w0"] == 1


def test_verify_all_passes_on_a2():
    code, text = invoke("a2", ["verify-all", "--bound", "2,2"], as_json=False)
    assert code == 0
    assert text.rstrip().endswith("overall: PASS")


def test_hall_json_round_trip():
    _, text = invoke("a2", ["--bound", "2,2", "hall", "S1", "1,1#1"])
    data = json.loads(text)
    assert HallElement.from_json(data, 2).to_json() == data


def test_dh2_json_round_trip():
    alg = load_algebra(ALGEBRAS / "a3rad2.alg")
    s = Session(alg, (1, 1, 1))
    x = s.br.product(s.br.e_element(s.select("S1")), s.br.e_element(s.select("S2")))
    data = json.loads(json.dumps(x.to_json(s.cc)))
    assert BridgelandElement.from_json(data, s.cc).to_json(s.cc) == data


@pytest.mark.parametrize("args", [
    ["hom", "X1", "S1"],
    ["hom", "S9", "S1"],
    ["--bound", "1", "catalog"],
    ["--bound", "1,1", "hall", "S1", "S1"],
    ["ext", "1,1#7", "S1"],
    ["serre", "1", "1"],
    ["phi-check", "S1"],
])
def test_input_errors_exit_2(args, capsys):
    argv = ["--algebra", str(ALGEBRAS / "a2.alg")] + args
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_missing_algebra_file(tmp_path, capsys):
    assert main(["--algebra", str(tmp_path / "none.alg"), "catalog"]) == 2


def test_malformed_algebra_file(tmp_path):
    bad = tmp_path / "loop.alg"
    bad.write_text("q = 2\nvertices = 1\narrow x 1 1\n")
    assert main(["--algebra", str(bad), "catalog"]) == 2


def test_failed_check_exits_1(monkeypatch):
    import hallbridge.cli as cli
    from hallbridge.bridgeland import compare_products

    def broken(br, a, b):
        rep = compare_products(br, a, b)
        rep.equal = not rep.equal
        return rep

    monkeypatch.setattr(cli, "compare_products", broken)
    code, text = invoke("a2", ["thm37", "S1", "S2"], as_json=False)
    assert code == 1
    assert "lhs:" in text and "rhs:" in text


def test_serre_outside_asserted_range_is_reported(tmp_path):
    # an extra arrow 1 -> 4 beside the rad^2 = 0 chain: S1, S4 are joined by an arrow yet Ext^3(S1, S4) != 0
    alg = tmp_path / "chord.alg"
    alg.write_text("q = 2\nvertices = 4\narrow a1 1 2\narrow a2 2 3\narrow a3 3 4\narrow b 1 4\n"
                   "relation a1 a2\nrelation a2 a3\n")
    ns = build_parser().parse_args(["--algebra", str(alg), "--json", "serre", "1", "4"])
    out = io.StringIO()
    assert run(ns, out) == 0
    report = json.loads(out.getvalue())
    assert report["N"] == 3 and report["hall_zero"] and not report["dh2_zero"] and not report["asserted"]
    code, _ = invoke("a2", ["serre", "1", "2", "--form", "binomial"])
    assert code == 0


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "hallbridge.cli", "--algebra", str(ALGEBRAS / "a2.alg"),
                           "ext", "S1", "S2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "dim Ext^1(1,0#0, 0,1#0) = 1" in proc.stdout


if __name__ == "__main__" and "--regen" in sys.argv:
    regenerate()
