import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from katohodge.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_hodge_two_points(capsys):
    code, out = run(capsys, "hodge", "--input", DATA / "seq_n3_r2.json", "--render")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["betti"]["b"] == [1, 1, 2, 0, 2, 1, 1]
    assert rep["rendered"] == "   1\n  0 1\n 0 2 0\n0 0 0 0\n 0 2 0\n  1 0\n   1\n"
    assert rep["checks"][0]["name"] == "sequence_feasible"
    assert all(c["pass"] for c in rep["checks"])


def test_hodge_infeasible_sequence_exits_one(capsys):
    code, out = run(capsys, "hodge", "--input", DATA / "seq_n3_infeasible.json")
    assert code == EXIT_FAIL
    rep = json.loads(out)
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert [c["name"] for c in failed] == ["sequence_feasible"]
    assert "h(1,2) = -1" in failed[0]["detail"]


@pytest.mark.parametrize("command", ["hodge", "toric", "germ"])
def test_malformed_input_exits_two(tmp_path, capsys, command):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main([command, "--input", str(bad)]) == EXIT_USAGE
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"n": "three"}')
    assert main([command, "--input", str(wrong)]) == EXIT_USAGE
    assert main([command, "--input", str(tmp_path / "missing.json")]) == EXIT_USAGE
    capsys.readouterr()


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["germ", "--input", str(DATA / "germ_sample.json"), "--d", "9"]) == EXIT_USAGE
    assert main(["germ", "--input", str(DATA / "germ_sample.json"), "--terms", "0"]) == EXIT_USAGE
    capsys.readouterr()


def test_toric_script_and_orthant_note(tmp_path, capsys):
    code, out = run(capsys, "toric", "--input", DATA / "toric_n3_r2.json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["betti"]["b"] == [1, 1, 2, 0, 2, 1, 1]
    assert "matches_point_blowups" in {c["name"] for c in rep["checks"]}
    orthant = tmp_path / "orthant.json"
    orthant.write_text('{"n": 3, "subdivide": []}')
    code, out = run(capsys, "toric", "--input", orthant)
    rep = json.loads(out)
    assert code == EXIT_OK and any("trivial" in note for note in rep["notes"])


def test_toric_boundary_subdivision_fails(tmp_path, capsys):
    path = tmp_path / "boundary.json"
    path.write_text('{"n": 3, "subdivide": [[0, 1, 2], [0, 1]]}')
    code, out = run(capsys, "toric", "--input", path)
    assert code == EXIT_FAIL
    assert "orthant" in next(c for c in json.loads(out)["checks"] if c["name"] == "toric_numbers")["detail"]


def test_germ_sample(capsys):
    code, out = run(capsys, "germ", "--input", DATA / "germ_sample.json", "--d", "2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert all(c["pass"] for c in rep["checks"])
    sol = {(tuple(t["index"]), tuple(t["exponents"])): t["coeff"] for t in rep["neumann"]["exact_solution"]["terms"]}
    assert sol == {((0,), (0, 0, 0)): {"re": "2", "im": "0"}, ((1,), (0, 1, 0)): {"re": "9/8", "im": "0"}}


def test_germ_functions_and_non_contraction(capsys):
    code, out = run(capsys, "germ", "--input", DATA / "germ_half.json", "--p", "0", "--d", "2", "--terms", "30")
    rep = json.loads(out)
    # 30 terms leave an error of 2^-29 > 1e-9
    assert code == EXIT_FAIL
    assert [c["name"] for c in rep["checks"] if not c["pass"]] == ["neumann_matches_exact"]
    code, _ = run(capsys, "germ", "--input", DATA / "germ_half.json", "--p", "0", "--d", "2", "--terms", "40")
    assert code == EXIT_OK
    code, out = run(capsys, "germ", "--input", DATA / "germ_not_contracting.json")
    assert code == EXIT_FAIL
    assert not next(c for c in json.loads(out)["checks"] if c["name"] == "first_order_contraction")["pass"]


@pytest.mark.parametrize(
    "argv",
    [
        ["hodge", "--input", DATA / "seq_n4_elliptic.json"],
        ["toric", "--input", DATA / "toric_n3_line.json", "--render"],
        ["germ", "--input", DATA / "germ_twentieth.json", "--d", "2"],
    ],
)
def test_output_is_byte_identical(tmp_path, argv):
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.json"
        assert main([str(a) for a in argv] + ["--output", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_builtin_and_reproducible(tmp_path):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for path in paths:
        assert main(["verify", "--seed", "42", "--germ-count", "3", "--output", str(path)]) == EXIT_OK
    text = paths[0].read_text()
    assert text == paths[1].read_text()
    lines = text.splitlines()
    assert all(line.startswith("PASS ") for line in lines)
    names = [line.split()[1].rstrip(":") for line in lines]
    assert names == sorted(names)
    assert any(name.startswith("germs/") for name in names)


def test_verify_flags_corrupted_corpus(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    shutil.copytree(DATA / "corpus", corpus)
    case = json.loads((corpus / "points_n3_r2.json").read_text())
    case["expected"]["betti"]["b"] = [1, 1, 3, 0, 3, 1, 1]
    (corpus / "points_n3_r2.json").write_text(json.dumps(case))
    (corpus / "broken.json").write_text("[")
    code = main(["verify", "--input", str(corpus), "--germ-count", "0"])
    out = capsys.readouterr().out
    assert code == EXIT_FAIL
    failed = {line.split()[1].rstrip(":") for line in out.splitlines() if line.startswith("FAIL")}
    assert "corpus/points_n3_r2/matches_expected" in failed
    assert any(name.startswith("corpus/broken") for name in failed)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "katohodge", "hodge", "--input", str(DATA / "seq_n3_r2.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["hodge"]["n"] == 3
