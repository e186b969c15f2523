import json
from pathlib import Path

import pytest

from stickermc.cli import main

DATA = Path(__file__).parent / "data"
M1 = str(Path(__file__).parents[1] / "src" / "stickermc" / "data" / "m1.lfsa")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("formula,answer,code", [
    ("A p U q", "no", 1), ("AF p", "yes", 0), ("AG p", "no", 1), ("AX p", "no", 1),
    ("E p U q", "no", 1), ("EF p", "yes", 0), ("EG p", "no", 1), ("EX p", "no", 1),
])
def test_check_reference_verdicts(capsys, formula, answer, code):
    rc, out, _ = run(capsys, "check", "--model", M1, "--formula", formula)
    assert rc == code
    assert out.splitlines()[-1].split() == ["answer", answer]


def test_check_json_report(capsys):
    rc, out, _ = run(capsys, "check", "--model", M1, "--formula", "AF p", "--report", "json")
    assert rc == 0
    report = json.loads(out)
    assert report["answer"] == "yes"
    assert report["bound"] == 15 and report["runsChecked"] == len(report["perRun"]) == 8
    assert report["reduction"] == {"obligation": "F p", "negate": False}
    # canonical key order: re-emitting is byte-stable
    assert json.dumps(report, sort_keys=True, indent=2) + "\n" == out


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "check", "--model", "m1", "--formula", "EF p")
    _, js, _ = run(capsys, "check", "--model", "m1", "--formula", "EF p", "--report", "json")
    report = json.loads(js)
    assert f"runs checked {report['runsChecked']}" in text
    assert text.rstrip().endswith(report["answer"])


def test_check_writes_artifacts(capsys, tmp_path):
    rc, out, _ = run(capsys, "check", "--model", M1, "--formula", "E p U q", "--report", "json",
                     "--artifacts", str(tmp_path))
    report = json.loads(out)
    lib = Path(report["dnaArtifacts"]["library"]).read_text()
    assert ">t0s0 3to5\nAACGTTCCGTCGCTT\n" in lib


@pytest.mark.parametrize("argv", [
    ["check", "--model", M1, "--formula", "AF (p"],
    ["check", "--model", "/nonexistent.lfsa", "--formula", "AF p"],
    ["check", "--model", str(DATA / "planted-collision.ct"), "--formula", "AF p"],
    ["check", "--formula", "AF p"],
    ["simulate", "--formula-fsa", "phi1", "--path", "1", "--groups", "9"],
    ["audit", "--table", "/nonexistent.ct"],
])
def test_usage_errors_exit_2(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2 and err


def test_encode_reference_library(capsys):
    rc, out, _ = run(capsys, "encode", "--formula", "E p U q", "--table", "tab3")
    assert rc == 0
    assert ">t0s0 3to5\nAACGTTCCGTCGCTT\n" in out


def test_encode_word(capsys):
    _, out, _ = run(capsys, "encode", "--word", "s,u,q", "--table", "tab3")
    seq = out.splitlines()[-1]
    assert len(seq) == 65 and seq.startswith("GCCA") and seq.endswith("CGTC")


def test_encode_generated_is_deterministic(capsys):
    _, a, _ = run(capsys, "encode", "--formula", "AG p", "--generate", "--seed", "7")
    _, b, _ = run(capsys, "encode", "--formula", "AG p", "--generate", "--seed", "7")
    assert a == b and ">init-g0" in a


def test_simulate_ten_groups(capsys):
    rc, out, _ = run(capsys, "simulate", "--model", M1, "--formula-fsa", "phi1", "--path", "1", "--groups", "3")
    rows = [l for l in out.splitlines() if l.startswith("group")]
    assert rc == 0 and len(rows) == 10
    complete = [r for r in rows if " complete " in r]
    assert len(complete) == 1 and "t0s0,t0u1,t1q2" in complete[0]


def test_simulate_no_stickers(capsys):
    rc, out, _ = run(capsys, "simulate", "--formula-fsa", "phi1", "--path", "1", "--groups", "0")
    assert rc == 1 and "incomplete" in out


def test_simulate_long_path(capsys):
    rc, out, _ = run(capsys, "simulate", "--model", M1, "--formula-fsa", "phi1", "--path", "15")
    assert rc == 0 and " complete " in out


def test_oracle_all_constructs(capsys):
    rc, out, _ = run(capsys, "oracle", "--model", M1, "--all-constructs")
    rows = out.splitlines()[1:]
    assert rc == 0 and len(rows) == 8
    assert all(r.split()[-1] == "yes" for r in rows)


def test_audit_reports(capsys):
    rc, out, _ = run(capsys, "audit", "--table", "tab3", "--min-hit", "7")
    assert rc == 1 and "I1+3 ~ C(p)+2" in out
    rc, out, _ = run(capsys, "audit", "--table", str(DATA / "planted-collision.ct"), "--min-hit", "4")
    assert rc == 1 and "I1" in out and "C(q)" in out
