import json
import time

import pytest

from umvue import io
from umvue.cli import run
from umvue.generators import example1


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return {
        "p1": write("p1.json", io.model_to_json(example1("P1"))),
        "p2": write("p2.json", io.model_to_json(example1("P2"))),
        "t5559": write("t.json", {"values": ["5", "5", "5", "9"]}),
        "t0100": write("u.json", {"values": ["0", "1", "0", "0"]}),
        "t7710": write("w.json", {"values": ["7", "7", "1", "0"]}),
        "neg": write("neg.json", {"pmf_rows": [["3/2", "-1/2"]]}),
        "bad": write("bad.json", {"pmf_rows": [["1/2", "0.5"]]}),
        "dir": tmp_path,
    }


def test_check_umvue_exit_codes(files, capsys):
    assert run(["check-umvue", "--model", files["p1"], "--statistic", files["t5559"]]) == 0
    assert run(["check-umvue", "--model", files["p1"], "--statistic", files["t0100"], "--json"]) == 1
    out = capsys.readouterr().out
    assert json.loads(out[out.index("{"):])["witness"] == ["1", "2", "3"]
    assert run(["oracle", "--model", files["p1"], "--statistic", files["t0100"]]) == 1


def test_invalid_inputs_exit_2(files, capsys):
    assert run(["check-umvue", "--model", files["neg"], "--statistic", files["t5559"]]) == 2
    assert "negative" in capsys.readouterr().err
    assert run(["validate", "--model", files["bad"]]) == 2
    assert "pmf_rows[0][1]" in capsys.readouterr().err
    assert run(["validate", "--model", str(files["dir"] / "missing.json")]) == 2
    assert run(["check-umvue", "--model", files["p1"]]) == 2
    assert run(["frobnicate"]) == 2


def test_sigma0_json(files, capsys):
    assert run(["sigma0", "--model", files["p2"], "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["blocks"] == [["1", "2"], ["3"], ["4"]]


def test_complete_and_sufficient(files):
    assert run(["complete", "--model", files["p1"], "--statistic", files["t5559"]]) == 0
    assert run(["sufficient", "--model", files["p1"], "--statistic", files["t5559"]]) == 1


def test_certificate_round_trip(files, capsys):
    out = str(files["dir"] / "cert.json")
    assert run(["certificate", "--model", files["p2"], "--statistic", files["t7710"], "--out", out]) == 0
    assert run(["certificate", "--model", files["p2"], "--verify", out]) == 0
    doc = json.loads(open(out).read())
    doc["lambda"] = [["1", "0"], ["0", "1"]]
    (files["dir"] / "cert.json").write_text(json.dumps(doc))
    assert run(["certificate", "--model", files["p2"], "--verify", out]) == 1
    assert run(["certificate", "--model", files["p1"], "--statistic", files["t0100"]]) == 1
    assert "not a UMVUE" in capsys.readouterr().out


def test_construct_and_rao_blackwell(files, capsys):
    target = str(files["dir"] / "b.json")
    (files["dir"] / "b.json").write_text(json.dumps({"values": ["1", "1"]}))
    out = str(files["dir"] / "s.json")
    assert run(["construct", "--model", files["p1"], "--target", target, "--out", out]) == 0
    assert json.loads(open(out).read())["values"] == ["1", "1", "1", "0"]
    model = str(files["dir"] / "bern.json")
    stat = str(files["dir"] / "sum.json")
    assert run(["gen", "bernoulli", "--n", "2", "--grid", "1/4,1/2,3/4", "--out", model,
                "--statistic-out", stat]) == 0
    first = str(files["dir"] / "first.json")
    (files["dir"] / "first.json").write_text(json.dumps({"values": ["0", "0", "1", "1"]}))
    capsys.readouterr()
    assert run(["rao-blackwell", "--model", model, "--statistic", first, "--sufficient", stat, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["statistic"] == ["0", "1/2", "1/2", "1"]
    assert run(["rao-blackwell", "--model", files["p1"], "--statistic", files["t0100"],
                "--sufficient", files["t5559"]]) == 2


def test_ubue_verb(files, capsys):
    assert run(["ubue", "--model", files["p1"], "--statistic", files["t0100"], "--directions", "5"]) == 1
    assert run(["ubue", "--model", files["p2"], "--statistic", files["t7710"], "--loss", "exponential",
                "--json"]) == 0
    out = capsys.readouterr().out
    report = json.loads(out[out.index("{"):])
    assert report["arithmetic_downgraded"] is True
    assert report["derivative_implication"]["decision"] == "yes"
    assert run(["ubue", "--model", files["p1"], "--statistic", files["t0100"], "--radius", "1/0"]) == 2


def test_gen_example1_stdout(capsys):
    assert run(["gen", "example1", "--which", "P2"]) == 0
    assert io.model_from_json(json.loads(capsys.readouterr().out)).rows == example1("P2").rows


def test_selftest_small_scale(files, capsys):
    t0 = time.perf_counter()
    assert run(["selftest", "--models", "10", "--max-samples", "4",
                "--counterexample-dir", str(files["dir"])]) == 0
    assert time.perf_counter() - t0 < 1.0
    assert "all suites pass" in capsys.readouterr().out


def test_selftest_reports_injected_bug(files, monkeypatch, capsys):
    from umvue import selftest
    from umvue.characterize import Decision

    monkeypatch.setattr(selftest, "is_umvue_oracle", lambda m, T: Decision(True))
    outdir = files["dir"] / "cx"
    assert run(["selftest", "--models", "20", "--seed", "1", "--counterexample-dir", str(outdir)]) == 1
    written = list(outdir.glob("counterexample-equivalence-*.json"))
    assert written
    io.model_from_json(json.loads(written[0].read_text()))
    assert "DISAGREEMENTS FOUND" in capsys.readouterr().out
