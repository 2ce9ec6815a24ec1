import json
from pathlib import Path

import pytest

from netinform.cli import main
from netinform.model import load, save_file
from netinform.presets import six_node_network, two_node_network

NETWORKS = Path(__file__).resolve().parent.parent / "networks"
SIX = str(NETWORKS / "six_node.json")


def test_validate_shipped_six_node(capsys):
    assert main(["validate", "--network", SIX]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["validation"]["ok"]


def test_validate_mutated_hollow_violation(tmp_path, capsys):
    doc = json.loads(Path(SIX).read_text())
    doc["modules"][0]["to"] = doc["modules"][0]["from"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    assert main(["validate", "--network", str(p)]) == 1


def test_missing_file_exit_2(capsys):
    assert main(["validate", "--network", "/nonexistent/net.json"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_malformed_document_exit_2(tmp_path, capsys):
    p = tmp_path / "trunc.json"
    p.write_text(Path(SIX).read_text()[:80])
    assert main(["validate", "--network", str(p)]) == 2


def test_check_six_node_satisfied(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["check", "--network", SIX, "--mode", "both",
                 "--grid", "96", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["verdicts"]["generic"]["result"] == "Satisfied"
    assert rep["verdicts"]["numeric"]["result"] == "Satisfied"
    assert rep["schema"] == "netinform-report/1"


def test_check_not_satisfied_exit_1(tmp_path, capsys):
    net, pred = six_node_network(("u5", "u6"))
    p = tmp_path / "net.json"
    save_file(p, net, pred)
    assert main(["check", "--network", str(p), "--mode", "generic"]) == 1


def test_check_grid_zero_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "--network", SIX, "--mode", "numeric", "--grid", "0"])
    assert exc.value.code == 2


def test_separate_predictor_file(tmp_path, capsys):
    net, pred = two_node_network(True, False)
    netfile = tmp_path / "net.json"
    save_file(netfile, net, None)
    from netinform.model import save

    pdoc = {"predictor": save(net, pred)["predictor"]}
    pfile = tmp_path / "pred.json"
    pfile.write_text(json.dumps(pdoc))
    code = main(["check", "--network", str(netfile), "--predictor",
                 str(pfile), "--mode", "generic"])
    assert code == 0


def test_check_without_predictor_errors(tmp_path, capsys):
    net, _ = two_node_network()
    p = tmp_path / "nopred.json"
    save_file(p, net, None)
    assert main(["check", "--network", str(p)]) == 2
    assert "predictor" in capsys.readouterr().err


def test_experiment_runs_zero_empty_report(tmp_path, capsys):
    code = main(["experiment", "--network", SIX, "--N-grid", "2048",
                 "--runs", "0", "--out", str(tmp_path / "exp")])
    assert code == 0
    rep = json.loads((tmp_path / "exp" / "report.json").read_text())
    assert rep["experiment"]["runs"] == 0
    assert (tmp_path / "exp" / "errors.csv").exists()


def test_experiment_unstable_network_exit_1(tmp_path, capsys):
    doc = json.loads(Path(SIX).read_text())
    for m in doc["modules"]:
        if m["from"] == 2 and m["to"] == 1:
            m["den"] = [1.0, -1.4]
            m["num"] = [0.0, 1.5]
    p = tmp_path / "unstable.json"
    p.write_text(json.dumps(doc))
    code = main(["experiment", "--network", str(p), "--N-grid", "2048",
                 "--runs", "1"])
    assert code == 1
    assert "blew up" in capsys.readouterr().err


def test_check_deterministic_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["check", "--network", SIX, "--mode", "generic", "--out", str(a)])
    main(["check", "--network", SIX, "--mode", "generic", "--out", str(b)])
    assert a.read_text() == b.read_text()


def test_sets_command(capsys):
    assert main(["sets", "--network", SIX]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["sets"]["sets"]["D_c"]["members"] == ["w3"]
