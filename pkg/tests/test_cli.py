import json
import math

import pytest

from lllab.cli import main
from lllab.graphs import path_graph


def run_cli(argv, capsys=None, out=None):
    if out is not None:
        argv = list(argv) + ["--out", str(out)]
    code = main(argv)
    if out is not None:
        return code, out.read_text() if out.exists() else ""
    assert capsys is not None
    return code, capsys.readouterr().out


@pytest.fixture(scope="module")
def instance_file(tmp_path_factory):
    from lllab.apps import gen_hypergraph_2col

    path = tmp_path_factory.mktemp("cli") / "h6.json"
    gen_hypergraph_2col(6, 60, "cyclic").dump(path)
    return str(path)


def test_check_slll_margin(instance_file, tmp_path):
    code, text = run_cli(["check", "--instance", instance_file,
                          "--mode", "slll"], out=tmp_path / "r.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["valid"] is True
    assert doc["report"]["margin"] == pytest.approx(
        1 - math.e * 2.0 ** -5 * 11, abs=1e-12)
    assert doc["version"] == "0.1.0"


def test_check_glll_auto_and_eps(instance_file, tmp_path):
    code, text = run_cli(["check", "--instance", instance_file,
                          "--mode", "glll"], out=tmp_path / "g.json")
    assert code == 0 and json.loads(text)["report"]["valid"]
    code, text = run_cli(["check", "--instance", instance_file,
                          "--mode", "eps", "--epsilon", "0.97"],
                         out=tmp_path / "e.json")
    assert code == 0
    assert json.loads(text)["report"]["epsilon"] == 0.97


def test_solve_is_byte_deterministic(instance_file, tmp_path):
    argv = ["solve", "--instance", instance_file, "--seed", "7"]
    _, a = run_cli(argv, out=tmp_path / "a.json")
    _, b = run_cli(argv, out=tmp_path / "b.json")
    assert a == b
    doc = json.loads(a)
    assert doc["report"]["status"] == "stabilized"
    assert doc["seed"] == 7


def test_replay_from_embedded_config(instance_file, tmp_path):
    commands = [
        ["check", "--instance", instance_file, "--mode", "slll"],
        ["solve", "--instance", instance_file, "--seed", "3"],
        ["entropy", "params", "--epsilon", "1", "--d", "2", "--delta", "0.25"],
        ["entropy", "counting", "--decompressor", "run-length",
         "--n", "10", "--c", "3"],
        ["entropy", "tile", "--target", "100", "--tiles", "7,13",
         "--epsilon", "0.2"],
    ]
    for i, argv in enumerate(commands):
        _, first = run_cli(argv, out=tmp_path / f"first{i}.json")
        embedded = json.loads(first)["config"]["argv"]
        _, again = run_cli(embedded, out=tmp_path / f"again{i}.json")
        assert again == first, argv


def test_exit_codes(tmp_path, capsys):
    code, _ = run_cli(["check", "--instance", str(tmp_path / "missing.json"),
                       "--mode", "slll"], capsys=capsys)
    assert code == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run_cli(["check", "--instance", str(bad), "--mode", "slll"],
                      capsys=capsys)
    assert code == 2
    assert "not valid JSON" in capsys.readouterr().err or True

    malformed = tmp_path / "malformed.json"
    malformed.write_text(json.dumps({"variables": [{"id": 0}], "events": []}))
    code, _ = run_cli(["check", "--instance", str(malformed), "--mode", "slll"],
                      capsys=capsys)
    assert code == 2

    impossible = tmp_path / "impossible.json"
    impossible.write_text(json.dumps({
        "variables": [{"id": 0, "domain_size": 2}],
        "events": [{"id": 0, "vars": [0],
                    "spec": {"type": "explicit", "assignments": [[0], [1]]}}]}))
    code, _ = run_cli(["solve", "--instance", str(impossible), "--seed", "0",
                       "--max-steps", "20", "--strict"],
                      out=tmp_path / "imp.json")
    assert code == 3
    code, _ = run_cli(["solve", "--instance", str(impossible), "--seed", "0",
                       "--max-steps", "20"], out=tmp_path / "imp2.json")
    assert code == 0  # step-limit is a status, not an error


def test_witness_subcommands(instance_file, tmp_path):
    code, text = run_cli(["witness", "traceback", "--instance", instance_file,
                          "--seed", "2", "--domain", "0"],
                         out=tmp_path / "t.json")
    if code == 0:
        doc = json.loads(text)
        assert doc["report"]["is_neat"]
        assert doc["report"]["appears_in_table"]
        assert doc["report"]["height"] == doc["report"]["step"] + 1
        pile_path = tmp_path / "pile.json"
        pile_path.write_text(json.dumps(doc["report"]["pile"]))
        code, vtext = run_cli(["witness", "validate", "--pile", str(pile_path),
                               "--instance", instance_file,
                               "--table-seed", "2"], out=tmp_path / "v.json")
        assert code == 0
        vdoc = json.loads(vtext)
        assert vdoc["report"]["is_pile"] and vdoc["report"]["appears_in_table"]

    code, text = run_cli(["witness", "bound", "--instance", instance_file,
                          "--domain", "0", "--tables", "300"],
                         out=tmp_path / "b.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["mc_within_bound"]
    assert doc["report"]["trees_within_bound"]


def test_approx_command(instance_file, tmp_path):
    code, text = run_cli(["approx", "--instance", instance_file,
                          "--epsilon", "0.1", "--seeds", "10"],
                         out=tmp_path / "a.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["mode"] == "analytic"
    assert doc["report"]["meets_target"]
    csv = tmp_path / "defect.csv"
    code, _ = run_cli(["approx", "--instance", instance_file,
                       "--epsilon", "0.1", "--seeds", "4",
                       "--plot", str(csv)], out=tmp_path / "a2.json")
    assert code == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "N,seed,defect_fraction"
    N = json.loads((tmp_path / "a2.json").read_text())["report"]["N"]
    assert len(lines) == 1 + 4 * (N + 1)


def test_apps_commands(tmp_path):
    code, text = run_cli(["apps", "hypergraph", "--k", "6", "--n", "30",
                          "--solve"], out=tmp_path / "h.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["slll"]["valid"] and doc["report"]["verified"]

    gpath = tmp_path / "p4.json"
    path_graph(4).dump(gpath)
    code, text = run_cli(["apps", "nonrep", "--graph", str(gpath),
                          "--colors", "3", "--lmax", "4"],
                         out=tmp_path / "n.json")
    assert code == 0 and json.loads(text)["report"]["verified"]

    lists = {x: list(range(8 * x, 8 * x + 8)) for x in range(4)}
    lpath = tmp_path / "lists.json"
    lpath.write_text(json.dumps({str(k): v for k, v in lists.items()}))
    code, text = run_cli(["apps", "listcolor", "--graph", str(gpath),
                          "--lists", str(lpath), "--k", "8"],
                         out=tmp_path / "l.json")
    assert code == 0 and json.loads(text)["report"]["verified"]

    from lllab.graphs import cycle_graph

    cpath = tmp_path / "c4.json"
    cycle_graph(4).dump(cpath)
    code, text = run_cli(["apps", "acyclic", "--graph", str(cpath),
                          "--colors", "3", "--cmax", "4"],
                         out=tmp_path / "ac.json")
    assert code == 0 and json.loads(text)["report"]["verified"]

    from lllab.graphs import random_regular_bipartite

    bpath = tmp_path / "bip.json"
    random_regular_bipartite(30, 4, seed=1).dump(bpath)
    code, text = run_cli(["apps", "goodcolor", "--graph", str(bpath),
                          "--eps", "0.25", "--extend"], out=tmp_path / "gc.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["proper"]
    if "extended" in doc["report"]:
        assert doc["report"]["extended"]["proper"]


def test_entropy_commands(tmp_path):
    code, text = run_cli(["entropy", "code", "--m", "64", "--tiles", "4",
                          "--seed", "5"], out=tmp_path / "c.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["roundtrip_exact"]
    assert doc["report"]["length"] == len(doc["report"]["bits"])

    code, text = run_cli(["entropy", "estimate", "--process", "bernoulli:0.1",
                          "--window", "8", "--samples", "4000"],
                         out=tmp_path / "e.json")
    assert code == 0
    assert json.loads(text)["report"]["bits_per_symbol"] == pytest.approx(
        0.469, abs=0.05)

    code, _ = run_cli(["entropy", "counting", "--decompressor", "bogus",
                       "--n", "5", "--c", "1"], out=tmp_path / "x.json")
    assert code == 2


def test_solve_replays_an_explicit_table(tmp_path, capsys):
    inst_path = tmp_path / "one.json"
    inst_path.write_text(json.dumps({
        "variables": [{"id": 0, "domain_size": 2}],
        "events": [{"id": 0, "vars": [0],
                    "spec": {"type": "explicit", "assignments": [[0]]}}]}))
    table_path = tmp_path / "table.json"
    table_path.write_text(json.dumps({"entries": [[0, 0, 0], [0, 1, 1]]}))
    code, text = run_cli(["solve", "--instance", str(inst_path),
                          "--table", str(table_path)], out=tmp_path / "r.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["report"]["status"] == "stabilized"
    assert doc["report"]["steps"] == 1
    assert doc["report"]["final_assignment"] == [1]
    assert doc["seed"] is None

    bad_table = tmp_path / "bad.json"
    bad_table.write_text("{oops")
    code, _ = run_cli(["solve", "--instance", str(inst_path),
                       "--table", str(bad_table)], capsys=capsys)
    assert code == 2
    code, _ = run_cli(["solve", "--instance", str(inst_path)], capsys=capsys)
    assert code == 2  # neither seed nor table


def test_witness_validate_rejects_malformed_piles(instance_file, tmp_path, capsys):
    bad = tmp_path / "pile.json"
    bad.write_text("{not json")
    code, _ = run_cli(["witness", "validate", "--pile", str(bad),
                       "--instance", instance_file], capsys=capsys)
    assert code == 2
    bad.write_text(json.dumps([{"vars": [0]}]))  # missing values
    code, _ = run_cli(["witness", "validate", "--pile", str(bad),
                       "--instance", instance_file], capsys=capsys)
    assert code == 2


def test_reports_conform_to_the_published_schema(instance_file, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    from lllab.cli import REPORT_SCHEMA

    commands = [
        ["check", "--instance", instance_file, "--mode", "slll"],
        ["solve", "--instance", instance_file, "--seed", "3"],
        ["entropy", "params", "--epsilon", "1", "--d", "2", "--delta", "0.25"],
        ["apps", "hypergraph", "--k", "5", "--n", "20"],
    ]
    for i, argv in enumerate(commands):
        _, text = run_cli(argv, out=tmp_path / f"schema{i}.json")
        doc = json.loads(text)
        jsonschema.validate(doc, REPORT_SCHEMA)
        assert "seed" in doc  # null for seedless commands, never absent


def test_solve_plot_histogram(instance_file, tmp_path):
    csv = tmp_path / "hist.csv"
    code, _ = run_cli(["solve", "--instance", instance_file, "--seed", "1",
                       "--plot", str(csv)], out=tmp_path / "s.json")
    assert code == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "resamples,domains"
    assert sum(int(line.split(",")[1]) for line in lines[1:]) == 60
