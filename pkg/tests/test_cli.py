import io
import json
import shutil
import subprocess

import pytest

from dichroma.cli import main
from dichroma.digraph import read_digraph, read_multidigraph
from dichroma.generators import FIXTURES, sample_directed_configuration


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_blowup_listcheck(tmp_path):
    d, lists = tmp_path / "d.dg", tmp_path / "l.ls"
    assert run("gen", "blowup", "--k", "3", "--t", "2", "--out", str(d), "--lists", str(lists))[0] == 0
    code, out, _ = run("solve", "listcheck", "--in", str(d), "--lists", str(lists))
    assert (code, out) == (0, "NOT L-COLORABLE\n")


def test_listcheck_colorable_and_unknown(tmp_path):
    d, lists = tmp_path / "d.dg", tmp_path / "l.ls"
    run("gen", "fixture", "c3", "--out", str(d))
    lists.write_text("LISTS 3\n0 1\n1 1\n2 2\n")
    assert run("solve", "listcheck", "--in", str(d), "--lists", str(lists))[:2] == (0, "L-COLORABLE\n")
    run("gen", "blowup", "--k", "3", "--t", "2", "--out", str(d), "--lists", str(lists))
    code, out, _ = run("solve", "listcheck", "--in", str(d), "--lists", str(lists), "--budget", "3")
    assert (code, out) == (2, "UNKNOWN\n")


def test_alpha_of_c3(tmp_path):
    path = tmp_path / "c3.dg"
    run("gen", "fixture", "c3", "--out", str(path))
    assert run("solve", "alpha", "--in", str(path))[:2] == (0, "2\n")
    code, out, _ = run("solve", "alpha", "--in", str(path), "--format", "json")
    assert json.loads(out)["alpha"] == 2


def test_short_cycles_on_c5(tmp_path):
    path = tmp_path / "c5.dg"
    run("gen", "fixture", "c5", "--out", str(path))
    code, out, err = run("color", "short-cycles", "--in", str(path), "--verbose")
    assert code == 0
    assert out.startswith("VALID colors=2 ")
    assert "valid" in err


def test_chi_and_degeneracy(tmp_path):
    path = tmp_path / "k4.dg"
    run("gen", "fixture", "k4", "--out", str(path))
    assert run("solve", "chi", "--in", str(path))[:2] == (0, "4\n")
    code, out, _ = run("color", "degeneracy", "--in", str(path), "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["valid"] and payload["bound"] == 4


@pytest.mark.parametrize(
    "gen_args",
    [
        ["config-model", "--n", "8", "--r", "2", "--seed", "4"],
        ["regular", "--n", "9", "--r", "1", "--seed", "4"],
        ["regular", "--n", "9", "--r", "2", "--mode", "multi", "--seed", "4"],
        ["binomial", "--n", "12", "--p", "0.2", "--seed", "4"],
        ["tournament", "--n", "7", "--seed", "4"],
        ["layered", "--n", "12", "--s", "4", "--seed", "4", "--verify-blocks"],
        ["fixture", "paley7"],
    ],
)
def test_round_trip_through_files(tmp_path, gen_args):
    path = tmp_path / "g.txt"
    code, _, _ = run("gen", *gen_args, "--out", str(path))
    assert code == 0
    text = path.read_text()
    g = read_multidigraph(path) if text.startswith("MULTIDIGRAPH") else read_digraph(path)
    code, out, _ = run("analyze", "classify", "--in", str(path))
    assert code == 0 and out.startswith("loops=")
    # the same arguments reproduce the same file
    run("gen", *gen_args, "--out", str(tmp_path / "h.txt"))
    assert (tmp_path / "h.txt").read_text() == text
    assert g.n > 0


def test_config_model_matches_library(tmp_path):
    path = tmp_path / "cm.txt"
    run("gen", "config-model", "--n", "6", "--r", "2", "--seed", "9", "--out", str(path))
    assert read_multidigraph(path) == sample_directed_configuration(6, 2, 9)[1]


def test_analyze_commands(tmp_path):
    path = tmp_path / "c5.dg"
    run("gen", "fixture", "c5", "--out", str(path))
    assert run("analyze", "digirth", "--in", str(path))[1] == "5\n"
    assert run("analyze", "circumference", "--in", str(path))[1] == "5\n"
    assert run("analyze", "cycles", "--in", str(path))[1] == "5\n"
    assert run("analyze", "scc", "--in", str(path))[1] == "0 1 2 3 4\n"
    tt = tmp_path / "tt.dg"
    run("gen", "fixture", "tt4", "--out", str(tt))
    assert run("analyze", "digirth", "--in", str(tt))[1] == "acyclic\n"
    assert run("analyze", "cycles", "--in", str(tt))[1] == "acyclic\n"
    assert run("analyze", "classify", "--in", str(tt))[1] == "loops=0 parallel=0 digons=0 oriented=yes\n"


def test_stdin_input(monkeypatch):
    text = "DIGRAPH 3 3\n0 1\n1 2\n2 0\n"
    assert run("solve", "alpha", stdin=text, monkeypatch=monkeypatch)[1] == "2\n"


def test_gen_to_stdout():
    code, out, _ = run("gen", "fixture", "c3")
    assert code == 0 and out == "DIGRAPH 3 3\n0 1\n1 2\n2 0\n"


def test_invalid_input_exit_1(tmp_path, monkeypatch):
    assert run("analyze", "scc", stdin="garbage\n", monkeypatch=monkeypatch)[0] == 1
    assert run("solve", "alpha", "--in", str(tmp_path / "missing.dg"))[0] == 1
    loops = tmp_path / "loops.txt"
    loops.write_text("MULTIDIGRAPH 2 2\n0 0\n0 1\n")
    assert run("solve", "chi", "--in", str(loops))[0] == 1
    # alpha accepts multidigraphs and skips loop vertices
    assert run("solve", "alpha", "--in", str(loops))[1] == "1\n"


def test_usage_errors_exit_64():
    assert run("bogus")[0] == 64
    assert run("solve", "alpha", "--nope")[0] == 64
    assert run("gen", "fixture", "nonexistent")[0] == 64
    assert run()[0] == 64


def test_budget_exit_2(tmp_path):
    path = tmp_path / "k.dg"
    path.write_text(
        "DIGRAPH 24 " + str(24 * 23) + "\n" + "".join(f"{u} {v}\n" for u in range(24) for v in range(24) if u != v)
    )
    assert run("solve", "alpha", "--in", str(path), "--budget", "3")[0] == 2
    assert run("gen", "regular", "--n", "9", "--r", "4", "--max-tries", "3")[0] == 2


def test_experiment_csv(tmp_path):
    code, out, _ = run("experiment", "orientedness", "--n", "5", "--r", "1", "--samples", "4", "--seed", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kind,n,r,p,sample,seed,stat,value"
    assert len(lines) == 5
    path = tmp_path / "x.csv"
    code, out, err = run(
        "experiment", "abk", "--n", "50", "--r", "2", "--samples", "2", "--out", str(path), "--verbose"
    )
    assert code == 0 and out == "" and path.read_text().startswith("kind,")
    assert "engineering" in err


def test_experiment_is_reproducible():
    args = ("experiment", "r1-cycles", "--n", "30", "--samples", "5", "--seed", "11")
    assert run(*args)[1] == run(*args)[1]


@pytest.mark.skipif(shutil.which("dichroma") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = tmp_path / "c3.dg"
    path.write_text("DIGRAPH 3 3\n0 1\n1 2\n2 0\n")
    proc = subprocess.run(["dichroma", "solve", "alpha", "--in", str(path)], capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (0, "2\n")
    proc = subprocess.run(["dichroma", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 64


def test_fixture_names_match_library():
    code, out, _ = run("gen", "fixture", "paley7")
    assert code == 0 and out.splitlines()[0] == f"DIGRAPH 7 {FIXTURES['paley7']().m}"
