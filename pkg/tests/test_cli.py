from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from quiverjet import cli
from quiverjet.quiver import Quiver


@pytest.fixture
def files(tmp_path):
    a2 = tmp_path / "a2.json"
    a2.write_text(json.dumps({"vertices": ["a", "b"], "arrows": [{"src": "a", "tgt": "b"}]}))
    s2 = tmp_path / "s2.json"
    s2.write_text(json.dumps({"vertices": ["v"], "arrows": [{"src": "v", "tgt": "v"}] * 2}))
    tn2 = tmp_path / "tn2.json"
    tn2.write_text(json.dumps({"vertices": ["x", "y"],
                               "arrows": [{"src": "x", "tgt": "x"}] * 2 + [{"src": "y", "tgt": "y"}] * 2
                               + [{"src": "x", "tgt": "y"}]}))
    return {"a2": str(a2), "s2": str(s2), "tn2": str(tn2), "dir": tmp_path}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_quiver_and_dim(files):
    Q = cli.parse_quiver(files["s2"])
    assert len(Q) == 1 and Q.loop_counts == (2,)
    T = cli.parse_quiver(files["tn2"])
    assert cli.parse_dim("2,1", T) == (2, 1)
    assert cli.parse_dim("y=1,x=2", T) == (2, 1)
    assert cli.parse_dim("y=1", T) == (0, 1)
    with pytest.raises(cli.CliError) as exc:
        cli.parse_dim("z=1", T)
    assert exc.value.code == "unknown-vertex"
    with pytest.raises(cli.CliError):
        cli.parse_dim("1", T)


def test_parse_quiver_errors(tmp_path):
    bad = tmp_path / "dup.json"
    bad.write_text(json.dumps({"vertices": ["a", "a"], "arrows": []}))
    with pytest.raises(cli.CliError, match="duplicate"):
        cli.parse_quiver(str(bad))
    broken = tmp_path / "broken.json"
    broken.write_text('{"vertices": ["a",\n  }')
    with pytest.raises(cli.CliError, match="line 2"):
        cli.parse_quiver(str(broken))
    noarrow = tmp_path / "noarrow.json"
    noarrow.write_text(json.dumps({"vertices": ["a"], "arrows": [{"src": "a"}]}))
    with pytest.raises(cli.CliError, match=r"arrows\[0\]"):
        cli.parse_quiver(str(noarrow))


def test_check(capsys, files):
    code, out, _ = run(capsys, "check", files["tn2"], "--dim", "2,1")
    rep = json.loads(out)
    assert code == 0
    for key in ("totally_negative", "property_P", "fundamental_domain", "simple_exists", "bridges"):
        assert key in rep
    assert rep["property_P"] is True and rep["bridges"] == [["x", "y"]]
    assert rep["quiver_hash"] == Quiver.from_json(json.loads(Path(files["tn2"]).read_text())).canonical_hash


def test_count_csv(capsys, files):
    code, out, _ = run(capsys, "count", files["a2"], "--dim", "1,1", "--q", "2", "--n", "3", "--emit", "csv")
    assert code == 0
    assert out.splitlines() == ["n,count,normalized_num,normalized_den", "1,3,3,2", "2,8,2,1", "3,20,5,2"]


def test_count_json_and_cache(capsys, files):
    cache = files["dir"] / "c.jsonl"
    code, out, _ = run(capsys, "count", files["s2"], "--dim", "2", "--q", "2", "--n", "1",
                       "--method", "brute", "--cache", str(cache))
    assert code == 0 and json.loads(out)["records"][0]["count"] == 11776
    assert cache.exists()


def test_types_aux_bounds(capsys, files):
    code, out, _ = run(capsys, "types", files["s2"], "--dim", "2")
    assert json.loads(out)["count"] == 3
    code, out, _ = run(capsys, "aux", files["s2"], "--type", '[{"dim": {"v": 1}, "mult": 2}]')
    rep = json.loads(out)
    assert rep["e"] == [2] and len(rep["aux_quiver"]["arrows"]) == 2
    code, out, _ = run(capsys, "bounds", files["tn2"], "--dim", "2,1", "--mustata", "3")
    rep = json.loads(out)
    assert code == 0 and rep["totneg_lemma"]["margin"] == 1 and rep["mustata"]["ok"]
    code, out, _ = run(capsys, "bounds", "--loop-lemma", "2", "3")
    assert code == 0 and json.loads(out)["loop_lemma"]["equality_set"] == [[1, 1, 1]]


def test_mpa_and_extquiver(capsys, files):
    jordan = files["dir"] / "j.json"
    jordan.write_text(json.dumps({"vertices": ["v"], "arrows": [{"src": "v", "tgt": "v"}]}))
    code, out, _ = run(capsys, "mpa-count", str(jordan), "--dim", "1", "--q", "3", "--n", "1")
    assert code == 0 and json.loads(out)["count"] == 7
    code, out, err = run(capsys, "mpa-count", str(jordan), "--dim", "1", "--q", "3", "--n", "1", "--alpha", "v=3")
    assert code == 2 and json.loads(err)["error"]["code"] == "mpa-input"
    code, out, _ = run(capsys, "extquiver", "--gram", "[[2]]", "--vectors", "(0,(1),1);(0,(2),2)",
                       "--check-gloop", "2")
    rep = json.loads(out)
    assert code == 0 and rep["totally_negative"] and rep["gloop_cross_check"]["ok"]
    code, out, _ = run(capsys, "extquiver", "--gram", "[[0]]", "--vectors", "(0,(1),1)")
    assert code == 0 and json.loads(out)["underlying"]["arrows"] == [{"src": "1", "tgt": "1"}]


def test_error_codes(capsys, files):
    code, _, err = run(capsys, "check", files["a2"], "--dim", "c=1")
    assert code == 2 and json.loads(err)["error"]["code"] == "unknown-vertex"
    code, _, err = run(capsys, "count", files["s2"], "--dim", "2", "--q", "2", "--n", "3", "--method", "brute")
    assert code == 3 and json.loads(err)["error"]["code"] == "budget-exceeded"
    code, _, err = run(capsys, "count", files["a2"], "--dim", "1,1", "--q", "4", "--n", "1")
    assert code == 2 and json.loads(err)["error"]["code"] == "ring"


def test_out_manifest_and_determinism(capsys, files):
    out1 = files["dir"] / "r1.json"
    out2 = files["dir"] / "r2.json"
    for out in (out1, out2):
        assert cli.main(["bounds", files["tn2"], "--dim", "2,1", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    man = json.loads((files["dir"] / "r1.json.manifest.json").read_text())
    assert man["command"] == "bounds" and files["tn2"] in man["inputs"]
    assert set(man) >= {"argv", "parameters", "tool_version", "outputs", "wall_time"}


def test_suite_subset(capsys):
    code, out, err = run(capsys, "suite", "--level", "desk", "--only", "3,10")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] == rep["total"] == 2
    assert "criterion  3 PASS" in err


def test_console_script_fallback_path(files):
    """The pure-Python kernel path, selected by the env flag, gives the same CSV."""
    env = dict(os.environ, QUIVERJET_DISABLE_NUMBA="1")
    proc = subprocess.run([sys.executable, "-m", "quiverjet.cli", "count", files["a2"], "--dim", "1,1",
                           "--q", "3", "--n", "2", "--emit", "csv"], env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.splitlines()[1:] == ["1,5,5,3", "2,21,7,3"]
