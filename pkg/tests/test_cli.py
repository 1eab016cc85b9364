import json
import shutil
import subprocess
import sys

import pytest

from fano_forge import cli


def run_json(capsys, *argv):
    code = cli.main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "p735.json"],
        ["analyze", "ambient_f.json"],
        ["analyze", "shape_z.json"],
        ["aut", "p735.json"],
        ["embed"],
        ["laurent"],
        ["deform"],
        ["discriminant"],
        ["hensel", "--k", "3"],
    ],
)
def test_commands_pass_and_are_deterministic(capsys, argv):
    code1, out1 = run_json(capsys, *argv)
    code2, out2 = run_json(capsys, *argv)
    assert code1 == 0 and out1["verdict"] == "PASS"
    assert out1 == out2
    assert "timings" not in out1
    assert all(len(i["sha256"]) == 64 for i in out1["inputs"])


def test_timings_only_on_request(capsys):
    _, out = run_json(capsys, "hensel", "--k", "2", "--timings")
    assert "lift" in out["timings"]


def test_text_format_and_output_file(tmp_path, capsys):
    dest = tmp_path / "report.txt"
    assert cli.main(["discriminant", "--order", "block", "-o", str(dest)]) == 0
    text = capsys.readouterr().out
    assert text == dest.read_text()
    assert "verdict: PASS" in text and "[PASS] lex_order_agrees" in text


def test_fiber_and_base_override(tmp_path, capsys):
    f = tmp_path / "node.json"
    f.write_text(json.dumps({"polynomial": "a*b - c*d + t", "fiber": ["x"], "base": ["y"]}))
    code, out = run_json(capsys, "discriminant", str(f), "--fiber", "a,b,c,d", "--base", "t")
    assert code == 0
    assert out["results"]["generators"] == ["t"]


def test_failing_expectation_gives_exit_1(tmp_path, capsys):
    data = json.loads(open(cli.datasets.resolve("p735.json")).read())
    data["expect"] = {"polar_volume": 27}
    f = tmp_path / "p.json"
    f.write_text(json.dumps(data))
    code, out = run_json(capsys, "analyze", str(f))
    assert code == 1 and out["verdict"] == "FAIL"
    assert [c["name"] for c in out["checks"] if not c["passed"]][0] == "polar_volume"


def test_bad_input_gives_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"vertices": [[1, 0], [0, 1]')
    code, out = run_json(capsys, "analyze", str(f))
    assert code == 2 and "malformed JSON" in out["error"]
    f.write_text('{"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]}')
    code, out = run_json(capsys, "analyze", str(f))
    assert code == 2 and "DegeneratePolytopeError" in out["error"]


def test_hilbert_bound_flag(capsys):
    code, out = run_json(capsys, "aut", "p735.json", "--hilbert-bound", "1")
    assert code == 2 and "ResourceError" in out["error"]
    from fano_forge import fan

    assert fan.DEFAULT_HILBERT_BOUND == 3


def test_aut_without_charts_uses_canonical_labels(tmp_path, capsys):
    data = json.loads(open(cli.datasets.resolve("p735.json")).read())
    for k in ("charts", "generators", "expect"):
        data.pop(k, None)
    f = tmp_path / "p.json"
    f.write_text(json.dumps(data))
    code, out = run_json(capsys, "aut", str(f))
    assert code == 0
    assert len(out["results"]["charts"]) == 4
    assert out["results"]["order"] == 16


@pytest.mark.skipif(shutil.which("fano-forge") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["fano-forge", "hensel", "--k", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and "verdict: PASS" in res.stdout


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fano_forge.cli", "hensel", "--k", "1"], capture_output=True, text=True)
    assert res.returncode == 0


def write(tmp_path, name, obj):
    f = tmp_path / name
    f.write_text(json.dumps(obj))
    return str(f)


def test_analyze_smooth_simplex(tmp_path, capsys):
    f = write(tmp_path, "p3.json", {"vertices": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]})
    code, out = run_json(capsys, "analyze", f)
    assert code == 0
    assert out["results"]["kpolystable"] is True
    assert out["results"]["singularities"] == {"Smooth": 4}


def test_aut_cube_and_asymmetric_simplex(tmp_path, capsys):
    import itertools

    cube = write(tmp_path, "cube.json", {"vertices": [list(v) for v in itertools.product((-1, 1), repeat=3)]})
    code, out = run_json(capsys, "aut", cube)
    assert code == 0 and out["results"]["order"] == 48 and out["results"]["actions"] == {}
    tri = write(tmp_path, "tri.json", {"vertices": [[1, 0], [0, 1], [-2, -3]]})
    code, out = run_json(capsys, "aut", tri)
    assert code == 0 and out["results"]["order"] == 1


def test_embed_identity_and_corrupted(tmp_path, capsys):
    ident = write(tmp_path, "id.json", {"A": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "source": "p735.json", "target": "p735.json"})
    code, out = run_json(capsys, "embed", ident)
    assert code == 0
    assert out["results"]["binomial"] is None
    assert all(v["ok"] for v in out["results"]["chart_checks"].values())
    bad = write(tmp_path, "bad.json", {"A": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], "source": "p735.json", "target": "ambient_f.json"})
    code, out = run_json(capsys, "embed", bad)
    assert code == 1
    check = [c for c in out["checks"] if c["name"] == "toric_morphism"][0]
    assert not check["passed"] and all(name.startswith("s") for name in check["detail"])


def test_text_and_json_agree(capsys):
    cli.main(["aut", "p735.json", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    cli.main(["aut", "p735.json"])
    text = capsys.readouterr().out
    for c in data["checks"]:
        assert f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}" in text
    assert f"verdict: {data['verdict']}" in text
