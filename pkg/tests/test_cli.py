import json

import jsonschema
import pytest

from lcykit.cli import load_schema, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_both(capsys):
    code, out = run(capsys, "count", "--space", "M2", "--delta", "2/5,1/5", "--method", "both")
    assert code == 0 and out.splitlines()[0] == "26 / 26"


def test_decimals_are_usage_errors(capsys):
    code, _ = run(capsys, "count", "--space", "M2", "--delta", "0.4,0.2")
    assert code == 2


def test_unknown_command_is_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_wrong_delta_length(capsys):
    assert run(capsys, "enumerate", "--space", "M3", "--delta", "1/2")[0] == 2


@pytest.mark.parametrize("argv, schema", [
    (["enumerate", "--space", "M0"], "enumerate"),
    (["enumerate", "--space", "quadric", "--mu", "2"], "enumerate"),
    (["count", "--space", "M3", "--delta", "1/2,1/4,1/8", "--format", "json"], "count"),
    (["region", "--space", "M3", "--delta", "6/15,5/15,4/15"], "region"),
    (["polygon", "--space", "M2", "--delta", "2/5,1/5", "--config-index", "1"], "polygon"),
    (["mutation-graph", "--space", "M3", "--delta", "6/15,5/15,4/15", "--path", "0", "2"], "mutation_graph"),
    (["realize", "--space", "M3", "--delta", "6/15,5/15,4/15"], "realize"),
    (["taut", "--seq", "1,-2,-3,-3,-2,-3,-2", "--format", "json"], "taut"),
])
def test_json_outputs_validate(capsys, argv, schema):
    code, out = run(capsys, *argv)
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema(schema))


def test_enumerate_cp2(capsys):
    _, out = run(capsys, "enumerate", "--space", "M0")
    data = json.loads(out)
    assert data["count"] == 3 and data["toric_count"] == 1


def test_taut_text(capsys):
    code, out = run(capsys, "taut", "--seq", "1,-2,-3,-3,-2,-3,-2")
    assert code == 0 and out.startswith("not def-taut;") and "preimages" in out


def test_files_and_manifest(capsys, tmp_path):
    svg, dot, man = tmp_path / "p.svg", tmp_path / "g.dot", tmp_path / "m.json"
    assert run(capsys, "polygon", "--space", "M2", "--delta", "2/5,1/5", "--svg", str(svg))[0] == 0
    assert svg.read_text().startswith("<svg")
    assert run(capsys, "mutation-graph", "--space", "M2", "--delta", "2/5,1/5", "--dot", str(dot),
               "--manifest", str(man))[0] == 0
    assert "n0 -- n1" in dot.read_text()
    manifest = json.loads(man.read_text())
    jsonschema.validate(manifest, load_schema("manifest"))
    assert manifest["inputs"]["delta"] == "2/5,1/5"


def test_output_is_deterministic(capsys):
    argv = ["enumerate", "--space", "M3", "--delta", "1/2,1/4,1/8"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv, "--workers", "2")[1]
    assert a == b


def test_tsv_outputs(capsys):
    code, out = run(capsys, "enumerate", "--space", "M1", "--delta", "1/2", "--format", "tsv")
    assert code == 0 and out.splitlines()[0].split("\t")[0] == "index"
    code, out = run(capsys, "catalog", "--space", "M2", "--delta", "2/5,1/5")
    assert code == 0 and out.startswith("class\tsquare")


def test_selftest_schema(capsys, tmp_path):
    code, out = run(capsys, "selftest", "--out", str(tmp_path))
    assert code == 0 and "0 mismatches" in out
    jsonschema.validate(json.loads((tmp_path / "selftest.json").read_text()), load_schema("selftest"))
