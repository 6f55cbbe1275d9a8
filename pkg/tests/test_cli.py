import json

import pytest

from uext.cli import main, run
from uext.monoid_gen import crmhd, dumps_monoid, leibnitz, leibnitz_table, zp_additive
from uext.tensor_core import dumps_tensor, read_tensor, write_tensor


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, w in {"crmhd": crmhd(1), "leibnitz2": leibnitz(2), "leibnitz3": leibnitz(3)}.items():
        p = tmp_path / f"{name}.uext.json"
        write_tensor(p, w)
        paths[name] = str(p)
    broken = json.loads(dumps_tensor(crmhd(1)))
    broken["entries"].append({"i": 2, "j": 1, "k": 3, "value": "1"})
    (tmp_path / "broken.uext.json").write_text(json.dumps(broken))
    paths["broken"] = str(tmp_path / "broken.uext.json")
    paths["dir"] = tmp_path
    return paths


def run_json(capsys, argv):
    capsys.readouterr()
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate(files, capsys):
    assert main(["validate", files["crmhd"]]) == 0
    assert capsys.readouterr().out.strip() == "valid: symmetric, commuting slices"
    assert main(["validate", files["broken"]]) == 1
    out = capsys.readouterr().out
    assert "symmetric (1,2,3): -1 != 1" in out
    code, data = run_json(capsys, ["validate", files["broken"]])
    assert code == 1 and not data["symmetric"]


def test_h2_json(files, capsys):
    code, data = run_json(capsys, ["h2", files["leibnitz2"]])
    assert code == 0
    assert (data["dim_Z2"], data["dim_B2"], data["dim_H2"]) == (2, 1, 1)
    assert data["representatives"] == [[["0", "1"], ["1", "0"]]]


def test_gen_validate_jacobi_pipeline(files, capsys):
    out = str(files["dir"] / "gen.json")
    assert main(["gen", "--family", "crmhd", "--beta", "1", "-o", out]) == 0
    assert read_tensor(out) == crmhd(1)
    assert main(["validate", out]) == 0
    assert main(["jacobi", out, "--algebra", "sl2"]) == 0
    code, data = run_json(capsys, ["jacobi", out, "--algebra", "so3"])
    assert code == 0 and data["holds"] and data["triples"] == 1728


def test_jacobi_failure_and_carrier_files(files, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "uext-tensor-v1", "n": 2, "labeling": "solvable",
                               "entries": [{"i": 1, "j": 1, "k": 2, "value": "1"},
                                           {"i": 1, "j": 2, "k": 2, "value": "1"}]}))
    code, data = run_json(capsys, ["jacobi", str(bad), "--algebra", "gl2"])
    assert code == 1 and data["witness"]
    lie = tmp_path / "heis.json"
    lie.write_text(json.dumps({"format": "uext-lie-v1", "dim": 3, "c": [{"i": 1, "j": 2, "k": 3, "value": "1"}]}))
    assert main(["jacobi", files["leibnitz3"], "--algebra", str(lie)]) == 0
    assert main(["jacobi", files["leibnitz3"], "--algebra", "nope"]) == 2
    assert main(["jacobi", files["crmhd"], "--algebra", "gl2", "--max-dim", "8"]) == 2


def test_classify(files, capsys):
    code, data = run_json(capsys, ["classify", files["leibnitz3"]])
    assert code == 0
    assert data["nilpotent"] and data["nilpotency_index"] == 4
    assert data["filtration_dims"] == [3, 2, 1, 0] and data["abelian_tail"] == 2
    code, data = run_json(capsys, ["classify", files["crmhd"]])
    assert data["unit"] == ["1", "0", "0", "0"] and not data["nilpotent"]
    assert main(["classify", files["broken"]]) == 1


def test_structure_commands(files, capsys, tmp_path):
    out = str(tmp_path / "c.json")
    assert main(["canonicalize", files["leibnitz3"], "-o", out]) == 0
    assert read_tensor(out) == leibnitz(3)
    assert main(["canonicalize", files["crmhd"], "-o", out]) == 1
    split_out = tmp_path / "split.json"
    assert main(["split", files["leibnitz3"], "-o", str(split_out)]) == 0
    assert json.loads(split_out.read_text())["complete"] is True
    assert main(["deunitize", files["crmhd"], "-o", out]) == 0
    assert read_tensor(out).entries == {(1, 2, 3): -1}
    assert main(["deunitize", files["leibnitz3"], "-o", out]) == 1
    assert main(["unitize", files["leibnitz2"], "-o", out]) == 0
    assert read_tensor(out).n == 3
    assert main(["reduce", files["leibnitz3"], "--k", "1", "-o", out]) == 0
    assert read_tensor(out) == leibnitz(2)
    assert main(["reduce", files["crmhd"], "--k", "1", "-o", out]) == 1


def test_extend_then_reduce_is_byte_identical(files, tmp_path):
    for name in ("leibnitz2", "leibnitz3"):
        outdir = tmp_path / f"ext_{name}"
        assert main(["extend", files[name], "--all", "-o", str(outdir)]) == 0
        for ext in sorted(outdir.iterdir()):
            back = tmp_path / "back.json"
            assert main(["reduce", str(ext), "--k", "1", "-o", str(back)]) == 0
            assert back.read_bytes() == open(files[name], "rb").read()


def test_extend_with_cocycle_file(files, tmp_path):
    good = tmp_path / "r.json"
    good.write_text(json.dumps({"matrix": [["0", "1"], ["1", "0"]]}))
    outdir = tmp_path / "one"
    assert main(["extend", files["leibnitz2"], "--cocycle", str(good), "-o", str(outdir)]) == 0
    assert read_tensor(outdir / "ext_1.uext.json") == leibnitz(3)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[0, 0], [0, 1]]))
    assert main(["extend", files["leibnitz2"], "--cocycle", str(bad), "-o", str(outdir)]) == 1


def test_gen_families(tmp_path, capsys):
    for argv in (["--family", "zp-add", "--p", "3"], ["--family", "zp-mul", "--p", "4"],
                 ["--family", "leibnitz", "--n", "4", "--l1", "2"],
                 ["--family", "lambda", "--n", "3", "--l1", "1", "--l2", "-1/2"]):
        out = tmp_path / "g.json"
        assert main(["gen"] + argv + ["-o", str(out)]) == 0
        assert main(["validate", str(out)]) == 0
    assert main(["gen", "--family", "lambda", "--n", "3"]) == 2
    assert main(["gen", "--family", "crmhd", "--beta", "x"]) == 2


def test_monoid_commands(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(dumps_monoid(leibnitz_table(4)))
    assert main(["monoid", "validate", str(p)]) == 0
    out = tmp_path / "t.json"
    assert main(["monoid", "to-tensor", str(p), "-o", str(out)]) == 0
    assert read_tensor(out) == leibnitz(4)
    r = tmp_path / "r.json"
    assert main(["monoid", "restrict", str(p), "-o", str(r)]) == 0
    assert json.loads(r.read_text())["table"] == [list(x) for x in leibnitz_table(3).table]
    e = tmp_path / "e.json"
    e.write_text(dumps_monoid(zp_additive(3)))
    assert main(["monoid", "to-tensor", str(e)]) == 0
    assert main(["monoid", "restrict", str(e)]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "uext-monoid-v1", "kind": "SE", "n": 2,
                               "table": [[0, 0, 0], [0, 1, 0], [0, 0, 0]]}))
    assert main(["monoid", "validate", str(bad)]) == 1


def test_se_enum(tmp_path, capsys):
    out = tmp_path / "c.jsonl"
    assert main(["se-enum", "--n", "3", "-o", str(out)]) == 0
    first = out.read_bytes()
    assert len(first.splitlines()) == 10
    assert main(["se-enum", "--n", "3", "-o", str(out)]) == 0
    assert out.read_bytes() == first
    code, data = run_json(capsys, ["se-enum", "--n", "3", "--iso-reduce"])
    assert code == 0 and data["count"] < 10
    assert main(["se-enum", "--n", "9"]) == 2


def test_usage_and_io_errors(files, capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["validate", str(files["dir"] / "missing.json")]) == 2
    assert run(["reduce", files["leibnitz3"]]).exit_code == 2
    dup = files["dir"] / "dup.json"
    dup.write_text(json.dumps({"format": "uext-tensor-v1", "n": 2, "entries": [
        {"i": 1, "j": 1, "k": 2, "value": "1"}, {"i": 1, "j": 1, "k": 2, "value": "1"}]}))
    assert main(["validate", str(dup)]) == 2
    assert main(["classify", files["broken"]]) == 1


def test_output_is_deterministic(files, capsys):
    for argv in (["h2", files["leibnitz3"]], ["classify", files["crmhd"]], ["split", files["crmhd"]]):
        main(argv + ["--json"])
        a = capsys.readouterr().out
        main(argv + ["--json"])
        assert capsys.readouterr().out == a
