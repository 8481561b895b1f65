from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from tautangle.bundles import build_layered
from tautangle.cli import main
from tautangle.normal_q import canonical_basis

DEGREE_ONE = (
    '{"tets":[{"nbr":[1,1,0,0],"perm":[[1,3,2,0],[1,0,3,2],[2,0,3,1],[1,3,0,2]]},'
    '{"nbr":[0,0,1,1],"perm":[[1,0,3,2],[3,0,2,1],[0,1,3,2],[0,1,3,2]]}]}'
)


@pytest.fixture
def files(tmp_path, fig8, rl1):
    paths = {}
    for name, text in [
        ("fig8", fig8.dumps()),
        ("rl1", rl1.dumps()),
        ("deg1", DEGREE_ONE),
        ("garbage", "{not json"),
        ("spheres", '{"tets":[{"nbr":[0,0,0,0],"perm":[[1,0,2,3],[1,0,2,3],[0,1,3,2],[0,1,3,2]]}]}'),
        ("shape", '{"tets":[{"nbr":[0,0,0]}]}'),
    ]:
        p = tmp_path / f"{name}.json"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 1, out
    return code, json.loads(lines[0])


def test_validate(capsys, files):
    code, out = run(capsys, "validate", files["fig8"])
    assert code == 0
    assert out["valid"] and out["degrees"] == [6, 6] and out["cuspCount"] == 1 and out["orientable"]


def test_validate_errors(capsys, files, tmp_path):
    assert run(capsys, "validate", files["garbage"])[0] == 1
    code, out = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1 and "error" in out
    assert run(capsys, "validate", files["shape"])[0] == 1
    code, out = run(capsys, "validate", files["spheres"])
    assert code == 2 and out["valid"] is False
    assert {e["kind"] for e in out["errors"]} >= {"cusp"}


def test_angle_statuses(capsys, files):
    code, out = run(capsys, "angle", files["fig8"])
    assert code == 0 and out == {"status": "AngleStructure", "witness": [["1/3"] * 3] * 2}
    code, out = run(capsys, "angle", files["rl1"])
    assert code == 3 and out["status"] == "NoAngleStructure"
    assert set(out["cert"]) == {"n", "m", "q"} and len(out["cert"]["q"]) == 4
    code, out = run(capsys, "angle", files["deg1"])
    assert code == 4 and out == {"status": "NoSemiAngle"}
    assert run(capsys, "angle", files["spheres"])[0] == 2


def test_taut(capsys, files):
    code, out = run(capsys, "taut", files["fig8"])
    assert code == 0 and out == [[0, 0], [1, 2], [2, 1]]
    assert run(capsys, "taut", files["deg1"]) == (0, [])


def test_chi(capsys, files, fig8, tmp_path):
    B = canonical_basis(fig8)
    for vec, expected in [(B.d[0], "-1"), (B.e[1], "-2"), (B.combine([1, 0], [0, 0]) + B.e[0], "-3")]:
        p = tmp_path / "v.json"
        p.write_text(vec.dumps())
        assert run(capsys, "chi", files["fig8"], "--class", str(p)) == (0, expected)
    p.write_text(canonical_basis(build_layered("RRL").triangulation).d[0].dumps())
    assert run(capsys, "chi", files["fig8"], "--class", str(p))[0] == 1


def test_bundle_round_trip(capsys, tmp_path):
    cases = [("plain", "RL", []), ("ins", "RL", ["1"]), ("two", "RRLRL", ["0", "--insert", "3"])]
    for name, word, ins in cases:
        out_path = tmp_path / f"{name}.json"
        argv = ["bundle", "--word", word, "-o", str(out_path)]
        if ins:
            argv += ["--insert", *ins]
        code, out = run(capsys, *argv)
        assert code == 0 and out["taut"] == str(tmp_path / f"{name}.taut.json")
        k = len(json.loads(out_path.read_text())["tets"])
        assert json.loads((tmp_path / f"{name}.taut.json").read_text()) == [0] * k
        assert run(capsys, "validate", str(out_path))[0] == 0
    assert (tmp_path / "plain.json").read_text() == build_layered("RL").triangulation.dumps() + "\n"


def test_bundle_matrix_and_errors(capsys):
    assert run(capsys, "bundle", "--word", "RL", "--matrix") == (0, {"matrix": [[2, 1], [1, 1]], "trace": 3})
    assert run(capsys, "bundle", "--word", "RX")[0] == 1
    assert run(capsys, "bundle", "--word", "RR")[0] == 1
    assert run(capsys, "bundle", "--word", "RL", "--insert", "9")[0] == 1


def test_pachner(capsys, files, tmp_path):
    main(["pachner", files["fig8"], "--face", "0", "0"])
    text = capsys.readouterr().out
    moved = tmp_path / "moved.json"
    moved.write_text(text)
    code, out = run(capsys, "validate", str(moved))
    assert code == 0 and out["k"] == 3 and 3 in out["degrees"]
    edge = out["degrees"].index(3)
    main(["pachner", str(moved), "--edge", str(edge)])
    back = capsys.readouterr().out
    assert len(json.loads(back)["tets"]) == 2
    assert run(capsys, "pachner", files["fig8"], "--edge", "0")[0] == 1
    assert run(capsys, "pachner", files["fig8"], "--face", "5", "0")[0] == 1


def test_usage_errors(capsys, files):
    assert run(capsys, "angle", files["fig8"], "--bogus")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "pachner", files["fig8"])[0] == 1


def test_output_is_byte_stable(capsys, files):
    outs = []
    for _ in range(2):
        main(["angle", files["rl1"]])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert " " not in outs[0]


def test_help_documents_schema(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
    assert '{"tets":[{"nbr":[t0,t1,t2,t3],"perm":[[..4..],[..4..],[..4..],[..4..]]}, ...]}' in capsys.readouterr().out


def test_console_script(files):
    exe = shutil.which("tri")
    cmd = [exe] if exe else [sys.executable, "-m", "tautangle.cli"]
    proc = subprocess.run([*cmd, "angle", files["rl1"]], capture_output=True, text=True)
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["status"] == "NoAngleStructure"
    assert proc.stderr == ""
