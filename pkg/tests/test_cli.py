import json
import subprocess
import sys

import pytest

from tesler_alpha.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_faces_counts(capsys):
    code, out, _ = run(capsys, "faces", "--n", "3", "--codim", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["count"] == 9
    assert json.loads(run(capsys, "faces", "--n", "4", "--codim", "1", "--format", "json")[1])["count"] == 9
    assert json.loads(run(capsys, "faces", "--n", "3", "--codim", "3", "--format", "json")[1])["count"] == 6


def test_faces_bad_codim(capsys):
    assert run(capsys, "faces", "--n", "3", "--codim", "4")[0] == 2
    assert run(capsys, "faces", "--n", "3")[0] == 2


def test_alpha_min(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "3", "--codim", "2", "--min")
    assert code == 0
    assert out.splitlines()[0] == "min alpha 1/8"
    code, out, _ = run(capsys, "alpha", "--n", "4", "--codim", "3", "--min", "--format", "json")
    data = json.loads(out)
    assert data["min"] == "1/24"
    assert data["faces"] == [{"support": [[1, 3], [2, 3], [3, 3]], "case": "(1)(vi)", "alpha": "1/24"}]


def test_alpha_codim0_csv(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "5", "--codim", "0", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["support,case,alpha", "-,constant,1/1"]


def test_alpha_codim4_is_usage_error(capsys):
    assert run(capsys, "alpha", "--n", "4", "--codim", "4")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--oracle", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "PASS"
    assert data["tables"]["face_counts"] == {"2": 35, "3": 76}
    assert data["oracle"]["status"] == "PASS"


def test_verify_n2_usage(capsys):
    code, _, err = run(capsys, "verify", "--n", "2")
    assert code == 2
    assert "n >= 3" in err


def test_ehrhart(capsys):
    code, out, _ = run(capsys, "ehrhart", "--n", "2")
    assert code == 0
    assert out.splitlines()[0] == "E(t) = t + 1"
    assert "McMullen PASS" in out
    code, out, _ = run(capsys, "ehrhart", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert data["degree"] == 3 and data["sample_counts"]["1"] == 7
    assert all(c["match"] for c in data["mcmullen"]) and len(data["mcmullen"]) == 4


def test_ehrhart_too_large(capsys):
    assert run(capsys, "ehrhart", "--n", "5")[0] == 2


def test_leading_zero_notice(capsys):
    code, out, err = run(capsys, "ehrhart", "--a", "0,1,1")
    assert code == 0
    assert "leading zero" in err
    assert out.startswith("E(t) = t + 1")


def test_nonpositive_after_trim(capsys):
    assert run(capsys, "vertices", "--a", "1,0,1")[0] == 2
    assert run(capsys, "vertices", "--a", "0,0")[0] == 2
    assert run(capsys, "vertices", "--n", "3", "--a", "1,1")[0] == 2
    assert run(capsys, "vertices", "--a", "1,x")[0] == 2


def test_vertices_json(capsys, tmp_path):
    out_file = tmp_path / "v.json"
    code, out, _ = run(capsys, "vertices", "--n", "3", "--format", "json", "--out", str(out_file))
    assert code == 0 and out == ""
    data = json.loads(out_file.read_text())
    assert len(data["vertices"]) == 6 and len(data["edges"]) == 9


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_deformation_check(capsys, tmp_path):
    run(capsys, "vertices", "--n", "3", "--format", "json", "--out", str(tmp_path / "p.json"))
    p = str(tmp_path / "p.json")
    verts = json.loads((tmp_path / "p.json").read_text())["vertices"]
    doubled = [{k: f"{2 * int(v.split('/')[0])}/1" for k, v in x.items()} for x in verts]
    q = _write(tmp_path / "q.json", {"vertices": doubled})
    ident = _write(tmp_path / "id.json", list(range(6)))
    assert run(capsys, "deformation-check", "--p", p, "--q", q, "--map", ident)[0] == 0
    point = _write(tmp_path / "pt.json", [verts[0]])
    const = _write(tmp_path / "c.json", [0] * 6)
    assert run(capsys, "deformation-check", "--p", p, "--q", point, "--map", const)[0] == 0
    swap = _write(tmp_path / "s.json", [1, 0, 2, 3, 4, 5])
    code, out, _ = run(capsys, "deformation-check", "--p", p, "--q", p, "--map", swap)
    assert code == 1 and "FAIL" in out
    # base polytope built from --n when --p is absent
    assert run(capsys, "deformation-check", "--n", "3", "--q", q, "--map", ident)[0] == 0


def test_deformation_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "deformation-check", "--n", "3", "--q", str(tmp_path / "nope.json"),
                       "--map", str(tmp_path / "nope.json"))
    assert code == 2


def test_json_independent_of_jobs(capsys, monkeypatch):
    a = run(capsys, "verify", "--n", "4", "--format", "json", "--jobs", "1")[1]
    b = run(capsys, "verify", "--n", "4", "--format", "json", "--jobs", "3")[1]
    monkeypatch.setenv("TESLER_ALPHA_JOBS", "2")
    c = run(capsys, "verify", "--n", "4", "--format", "json")[1]
    assert a == b == c


def test_bad_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("TESLER_ALPHA_JOBS", "many")
    assert run(capsys, "alpha", "--n", "3", "--codim", "2")[0] == 2


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tesler_alpha.cli", "faces", "--n", "3", "--codim", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[0] == "n=3 codim=1: 5 faces"
