import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from isolab.cli import CSV_HEADER, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv)
    return code, json.loads(out)


def test_slope_types():
    code, out = call_json("slope-types", "--rank", 5, "--degree", 0, "--min", "-3/5", "--max", "2/5")
    assert code == 0
    assert len(out) == 2
    assert [[0, 1]] * 5 in out and [[-1, 2], [1, 3]] in out


def test_newton_and_tn():
    code, out = call_json("newton", "--isocrystal", SAMPLES / "bt_example.json", "--check")
    assert code == 0 and out["agree"] and out["slopes"] == [["-3/5", 5]]
    code, out = call_json("tn", "--isocrystal", SAMPLES / "ordinary.json", "--subspace", SAMPLES / "subspace_e2.json")
    assert (code, out) == (0, {"t_N": -1})


def test_weakadm():
    code, out = call_json(
        "weakadm", "--isocrystal", SAMPLES / "bt_example.json", "--point", SAMPLES / "point_2_5.json", "--expect-th=-3"
    )
    assert code == 0 and out["admissible"] is True
    code, out = call_json("weakadm", "--isocrystal", SAMPLES / "ordinary.json", "--point", SAMPLES / "line_e2.json")
    assert code == 0 and out["admissible"] is False
    assert out["witness"]["subspace"] == "{1}"
    code, out = call_json("weakadm", "--isocrystal", SAMPLES / "ordinary.json", "--point", SAMPLES / "line_sqrt2.json")
    assert out["admissible"] is True


def test_th_degree_and_bounds():
    iso, pt = SAMPLES / "bt_example.json", SAMPLES / "point_2_5.json"
    assert call_json("th", "--isocrystal", iso, "--point", pt) == (0, {"t_H": -3})
    assert call_json("degree-ml", "--isocrystal", iso, "--point", pt) == (0, {"degree": 0})
    code, out = call_json("hn-bounds", "--isocrystal", iso)
    assert out["min"] == "-3/5" and out["max"] == "2/5" and len(out["types"]) == 2


def test_verify_hom():
    code, out = call_json("verify-hom", "--example")
    assert code == 0 and out["ok"] is True
    code, out = call_json("verify-hom", "--candidate", SAMPLES / "hom_example.json")
    assert code == 0 and out["ok"] is True
    code, out = call_json("verify-hom")
    assert code == 2 and out["error"]["type"] == "UsageError"


def test_bad_locus_and_theta(monkeypatch):
    code, out = call_json("bad-locus", "--s", "1", "--cutoff", "40", "--p", "2")
    assert code == 0
    assert out["field"] == {"ppowersum": {"p": 2}}
    assert len(out["columns"]) == 5 and len(out["columns"][0]) == 2
    code, out = call_json("theta-eval", "--k", 0, "--s", 1, "--cutoff", 2, "--p", 2)
    assert out["terms"] == [["1/1", 1], ["1025/1024", 1]]
    monkeypatch.setenv("ISOLAB_PRECISION", "3")
    code, out = call_json("theta-eval", "--series", SAMPLES / "tower_sum.json")
    assert out["cutoff"] == "3/1" and out["terms"] == [["1/1", 1], ["3/2", 1]]


def test_domain_errors_exit_1():
    code, out = call_json("bad-locus", "--s", "1", "--cutoff", "2")
    assert code == 1 and out["error"]["type"] == "RankUncertain"
    code, out = call_json("tn", "--isocrystal", SAMPLES / "ordinary.json", "--subspace", SAMPLES / "subspace_diag.json")
    assert code == 1 and out["error"]["type"] == "NotStable"
    code, out = call_json("weakadm", "--isocrystal", SAMPLES / "isoclinic.json", "--point", SAMPLES / "line_e2.json")
    assert code == 1 and out["error"]["type"] == "UnsupportedMultiplicity"


def test_parse_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    for argv in (
        [],
        ["frobnicate"],
        ["slope-types", "--rank", "x", "--degree", "0", "--min", "0", "--max", "1"],
        ["newton", "--isocrystal", str(bad)],
        ["newton", "--isocrystal", str(tmp_path / "missing.json")],
        ["theta-eval", "--k", "1", "--s", "0.5"],
    ):
        code, out = call_json(*argv)
        assert code == 2, argv
        assert set(out["error"]) == {"type", "message"}


def test_survey_header_only():
    code, out = call("survey", "--isocrystal", SAMPLES / "bt_example.json", "--n", 0)
    assert code == 0
    assert out == ",".join(CSV_HEADER) + "\n"


def test_survey_is_deterministic():
    args = ("survey", "--isocrystal", SAMPLES / "ordinary.json", "--n", 30, "--seed", 7, "--height", 2)
    a, b = call(*args), call(*args)
    assert a == b and a[0] == 0
    lines = a[1].splitlines()
    assert lines[0] == "index,point_hash,admissible,witness"
    assert len(lines) == 31
    for line in lines[1:]:
        idx, h, adm, witness = line.split(",")
        assert adm in {"true", "false"} and (adm == "true") == (witness == "")
    assert call(*args[:4], "--seed", 8, "--height", 2)[1] != a[1]


def test_survey_bt_points_all_admissible():
    code, out = call("survey", "--isocrystal", SAMPLES / "bt_example.json", "--n", 20, "--seed", 1)
    assert all(line.split(",")[2] == "true" for line in out.splitlines()[1:])


def test_survey_dimension_flag():
    code, out = call_json("survey", "--isocrystal", SAMPLES / "positive.json", "--n", 1)
    assert code == 2
    code, _ = call("survey", "--isocrystal", SAMPLES / "positive.json", "--n", 2, "--dim", 1)
    assert code == 0


def test_console_entry_point_is_byte_identical():
    cmd = [sys.executable, "-m", "isolab", "survey", "--isocrystal", str(SAMPLES / "ordinary.json"), "--n", "10", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"index,point_hash,admissible,witness\n")
