import csv
import io
import json
from fractions import Fraction as F
from math import comb

import pytest

from tsplift.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, main
from tsplift.combinatorics import Cycle
from tsplift.funcspace import SymMatrix, barycenter, cycle_incidence


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_verify_small_n_reports_gating(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--k", "1")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["summary"]["pass"] > 0 and rep["summary"]["skipped"] > 0
    assert "fail" not in rep["summary"]
    assert all(c.get("reason") for c in rep["checks"] if c["status"] == "skipped")


def test_verify_full_suite(capsys):
    code, out, _ = run(capsys, "verify", "--n", "8", "--k", "2")
    assert code == EXIT_OK
    lemmas = {c["lemma"] for c in json.loads(out)["checks"]}
    assert {"paths", "pathcount", "same", "y_0", "change_sequence", "ksnake", "explicitT", "project1"} <= lemmas


def test_verify_is_byte_identical(capsys):
    a = run(capsys, "verify", "--n", "6", "--k", "1")[1]
    b = run(capsys, "verify", "--n", "6", "--k", "1")[1]
    assert a == b


def test_smooth_prints_exact_constant(capsys):
    code, out, _ = run(capsys, "smooth", "--n", "8", "--k", "1")
    data = json.loads(out)
    assert code == EXIT_OK and data["c_k"] == "55/216"


def test_smooth_asserts_lambda_bound(capsys):
    code, out, _ = run(capsys, "smooth", "--n", "12", "--k", "2")
    data = json.loads(out)
    assert code == EXIT_OK
    assert "lambda_star_at_least_quarter" in data["asserted"]
    assert F(data["lambda_star"]) >= F(1, 4)


def test_smooth_deviation_decreases(capsys):
    devs = []
    for n in (8, 16, 24):
        code, out, _ = run(capsys, "smooth", "--n", str(n), "--k", "1", "--format", "csv")
        assert code == EXIT_OK
        (row,) = csv.DictReader(io.StringIO(out))
        devs.append(float(row["deviation"]))
    assert devs[0] > devs[1] > devs[2] > 0


def test_smooth_rejects_small_n(capsys):
    code, _, err = run(capsys, "smooth", "--n", "7", "--k", "1")
    assert code == EXIT_INPUT and "4k+4" in err


@pytest.mark.parametrize(
    "point,status",
    [(cycle_incidence(Cycle((1, 3, 5, 2, 4, 6))), "inside"), (barycenter(6), "inside")],
)
def test_member_inside_both(capsys, tmp_path, point, status):
    path = write(tmp_path, "y.json", point.to_json())
    code, out, _ = run(capsys, "member", "--n", "6", "--k", "1", "--tsp", path)
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["Q_k"]["status"] == data["T_n"]["status"] == status


def test_member_outside_affine_hull(capsys, tmp_path):
    y = barycenter(6) + SymMatrix(6, {(1, 2): F(1, 7)})
    code, out, _ = run(capsys, "member", "--n", "6", write(tmp_path, "y.json", y.to_json()))
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["affine_hull"] is False and data["Q_k"]["status"] == "not_in_affine_hull"


def test_member_parse_error_position(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"n": 6,\n "entries": [[1, 2 "1/2"]]}')
    code, _, err = run(capsys, "member", "--n", "6", path)
    assert code == EXIT_INPUT
    assert "line 2" in err and "column" in err


def test_member_schema_error(capsys, tmp_path):
    path = write(tmp_path, "bad.json", {"n": 6, "entries": [[1, 2, 0.5]]})
    assert run(capsys, "member", "--n", "6", path)[0] == EXIT_INPUT


def test_member_missing_file(capsys, tmp_path):
    assert run(capsys, "member", str(tmp_path / "nope.json"))[0] == EXIT_INPUT


def test_member_resource_cap(capsys, tmp_path):
    path = write(tmp_path, "z.json", barycenter(8).to_json())
    code, _, err = run(capsys, "member", "--n", "8", "--dense-cap", "7", path)
    assert code == EXIT_CAP and "cap" in err


def test_facets_small(capsys):
    code, out, _ = run(capsys, "facets", "--n", "6", "--k", "1", "--max-u", "2")
    data = json.loads(out)
    assert code == EXIT_OK and data["all_verified"]
    assert data["count"] == 6 * 5 + comb(6, 2)


def test_facets_reject_large_subsets(capsys):
    code, _, err = run(capsys, "facets", "--n", "8", "--k", "1", "--max-u", "4")
    assert code == EXIT_INPUT and "2k" in err


def test_facets_csv(capsys):
    code, out, _ = run(capsys, "facets", "--n", "6", "--k", "1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0].startswith("kind,params,constant")
    assert len(lines) == 1 + 30 + 15


def test_scaling_single_direction(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, _, _ = run(capsys, "scaling", "--n", "8", "--k", "1", "--samples", "1", "--seed", "5", "--out", str(out_file))
    first = out_file.read_text()
    assert code == EXIT_OK
    d = json.loads(first)["directions"][0]
    assert {"t_star", "c_k_t_star", "tsp_margin"} <= set(d)
    run(capsys, "scaling", "--n", "8", "--k", "1", "--samples", "1", "--seed", "5", "--out", str(out_file))
    assert out_file.read_text() == first


def test_bad_config(capsys):
    assert run(capsys, "smooth", "--n", "8", "--k", "0")[0] == EXIT_INPUT
    assert run(capsys, "smooth", "--n", "8", "--dense-cap", "13")[0] == EXIT_INPUT
    assert run(capsys, "scaling", "--n", "8", "--samples", "0")[0] == EXIT_INPUT


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("TSPLIFT_DENSE_CAP", "lots")
    assert run(capsys, "verify", "--n", "5")[0] == EXIT_INPUT
    monkeypatch.setenv("TSPLIFT_DENSE_CAP", "5")
    code, out, _ = run(capsys, "verify", "--n", "6")
    assert code == EXIT_OK
    assert any(c["status"] == "skipped" for c in json.loads(out)["checks"] if c["lemma"] == "paths")


def test_argparse_errors():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_member_qk_cap(capsys, tmp_path):
    path = write(tmp_path, "z.json", barycenter(8).to_json())
    assert run(capsys, "member", "--n", "8", "--k", "2", path)[0] == EXIT_CAP
