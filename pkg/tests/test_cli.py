from __future__ import annotations
import json

import pytest

from rotary_px_maps.census.registry import CensusRegistry
from rotary_px_maps.census.store import read_census
from rotary_px_maps.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factor(capsys):
    code, out, _ = _run(capsys, "factor", "--p", "3", "--r", "4")
    assert code == 0
    assert "x^4 - 1 over F_3: 3 irreducible factors" in out


@pytest.mark.parametrize("p, r", [(3, 3), (2, 5), (9, 4)])
def test_factor_rejects_parameters(capsys, p, r):
    code, _, err = _run(capsys, "factor", "--p", str(p), "--r", str(r))
    assert code == 2
    assert err.startswith("error reason=parameter_domain")


def test_irreps(capsys):
    code, out, _ = _run(capsys, "irreps", "--p", "13", "--r", "7")
    assert code == 0
    for sig in ("R{1,6}", "R{2,5}", "R{3,4}", "L(+,+)", "L(-,-)"):
        assert sig in out


def test_irreps_orbits_and_table(capsys):
    code, out, _ = _run(capsys, "irreps", "--p", "3", "--r", "4", "--orbits")
    assert code == 0
    assert "L(+,-), L(-,+)" in out
    code, out, _ = _run(capsys, "irreps", "--p", "3", "--r", "4", "--table")
    assert code == 0
    assert "C(3,4,1)" in out


def test_census_counts(capsys):
    code, out, _ = _run(capsys, "census", "--p", "13", "--r", "7", "--s", "1", "6")
    assert code == 0
    assert "census p=13 r=7 s=1: 4 maps" in out
    assert "census p=13 r=7 s=6: 2 maps" in out
    code, out, _ = _run(capsys, "census", "--p", "3", "--r", "5", "--s", "2")
    assert code == 0
    assert "0 maps" in out


def test_census_verified(capsys):
    code, out, _ = _run(capsys, "census", "--p", "3", "--r", "4", "--s", "1", "--verify-graphs", "--brute")
    assert code == 0
    assert out.strip() == "census p=3 r=4 s=1: 4 maps, all verified [graph, brute, decomp]"


def test_census_out_csv_and_registry(capsys, tmp_path):
    out_file = tmp_path / "c.json"
    csv = tmp_path / "c.csv"
    reg = tmp_path / "reg"
    code, _, _ = _run(
        capsys,
        "census", "--p", "3", "--r", "5", "--s", "4",
        "--out", str(out_file), "--csv", str(csv), "--registry", str(reg),
    )
    assert code == 0
    loaded = read_census(out_file)
    assert (loaded.p, loaded.r, loaded.s) == (3, 5, 4)
    assert len(loaded.entries) == 2
    assert len(csv.read_text().strip().splitlines()) == 3
    runs = CensusRegistry(reg).list_runs()
    assert [run.entries for run in runs] == [2]


def test_census_out_directory(capsys, tmp_path):
    code, _, _ = _run(capsys, "census", "--p", "5", "--r", "3", "--s", "1", "2", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "census_p5_r3_s1.json").exists()
    assert (tmp_path / "census_p5_r3_s2.json").exists()


def test_census_budget_exit_code(capsys):
    code, _, err = _run(capsys, "census", "--p", "3", "--r", "5", "--s", "3", "--brute", "--max-group-order", "100")
    assert code == 3
    assert "reason=budget_exceeded" in err


def test_census_large_s_needs_flag(capsys):
    code, _, _ = _run(capsys, "census", "--p", "3", "--r", "5", "--s", "5")
    assert code == 2
    code, out, _ = _run(capsys, "census", "--p", "3", "--r", "5", "--s", "5", "--allow-large-s")
    assert code == 0
    assert "1 maps" in out


def test_exists(capsys):
    code, out, _ = _run(capsys, "exists", "--p", "3", "--r", "5", "--s", "2")
    assert (code, out.strip()) == (0, "no (zeta=4)")
    code, out, _ = _run(capsys, "exists", "--p", "13", "--r", "7", "--s", "3")
    assert (code, out.strip()) == (0, "yes (zeta=2)")
    code, _, err = _run(capsys, "exists", "--p", "3", "--r", "8", "--s", "2")
    assert code == 2
    assert "reason=parameter_domain" in err


def test_construct_and_iso(capsys, tmp_path):
    first = tmp_path / "m1.json"
    second = tmp_path / "m2.json"
    edges = tmp_path / "g.txt"
    code, out, _ = _run(
        capsys,
        "construct", "--p", "3", "--r", "4", "--classes", "L(+,+),R{1,3}",
        "--out", str(first), "--emit-graph", str(edges),
    )
    assert code == 0
    assert "|G|=216 V=36" in out
    assert edges.read_text().splitlines()[0] == "3 4 2 1 36"
    assert json.loads(first.read_text())

    code, out, _ = _run(capsys, "iso", str(first), str(first))
    assert (code, out.strip()) == (0, "isomorphic")

    code, _, _ = _run(capsys, "construct", "--p", "3", "--r", "4", "--classes", "L(-,-),R{1,3}", "--out", str(second))
    assert code == 0
    code, out, _ = _run(capsys, "iso", str(first), str(second))
    assert code == 0
    assert out.startswith("not isomorphic")


@pytest.mark.parametrize("classes", ["L(+,+),L(+,+)", "L(-,+)", "Q{9}"])
def test_construct_rejects_class_lists(capsys, classes):
    code, _, err = _run(capsys, "construct", "--p", "3", "--r", "4", "--classes", classes)
    assert code == 2
    assert "reason=parameter_domain" in err


def test_iso_missing_file_is_a_parameter_error(capsys, tmp_path):
    code, out, err = _run(capsys, "iso", str(tmp_path / "absent.json"), str(tmp_path / "absent.json"))
    assert code == 2
    assert out == ""
    assert len(err.strip().splitlines()) == 1
    assert err.startswith("error reason=parameter_domain")


def test_iso_rejects_records_with_wrong_vector_length(capsys, tmp_path):
    good = tmp_path / "m.json"
    code, _, _ = _run(capsys, "construct", "--p", "3", "--r", "4", "--classes", "R{1,3}", "--out", str(good))
    assert code == 0
    record = json.loads(good.read_text())
    record["rho"] = [1, 1, 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(record))
    code, _, err = _run(capsys, "iso", str(bad), str(good))
    assert code == 2
    assert len(err.strip().splitlines()) == 1
    assert err.startswith("error reason=parameter_domain")

    record["rho"] = "not a list"
    bad.write_text(json.dumps(record))
    code, _, err = _run(capsys, "iso", str(bad), str(good))
    assert code == 2
    assert err.startswith("error reason=parameter_domain")


def test_exists_reports_the_range_without_census_flags(capsys):
    code, _, err = _run(capsys, "exists", "--p", "3", "--r", "7", "--s", "7")
    assert code == 2
    assert err.startswith("error reason=parameter_domain")
    assert "allow_large_s" not in err
    assert "max(3, s+1)" in err
