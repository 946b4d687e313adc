import csv
import io
import json

import pytest

from frobsplit.cli import execute, flatten, main, parse, render


def run(argv):
    ns = parse(argv)
    return execute(ns)


def test_parse_torus_example():
    ns = parse(["torus", "--family", "C", "--r", "1", "--ell", "3", "--m", "1"])
    assert ns.subcommand == "torus"
    assert (ns.family, ns.r, ns.ell, ns.m) == ("C", 1, 3, 1)


def test_parse_weil_example():
    ns = parse(["weil", "--q", "3", "--poly", "9,0,6,0,1"])
    assert ns.subcommand == "weil" and ns.q == 3


def test_parse_rejects_bad_family(capsys):
    with pytest.raises(SystemExit) as exc:
        parse(["torus", "--family", "Q", "--r", "1", "--ell", "3"])
    assert exc.value.code == 2
    assert "--family" in capsys.readouterr().err


def test_parse_rejects_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        parse(["torus", "--family", "C", "--r", "1", "--ell", "3", "--frobnicate", "1"])
    assert exc.value.code == 2


def test_help_exits_zero_and_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        parse(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for sub in ("torus", "density", "cm-fraction", "simulate", "goursat", "weil", "nonspecial"):
        assert sub in out


def test_simulate_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        parse(["simulate", "--family", "C", "--r", "1", "--ells", "3", "--samples", "10"])
    assert exc.value.code == 2
    assert "--seed" in capsys.readouterr().err


def test_density_product_payload():
    report, status = run(
        ["density", "--family", "C", "--r", "1", "--ells", "3,5", "--m", "1", "--squeeze", "full"]
    )
    assert status == 0
    assert report["result"]["product"] == {"num": "35", "den": "96"}
    assert report["command"]["ells"] == "3,5"


def test_cm_fraction_payload():
    report, status = run(["cm-fraction", "--degree", "4", "--ell", "3"])
    assert status == 0
    assert report["result"]["per_ell"][0]["fraction"] == {"num": "1", "den": "10"}


def test_weil_rejection_exit_4():
    report, status = run(["weil", "--q", "3", "--poly", "3,-5,1"])
    assert status == 4
    assert report["error"]["type"] == "RootBoundViolation"


def test_weil_analysis_payload():
    report, status = run(["weil", "--q", "3", "--poly", "9,0,6,0,1"])
    assert status == 0
    res = report["result"]
    assert res["d"] == 2 and res["root"] == "3,0,1"
    assert res["isogeny_shape"] == "Y^2"
    assert res["factors"][0]["e"] == 2 and res["factors"][0]["d_y"] == 1


def test_budget_exceeded_exit_3():
    report, status = run(["torus", "--family", "C", "--r", "9", "--ell", "11"])
    assert status == 3
    assert report["error"]["type"] == "BudgetExceeded"


def test_composite_ell_domain_rejection():
    report, status = run(["torus", "--family", "C", "--r", "1", "--ell", "4"])
    assert status == 4


def test_torus_payload_counts():
    report, status = run(["torus", "--family", "C", "--r", "1", "--ell", "5", "--m", "2"])
    assert status == 0
    res = report["result"]
    assert res["torus_order"] == "24" and res["regular_count"] == "16"
    assert res["normalizer_order"] == "48" and res["weyl_order"] == "2"
    # matrices serialize as row-major coefficient vectors
    gen = res["generators"][0]
    assert isinstance(gen[0][0], list)


def test_simulate_round_trip_payload_identical():
    argv = [
        "simulate", "--family", "C", "--r", "1", "--ells", "3,5",
        "--samples", "2000", "--seed", "11",
    ]
    first, s1 = run(argv)
    second, s2 = run(argv)
    assert s1 == s2 == 0
    assert first["result"] == second["result"]
    assert first["command"] == second["command"]


def test_goursat_cli():
    report, status = run(
        ["goursat", "--family", "C", "--r", "1", "--ells", "5,7", "--seed", "3"]
    )
    assert status == 0
    res = report["result"]
    assert res["full_product"] and res["in_hypothesis"]
    assert res["closure_order"] == str(120 * 336)


def test_nonspecial_cli():
    report, status = run(["nonspecial", "--r", "6", "--sig", "1:5"])
    assert status == 0
    assert "ii" in report["result"]["satisfied"]
    report2, status2 = run(["nonspecial", "--r", "6", "--sig", "3:3"])
    assert status2 == 0
    assert report2["result"]["satisfied"] == []
    report3, status3 = run(["nonspecial", "--r", "6", "--sig", "1:4"])
    assert status3 == 4


def test_csv_and_json_agree_field_for_field():
    ns = parse(["density", "--family", "C", "--r", "1", "--ells", "3,5"])
    report, _ = execute(ns)
    as_json = json.loads(render(report, "json"))
    reader = csv.reader(io.StringIO(render(report, "csv")))
    rows = {k: v for k, v in list(reader)[1:]}
    flat = dict(flatten(as_json))
    for key, value in flat.items():
        assert rows[key] == value


def test_main_writes_output_file(tmp_path):
    out = tmp_path / "report.json"
    status = main(
        ["cm-fraction", "--degree", "4", "--ell", "2", "--output", str(out)]
    )
    assert status == 0
    data = json.loads(out.read_text())
    assert data["result"]["per_ell"][0]["fraction"] == {"num": "1", "den": "5"}
    assert data["schema"] == "frobsplit/1"
