import csv
import io

import pytest
from click.testing import CliRunner

from gaussaim.cli import (RunConfig, cli, entries_from_json, entries_to_csv, entries_to_json,
                          parse_config_file, resolve_config, solve_spectrum)
from gaussaim.errors import ContractError


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(cli, list(args), env=env or {}, catch_exceptions=False)
    return invoke


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_aim_ground_state_first_row(run):
    res = run("spectrum", "--method", "aim", "--n-max", "0", "--l-max", "1")
    assert res.exit_code == 0
    first = rows(res.output)[0]
    assert (first["n"], first["l"], first["method"]) == ("0", "0", "aim")
    assert float(first["binding_energy"]) == pytest.approx(341.895, abs=5e-3)


def test_all_methods_agree_on_ground_state(run):
    res = run("spectrum", "--method", "all", "--n-max", "0", "--l-max", "0")
    assert res.exit_code == 0
    got = rows(res.output)
    assert [r["method"] for r in got] == ["aim", "variational", "numerov"]
    values = [float(r["binding_energy"]) for r in got]
    assert max(values) - min(values) < 0.1


def test_shallow_well_reports_fewer_roots(run):
    res = run("spectrum", "--method", "aim", "--a", "0.1", "--n-max", "1", "--l-max", "1")
    assert res.exit_code == 1
    for r in rows(res.output):
        assert r["status"] == "FEWER-ROOTS" or float(r["binding_energy"]) < 0.05


def test_csv_layout_and_row_order(run):
    res = run("spectrum", "--method", "numerov", "--n-max", "1", "--l-max", "2")
    assert res.output.startswith("n,l,method,binding_energy,k_used,b_star,status\n")
    assert "\r" not in res.output
    got = [(int(r["n"]), int(r["l"])) for r in rows(res.output)]
    assert got == [(n, l) for n in range(2) for l in range(3)]
    for r in rows(res.output):
        digits = r["binding_energy"].replace(".", "").lstrip("0")
        assert len(digits) <= 12


def test_error_rows_are_kept(run):
    res = run("spectrum", "--method", "numerov", "--n-max", "4", "--l-max", "7")
    assert res.exit_code == 1
    got = {(r["n"], r["l"]): r for r in rows(res.output)}
    assert len(got) == 5 * 8
    assert got["3", "7"]["status"] == "UNBOUND"
    assert got["3", "7"]["binding_energy"] == ""


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_output_is_deterministic(run, fmt):
    args = ("spectrum", "--method", "all", "--n-max", "1", "--l-max", "1", "--output", fmt)
    assert run(*args).output == run(*args).output


def test_json_round_trip():
    entries = solve_spectrum(RunConfig(method="all", n_max=1, l_max=1))
    text = entries_to_json(entries)
    back = entries_from_json(text)
    assert back == entries
    for a, b in zip(back, entries):
        assert (a.binding_energy, a.b_star, a.k_used, a.status) == (b.binding_energy, b.b_star, b.k_used, b.status)
    assert entries_to_json(back) == text
    assert entries_to_csv(back) == entries_to_csv(entries)


def test_json_round_trip_with_failures():
    entries = solve_spectrum(RunConfig(method="numerov", n_max=4, l_max=7))
    assert entries_from_json(entries_to_json(entries)) == entries


def test_table_view_rounds_to_three_decimals(run):
    res = run("spectrum", "--method", "numerov", "--n-max", "0", "--l-max", "0", "--output", "table")
    assert "341.895" in res.output
    assert "341.8952" not in res.output


def test_out_path(run, tmp_path):
    out = tmp_path / "spec.csv"
    res = run("spectrum", "--method", "numerov", "--n-max", "0", "--l-max", "0", "--out", str(out))
    assert res.output == ""
    assert out.read_bytes().startswith(b"n,l,method")


@pytest.mark.parametrize("args", [
    ("spectrum", "--method", "magic"),
    ("spectrum", "--truncation-order", "7"),
    ("spectrum", "--n-max", "-1"),
    ("spectrum", "--beta", "0"),
    ("spectrum", "--precision-bits", "8"),
    ("spectrum", "--output", "xml"),
    ("convergence", "--betas", "5,x"),
    ("convergence", "--ks", "0,5"),
])
def test_usage_errors_exit_2(run, args):
    assert run(*args).exit_code == 2


def test_bad_env_precision_is_usage_error(run):
    assert run("spectrum", env={"GAUSSAIM_PRECISION_BITS": "lots"}).exit_code == 2


# ---- configuration layers ----

def test_config_file_parsing():
    text = "# comment\nbeta = 20\nn-max=1\n\nmethod = numerov  # trailing\n"
    assert parse_config_file(text) == {"beta": 20.0, "n_max": 1, "method": "numerov"}
    with pytest.raises(ContractError):
        parse_config_file("gamma = 3\n")
    with pytest.raises(ContractError):
        parse_config_file("beta 3\n")
    with pytest.raises(ContractError):
        parse_config_file("n_max = two\n")


def test_precedence_flags_over_file_over_env_over_defaults():
    env = {"GAUSSAIM_PRECISION_BITS": "128"}
    assert resolve_config({}, None, {}).precision_bits == 256
    assert resolve_config({}, None, env).precision_bits == 128
    assert resolve_config({}, "precision_bits = 192\n", env).precision_bits == 192
    assert resolve_config({"precision_bits": 160}, "precision_bits = 192\n", env).precision_bits == 160
    cfg = resolve_config({"beta": 12.0, "n_max": None}, "beta = 20\nn_max = 2\n", {})
    assert (cfg.beta, cfg.n_max, cfg.l_max) == (12.0, 2, 7)


def test_config_file_used_by_cli(run, tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("method = numerov\nn_max = 0\nl_max = 1\n")
    res = run("spectrum", "--config", str(conf))
    assert res.exit_code == 0
    assert [r["method"] for r in rows(res.output)] == ["numerov", "numerov"]
    res = run("spectrum", "--config", str(conf), "--l-max", "0")
    assert len(rows(res.output)) == 1


# ---- convergence table ----

def test_convergence_cells(run):
    res = run("convergence", "--betas", "10,20", "--ks", "5,15")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "k,beta=10,beta=20"
    table = {r["k"]: r for r in rows(res.output)}
    assert float(table["15"]["beta=10"]) == pytest.approx(341.895177621, rel=5e-7)
    assert float(table["5"]["beta=20"]) == pytest.approx(337.720033882, rel=5e-7)


def test_convergence_large_k_instability_at_double_precision(run):
    # the published k=35, beta=25 cell drifts by more than 10; with 53-bit
    # arithmetic the raw root does too, while 256 bits keeps it converged
    low = rows(run("convergence", "--betas", "25", "--ks", "35", "--precision-bits", "53").output)
    high = rows(run("convergence", "--betas", "25", "--ks", "35").output)
    assert abs(float(low[0]["beta=25"]) - 341.895) > 10
    assert abs(float(high[0]["beta=25"]) - 341.895) < 1e-2
