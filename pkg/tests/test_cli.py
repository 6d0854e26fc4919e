"""End-to-end checks of the command-line front end via cli.main()."""

import json
import math

import numpy as np
import pytest

from pathent import cli

SQ2 = 1.0 / math.sqrt(2.0)


def write_target(tmp_path, n, coeffs, name="target.json"):
    path = tmp_path / name
    payload = {"N": n, "coeffs": [[z.real, z.imag] for z in map(complex, coeffs)]}
    path.write_text(json.dumps(payload))
    return str(path)


def noon_file(tmp_path, n):
    coeffs = [0.0] * (n + 1)
    coeffs[0] = SQ2
    coeffs[n] = SQ2
    return write_target(tmp_path, n, coeffs)


def run_json(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_factorize_noon4(tmp_path, capsys):
    code, report = run_json(capsys, ["factorize", noon_file(tmp_path, 4)])
    assert code == 0
    assert report["command"] == "factorize"
    assert report["target"]["N"] == 4
    assert len(report["factors"]) == 4
    for f in report["factors"]:
        assert f["theta"] == pytest.approx(math.pi / 4.0, abs=1e-9)
    np.testing.assert_allclose(report["normalization"], 3.0, rtol=1e-9)
    assert report["round_trip_fidelity"] >= 1.0 - 1e-9


def test_factorize_single_mode_target(tmp_path, capsys):
    # |2,0>: both photons in mode a, factored by two theta=0 creations
    path = write_target(tmp_path, 2, [0.0, 0.0, 1.0])
    code, report = run_json(capsys, ["factorize", path])
    assert code == 0
    thetas = sorted(f["theta"] for f in report["factors"])
    np.testing.assert_allclose(thetas, [0.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(report["normalization"], 2.0, rtol=1e-9)
    phase = complex(*report["global_phase"])
    np.testing.assert_allclose(abs(phase), 1.0, rtol=1e-12)


@pytest.mark.parametrize(
    "payload,needle",
    [
        ('{"coeffs": [[1, 0], [0, 0]]}', "'N'"),
        ('{"N": "2", "coeffs": [[1, 0], [0, 0], [0, 0]]}', "'N'"),
        ('{"N": 2}', "'coeffs'"),
        ('{"N": 2, "coeffs": 5}', "'coeffs'"),
        ('{"N": 2, "coeffs": [[1, 0], [0, 0]]}', "3 entries"),
        ('{"N": 1, "coeffs": [[1, 0], [0]]}', "coeffs[1]"),
        ('{"N": 1, "coeffs": [[1, 0], ["x", 0]]}', "coeffs[1]"),
        ('{"N": 1, "coeffs": [[0, 0], [0, 0]]}', "all zeros"),
        ("not json at all", "not valid JSON"),
        ("[1, 2, 3]", "JSON object"),
    ],
)
def test_malformed_target_files(tmp_path, capsys, payload, needle):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    code = cli.main(["factorize", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert needle in err


def test_missing_target_file(tmp_path, capsys):
    code = cli.main(["factorize", str(tmp_path / "absent.json")])
    err = capsys.readouterr().err
    assert code == 1
    assert "cannot read target file" in err


def test_unnormalized_target_warns_and_renormalizes(tmp_path, capsys):
    path = write_target(tmp_path, 1, [2.0, 2.0])
    code = cli.main(["factorize", path])
    captured = capsys.readouterr()
    assert code == 0
    assert "re-normalizing" in captured.err
    report = json.loads(captured.out)
    coeffs = [complex(*pair) for pair in report["target"]["coeffs"]]
    np.testing.assert_allclose([c.real for c in coeffs], [SQ2, SQ2], rtol=1e-12)


def test_simulate_noon4_optimal(tmp_path, capsys):
    code, report = run_json(capsys, ["simulate", noon_file(tmp_path, 4)])
    assert code == 0
    assert report["double"] is False
    np.testing.assert_allclose(report["schedule"],
                               [1.0, 0.5, 1.0 / 3.0, 0.25], rtol=1e-15)
    np.testing.assert_allclose(report["total_yield"], 3.0 / 256.0, rtol=1e-9)
    assert report["impossible"] is False
    assert report["fidelity_vs_target"] >= 1.0 - 1e-9
    prod = math.prod(b["probability"] for b in report["blocks"])
    np.testing.assert_allclose(prod, report["total_yield"], rtol=1e-12)
    kets = {tuple(e["ket"]) for e in report["final_state"]}
    assert kets == {(4, 0), (0, 4)}


def test_simulate_noon4_double(tmp_path, capsys):
    code, report = run_json(
        capsys, ["simulate", noon_file(tmp_path, 4), "--double"]
    )
    assert code == 0
    assert report["double"] is True
    np.testing.assert_allclose(report["total_yield"], 3.0 / 16.0, rtol=1e-9)
    assert len(report["factors"]) == 4
    assert len(report["blocks"]) == 2
    assert report["fidelity_vs_target"] >= 1.0 - 1e-9


def test_simulate_explicit_schedule_matches_optimal(tmp_path, capsys):
    target = noon_file(tmp_path, 4)
    code = cli.main(["simulate", target, "--schedule", "optimal"])
    out_optimal = capsys.readouterr().out
    assert code == 0
    code = cli.main(
        ["simulate", target, "--schedule", "1,0.5,0.3333333333333333,0.25"]
    )
    out_explicit = capsys.readouterr().out
    assert code == 0
    assert out_optimal == out_explicit


def test_simulate_generic_target(tmp_path, capsys):
    path = write_target(
        tmp_path, 3,
        [0.5 + 0.1j, 0.2 - 0.3j, 0.4 + 0.0j, 0.1 + 0.6j],
    )
    code, report = run_json(capsys, ["simulate", path])
    assert code == 0
    assert report["fidelity_vs_target"] >= 1.0 - 1e-9
    prod = math.prod(b["probability"] for b in report["blocks"])
    np.testing.assert_allclose(prod, report["total_yield"], rtol=1e-9)


def test_simulate_double_rejects_odd_and_non_noon(tmp_path, capsys):
    odd = noon_file(tmp_path, 3)
    assert cli.main(["simulate", odd, "--double"]) == 1
    assert "even photon number" in capsys.readouterr().err

    plain = write_target(tmp_path, 2, [1.0, 0.0, 0.0], name="plain.json")
    assert cli.main(["simulate", plain, "--double"]) == 1
    assert "path-entangled" in capsys.readouterr().err


@pytest.mark.parametrize(
    "schedule",
    ["abc", "0.5,0.5", "1,0.5,0.25,0.125,0.1", "0,0.5,0.5,0.5", "1,2,0.5,0.5"],
)
def test_simulate_bad_schedules(tmp_path, capsys, schedule):
    code = cli.main(
        ["simulate", noon_file(tmp_path, 4), "--schedule", schedule]
    )
    assert code == 1
    assert "--schedule" in capsys.readouterr().err


def test_simulate_impossible_schedule(tmp_path, capsys):
    code, report = run_json(
        capsys, ["simulate", noon_file(tmp_path, 2), "--schedule", "1,1"]
    )
    assert code == 0
    assert report["impossible"] is True
    assert report["total_yield"] == 0.0
    assert report["fidelity_vs_target"] is None
    assert report["final_state"] == []
    assert report["blocks"][1]["probability"] == 0.0


def read_table(text):
    lines = text.strip().split("\n")
    comments = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    header = body[0].split(",")
    rows = [l.split(",") for l in body[1:]]
    return comments, header, rows


def test_yield_table_contents(tmp_path, capsys):
    code = cli.main(["yield-table", "8"])
    out = capsys.readouterr().out
    assert code == 0
    comments, header, rows = read_table(out)
    assert any("confirmed_reading=factorial" in c for c in comments)
    assert header[0] == "N" and "ratio_double_over_single" in header
    assert len(rows) == 8

    by_n = {int(r[0]): r for r in rows}
    np.testing.assert_allclose(float(by_n[4][1]), 3.0 / 256.0, rtol=1e-12)
    np.testing.assert_allclose(float(by_n[4][4]), 3.0 / 16.0, rtol=1e-12)
    np.testing.assert_allclose(float(by_n[4][7]), 16.0, rtol=1e-12)

    for n, row in by_n.items():
        # simulated single-photon yield agrees with the closed form
        np.testing.assert_allclose(float(row[2]), float(row[1]), rtol=1e-9)
        if n % 2 == 0:
            np.testing.assert_allclose(float(row[6]), float(row[4]),
                                       rtol=1e-9)
            np.testing.assert_allclose(float(row[7]), 2.0 ** n, rtol=1e-12)
        else:
            assert row[4] == "" and row[5] == "" and row[6] == ""
            assert row[7] == ""


def test_yield_table_bounds(capsys):
    assert cli.main(["yield-table", "0"]) == 1
    capsys.readouterr()
    assert cli.main(["yield-table", "25"]) == 1
    capsys.readouterr()


def test_yield_table_adjudication_edge_cases(capsys):
    cli.main(["yield-table", "1"])
    assert "confirmed_reading=undetermined" in capsys.readouterr().out
    cli.main(["yield-table", "2"])
    assert "confirmed_reading=ambiguous" in capsys.readouterr().out
    cli.main(["yield-table", "4"])
    assert "confirmed_reading=factorial" in capsys.readouterr().out


def test_fringe_output(capsys):
    code = cli.main(["fringe", "4", "9"])
    out = capsys.readouterr().out
    assert code == 0
    assert "# dominant_fourier_frequency=4" in out
    comments, header, rows = read_table(out)
    assert header == ["phase", "rate"]
    assert len(rows) == 9
    np.testing.assert_allclose(float(rows[0][1]), 2.0, rtol=1e-9)


def test_fringe_single_photon(capsys):
    code = cli.main(["fringe", "1", "8"])
    out = capsys.readouterr().out
    assert code == 0
    assert "# dominant_fourier_frequency=1" in out


def test_fringe_validation(capsys):
    assert cli.main(["fringe", "4", "8"]) == 1
    assert "aliasing" in capsys.readouterr().err
    assert cli.main(["fringe", "9", "32"]) == 1
    capsys.readouterr()
    assert cli.main(["fringe", "0", "16"]) == 1
    capsys.readouterr()


def test_out_file_matches_stdout(tmp_path, capsys):
    target = noon_file(tmp_path, 4)
    code = cli.main(["simulate", target])
    stdout_text = capsys.readouterr().out
    assert code == 0
    out_path = tmp_path / "report.json"
    code = cli.main(["simulate", target, "--out", str(out_path)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert out_path.read_text() == stdout_text


def test_outputs_are_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert cli.main(["yield-table", "6", "--out", str(a)]) == 0
    assert cli.main(["yield-table", "6", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_check_passes(capsys):
    code, report = run_json(
        capsys, ["oracle-check", "--trials", "5", "--cutoff", "4"]
    )
    assert code == 0
    assert report["status"] == "pass"
    names = [s["name"] for s in report["sections"]]
    assert names == [
        "beam_splitter_pair_vs_matrix_exponential",
        "block_vs_closed_form_amplitude",
    ]
    for section in report["sections"]:
        assert section["pass"] is True
        assert section["max_deviation"] <= 1e-9


def test_oracle_check_detects_perturbation(capsys):
    code, report = run_json(
        capsys,
        ["oracle-check", "--trials", "3", "--cutoff", "4",
         "--perturb", "1e-6"],
    )
    assert code == 2
    assert report["status"] == "fail"
    bs, block = report["sections"]
    assert bs["pass"] is False and bs["max_deviation"] > 1e-9
    assert block["pass"] is True


def test_oracle_check_deterministic(capsys):
    argv = ["oracle-check", "--trials", "4", "--cutoff", "3", "--seed", "7"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    second = capsys.readouterr().out
    assert first == second and first != ""


def test_oracle_check_validation(capsys):
    assert cli.main(["oracle-check", "--trials", "0"]) == 1
    capsys.readouterr()
    assert cli.main(["oracle-check", "--cutoff", "0"]) == 1
    capsys.readouterr()


def test_top_level_dispatch(capsys):
    assert cli.main([]) == 1
    capsys.readouterr()
    assert cli.main(["no-such-command"]) == 1
    capsys.readouterr()
    assert cli.main(["--help"]) == 0
    assert "factorize" in capsys.readouterr().out
