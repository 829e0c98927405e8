import json

import pytest

from ellreg.cli import main


def test_verify_writes_json_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["verify", "thm8", "--out", str(out)]) == 0
    assert "6/6 checks passed" in capsys.readouterr().out
    data = json.loads(out.read_text())
    assert isinstance(data, list) and len(data) == 6
    keys = {"check", "inputs", "left", "right", "abs_err", "rel_err",
            "error_kind", "error", "tolerance", "passed", "seconds",
            "truncation"}
    assert all(set(entry) == keys for entry in data)
    assert all(entry["passed"] for entry in data)


def test_verify_exit_codes(capsys):
    assert main(["verify", "thm1", "--level", "12"]) == 2
    assert "conductor 12" in capsys.readouterr().err
    assert main(["verify", "cor101", "--tolerance", "1e-16"]) == 1
    assert main(["verify", "cor101", "--tolerance", "1e-3"]) == 0
    with pytest.raises(SystemExit) as exc:
        main(["verify", "thm9"])
    assert exc.value.code == 2


def test_units_divisor_table(capsys):
    assert main(["units", "--level", "11", "--char", "11:g=2,zeta5^1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["level"] == 11 and data["character"] == "11:g=2,zeta5^1"
    orders = {tuple(row["cusp"]): complex(*row["order"])
              for row in data["divisor"]}
    assert len(orders) == 10
    # Character units only meet the cusps lying over zero.
    assert all(abs(orders[(u, 0)]) < 1e-12 for u in range(1, 6))
    assert max(abs(v) for v in orders.values()) > 0.05
    assert abs(sum(orders.values())) < 1e-12


def test_units_rejects_bad_requests(capsys):
    assert main(["units", "--level", "13", "--char", "11:g=2,zeta5^1"]) == 2
    assert main(["units", "--level", "11", "--char", "11:g=2,zeta10^1"]) == 2
    capsys.readouterr()


def test_mahler_subcommand(capsys):
    assert main(["mahler", "--poly", "1: 1, X: 1, Y: 1"]) == 0
    data = json.loads(capsys.readouterr().out)
    # Smyth's height-one line value, frozen independently in test_mahler.
    assert abs(data["mahler_measure"] - 0.3230659472194505) < 1e-10
    assert main(["mahler", "--poly", "Z: 1"]) == 2
