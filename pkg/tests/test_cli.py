"""Command-line interface: formats, exit codes, determinism, file output."""
from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from kdvcorr.cli import main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tau_text(capsys):
    code, out, _ = run(capsys, "tau", "3,2")
    assert code == 0
    assert out == "<tau_3 tau_2> = 29/5760 (g=2)\n"


def test_tau_single_index(capsys):
    code, out, _ = run(capsys, "tau", "1")
    assert code == 0
    assert out == "<tau_1> = 1/24 (g=1)\n"


def test_tau_off_dimension(capsys):
    code, out, _ = run(capsys, "tau", "2,2")
    assert code == 0
    assert out == "<tau_2 tau_2> = 0 (no genus fits the dimension)\n"


def test_tau_json(capsys):
    code, out, _ = run(capsys, "tau", "3,2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == {
        "indices": [3, 2],
        "genus": 2,
        "value": {"num": "29", "den": "5760"},
    }


def test_tau_csv(capsys):
    code, out, _ = run(capsys, "tau", "3,2", "--format", "csv")
    assert code == 0
    assert out == "k1,k2,g,numerator,denominator\n3,2,2,29,5760\n"


def test_tau_csv_off_dimension_leaves_genus_blank(capsys):
    code, out, _ = run(capsys, "tau", "2,2", "--format", "csv")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row == ["2", "2", "", "0", "1"]


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "2", "3")
    assert code == 0
    assert out.splitlines() == [
        "<tau_0 tau_2> = 1/24 (g=1)",
        "<tau_1 tau_1> = 1/24 (g=1)",
        "<tau_2 tau_3> = 29/5760 (g=2)",
    ]


def test_table_empty_range_csv_is_header_only(capsys):
    code, out, _ = run(capsys, "table", "2", "0", "--format", "csv")
    assert code == 0
    assert out == "k1,k2,g,numerator,denominator\n"


def test_table_json_spot(capsys):
    code, out, _ = run(capsys, "table", "4", "9", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    spot = [r for r in rows if r["indices"] == [2, 2, 2, 4]]
    assert spot == [
        {
            "indices": [2, 2, 2, 4],
            "genus": 3,
            "value": {"num": "53", "den": "1152"},
        }
    ]


def test_table_csv_parses_and_sorts(capsys):
    code, out, _ = run(capsys, "table", "3", "6", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k1", "k2", "k3", "g", "numerator", "denominator"]
    keys = [tuple(map(int, r[:3])) for r in rows[1:]]
    assert keys == sorted(keys)
    assert all(k == tuple(sorted(k)) for k in keys)


def test_kappa_text(capsys):
    code, out, _ = run(capsys, "kappa", "1,1", "5")
    assert code == 0
    assert out == "<kappa_1 kappa_1 tau_5> = 3781/2903040 (g=3)\n"


def test_kappa_without_taus(capsys):
    code, out, _ = run(capsys, "kappa", "3")
    assert code == 0
    assert out == "<kappa_3> = 1/1152 (g=2)\n"


def test_kappa_csv(capsys):
    code, out, _ = run(capsys, "kappa", "2", "2", "--format", "csv")
    assert code == 0
    assert out == "kappa,tau,g,numerator,denominator\n2,2,2,29,5760\n"


def test_wp_text(capsys):
    code, out, _ = run(capsys, "wp", "1", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "W_{1,2}: coefficient of s^d / prod z_i^(2 k_i + 2)"
    assert "  d=2 k=(0, 0)  1/16" in lines
    assert "v_{1,2}: coefficient of s^d prod L_i^(2 k_i)" in lines
    assert "  d=0 k=(0, 2)  1/48" in lines


def test_wp_smallest_case(capsys):
    code, out, _ = run(capsys, "wp", "0", "3")
    assert code == 0
    assert "  d=0 k=(0, 0, 0)  1" in out.splitlines()


def test_wp_json(capsys):
    code, out, _ = run(capsys, "wp", "1", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["g"] == 1 and data["n"] == 1
    entries = {(e["d"], tuple(e["indices"])): e for e in data["entries"]}
    assert entries[(1, (0,))]["w"] == {"num": "1", "den": "24"}
    assert entries[(0, (1,))]["w"] == {"num": "1", "den": "8"}


def test_wave_text(capsys):
    code, out, _ = run(capsys, "wave", "1", "--depth", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "A[s_(1)] = P c + Q q"
    assert "  P: -1/15 z^5 - 1/30 z^2" in lines
    assert "  expansion to z^-6: -1/24 z^-1 + 77/576 z^-4" in lines
    assert "B[s_(1)] = P c + Q q" in lines


def test_wave_csv_round_trips(capsys):
    code, out, _ = run(capsys, "wave", "2", "--depth", "8", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["component", "part", "exponent", "numerator", "denominator"]
    assert ["A", "P", "7", "-1", "105"] in rows


def test_selftest_text(capsys):
    code, out, _ = run(capsys, "selftest", "--depth", "6")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("ok    ") for line in lines[:-1])
    assert lines[-1] == "15 checks, 0 failed (depth 6)"


def test_selftest_injected_fault_fails(capsys):
    code, out, _ = run(capsys, "selftest", "--depth", "6", "--inject-fault")
    assert code == 1
    assert any(line.startswith("FAIL  correlator-spots") for line in out.splitlines())


def test_selftest_shallow_truncation_fails(capsys):
    code, out, _ = run(capsys, "selftest", "--depth", "6", "--shallow-truncation")
    assert code == 1
    assert "FAIL  shallow-truncation" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["tau", "3,x"],
        ["tau", "-1"],
        ["tau", "3,2", "--depth", "0"],
        ["table", "1", "5"],
        ["table", "2", "-1"],
        ["kappa", "0"],
        ["kappa", "1,0", "2"],
        ["wp", "-1", "1"],
        ["wp", "1", "0"],
        ["wp", "0", "2"],
        ["selftest", "--depth", "5"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.strip()


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as fail:
        main(["frobnicate"])
    assert fail.value.code == 2


def test_io_failure_exits_one(capsys):
    code, _, err = run(capsys, "tau", "3,2", "--out", "/no/such/dir/out.txt")
    assert code == 1
    assert err.strip()


def test_out_writes_exact_stdout_bytes(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "2", "6", "--format", "csv")
    assert code == 0
    target = tmp_path / "table.csv"
    code2, out2, _ = run(capsys, "table", "2", "6", "--format", "csv", "--out", str(target))
    assert code2 == 0 and out2 == ""
    assert target.read_text() == out


def test_table_deterministic_across_workers(capsys):
    outputs = []
    for workers in ("1", "4"):
        code, out, _ = run(
            capsys, "table", "3", "12", "--format", "csv", "--workers", workers
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
    code, again, _ = run(capsys, "table", "3", "12", "--format", "csv")
    assert again == outputs[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kdvcorr", "tau", "3,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "<tau_3 tau_2> = 29/5760 (g=2)\n"
