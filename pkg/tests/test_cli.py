"""Command-line interface tests: flags, exit codes, canonical output."""

import json

import pytest

from ghzshare.cli import main
from ghzshare.protocol import Transcript


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_run_worked_example(capsys):
    code, out = run_cli(
        capsys, "run", "--state", "A", "--secret", "11", "--position", "1", "--seed", "7"
    )
    assert code == 0
    assert "reconstructed secret: 11" in out
    assert "true config: state A, action iY1" in out


def test_run_structured_round_trips(capsys):
    code, out = run_cli(
        capsys,
        "run",
        "--state",
        "B",
        "--secret",
        "01",
        "--position",
        "6",
        "--seed",
        "21",
        "--format",
        "structured",
    )
    assert code == 0
    payload = json.loads(out)
    transcript = Transcript.from_dict(payload["transcript"])
    assert transcript.to_dict() == payload["transcript"]
    assert payload["reconstruction"]["secret"] == "01"


def test_run_default_seed_reproducible(capsys):
    _, first = run_cli(capsys, "run")
    _, second = run_cli(capsys, "run")
    assert first == second


def test_verify_summary_line_and_exit(capsys):
    code, out = run_cli(capsys, "verify")
    assert code == 0
    assert out.splitlines()[0] == "32 configurations, 256 branches, 0 failures"


def test_table_outputs_16_rows(capsys):
    code, out = run_cli(capsys, "table", "--format", "structured")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 16
    assert all(row["matched_pairings"] for row in rows)


@pytest.mark.parametrize("name,expected_code", [("lie-position", 0), ("eve-intercept", 1)])
def test_scenario_exit_codes(capsys, name, expected_code):
    code, out = run_cli(capsys, "scenario", name)
    assert code == expected_code
    assert f"scenario: {name}" in out


def test_byte_identical_outputs(capsys):
    for argv in (
        ["verify"],
        ["table"],
        ["scenario", "no-collusion", "--format", "structured"],
        ["run", "--seed", "99", "--state", "C", "--secret", "10", "--position", "1"],
    ):
        _, first = run_cli(capsys, *argv)
        _, second = run_cli(capsys, *argv)
        assert first == second, argv


def test_scenario_structured_round_trips(capsys):
    from ghzshare.harness import scenario_no_collusion

    code, out = run_cli(capsys, "scenario", "no-collusion", "--format", "structured")
    assert code == 0
    payload = json.loads(out)
    assert payload == scenario_no_collusion().to_dict()
    assert json.loads(json.dumps(payload)) == payload


def test_verify_structured_matches_records(capsys):
    from ghzshare.harness import exhaustive_verify, verify_summary

    code, out = run_cli(capsys, "verify", "--format", "structured")
    assert code == 0
    payload = json.loads(out)
    records = exhaustive_verify()
    assert payload["summary"] == verify_summary(records)
    assert payload["records"] == [r.to_dict() for r in records]


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["scenario", "unknown-name"])
    assert excinfo.value.code == 2


def test_invalid_secret_exit_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["run", "--secret", "abc"])
    assert excinfo.value.code == 2
