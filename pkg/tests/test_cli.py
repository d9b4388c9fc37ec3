"""Driver behavior: exit codes, determinism, golden comparison, config."""

import json
from pathlib import Path

import pytest

from qhv import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


def payloads(lines):
    return [json.loads(line) for line in lines]


@pytest.fixture(autouse=True)
def reset_budget():
    yield
    from qhv import ideals

    ideals.set_step_budget(None)


class TestBasics:
    def test_quadric_single_pair(self, capsys):
        code, lines, _ = run_cli(capsys, "verify", "quadric", "--k", "3", "--l", "1")
        assert code == 0
        (report,) = payloads(lines)
        assert report["check_name"] == "quadric-gluing"
        assert report["params"] == {"k": 3, "l": 1}
        assert report["status"] == "pass"
        assert report["witnesses"][0]["cleared_power"] == 3

    def test_invalid_twist_yields_error_status(self, capsys):
        code, lines, _ = run_cli(capsys, "verify", "quadric", "--k", "2", "--l", "1")
        assert code == 1
        (report,) = payloads(lines)
        assert report["status"] == "error"
        assert "odd" in report["witnesses"][0]["error"]

    def test_terminal_small(self, capsys):
        code, lines, _ = run_cli(capsys, "terminal", "--n-max", "12")
        assert code == 0
        (report,) = payloads(lines)
        assert report["witnesses"][0]["counterexamples"] == []

    def test_bundle_transcript(self, capsys):
        code, lines, _ = run_cli(
            capsys, "bundle-normalize", "--n", "1", "--k0", "2", "--kinf", "1"
        )
        assert code == 0
        (report,) = payloads(lines)
        assert report["witnesses"][0]["normalization"] == ["A0", "A0", "Ainf"]
        assert report["witnesses"][0]["steps"] == 3

    def test_human_mode(self, capsys):
        code, lines, _ = run_cli(capsys, "--human", "wps")
        assert code == 0
        assert all(line.startswith("PASS") for line in lines)

    def test_flags_after_subcommand(self, capsys):
        code, lines, _ = run_cli(capsys, "dp-homology", "--human")
        assert code == 0
        assert lines and lines[0].startswith("PASS")

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["no-such-suite"])
        assert excinfo.value.code == 2

    def test_budget_too_small_gives_error_report(self, capsys):
        code, lines, _ = run_cli(
            capsys, "verify", "f4", "--k", "1", "--l", "1", "--budget", "10"
        )
        assert code == 1
        assert any(p["status"] == "error" for p in payloads(lines))

    def test_budget_env_variable(self, capsys, monkeypatch):
        from qhv import ideals

        monkeypatch.setenv("QHV_BUDGET", "10")
        assert ideals.default_step_budget() == 10
        code, lines, _ = run_cli(capsys, "verify", "f4", "--k", "1", "--l", "1")
        assert code == 1
        assert any(p["status"] == "error" for p in payloads(lines))
        monkeypatch.setenv("QHV_BUDGET", "junk")
        with pytest.raises(ValueError):
            ideals.default_step_budget()


class TestDeterminism:
    def test_byte_identical_without_duration(self, capsys):
        def stripped():
            code, lines, _ = run_cli(capsys, "verify", "quotient", "--k", "0,1")
            assert code == 0
            out = []
            for p in payloads(lines):
                p.pop("duration_ms")
                out.append(json.dumps(p, separators=(",", ":")))
            return out

        assert stripped() == stripped()


class TestGolden:
    def test_update_then_compare(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys,
            "verify",
            "quadric",
            "--k",
            "1",
            "--l",
            "1",
            "--golden",
            str(tmp_path),
            "--update-golden",
        )
        assert code == 0
        assert (tmp_path / "verify-quadric.jsonl").exists()
        code, _, err = run_cli(
            capsys,
            "verify",
            "quadric",
            "--k",
            "1",
            "--l",
            "1",
            "--golden",
            str(tmp_path),
        )
        assert code == 0 and err == ""

    def test_mismatch_detected(self, capsys, tmp_path):
        (tmp_path / "wps.jsonl").write_text('{"made": "up"}\n')
        code, _, err = run_cli(capsys, "wps", "--golden", str(tmp_path))
        assert code == 1
        assert "golden mismatch" in err

    def test_missing_golden_reported(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "wps", "--golden", str(tmp_path))
        assert code == 1
        assert "does not exist" in err

    def test_committed_goldens_match(self, capsys):
        goldens = Path(__file__).resolve().parent.parent / "goldens"
        for suite in ("verify-f4", "dp-homology", "wps"):
            argv = suite.split("-", 1) if suite.startswith("verify-") else [suite]
            code, _, err = run_cli(capsys, *argv, "--golden", str(goldens))
            assert code == 0, f"{suite}: {err}"

    def test_full_run_matches_golden(self, capsys):
        goldens = Path(__file__).resolve().parent.parent / "goldens"
        code, lines, err = run_cli(capsys, "all", "--golden", str(goldens))
        assert code == 0, err
        assert len(lines) == len(
            (goldens / "all.jsonl").read_text().splitlines()
        )


class TestConfigFile:
    def test_config_values_and_flag_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment line\n"
            "quadric-k = 1,3\n"
            "quadric-l = 1\n"
            "terminal-n-max = 9\n"
        )
        code, lines, _ = run_cli(capsys, "verify", "quadric", "--config", str(cfg))
        assert code == 0
        assert [p["params"] for p in payloads(lines)] == [
            {"k": 1, "l": 1},
            {"k": 3, "l": 1},
        ]
        # a flag overrides the file
        code, lines, _ = run_cli(
            capsys, "verify", "quadric", "--config", str(cfg), "--k", "5"
        )
        assert [p["params"] for p in payloads(lines)] == [{"k": 5, "l": 1}]

    def test_bad_config_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nonsense-key = 1\n")
        code, _, err = run_cli(capsys, "wps", "--config", str(cfg))
        assert code == 2
        assert "config error" in err

    def test_malformed_line_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just some words\n")
        code, _, err = run_cli(capsys, "wps", "--config", str(cfg))
        assert code == 2

    def test_missing_config_file_exit_2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "wps", "--config", str(tmp_path / "none.cfg"))
        assert code == 2
