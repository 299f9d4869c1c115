"""Tests for CLI commands."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from subreg.cli import _exit_on_errors, _exit_with_error, main
from subreg.config import CACHE_DIR_ENV

VACUUM = ["character", "--k", "-5/3", "--label", "1,1,1"]


@pytest.fixture(autouse=True)
def no_cache_override(monkeypatch):
    monkeypatch.delenv(CACHE_DIR_ENV, raising=False)


class TestInitCommand:
    """Tests for the init command."""

    def test_creates_config_file(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(main, ["init"])

            assert result.exit_code == 0
            assert "[compute]" in Path(".subreg/config.toml").read_text()
            assert "Created" in result.output

    def test_fails_if_config_exists_without_force(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path(".subreg").mkdir()
            Path(".subreg/config.toml").write_text("[compute]\nparallelism = 2\n")

            result = runner.invoke(main, ["init"])

            assert result.exit_code == 1
            assert "already exists" in result.output
            assert "parallelism = 2" in Path(".subreg/config.toml").read_text()

    def test_force_overwrites(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path(".subreg").mkdir()
            Path(".subreg/config.toml").write_text("[compute]\nparallelism = 2\n")

            result = runner.invoke(main, ["init", "--force"])

            assert result.exit_code == 0
            assert "parallelism = 1" in Path(".subreg/config.toml").read_text()


class TestLevelsCommand:
    """Tests for the levels command."""

    def test_principal_levels(self):
        result = CliRunner().invoke(main, ["levels", "--q", "3", "--p-max", "8"])

        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 4
        assert "-5/3" in lines[0]
        assert "9 modules" in lines[0]

    def test_json(self):
        result = CliRunner().invoke(
            main, ["levels", "--q", "4", "--p-max", "7", "--format", "json"]
        )

        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert [row["p"] for row in rows] == [5, 7]
        assert rows[0]["k"] == "-7/4"
        assert rows[0]["modules"] == 4

    def test_csv(self):
        result = CliRunner().invoke(
            main, ["levels", "--q", "3", "--p-max", "4", "--format", "csv"]
        )

        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "k,p,q,class,modules"

    def test_bad_denominator(self):
        result = CliRunner().invoke(main, ["levels", "--q", "5", "--p-max", "9"])

        assert result.exit_code == 2

    def test_empty_range(self):
        result = CliRunner().invoke(
            main, ["levels", "--q", "3", "--p-max", "2", "--p-min", "4"]
        )

        assert result.exit_code == 2

    def test_no_levels(self):
        result = CliRunner().invoke(main, ["levels", "--q", "3", "--p-max", "3"])

        assert result.exit_code == 0
        assert "No admissible levels" in result.output


class TestModulesCommand:
    """Tests for the modules command."""

    def test_text_table(self):
        result = CliRunner().invoke(main, ["modules", "--k", "-5/3"])

        assert result.exit_code == 0
        assert "9 simple modules" in result.output
        assert "chi =    5/48" in result.output

    def test_json_rows(self):
        result = CliRunner().invoke(
            main, ["modules", "--k", "-7/4", "--format", "json"]
        )

        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert len(rows) == 4
        assert {row["s"] for row in rows} == {"1'", "2'"}

    def test_csv_rows(self):
        result = CliRunner().invoke(main, ["modules", "--k", "-5/3", "--format", "csv"])

        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "s,i,j,xi,chi,top_dim,psi_image,phi_image"
        assert lines[1] == "1,1,1,0,0,1,3:1:2,1:1:1"
        assert len(lines) == 10

    @pytest.mark.parametrize("k", ["1/2", "-3", "-2", "abc"])
    def test_rejects_level(self, k):
        result = CliRunner().invoke(main, ["modules", "--k", k])

        assert result.exit_code == 2
        assert "Error:" in result.output


class TestCharacterCommand:
    """Tests for the character command."""

    def test_vacuum_table(self):
        result = CliRunner().invoke(main, [*VACUUM, "--order", "2", "--no-cache"])

        assert result.exit_code == 0
        assert "order 2" in result.output
        assert "q^(0 + n) z^(0 + m)" in result.output

    def test_json_offsets(self):
        result = CliRunner().invoke(
            main,
            ["character", "--k", "-5/3", "--label", "3,1,1", "--no-cache"]
            + ["--order", "2", "--format", "json"],
        )

        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["k"] == "-5/3"
        assert payload["series"]["q_offset"] == "5/48"
        assert payload["series"]["z_offset"] == "1/6"
        assert [0, 0, "1/1"] in payload["series"]["terms"]

    def test_csv_terms(self):
        result = CliRunner().invoke(
            main,
            ["character", "--k", "-7/4", "--label", "1p,1,1", "--no-cache"]
            + ["--order", "1", "--format", "csv"],
        )

        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "q_exp,z_exp,coefficient"
        assert lines[1] == "0/1,0/1,1"

    def test_writes_cache(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(main, [*VACUUM, "--order", "1"])

            assert result.exit_code == 0
            assert Path(".subreg/cache/principal-p4/1-1-1-N1.json").exists()

    def test_clean_removes_cache(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            runner.invoke(main, [*VACUUM, "--order", "1"])

            result = runner.invoke(main, ["clean"])

            assert result.exit_code == 0
            assert "Removed" in result.output
            assert not Path(".subreg/cache").exists()

    def test_clean_with_nothing(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(main, ["clean"])

            assert result.exit_code == 0
            assert "Nothing to clean" in result.output

    @pytest.mark.parametrize("label", ["1,3,1", "1,1", "1,x,1", "1p,1,1", "7,1,1"])
    def test_rejects_label(self, label):
        result = CliRunner().invoke(
            main, ["character", "--k", "-5/3", "--label", label, "--no-cache"]
        )

        assert result.exit_code == 2

    def test_rejects_negative_order(self):
        result = CliRunner().invoke(main, [*VACUUM, "--order", "-1", "--no-cache"])

        assert result.exit_code == 2

    def test_default_order_from_config(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path(".subreg").mkdir()
            Path(".subreg/config.toml").write_text(
                "[compute]\ndefault_order = 1\n[cache]\nenabled = false\n"
            )

            result = runner.invoke(main, VACUUM)

            assert result.exit_code == 0
            assert "order 1" in result.output
            assert not Path(".subreg/cache").exists()


class TestVerifyCommand:
    """Tests for the verify command."""

    def test_classifier_suite(self):
        result = CliRunner().invoke(
            main, ["verify", "--suite", "classifier", "--k", "-5/3"]
        )

        assert result.exit_code == 0
        assert "PASS  classifier:" in result.output

    def test_cartan_suite(self):
        result = CliRunner().invoke(main, ["verify", "--suite", "cartan"])

        assert result.exit_code == 0
        assert "FAIL" not in result.output

    def test_characters_suite(self):
        result = CliRunner().invoke(
            main, ["verify", "--suite", "characters", "--k", "-7/4", "--order", "1"]
        )

        assert result.exit_code == 0
        assert "twisted-identity" in result.output

    def test_modes_suite_at_small_bounds(self):
        result = CliRunner().invoke(
            main, ["verify", "--suite", "modes", "--bound", "1", "--depth", "1"]
        )

        assert result.exit_code == 0, result.output
        assert "PASS  modes/jacobi" in result.output

    def test_failing_suite_exits_one(self, monkeypatch):
        from subreg import verify

        def failing(options):
            report = verify.SuiteReport("cartan")
            report.add("forced", False, detail="broken on purpose")
            return report

        monkeypatch.setitem(verify.RUNNERS, "cartan", failing)
        result = CliRunner().invoke(main, ["verify", "--suite", "cartan"])

        assert result.exit_code == 1
        assert "FAIL  cartan/forced (1 checked): broken on purpose" in result.output

    def test_unknown_suite(self):
        result = CliRunner().invoke(main, ["verify", "--suite", "everything"])

        assert result.exit_code == 2


class TestErrorHelpers:
    """Tests for the error helpers."""

    def test_exit_with_error(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            _exit_with_error("bad input", code=3)

        assert exc_info.value.code == 3
        assert "Error: bad input" in capsys.readouterr().err

    def test_internal_errors_exit_three(self):
        from subreg.characters import WindowOverflowError

        with pytest.raises(SystemExit) as exc_info:
            with _exit_on_errors():
                raise WindowOverflowError("clipped")

        assert exc_info.value.code == 3

    def test_input_errors_exit_two(self):
        from subreg.classifier import OutOfRangeError

        with pytest.raises(SystemExit) as exc_info:
            with _exit_on_errors():
                raise OutOfRangeError("out of range")

        assert exc_info.value.code == 2

    def test_unexpected_errors_exit_three(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            with _exit_on_errors():
                raise TypeError("'int' object is not callable")

        assert exc_info.value.code == 3
        assert "Error: unexpected TypeError" in capsys.readouterr().err

    def test_click_errors_pass_through(self):
        import click

        with pytest.raises(click.BadParameter):
            with _exit_on_errors():
                raise click.BadParameter("bad label")
