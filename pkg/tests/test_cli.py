"""Command-line interface: schemas, determinism, round-trips, exit codes."""

import json

import pytest

from peakwave import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestProfileCommand:
    def test_stdout_csv(self, capsys):
        code, out, _ = run(
            ["profile", "--l1", "1", "--l2", "1", "--omega", "-3", "--z", "2",
             "--xmax", "10", "--n", "11"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# {")
        assert lines[1] == "x,phi,dphi"
        assert len(lines) == 13
        header = json.loads(lines[0][2:])
        assert header["regime"] == "attractive-attractive"

    def test_round_trip_17_digits(self, tmp_path, capsys):
        out_file = tmp_path / "profile.csv"
        code, _, _ = run(
            ["profile", "--l1", "1", "--l2", "1", "--omega", "-3", "--z", "2",
             "--xmax", "8", "--n", "101", "--out", str(out_file)], capsys)
        assert code == 0
        lines = out_file.read_text().split("\n")
        from peakwave import ProfileEvaluator, validate_params
        ev = ProfileEvaluator.from_params(validate_params(1, 1, -3, 2))
        for line in lines[2:10]:
            x, phi, _ = (float(tok) for tok in line.split(","))
            assert float(ev.value(x)) == phi  # lossless binary64 round-trip

    def test_deterministic_bytes(self, tmp_path, capsys):
        args = ["profile", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "1",
                "--xmax", "5", "--n", "51"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(f1)], capsys)[0] == 0
        assert run(args + ["--out", str(f2)], capsys)[0] == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_validation_exit_code(self, capsys):
        code, _, err = run(
            ["profile", "--l1", "1", "--l2", "1", "--omega", "-0.2", "--z", "1"], capsys)
        assert code == 2
        assert "RegimeError" in err


class TestVkScanCommand:
    def test_schema(self, capsys):
        code, out, _ = run(
            ["vk-scan", "--omega-min", "-3", "--omega-max", "-2", "--omega-points", "3",
             "--z-min", "1"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[1] == "omega,z,norm_sq,dnorm_domega,p_index"
        assert len(lines) == 5
        assert lines[2].endswith(",1")  # p_index = 1 on this branch

    def test_json_format(self, capsys):
        code, out, _ = run(
            ["vk-scan", "--omega-min", "-2", "--omega-max", "-2", "--omega-points", "1",
             "--z-min", "0.5", "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["columns"] == ["omega", "z", "norm_sq", "dnorm_domega", "p_index"]
        assert len(payload["rows"]) == 1


class TestSpectrumCommand:
    def test_header_counts(self, capsys):
        code, out, _ = run(
            ["spectrum", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "-1",
             "--kind", "L1", "--n", "2001", "--k", "2"], capsys)
        assert code == 0
        header = json.loads(out.split("\n")[0][2:])
        assert header["negative_count"] == 2
        assert header["essential_edge"] == 2.0


class TestClassifyCommand:
    def test_stable_line(self, capsys):
        code, out, _ = run(
            ["classify", "--l1", "2", "--l2", "-1", "--omega", "-0.5", "--z", "1",
             "--space", "full"], capsys)
        assert code == 0
        assert out.strip() == "OrbitallyStable (numeric=analytic)"

    def test_unstable_even_space_agreement(self, capsys):
        code, out, _ = run(
            ["classify", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "-0.5",
             "--space", "even"], capsys)
        assert code == 0
        assert out.strip() == "OrbitallyStable (numeric=analytic)"

    def test_degenerate_exit_code(self, capsys):
        code, _, err = run(
            ["classify", "--l1", "1", "--l2", "1", "--omega", "-2",
             "--z", "-0.866025403784", "--space", "full"], capsys)
        assert code == 3
        assert "DegenerateError" in err


class TestFindZstarCommand:
    def test_reference_value(self, capsys):
        code, out, _ = run(["find-zstar", "--bracket", "-0.95", "-0.75"], capsys)
        assert code == 0
        value = float(out.split("=")[1])
        assert abs(value + 0.866025403784) < 1e-4

    def test_bracket_error_exit_code(self, capsys):
        code, _, err = run(["find-zstar", "--bracket", "-0.5", "-0.3"], capsys)
        assert code == 3
        assert "BracketError" in err


class TestSimulateCommand:
    def test_csv_schema_and_atomic_write(self, tmp_path, capsys):
        out_file = tmp_path / "run.csv"
        code, _, _ = run(
            ["simulate", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "1",
             "--horizon", "0.5", "--n", "2001", "--out", str(out_file)], capsys)
        assert code == 0
        lines = out_file.read_text().strip().split("\n")
        assert lines[1] == "time,energy,charge,orbital_distance"
        assert len(lines) > 3
        leftovers = [f for f in out_file.parent.iterdir() if f.suffix == ".tmp"]
        assert leftovers == []


class TestUsage:
    def test_missing_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main([])
        assert excinfo.value.code == 2

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["profile", "--bogus", "1"])
        assert excinfo.value.code == 2

    def test_unwritable_output_exits_4(self, capsys, tmp_path):
        target = tmp_path / "no-such-dir" / "out.csv"
        code, _, err = run(
            ["profile", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "1",
             "--xmax", "5", "--n", "11", "--out", str(target)], capsys)
        assert code == 4
        assert "IOError" in err

    def test_outdir_flag(self, capsys, tmp_path):
        code, _, _ = run(
            ["profile", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "1",
             "--xmax", "5", "--n", "11", "--out", "rel.csv", "--outdir", str(tmp_path)], capsys)
        assert code == 0
        assert (tmp_path / "rel.csv").exists()


class TestEvenSectorSpectrum:
    def test_even_sector_single_negative(self, capsys):
        code, out, _ = run(
            ["spectrum", "--l1", "1", "--l2", "1", "--omega", "-2", "--z", "-1",
             "--kind", "L1", "--sector", "even", "--n", "2001", "--k", "1"], capsys)
        assert code == 0
        header = json.loads(out.split("\n")[0][2:])
        assert header["negative_count"] == 1
