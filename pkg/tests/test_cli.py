import io
import json

import pytest

from layerfem.cli import main, parse_h
from layerfem.errors import ParameterError


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseH:
    def test_fraction(self):
        assert parse_h("1/64") == 1.0 / 64

    def test_decimal(self):
        assert parse_h("0.125") == 0.125

    def test_out_of_range(self):
        with pytest.raises(ParameterError):
            parse_h("2.0")


class TestMesh:
    def test_csv_first_graded_node(self, capsys):
        code, out, _ = run_cli(
            ["mesh", "--scenario", "eps-const", "--eps0", "0.01",
             "--h", "0.1"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "index,x,region"
        first = lines[1].split(",")
        second = lines[2].split(",")
        assert first == ["0", "0", "graded"]
        # x_1 = h * delta * eps_lower = 0.001
        assert float(second[1]) == 0.001
        assert lines[-1].split(",")[1] == "1"

    def test_degenerate_exit_code(self, capsys):
        code, _, err = run_cli(
            ["mesh", "--scenario", "eps-const", "--eps0", "0.1",
             "--h", "0.05"], capsys)
        assert code == 3
        assert "degenerate" in err

    def test_bad_h_exit_code(self, capsys):
        code, _, err = run_cli(
            ["mesh", "--scenario", "eps-const", "--h", "1.5"], capsys)
        assert code == 2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "mesh.csv"
        code, out, _ = run_cli(
            ["mesh", "--eps0", "0.001", "--h", "1/16",
             "--output", str(target)], capsys)
        assert code == 0 and out == ""
        text = target.read_text()
        assert text.startswith("index,x,region")
        assert "\r" not in text  # LF line endings


class TestSolve:
    def test_exact_column(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--scenario", "manufactured", "--eps0", "0.001",
             "--h", "1/16", "--exact"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "x,u_h,exact"
        last = lines[-1].split(",")
        assert float(last[0]) == 1.0 and float(last[1]) == 0.0

    def test_exact_unavailable(self, capsys):
        code, _, err = run_cli(
            ["solve", "--scenario", "eps-const", "--eps0", "0.001",
             "--h", "1/16", "--exact"], capsys)
        assert code == 2

    def test_json_schema(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--scenario", "manufactured", "--eps0", "0.001",
             "--h", "1/16", "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"meta", "rows"}
        assert payload["meta"]["subcommand"] == "solve"
        assert set(payload["rows"][0]) == {"x", "u_h"}

    def test_deterministic_output(self, capsys):
        argv = ["solve", "--scenario", "eps-exp", "--eps0", "0.001",
                "--h", "1/32"]
        _, out1, _ = run_cli(argv, capsys)
        _, out2, _ = run_cli(argv, capsys)
        assert out1 == out2

    def test_17_significant_digits(self, capsys):
        _, out, _ = run_cli(
            ["solve", "--scenario", "manufactured", "--eps0", "0.001",
             "--h", "1/16"], capsys)
        # some interior nodal value must round-trip with 17 digits
        values = [line.split(",")[1] for line in out.strip().split("\n")[1:]]
        assert any(len(v.replace(".", "").replace("-", "").lstrip("0")) >= 16
                   for v in values)


class TestConverge:
    def test_table_shape(self, capsys):
        code, out, _ = run_cli(
            ["converge", "--scenario", "manufactured", "--eps0", "0.001",
             "--h", "1/8,1/16,1/32,1/64"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "eps0,h,nodes,energy_err,l2_err,rate"
        assert len(lines) == 5
        # first row has no rate, the other three do
        assert lines[1].endswith(",")
        rates = [float(line.split(",")[-1]) for line in lines[2:]]
        assert len(rates) == 3 and all(r > 0.8 for r in rates)


class TestInterp:
    def test_table_shape(self, capsys):
        code, out, _ = run_cli(
            ["interp", "--scenario", "eps-const", "--eps0", "1e-5",
             "--h", "1/16,1/32"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("h,nodes,smooth_l2")
        assert len(lines) == 3


class TestVerify:
    def test_barriers_pass(self, capsys):
        code, out, _ = run_cli(
            ["verify", "--suite", "barriers", "--eps0", "0.001",
             "--format", "pretty"], capsys)
        assert code == 0
        assert out.count("PASS") == 4 and "FAIL" not in out

    def test_lemmas_json(self, capsys):
        code, out, _ = run_cli(
            ["verify", "--suite", "lemmas", "--eps0", "0.01",
             "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) == 4
        assert all(r["status"] == "PASS" for r in payload["rows"])

    def test_verify_deterministic(self, capsys):
        argv = ["verify", "--suite", "barriers", "--eps0", "0.01"]
        _, out1, _ = run_cli(argv, capsys)
        _, out2, _ = run_cli(argv, capsys)
        assert out1 == out2
