import pytest

from risplots.tables import emit_power_table, main


class TestPowerTable:
    def test_five_power_columns(self, power_sweep_summaries):
        table = emit_power_table(power_sweep_summaries)
        header = table.splitlines()[0]
        for label in ("10 dBm", "20 dBm", "30 dBm", "40 dBm", "50 dBm"):
            assert label in header
        assert header.count("|") == 7  # method column + five powers

    def test_oracle_row_all_ones(self, power_sweep_summaries):
        table = emit_power_table(power_sweep_summaries)
        oracle_row = next(l for l in table.splitlines() if l.startswith("| oracle"))
        assert oracle_row.count("1.000") == 5

    def test_cells_are_three_decimals(self, power_sweep_summaries):
        table = emit_power_table(power_sweep_summaries)
        random_row = next(l for l in table.splitlines() if l.startswith("| random"))
        cells = [c.strip() for c in random_row.split("|")[2:-1]]
        assert len(cells) == 5
        for cell in cells:
            assert len(cell.split(".")[1]) == 3

    def test_single_point(self, power_sweep_summaries):
        table = emit_power_table(power_sweep_summaries[:1])
        assert "10 dBm" in table.splitlines()[0]
        assert table.splitlines()[0].count("|") == 3

    def test_missing_power_point_named(self, power_sweep_summaries, tmp_path):
        import json

        doc = json.loads(power_sweep_summaries[0].read_text())
        doc["agent"] = "ucb"  # same powers but a method missing elsewhere
        extra = tmp_path / "ucb.json"
        extra.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="power point"):
            emit_power_table([*power_sweep_summaries, extra])


class TestCli:
    def test_stdout(self, power_sweep_summaries, capsys):
        args = []
        for p in power_sweep_summaries:
            args += ["--summary", str(p)]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert out.startswith("| Method |")

    def test_file_output(self, power_sweep_summaries, tmp_path):
        args = []
        for p in power_sweep_summaries:
            args += ["--summary", str(p)]
        target = tmp_path / "table.md"
        assert main([*args, "--out", str(target)]) == 0
        assert target.read_text().startswith("| Method |")
