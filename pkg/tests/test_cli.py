import io

import numpy as np
import pytest

from liouville_melnikov.cli import main
from liouville_melnikov.csvio import CsvTable, format_number, read_csv
from liouville_melnikov.reference import REFERENCE_A


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestTable:
    def test_reproduces_reference_rows(self, capsys):
        code, out, _ = run(capsys, "table")
        assert code == 0
        header, rows, _ = read_csv(out)
        assert header == ["L", "A_L", "bound_lemma", "bound_table"]
        np.testing.assert_allclose([r[1] for r in rows], REFERENCE_A, rtol=1e-4)
        np.testing.assert_allclose(rows[-1][3], 3.217488e-13, rtol=5e-7)
        # both columns are printed to nine significant digits
        np.testing.assert_allclose([r[2] for r in rows], [r[3] / 4 for r in rows], rtol=1e-8)

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["table", "--out", str(a)]) == 0
        assert main(["table", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()

    def test_precision(self, capsys):
        _, out, _ = run(capsys, "table", "--windows", "10", "--precision", "4")
        assert out.splitlines()[1].split(",")[1] == "0.4793"

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nfactor = 2\nbound-variant = lemma\n")
        _, base, _ = run(capsys, "table", "--windows", "10")
        _, doubled, _ = run(capsys, "table", "--windows", "10", "--config", str(cfg))
        _, back, _ = run(capsys, "table", "--windows", "10", "--config", str(cfg), "--factor", "1")
        a0 = read_csv(base)[1][0][1]
        assert read_csv(doubled)[1][0][1] == pytest.approx(2 * a0)
        assert read_csv(back)[1][0][1] == a0

    def test_bad_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = red\n")
        code, _, err = run(capsys, "table", "--config", str(cfg))
        assert code == 2 and "unknown key" in err


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["table", "--mu", "0.3"],
        ["table", "--factor", "3"],
        ["table", "--step", "-1"],
        ["sweep", "--points", "1"],
        ["curvature-grid", "--nx", "0"],
        ["nonsense"],
        ["table", "--windows", "a,b"],
    ])
    def test_usage_errors_exit_2(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, _ = run(capsys, "table", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 2

    def test_nonconvergence_exit_3(self, capsys, monkeypatch):
        from liouville_melnikov import cli
        from liouville_melnikov.errors import ConvergenceError

        def boom(*a, **k):
            raise ConvergenceError("did not converge")
        monkeypatch.setattr(cli, "convergence_study", boom)
        assert run(capsys, "converge")[0] == 3


class TestSweep:
    def test_two_points_and_plot_script(self, capsys, tmp_path):
        out = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, "sweep", "--points", "2", "--window", "5", "--step", "0.01",
                         "--out", str(out))
        assert code == 0
        header, rows, _ = read_csv(out.read_text())
        assert header == ["kappa", "value"] and len(rows) == 2
        gp = out.with_suffix(".gp").read_text()
        assert "sweep.csv" in gp and "pi" in gp

    def test_odd_rows(self, capsys):
        _, out, _ = run(capsys, "sweep", "--points", "9", "--kappa-min", "-2", "--kappa-max", "2",
                        "--window", "10", "--step", "0.01", "--precision", "15")
        v = np.array([r[1] for r in read_csv(out)[1]])
        assert np.max(np.abs(v + v[::-1])) < 1e-6 * np.max(np.abs(v))


class TestConverge:
    def test_slope_comment(self, capsys):
        code, out, _ = run(capsys, "converge")
        assert code == 0
        header, rows, comments = read_csv(out)
        assert header == ["h", "abs_error"] and len(rows) == 5
        assert comments[-1].startswith("slope = ")
        assert 3.7 <= float(comments[-1].split("=")[1]) <= 4.3

    def test_repeated_step_rejected(self, capsys):
        code, _, err = run(capsys, "converge", "--steps", "0.1,0.1,0.05")
        assert code == 2 and "distinct" in err

    def test_too_few_steps(self, capsys):
        assert run(capsys, "converge", "--steps", "0.1,0.05")[0] == 2


class TestVerify:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert "FAIL" not in out and out.rstrip().endswith("passed")

    def test_fault_is_caught(self, capsys):
        code, out, _ = run(capsys, "verify", "--inject-fault", "broken-derivative")
        assert code == 1
        failing = [ln.split()[0] for ln in out.splitlines() if " FAIL" in ln]
        assert any(name.startswith("derivative_selfcheck[f]") for name in failing)

    def test_revolution_skips_table(self, capsys):
        code, out, _ = run(capsys, "verify", "--mu", "0", "--allow-unsafe-mu")
        assert code == 0
        assert "SKIP" in out and "inconclusive" in out

    def test_hidden_flag(self, capsys):
        run(capsys, "verify", "--help")
        # argparse exits via SystemExit(0) which main turns into a return code
        out = capsys.readouterr().out
        assert "inject-fault" not in out


class TestGeodesic:
    def test_axis_start_stays_on_axis(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--t-end", "5", "--precision", "17")
        assert code == 0
        header, rows, _ = read_csv(out)
        rows = np.array(rows)
        # cos(pi/2) is 6e-17 in floating point and the axis is hyperbolic, so the
        # rounding-level offset grows slowly; it stays far below any visible drift
        assert np.max(np.abs(rows[:, header.index("y")])) < 1e-12
        assert np.ptp(rows[:, header.index("H")]) < 1e-8
        assert np.ptp(rows[:, header.index("F")]) < 1e-8

    def test_flat_lines(self, capsys):
        _, out, _ = run(capsys, "geodesic", "--flat", "--x0", "1", "--y0", "0.2",
                        "--theta0", "0.7", "--t-end", "3", "--stride", "10", "--precision", "17")
        header, rows, _ = read_csv(out)
        rows = np.array(rows)
        t, x, y = rows[:, 0], rows[:, 1], rows[:, 2]
        np.testing.assert_allclose(x, 1 + np.sqrt(2) * np.sin(0.7) * t, atol=1e-12)
        np.testing.assert_allclose(y, 0.2 + np.sqrt(2) * np.cos(0.7) * t, atol=1e-12)

    def test_truncation_exit_4(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--y0", "0.5", "--theta0", "0.0", "--t-end", "20")
        assert code == 4
        assert read_csv(out)[2][-1].startswith("truncated")


class TestCurvatureGrid:
    def test_shape_and_axis(self, capsys):
        code, out, _ = run(capsys, "curvature-grid", "--nx", "8", "--ny", "5", "--precision", "17")
        assert code == 0
        header, rows, _ = read_csv(out)
        rows = np.array(rows)
        assert header == ["x", "y", "A", "K", "K_x", "K_y"] and rows.shape == (40, 6)
        axis = rows[rows[:, 1] == 0.0]
        assert axis.shape[0] == 8
        assert np.all(axis[:, 3] < 0) and np.all(np.abs(axis[:, 5]) <= 1e-12)


class TestCsv:
    def test_round_trip(self):
        t = CsvTable(["a", "b"], precision=17, comments=["note"])
        vals = [(0.1, -3.25e-13), (1e300, 7.0)]
        for row in vals:
            t.add(*row)
        header, rows, comments = read_csv(t.render())
        assert header == ["a", "b"] and comments == ["note"]
        assert [tuple(r) for r in rows] == vals

    def test_format(self):
        assert format_number(0.47929061221, 6) == "0.479291"
        assert format_number(3) == "3"

    def test_row_length(self):
        with pytest.raises(ValueError):
            CsvTable(["a"]).add(1, 2)

    def test_stdout_dash(self, capsys):
        t = CsvTable(["a"])
        t.add(1.5)
        t.write("-")
        assert capsys.readouterr().out == "a\n1.5\n"
