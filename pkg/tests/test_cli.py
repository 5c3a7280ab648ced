import json
import os

import pytest

from resram.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def test_table1_default_table(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["mux_factor", "columns"]
    assert len(lines) == 5  # header, rule, three rows
    assert "\x1b" not in out  # never colored, NO_COLOR honored trivially


def test_table1_csv_values_match_published(capsys):
    code, out, _ = run(capsys, "table1", "--format", "csv")
    assert code == EXIT_OK
    header, rows = csv_rows(out)
    assert header == ["mux_factor", "columns", "capacitance_farad", "inductance_henry", "t_r_half_second"]
    published = (248.0e-12, 176.0e-12, 125.0e-12)
    for row, expected in zip(rows, published):
        assert float(row[4]) == pytest.approx(expected, rel=0.02)
    assert any(line.startswith("# circuit.v_dd") for line in out.splitlines())


def test_derive_json_structure(capsys):
    code, out, _ = run(capsys, "derive", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert list(report) == ["meta", "config", "derived", "energy", "booster", "sizing", "table", "warnings"]
    assert report["meta"] == {"tool": "resram", "version": "0.1.0"}
    assert report["derived"]["underdamped"] is True
    assert report["derived"]["q_f"] == pytest.approx(15.0, rel=1e-2)
    assert report["energy"] is None
    assert report["config"]["circuit.v_bias"] == 0.45


def test_derive_no_meta_and_set_overrides(capsys):
    code, out, _ = run(capsys, "derive", "--format", "json", "--no-meta",
                       "--set", "circuit.r_total=0.5ohm",
                       "--set", "circuit.inductance=0.621nH",
                       "--set", "circuit.capacitance=10.10pF")
    assert code == EXIT_OK
    report = json.loads(out)
    assert "meta" not in report
    # data fields carry six significant digits
    assert report["derived"]["f_r_hertz"] == pytest.approx(2.00859696e9, rel=1e-5)
    assert report["derived"]["t_r_half_second"] == pytest.approx(248.93e-12, rel=1e-4)


def test_simulate_dry_run_emits_nothing(capsys):
    code, out, err = run(capsys, "simulate", "--dry-run")
    assert code == EXIT_OK
    assert out == "" and err == ""


def test_simulate_requires_output(capsys):
    code, _, err = run(capsys, "simulate")
    assert code == EXIT_CONFIG
    assert err.startswith("resram: config:") and err.count("\n") == 1


def test_simulate_writes_trace_energy_and_figure(tmp_path, capsys):
    out_csv = tmp_path / "trace.csv"
    code, _, _ = run(capsys, "simulate", "--auto-tune", "--plot",
                     "--output", str(out_csv), "--quiet")
    assert code == EXIT_OK
    assert out_csv.exists()
    energy_path = tmp_path / "trace.energy.json"
    assert energy_path.exists()
    assert (tmp_path / "trace.png").exists()
    header, rows = csv_rows(out_csv.read_text())
    assert header == ["t", "v_c", "i_l", "phase"]
    assert rows[0][3] == "resonant_discharge"
    report = json.loads(energy_path.read_text())
    assert report["energy"]["savings_fraction"] == pytest.approx(0.95, abs=0.01)
    assert abs(report["energy"]["closure_error_joule"]) < 1e-3 * report["energy"]["e_conventional_joule"]
    # with an exactly tuned window the crossing can sit on the window edge,
    # in which case no zero is recorded inside it
    zero = report["derived"]["i_l_first_zero_second"]
    assert zero is None or zero == pytest.approx(report["derived"]["t_r_half_second"], rel=1e-3)


def test_simulate_byte_identical_across_runs(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    blobs = []
    for _ in range(2):
        code, _, _ = run(capsys, "simulate", "--auto-tune", "--output", str(out), "--quiet")
        assert code == EXIT_OK
        blobs.append((out.read_bytes(), (tmp_path / "trace.energy.json").read_bytes()))
    assert blobs[0] == blobs[1]


def test_simulate_with_booster_reports_bump(tmp_path, capsys):
    out = tmp_path / "boost.csv"
    code, _, _ = run(capsys, "simulate", "--auto-tune", "--quiet",
                     "--output", str(out),
                     "--set", "phases.booster_inductance=0.5nH",
                     "--set", "phases.booster_gate_capacitance=0.5pF",
                     "--set", "phases.booster_series_resistance=1ohm")
    assert code == EXIT_OK
    report = json.loads((tmp_path / "boost.energy.json").read_text())
    assert report["booster"]["peak_gate_voltage_volt"] > 0.9


def test_size_table_and_infeasible_exit(capsys):
    code, out, _ = run(capsys, "size")
    assert code == EXIT_OK
    assert "binding_constraint" in out and "target_swing_fraction" in out
    code, _, err = run(capsys, "size", "--set", "sizing.max_t_r_half=1fs")
    assert code == EXIT_INFEASIBLE
    assert err.startswith("resram: infeasible:")
    assert "max_t_r_half" in err


def test_sweep_bits_minimal_l_decreasing(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--bits", "32,64,128,256",
                     "--output", str(out), "--quiet", "--plot", "--format", "csv")
    assert code == EXIT_OK
    header, rows = csv_rows(out.read_text())
    assert header[:2] == ["bits", "l_min"]
    assert header[2:] == ["f_r", "t_r_half", "swing_fraction", "q_f", "savings_fraction", "underdamped"]
    l_min = [float(row[1]) for row in rows]
    assert all(b < a for a, b in zip(l_min, l_min[1:]))
    assert (tmp_path / "sweep.png").exists()


def test_sweep_requires_an_axis(capsys):
    code, _, err = run(capsys, "sweep")
    assert code == EXIT_CONFIG
    assert "at least one axis" in err


def test_sweep_unknown_corner(capsys):
    code, _, err = run(capsys, "sweep", "--corners", "typ,XX")
    assert code == EXIT_CONFIG
    assert "XX" in err


def test_sweep_inductance_units_and_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--inductance", "0.1nH,0.2nH,0.4nH", "--format", "csv")
    assert code == EXIT_OK
    header, rows = csv_rows(out)
    assert header[0] == "inductance"
    assert [float(r[0]) for r in rows] == pytest.approx([0.1e-9, 0.2e-9, 0.4e-9])


def test_missing_config_file_is_io_error(capsys):
    code, _, err = run(capsys, "--config", "/nonexistent/conf.txt", "derive")
    assert code == EXIT_IO
    assert err.startswith("resram: io:")


def test_unwritable_output_is_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "derive", "--output", str(tmp_path / "missing_dir" / "x.txt"))
    assert code == EXIT_IO


def test_bad_set_key_is_config_error(capsys):
    code, _, err = run(capsys, "derive", "--set", "circuit.bogus=1")
    assert code == EXIT_CONFIG
    assert "circuit.bogus" in err


def test_config_file_drives_run(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text(
        "# reference loop\n"
        "circuit.r_total = 0.5ohm\n"
        "circuit.inductance = 0.621nH\n"
        "circuit.capacitance = 10.10pF\n"
        "output.format = json\n"
    )
    code, out, _ = run(capsys, "--config", str(conf), "derive")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["derived"]["q_f"] == pytest.approx(15.6825, rel=1e-4)
    # flag overrides file
    code, out, _ = run(capsys, "--config", str(conf), "derive", "--format", "table")
    assert code == EXIT_OK
    assert out.startswith("quantity")
