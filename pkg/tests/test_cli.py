"""Command-line interface: subcommands, exit codes, file outputs."""

import pytest

from fertisim.cli import main
from fertisim.config import default_config, parse_config


def test_dump_defaults_round_trips(capsys):
    assert main(["--dump-defaults"]) == 0
    printed = capsys.readouterr().out
    assert parse_config(printed) == default_config()


def test_unknown_subcommand_prints_usage(capsys):
    assert main(["prune"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_no_subcommand_prints_usage(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_config_file(tmp_path, capsys):
    assert main(["monitor", "--config", str(tmp_path / "nope.cfg")]) == 1
    assert "config error" in capsys.readouterr().err


def test_bad_config_value(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("pump.flow_l_per_min = -1\n")
    assert main(["monitor", "--config", str(cfg)]) == 1
    assert "pump.flow_l_per_min" in capsys.readouterr().err


def test_render_then_measure_round_trip(tmp_path, capsys):
    frame = tmp_path / "frame.ppm"
    assert main(["render-frame", "--height-cm", "50", "--width-cm", "25",
                 "--distance", "100", "--file", str(frame)]) == 0
    truth_line = capsys.readouterr().out.strip()
    assert "height_px=240" in truth_line

    assert main(["measure-image", str(frame), "--distance", "100"]) == 0
    out = capsys.readouterr().out
    values = dict(part.split("=") for part in out.split())
    assert float(values["height_cm"]) == pytest.approx(50.0, abs=100.0 / 480.0)
    assert float(values["width_cm"]) == pytest.approx(25.0, abs=100.0 / 480.0)


def test_measure_image_on_plantless_frame(tmp_path, capsys):
    frame = tmp_path / "red.ppm"
    header = b"P6\n640 480\n255\n"
    red = bytes([255, 0, 0]) * (640 * 480)
    frame.write_bytes(header + red)
    assert main(["measure-image", str(frame), "--distance", "100"]) == 1
    assert "error" in capsys.readouterr().err


def test_measure_image_rejects_bad_ppm(tmp_path, capsys):
    bad = tmp_path / "bad.ppm"
    bad.write_bytes(b"P3\n640 480\n255\n")
    assert main(["measure-image", str(bad), "--distance", "100"]) == 1


def test_monitor_reports_the_pump_event(tmp_path, capsys):
    out_dir = tmp_path / "run"
    assert main(["monitor", "--out", str(out_dir)]) == 0
    assert "255" in capsys.readouterr().out
    assert (out_dir / "trace.csv").exists()
    assert (out_dir / "pump_events.csv").exists()
    assert (out_dir / "summary.txt").exists()


def test_monitor_runs_are_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["monitor", "--seed", "7", "--out", str(a)]) == 0
    assert main(["monitor", "--seed", "7", "--out", str(b)]) == 0
    for name in ("trace.csv", "pump_events.csv", "summary.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_compare_runs_are_reproducible(tmp_path):
    cfg = tmp_path / "short.cfg"
    cfg.write_text(
        "compare.total_days = 8\ncompare.auto_start_day = 3\ncompare.auto_end_day = 6\n")
    a, b = tmp_path / "run1", tmp_path / "run2"
    assert main(["compare", "--config", str(cfg), "--seed", "7", "--out", str(a)]) == 0
    assert main(["compare", "--config", str(cfg), "--seed", "7", "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir()) and names
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_compare_savings_failure_exits_2(tmp_path, capsys):
    # against a lean 2-hour timer baseline the wilt regime cannot save 80%
    cfg = tmp_path / "lean_timer.cfg"
    cfg.write_text(
        "control.timer_period_min = 120\n"
        "compare.total_days = 12\ncompare.auto_start_day = 3\ncompare.auto_end_day = 10\n")
    code = main(["compare", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert code == 2
    assert "savings" in capsys.readouterr().err


def test_growth_assertion_failure_exits_2(tmp_path, capsys):
    # inverting the band multipliers breaks the ordering assertion
    cfg = tmp_path / "inverted.cfg"
    cfg.write_text("growth.under_multiplier = 1.3\ngrowth.over_multiplier = 0.7\n")
    code = main(["growth", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert code == 2
    assert "over > normal > under" in capsys.readouterr().err
