import shutil

import pytest

from touchboard import cli
from touchboard.bundled import TASKS8_TRACE, fixture_path
from touchboard.render import Framebuffer
from touchboard.video_out import export_ppm


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- replay ---------------------------------------------------------------------


def test_replay_tasks8(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, err = run_cli(capsys, "replay", str(fixture_path(TASKS8_TRACE)), "--out-dir", str(out_dir))
    assert code == 0, err
    assert "replayed 35 events" in out
    assert (out_dir / "final.ppm").read_bytes() == export_ppm(Framebuffer())
    log_lines = (out_dir / "framelog.csv").read_text().splitlines()
    assert log_lines[0] == "index,at,fb_hash,digits"
    assert len(log_lines) == 36


def test_replay_empty_trace(tmp_path, capsys):
    trace = tmp_path / "empty.trace"
    trace.write_text("")
    code, out, err = run_cli(capsys, "replay", str(trace), "--out-dir", str(tmp_path / "out"))
    assert code == 0
    assert "replayed 0 events" in out


def test_replay_parse_error_names_line(tmp_path, capsys):
    trace = tmp_path / "bad.trace"
    trace.write_text("0 button power-adaptor\n" * 6 + "garbage here\n")
    code, out, err = run_cli(capsys, "replay", str(trace), "--out-dir", str(tmp_path / "out"))
    assert code == 2
    assert "line 7" in err
    assert not (tmp_path / "out").exists()  # no partial artifacts


def test_replay_unordered_trace(tmp_path, capsys):
    trace = tmp_path / "unordered.trace"
    trace.write_text("5 button power-adaptor\n4 button power-off\n")
    code, out, err = run_cli(capsys, "replay", str(trace), "--out-dir", str(tmp_path / "out"))
    assert code == 3
    assert not (tmp_path / "out").exists()


def test_replay_missing_file(tmp_path, capsys):
    code, out, err = run_cli(capsys, "replay", str(tmp_path / "nope.trace"), "--out-dir", str(tmp_path / "out"))
    assert code == 2


def test_replay_per_event_snapshots(tmp_path, capsys):
    trace = tmp_path / "short.trace"
    trace.write_text("0 button power-adaptor\n1 pen down 0.5 0.5\n9 pen up\n")
    out_dir = tmp_path / "out"
    code, _, _ = run_cli(
        capsys, "replay", str(trace), "--out-dir", str(out_dir), "--snapshot-every", "events"
    )
    assert code == 0
    snaps = sorted(p.name for p in out_dir.glob("event_*.ppm"))
    assert snaps == ["event_0000.ppm", "event_0001.ppm", "event_0002.ppm"]


def test_replay_byte_identical_artifacts(tmp_path, capsys):
    dirs = []
    for name in ("a", "b"):
        out_dir = tmp_path / name
        code, _, _ = run_cli(capsys, "replay", str(fixture_path(TASKS8_TRACE)), "--out-dir", str(out_dir))
        assert code == 0
        dirs.append(out_dir)
    for fname in ("final.ppm", "framelog.csv"):
        assert (dirs[0] / fname).read_bytes() == (dirs[1] / fname).read_bytes()


# -- vga-report -------------------------------------------------------------------


def test_vga_report_one_frame(capsys):
    code, out, _ = run_cli(capsys, "vga-report", "--frames", "1")
    assert code == 0
    assert "663168" in out
    assert "628" in out
    assert "vsync pulses:    1" in out
    assert "60.32 Hz" in out


def test_vga_report_two_frames_doubles(capsys):
    code, out, _ = run_cli(capsys, "vga-report", "--frames", "2")
    assert code == 0
    assert "1326336" in out
    assert "1256" in out
    assert "vsync pulses:    2" in out


def test_vga_report_rejects_zero_frames(capsys):
    code, _, err = run_cli(capsys, "vga-report", "--frames", "0")
    assert code == 4


# -- evalstats --------------------------------------------------------------------


def test_times_fixtures(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "times", "--fixtures")
    assert code == 0
    assert "23.60" in out
    assert "15.10" in out
    assert "18.875" in out  # exact overall alongside the rounded value


def test_times_csv_format(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "times", "--fixtures", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "task,mean,mean_2dp"
    assert lines[-1].startswith("overall,")
    assert len(lines) == 10


def test_difficulty_fixtures(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "difficulty", "--fixtures")
    assert code == 0
    assert "4.45" in out
    assert "3.77" in out


def test_survey_fixtures_default_factor(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "survey", "--fixtures")
    assert code == 0
    assert "factor: subservientness" in out
    assert "mean=2.45 band=Yes" in out


def test_survey_usability_factor(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "survey", "--fixtures", "--factor", "usability")
    assert code == 0
    assert "mean=2.49 band=Yes" in out


def test_survey_user_friendliness_factor(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "survey", "--fixtures", "--factor", "user-friendliness")
    assert code == 0
    assert "mean=2.37 band=Yes" in out


def test_survey_custom_input_row_mismatch(tmp_path, capsys):
    path = tmp_path / "survey.csv"
    path.write_text("statement,no,partly,yes\na,2,7,11\nb,2,7,10\n")
    code, _, err = run_cli(capsys, "evalstats", "survey", "--input", str(path))
    assert code == 4
    assert "differ" in err


def test_survey_malformed_csv(tmp_path, capsys):
    path = tmp_path / "survey.csv"
    path.write_text("statement,no,partly,yes\na,2,x,11\n")
    code, _, err = run_cli(capsys, "evalstats", "survey", "--input", str(path))
    assert code == 2


def test_discovery_forward(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "discovery", "--lambda", "0.31", "--n", "5")
    assert code == 0
    assert "0.8436" in out


def test_discovery_solve(capsys):
    code, out, _ = run_cli(capsys, "evalstats", "discovery", "--target", "0.75", "--n", "5")
    assert code == 0
    assert "0.242142" in out


def test_discovery_invalid_lambda(capsys):
    code, _, _ = run_cli(capsys, "evalstats", "discovery", "--lambda", "1.5", "--n", "5")
    assert code == 4


def test_resample_deterministic_with_env_seed(tmp_path, capsys, monkeypatch):
    path = tmp_path / "grid.csv"
    rows = ["user," + ",".join(f"p{i}" for i in range(6))]
    rows += [f"u{j}," + ",".join(str((i + j) % 2) for i in range(6)) for j in range(8)]
    path.write_text("\n".join(rows) + "\n")
    monkeypatch.setenv("TOUCHBOARD_SEED", "123")
    code, out1, _ = run_cli(capsys, "evalstats", "resample", "--input", str(path), "--k", "3", "--trials", "50")
    assert code == 0
    code, out2, _ = run_cli(capsys, "evalstats", "resample", "--input", str(path), "--k", "3", "--trials", "50")
    assert out1 == out2
    monkeypatch.setenv("TOUCHBOARD_SEED", "124")
    code, out3, _ = run_cli(capsys, "evalstats", "resample", "--input", str(path), "--k", "3", "--trials", "50")
    assert code == 0
    assert out3.startswith("k=3 trials=50")


def test_resample_bad_group_size(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    path.write_text("user,p1\nu1,1\n")
    code, _, _ = run_cli(capsys, "evalstats", "resample", "--input", str(path), "--k", "5")
    assert code == 4
