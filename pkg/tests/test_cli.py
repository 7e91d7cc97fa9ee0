import json
import os
import signal
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest

CLI = [sys.executable, "-m", "motion_insight.cli"]


def run_cli(*args, env_extra=None):
    env = os.environ.copy()
    env.pop("MOTION_INSIGHT_CONFIG", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([*CLI, *args], capture_output=True, text=True,
                          env=env, timeout=180)


@pytest.fixture(scope="module")
def walk_dir(tmp_path_factory):
    """Small synthesized dataset on disk, shared by the read-only tests."""
    out = tmp_path_factory.mktemp("walk")
    result = run_cli("synth", "clean_walk", "--duration", "20", "--seed", "11",
                     "--out", str(out))
    assert result.returncode == 0, result.stderr
    return out


class TestValidate:
    def test_manifest_ok(self, walk_dir):
        result = run_cli("validate", "--manifest", str(walk_dir / "manifest.json"))
        assert result.returncode == 0
        assert result.stdout.startswith("ok: dataset")
        assert result.stderr == ""

    def test_capture_and_labels_ok(self, walk_dir):
        result = run_cli("validate", "--capture", str(walk_dir / "capture_0.json"),
                         "--labels", str(walk_dir / "labels_0.json"))
        assert result.returncode == 0
        lines = result.stdout.splitlines()
        assert lines[0].startswith("ok: capture with")
        assert lines[1].startswith("ok:") and "label" in lines[1]

    def test_no_target_is_usage_error(self):
        result = run_cli("validate")
        assert result.returncode == 2
        assert "--manifest or --capture" in result.stderr

    def test_corrupt_capture_exits_1(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_bytes(b"{nope")
        result = run_cli("validate", "--capture", str(bad))
        assert result.returncode == 1
        assert result.stderr.startswith("SchemaError:")

    def test_missing_file_exits_3(self, tmp_path):
        result = run_cli("validate", "--capture", str(tmp_path / "absent.json"))
        assert result.returncode == 3
        assert result.stderr.startswith("IOError:")

    def test_unknown_action_strict_vs_lenient(self, walk_dir, tmp_path):
        doc = json.loads((walk_dir / "labels_0.json").read_bytes())
        doc["actions"].append(
            {"action": "moonwalk", "start_frame": 0, "end_frame": 5})
        loose = tmp_path / "labels.json"
        loose.write_text(json.dumps(doc))

        capture = str(walk_dir / "capture_0.json")
        strict = run_cli("validate", "--capture", capture, "--labels", str(loose))
        assert strict.returncode == 1
        assert strict.stderr.startswith("VocabularyError:")

        lenient = run_cli("validate", "--capture", capture, "--labels", str(loose),
                          "--lenient")
        assert lenient.returncode == 0

    def test_manifest_reports_broken_segment(self, walk_dir, tmp_path):
        (tmp_path / "capture_0.json").write_bytes(b"[]")
        for name in ("labels_0.json", "manifest.json"):
            (tmp_path / name).write_bytes((walk_dir / name).read_bytes())
        result = run_cli("validate", "--manifest", str(tmp_path / "manifest.json"))
        assert result.returncode == 1
        assert result.stderr.startswith("SchemaError: segment 0")


class TestAnalyze:
    def test_report_structure(self, walk_dir):
        result = run_cli("analyze", "--manifest", str(walk_dir / "manifest.json"))
        assert result.returncode == 0, result.stderr
        report = json.loads(result.stdout)
        assert set(report) == {"meta", "global_stats", "actions", "timeline",
                               "events", "freezes", "filter_hits"}
        assert report["meta"]["dataset_id"] == "clean_walk-11"
        assert report["global_stats"]["total_frames"] == 600
        assert len(report["actions"]) == 7

    def test_out_file_deterministic(self, walk_dir, tmp_path):
        manifest = str(walk_dir / "manifest.json")
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run_cli("analyze", "--manifest", manifest, "--out", str(a)).returncode == 0
        assert run_cli("analyze", "--manifest", manifest, "--out", str(b)).returncode == 0
        assert a.read_bytes() == b.read_bytes()

    def test_csv_sidecar(self, walk_dir, tmp_path):
        out = tmp_path / "report.json"
        csv_path = tmp_path / "vars.csv"
        result = run_cli("analyze", "--manifest", str(walk_dir / "manifest.json"),
                         "--out", str(out), "--csv", str(csv_path))
        assert result.returncode == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == ("segment,frame,valid,suspect,"
                            "trunk,arm_l,arm_r,foot_l,foot_r,weight_l,weight_r")
        assert len(lines) == 601  # header + one row per frame

    def test_threshold_flag_reaches_config(self, walk_dir):
        result = run_cli("analyze", "--manifest", str(walk_dir / "manifest.json"),
                         "--delta-feet", "0.25", "--weight-literal")
        report = json.loads(result.stdout)
        assert report["meta"]["config"]["delta_feet_m"] == 0.25
        assert report["meta"]["config"]["weight_literal"] is True

    def test_config_file_and_flag_precedence(self, walk_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"weight_dev": 0.3, "arm_ratio": 4.0}))
        manifest = str(walk_dir / "manifest.json")

        from_file = run_cli("analyze", "--manifest", manifest, "--config", str(cfg))
        got = json.loads(from_file.stdout)["meta"]["config"]
        assert got["weight_dev"] == 0.3
        assert got["arm_ratio"] == 4.0

        flag_wins = run_cli("analyze", "--manifest", manifest, "--config", str(cfg),
                            "--weight-dev", "0.05")
        got = json.loads(flag_wins.stdout)["meta"]["config"]
        assert got["weight_dev"] == 0.05
        assert got["arm_ratio"] == 4.0  # untouched fields still come from the file

    def test_env_config_lowest_file_priority(self, walk_dir, tmp_path):
        env_cfg = tmp_path / "env.json"
        env_cfg.write_text(json.dumps({"weight_dev": 0.2, "max_points": 500}))
        flag_cfg = tmp_path / "flag.json"
        flag_cfg.write_text(json.dumps({"weight_dev": 0.3}))
        manifest = str(walk_dir / "manifest.json")

        env_only = run_cli("analyze", "--manifest", manifest,
                           env_extra={"MOTION_INSIGHT_CONFIG": str(env_cfg)})
        assert json.loads(env_only.stdout)["meta"]["config"]["weight_dev"] == 0.2

        # an explicit --config file replaces the env file outright
        both = run_cli("analyze", "--manifest", manifest, "--config", str(flag_cfg),
                       env_extra={"MOTION_INSIGHT_CONFIG": str(env_cfg)})
        got = json.loads(both.stdout)["meta"]["config"]
        assert got["weight_dev"] == 0.3
        assert got["max_points"] == 2000

    def test_unknown_config_key_exits_1(self, walk_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"weight_dev": 0.3, "step_length": 1}))
        result = run_cli("analyze", "--manifest", str(walk_dir / "manifest.json"),
                         "--config", str(cfg))
        assert result.returncode == 1
        assert result.stderr.startswith("SchemaError:")
        assert "step_length" in result.stderr

    def test_missing_manifest_exits_3(self, tmp_path):
        result = run_cli("analyze", "--manifest", str(tmp_path / "gone.json"))
        assert result.returncode == 3
        assert result.stderr.startswith("IOError:")


class TestSynth:
    def test_lists_written_files(self, tmp_path):
        out = tmp_path / "gen"
        result = run_cli("synth", "freeze_walk", "--duration", "30", "--seed", "3",
                         "--out", str(out))
        assert result.returncode == 0
        listed = result.stdout.splitlines()
        assert listed == sorted(listed)
        for line in listed:
            assert Path(line).is_file()
        names = {Path(line).name for line in listed}
        assert {"capture_0.json", "labels_0.json", "manifest.json",
                "truth.json"} <= names

    def test_deterministic_across_directories(self, tmp_path):
        outs = []
        for sub in ("first", "second"):
            out = tmp_path / sub
            result = run_cli("synth", "freeze_walk", "--duration", "30",
                             "--seed", "3", "--out", str(out))
            assert result.returncode == 0
            outs.append(out)
        for name in ("capture_0.json", "labels_0.json", "truth.json"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        blobs = []
        for seed in ("3", "4"):
            out = tmp_path / seed
            run_cli("synth", "clean_walk", "--duration", "30", "--seed", seed,
                    "--out", str(out))
            blobs.append((out / "capture_0.json").read_bytes())
        assert blobs[0] != blobs[1]

    def test_bad_spec_exits_2(self, tmp_path):
        result = run_cli("synth", "clean_walk", "--duration", "-5",
                         "--out", str(tmp_path / "x"))
        assert result.returncode == 2
        assert result.stderr.startswith("SpecError:")

    def test_fractional_frame_duration_exits_2(self, tmp_path):
        result = run_cli("synth", "clean_walk", "--duration", "10.017",
                         "--out", str(tmp_path / "x"))
        assert result.returncode == 2
        assert result.stderr.startswith("SpecError:")

    def test_unknown_scenario_is_usage_error(self, tmp_path):
        result = run_cli("synth", "cartwheel", "--out", str(tmp_path / "x"))
        assert result.returncode == 2  # argparse rejects the choice itself


class TestServe:
    def test_occupied_port_exits_3(self, walk_dir):
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as holder:
            holder.bind(("127.0.0.1", 0))
            holder.listen(1)
            port = holder.getsockname()[1]
            result = run_cli("serve", "--manifest", str(walk_dir / "manifest.json"),
                             "--port", str(port))
        assert result.returncode == 3
        assert result.stderr.startswith("BindError:")

    def test_serves_api_then_stops_cleanly(self, walk_dir):
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        env = os.environ.copy()
        env.pop("MOTION_INSIGHT_CONFIG", None)
        proc = subprocess.Popen(
            [*CLI, "serve", "--manifest", str(walk_dir / "manifest.json"),
             "--port", str(port)],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, env=env)
        base = f"http://127.0.0.1:{port}/api/v1"
        try:
            meta = None
            for _ in range(200):
                if proc.poll() is not None:
                    pytest.fail(f"server died: {proc.stderr.read().decode()}")
                try:
                    with urllib.request.urlopen(f"{base}/meta", timeout=1) as resp:
                        meta = json.loads(resp.read())
                    break
                except OSError:
                    time.sleep(0.1)
            assert meta is not None, "server never came up"
            assert meta["dataset_id"] == "clean_walk-11"
            with urllib.request.urlopen(f"{base}/actions/summary", timeout=5) as resp:
                assert len(json.loads(resp.read())["actions"]) == 7
        finally:
            proc.send_signal(signal.SIGINT)
            try:
                assert proc.wait(timeout=15) == 0
            except subprocess.TimeoutExpired:
                proc.kill()
                raise
