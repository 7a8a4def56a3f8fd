import csv
import json
import subprocess
import sys

import pytest

from transfer_bai.cli import EXIT_CONFIG, EXIT_RUNTIME, OUT_ENV_VAR, csv_header, main

BAI = """
delta = 0.1
n_trials = 20
base_seed = 4
[instance]
kind = "bai"
[[instance.arms]]
mean = 1.0
[[instance.arms]]
mean = 0.0
"""

PT = """
delta = 0.1
n_trials = 10
[instance]
kind = "property_testing"
property_sets = ["(0, inf)", "(0, inf)"]
[[instance.arms]]
mean = 0.5
[[instance.arms]]
mean = -0.5
"""


def write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_run_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path, BAI), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    for key in ("error_rate", "mean_total_pulls", "theorem2_total", "complexity", "config", "good_event_violations"):
        assert key in summary
    rows = list(csv.reader(open(out / "trials.csv")))
    assert rows[0] == csv_header(2)
    assert rows[0] == ["trial_index", "seed", "selected", "correct", "rounds", "total_pulls",
                       "pulls_1", "pulls_2", "good_event_held", "bound_held"]
    assert len(rows) == 21
    assert "error_rate=" in capsys.readouterr().out


def test_invalid_delta_exits_2(tmp_path, capsys):
    assert main(["run", "--config", write(tmp_path, BAI.replace("delta = 0.1", "delta = 1.5"))]) == EXIT_CONFIG
    assert "delta" in capsys.readouterr().err


def test_bad_flag_values_exit_2(tmp_path):
    assert main(["run", "--config", write(tmp_path, BAI), "--trials", "0"]) == EXIT_CONFIG
    assert main(["bounds", "--config", str(tmp_path / "nope.toml")]) == EXIT_CONFIG


def test_runtime_fault_exits_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["run", "--config", write(tmp_path, BAI), "--out", str(blocker / "sub")])
    assert code == EXIT_RUNTIME
    assert "error" in capsys.readouterr().err


def test_seed_override_only_changes_seed(tmp_path):
    cfg = write(tmp_path, BAI)
    main(["run", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["run", "--config", cfg, "--out", str(tmp_path / "b"), "--seed-override", "99"])
    a = json.loads((tmp_path / "a" / "summary.json").read_text())
    b = json.loads((tmp_path / "b" / "summary.json").read_text())
    assert b["base_seed"] == b["config"]["base_seed"] == 99
    a["config"].pop("base_seed")
    b["config"].pop("base_seed")
    assert a["config"] == b["config"]
    assert a["complexity"] == b["complexity"]


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUT_ENV_VAR, str(tmp_path / "env_out"))
    assert main(["run", "--config", write(tmp_path, BAI), "--trials", "3"]) == 0
    assert (tmp_path / "env_out" / "trials.csv").exists()


def test_bounds_property_testing(tmp_path, capsys):
    assert main(["bounds", "--config", write(tmp_path, PT)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["closed_form"]["value"] == 16.0
    assert report["nu"] == [0.0, 1.0, "-inf", "-inf"]
    assert report["target_labels"] == ["{}", "{1}", "{2}", "{1,2}"]


def test_bounds_topk_ratio(tmp_path, capsys):
    text = 'delta = 0.1\n[instance]\nkind = "topk"\nk = 2\n' + "".join(
        f"[[instance.arms]]\nmean = {m}\n" for m in (1.0, 0.75, 0.25, 0.0)
    )
    assert main(["bounds", "--config", write(tmp_path, text)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["closed_form"]["ratio_vs_k1"] == 4.0


def test_bounds_unbounded_marker(tmp_path, capsys):
    text = 'delta = 0.1\n[instance]\nkind = "thresholding"\ntheta = 0.5\n[[instance.arms]]\nmean = 0.5\n[[instance.arms]]\nmean = 0.9\n'
    assert main(["bounds", "--config", write(tmp_path, text)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["closed_form"]["unbounded"] is True
    assert report["closed_form"]["value"] == "inf"


def test_compare_nondiagonal(tmp_path, capsys):
    text = BAI.replace('kind = "bai"', 'kind = "linear"\nmatrix = [[1.0, 1.0], [0.0, 1.0]]')
    cfg = write(tmp_path, text)
    assert main(["compare", "--config", cfg, "--out", str(tmp_path / "c1")]) == 0
    first = capsys.readouterr().out
    rows = list(csv.DictReader(first.splitlines()))
    assert [r["algorithm"] for r in rows] == ["tlucb", "microlucb"]
    assert rows[0]["base_seed"] == rows[1]["base_seed"]
    assert int(rows[1]["empty_dtilde_count"]) == 20
    assert int(rows[0]["empty_dtilde_count"]) == 0
    main(["compare", "--config", cfg, "--out", str(tmp_path / "c2")])
    assert capsys.readouterr().out == first
    assert (tmp_path / "c1" / "compare.csv").read_bytes() == (tmp_path / "c2" / "compare.csv").read_bytes()


def test_entry_point_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "transfer_bai.cli", "bounds", "--config", write(tmp_path, PT)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["closed_form"]["name"] == "property_testing"


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
