import json
from pathlib import Path

import pytest

from modqueue_sim.cli import MODS_CSV_COLUMNS, TRIALS_CSV_COLUMNS, main
from modqueue_sim.core import config_to_dict
from modqueue_sim.experiments import baseline_preset


@pytest.fixture()
def tiny_config_path(tmp_path):
    doc = config_to_dict(baseline_preset())
    doc.update(num_reports=6, report_length=2, team_sizes=[2, 3], trials=3, master_seed=5)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_run_writes_three_files(tiny_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(tiny_config_path), "--output", str(out)]) == 0
    assert (out / "summary.json").exists()
    assert (out / "trials.csv").exists()
    assert (out / "mods.csv").exists()
    printed = capsys.readouterr().out
    assert "completion" in printed and "collisions" in printed


def test_csv_schemas(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    main(["run", str(tiny_config_path), "--output", str(out)])
    trials_lines = (out / "trials.csv").read_text().splitlines()
    assert trials_lines[0] == ",".join(TRIALS_CSV_COLUMNS)
    # 2 team sizes x 3 trials
    assert len(trials_lines) == 1 + 6
    mods_lines = (out / "mods.csv").read_text().splitlines()
    assert mods_lines[0] == ",".join(MODS_CSV_COLUMNS)
    assert len(mods_lines) == 1 + 3 * (2 + 3)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["schema_version"] == 1
    assert [c["team_size"] for c in summary["cells"]] == [2, 3]


def test_malformed_json_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"num_reports": 5,,}', encoding="utf-8")
    with pytest.raises(SystemExit) as excinfo:
        main(["run", str(bad), "--output", str(tmp_path / "o")])
    assert excinfo.value.code == 1
    assert "line 1" in capsys.readouterr().err


def test_invalid_config_exits_1_with_violations(tmp_path, capsys):
    doc = config_to_dict(baseline_preset())
    doc["awareness"] = 1.5
    doc["team_sizes"] = []
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(SystemExit) as excinfo:
        main(["run", str(path), "--output", str(tmp_path / "o")])
    assert excinfo.value.code == 1
    err = capsys.readouterr().err
    assert "awareness must lie in [0,1]" in err
    assert "team_sizes must be nonempty" in err


def test_missing_config_exits_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["run", str(tmp_path / "nope.json"), "--output", str(tmp_path / "o")])
    assert excinfo.value.code == 2


def test_unwritable_output_exits_2(tiny_config_path, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(SystemExit) as excinfo:
        main(["run", str(tiny_config_path), "--output", str(blocker / "sub")])
    assert excinfo.value.code == 2
    assert "output dir" in capsys.readouterr().err


def test_baseline_deterministic_bytes(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["baseline", "--seed", "42", "--trials", "2", "--output", str(out)]) == 0
    for name in ("summary.json", "trials.csv", "mods.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_baseline_has_nine_cells(tmp_path):
    out = tmp_path / "out"
    assert main(["baseline", "--trials", "1", "--output", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert [c["team_size"] for c in summary["cells"]] == list(range(2, 11))


def test_baseline_trials_override(tmp_path):
    out = tmp_path / "out"
    assert main(["baseline", "--trials", "5", "--output", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["trials_per_cell"] == 5
    assert all(c["trials"] == 5 for c in summary["cells"])


def test_compare_writes_comparison_csv(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    assert (
        main(["compare", str(tiny_config_path), "random", "reverse", "--output", str(out)])
        == 0
    )
    lines = (out / "comparison.csv").read_text().splitlines()
    header = lines[0].split(",")
    assert header[:4] == ["schema_version", "setting", "team_size", "metric"]
    settings = {line.split(",")[1] for line in lines[1:]}
    assert settings == {"base", "random", "reverse"}
    # multi-setting trials/mods files for downstream plotting
    trial_settings = {
        line.split(",")[1] for line in (out / "trials.csv").read_text().splitlines()[1:]
    }
    assert trial_settings == {"base", "random", "reverse"}


def test_compare_awareness_variant(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    assert (
        main(["compare", str(tiny_config_path), "awareness=0.2", "--output", str(out)]) == 0
    )
    lines = (out / "comparison.csv").read_text().splitlines()
    assert any(line.split(",")[1] == "awareness=0.2" for line in lines[1:])


def test_compare_unknown_variant_exits_1(tiny_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["compare", str(tiny_config_path), "sorted", "--output", str(out)]) == 1
    assert "unknown variant" in capsys.readouterr().err


def test_compare_awareness_out_of_range_exits_1(tiny_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert (
        main(["compare", str(tiny_config_path), "awareness=1.5", "--output", str(out)]) == 1
    )
    assert "[0,1]" in capsys.readouterr().err


def test_events_log(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(tiny_config_path), "--events", "--output", str(out)]) == 0
    lines = (out / "events.jsonl").read_text().splitlines()
    assert lines
    for line in lines[:50]:
        event = json.loads(line)
        assert set(event) == {"team_size", "trial", "t", "mod", "action", "report"}
        assert event["action"] in {"select", "complete", "release"}
    # every report completes exactly once per (team_size, trial)
    completes = [json.loads(line) for line in lines if '"complete"' in line]
    per_trial: dict[tuple, int] = {}
    for e in completes:
        per_trial[(e["team_size"], e["trial"])] = per_trial.get((e["team_size"], e["trial"]), 0) + 1
    assert all(v == 6 for v in per_trial.values())
