from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from rulemine import cli


UNIFORM = "a,b\n1,1\n1,1\n1,1\n1,1\n"


@pytest.fixture()
def uniform_csv(tmp_path):
    path = tmp_path / "table.csv"
    path.write_text(UNIFORM, encoding="utf-8")
    return path


def _mine(uniform_csv, out_dir, *extra):
    return cli.main(
        ["mine", "--input", str(uniform_csv), "--out-dir", str(out_dir), *extra]
    )


def test_mine_end_to_end(uniform_csv, tmp_path, capsys):
    out = tmp_path / "out"
    assert _mine(uniform_csv, out) == 0
    stdout = capsys.readouterr().out
    assert stdout == f"4 transactions, 3 frequent itemsets, 5 rules -> {out}\n"
    assert (out / "itemsets.csv").is_file()
    assert (out / "rules.csv").is_file()
    assert (out / "manifest.json").is_file()
    assert not (out / "rules.json").exists()  # csv format by default
    rules_lines = (out / "rules.csv").read_text(encoding="utf-8").splitlines()
    assert len(rules_lines) == 6  # header + 5 rules
    assert rules_lines[1].startswith("1,{},{a=1},")


def test_mine_format_json(uniform_csv, tmp_path):
    out = tmp_path / "out"
    assert _mine(uniform_csv, out, "--format", "json") == 0
    document = json.loads((out / "rules.json").read_text(encoding="utf-8"))
    assert document["total"] == 4
    assert document["catalog"] == ["a=1", "b=1"]
    assert len(document["rules"]) == 5
    assert document["rule_config"]["min_confidence"] == 0.80


def test_mine_is_byte_deterministic(uniform_csv, tmp_path):
    out1, out2 = tmp_path / "one", tmp_path / "two"
    assert _mine(uniform_csv, out1, "--format", "json") == 0
    assert _mine(uniform_csv, out2, "--format", "json") == 0
    for name in ("itemsets.csv", "rules.csv", "rules.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_manifest_contents(uniform_csv, tmp_path):
    out = tmp_path / "out"
    _mine(uniform_csv, out, "--min-support", "0.5", "--workers", "2")
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["engine"] == "rulemine"
    assert manifest["input"] == str(uniform_csv)
    assert manifest["schema"] == "generic"
    assert manifest["min_support"] == 0.5
    assert manifest["min_confidence"] == 0.8
    assert manifest["workers"] == 2
    assert manifest["include_empty_lhs"] is True
    assert manifest["database"]["total"] == 4
    assert manifest["database"]["items"] == 2
    assert manifest["database"]["rows_read"] == 4
    assert manifest["outputs"]["rules_csv"] == str(out / "rules.csv")
    assert manifest["outputs"]["rules_json"] is None
    assert set(manifest["timings"]) == {"load_s", "mine_s", "rules_s", "write_s"}


def test_manifest_replay_reproduces_outputs(uniform_csv, tmp_path):
    first = tmp_path / "first"
    again = tmp_path / "again"
    _mine(
        uniform_csv,
        first,
        "--format",
        "json",
        "--min-support",
        "0.5",
        "--min-confidence",
        "0.6",
        "--ordering",
        "confidence",
        "--no-empty-lhs",
        "--precision",
        "6",
    )
    code = cli.main(
        [
            "mine",
            "--manifest",
            str(first / "manifest.json"),
            "--out-dir",
            str(again),
        ]
    )
    assert code == 0
    for name in ("itemsets.csv", "rules.csv", "rules.json"):
        assert (first / name).read_bytes() == (again / name).read_bytes()
    replayed = json.loads((again / "manifest.json").read_text(encoding="utf-8"))
    assert replayed["ordering"] == "confidence"
    assert replayed["include_empty_lhs"] is False
    assert replayed["precision"] == 6


def test_manifest_replay_reuses_recorded_out_dir(uniform_csv, tmp_path):
    out = tmp_path / "recorded"
    _mine(uniform_csv, out)
    (out / "itemsets.csv").unlink()
    assert cli.main(["mine", "--manifest", str(out / "manifest.json")]) == 0
    assert (out / "itemsets.csv").is_file()


def test_manifest_replay_missing_file(tmp_path):
    code = cli.main(["mine", "--manifest", str(tmp_path / "none.json")])
    assert code == 1


def test_missing_input_exits_1(tmp_path, capsys):
    missing = tmp_path / "missing.csv"
    code = cli.main(["mine", "--input", str(missing)])
    assert code == 1
    assert str(missing) in capsys.readouterr().err


def test_input_flag_is_required_without_manifest(capsys):
    assert cli.main(["mine"]) == 2
    assert "--input is required" in capsys.readouterr().err


def test_threshold_validation_exits_2(uniform_csv, capsys):
    code = cli.main(
        ["mine", "--input", str(uniform_csv), "--min-support", "0"]
    )
    assert code == 2
    assert "--min-support must lie in (0,1]" in capsys.readouterr().err

    code = cli.main(
        ["mine", "--input", str(uniform_csv), "--min-support", "1.5"]
    )
    assert code == 2
    assert "--min-support must lie in (0,1]" in capsys.readouterr().err

    code = cli.main(
        ["mine", "--input", str(uniform_csv), "--min-confidence", "-0.2"]
    )
    assert code == 2
    assert "--min-confidence must lie in (0,1]" in capsys.readouterr().err

    code = cli.main(
        ["mine", "--input", str(uniform_csv), "--max-len", "0"]
    )
    assert code == 2
    code = cli.main(
        ["mine", "--input", str(uniform_csv), "--workers", "0"]
    )
    assert code == 2


def test_argparse_usage_errors_exit_2(capsys):
    assert cli.main([]) == 2
    assert cli.main(["mine", "--nope"]) == 2
    assert cli.main(["mine", "--input", "x", "--ordering", "zigzag"]) == 2
    capsys.readouterr()


def test_version_flag(capsys):
    assert cli.main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "rulemine 0.1.0"


def test_workers_flag_matches_serial(uniform_csv, tmp_path):
    out1, out2 = tmp_path / "serial", tmp_path / "forked"
    _mine(uniform_csv, out1, "--format", "json")
    _mine(uniform_csv, out2, "--format", "json", "--workers", "2")
    for name in ("itemsets.csv", "rules.csv", "rules.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_separator_flag(tmp_path):
    table = tmp_path / "semi.csv"
    table.write_text("a;b\n1;1\n1;1\n", encoding="utf-8")
    out = tmp_path / "out"
    code = cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--separator",
            ";",
            "--out-dir",
            str(out),
        ]
    )
    assert code == 0
    assert (out / "rules.csv").read_text(encoding="utf-8").count("\n") == 6


def test_max_len_flag(uniform_csv, tmp_path):
    out = tmp_path / "out"
    _mine(uniform_csv, out, "--max-len", "1")
    itemsets = (out / "itemsets.csv").read_text(encoding="utf-8").splitlines()
    assert itemsets == ["a=1,4,1.0", "b=1,4,1.0"]


def test_no_empty_lhs_flag(uniform_csv, tmp_path):
    out = tmp_path / "out"
    _mine(uniform_csv, out, "--no-empty-lhs")
    lines = (out / "rules.csv").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3  # header + the two one-item implications
    assert all("{}" not in line for line in lines[1:])


def test_mine_precision_flag(uniform_csv, tmp_path):
    out = tmp_path / "out"
    _mine(uniform_csv, out, "--precision", "2")
    lines = (out / "rules.csv").read_text(encoding="utf-8").splitlines()
    assert lines[1] == "1,{},{a=1},1.00,1.00,1.00,1.00,4"


def test_cicy5_schema_renames_columns(tmp_path):
    table = tmp_path / "hodge.csv"
    table.write_text(
        "h11,h21,h13,h14,h22,h23\n"
        "3,0,0,1000,4,2000\n"
        "3,0,0,1001,4,2001\n",
        encoding="utf-8",
    )
    out = tmp_path / "out"
    code = cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--schema",
            "cicy5",
            "--out-dir",
            str(out),
            "--format",
            "json",
        ]
    )
    assert code == 0
    document = json.loads((out / "rules.json").read_text(encoding="utf-8"))
    assert "item1=3" in document["catalog"]
    assert document["column_sources"]["item1"] == "h11"


def test_report_from_csv(uniform_csv, tmp_path, capsys):
    out = tmp_path / "out"
    _mine(uniform_csv, out)
    capsys.readouterr()
    code = cli.main(
        ["report", "--input", str(out / "rules.csv"), "--top", "2"]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert lines[0].split() == [
        "rule", "LHS", "RHS", "support", "confidence", "coverage", "lift",
        "count",
    ]
    assert lines[1].split()[1] == "{}"


def test_report_from_json(uniform_csv, tmp_path, capsys):
    out = tmp_path / "out"
    _mine(uniform_csv, out, "--format", "json")
    capsys.readouterr()
    code = cli.main(
        [
            "report",
            "--input",
            str(out / "rules.json"),
            "--top",
            "1",
            "--precision",
            "2",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[-2:] == ["conviction", "leverage"]
    assert "1.00" in lines[1]

    code = cli.main(
        [
            "report",
            "--input",
            str(out / "rules.json"),
            "--base-layout",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[-1] == "count"
    assert len(lines) == 6


def test_report_top_zero(uniform_csv, tmp_path, capsys):
    out = tmp_path / "out"
    _mine(uniform_csv, out)
    capsys.readouterr()
    assert cli.main(["report", "--input", str(out / "rules.csv"), "--top", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1


def test_report_missing_file(tmp_path):
    assert cli.main(["report", "--input", str(tmp_path / "no.csv")]) == 1


def test_predict_flow(tmp_path, capsys):
    table = tmp_path / "table.csv"
    table.write_text(
        "a,b\n" + "".join(f"{t % 3},{t % 3 + 10}\n" for t in range(30)),
        encoding="utf-8",
    )
    out = tmp_path / "out"
    cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--out-dir",
            str(out),
            "--format",
            "json",
            "--min-support",
            "0.2",
            "--min-confidence",
            "0.9",
        ]
    )
    capsys.readouterr()
    code = cli.main(
        [
            "predict",
            "--input",
            str(out / "rules.json"),
            "--known",
            "a=1",
            "--target",
            "b",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["target"] == "b"
    assert payload["known"] == ["a=1"]
    assert payload["predictions"][0]["value"] == 11
    assert payload["predictions"][0]["confidence"] == 1.0
    assert "=>" in payload["predictions"][0]["rule"]


def test_predict_accepts_source_header(tmp_path, capsys):
    table = tmp_path / "hodge.csv"
    table.write_text(
        "h11,h21,h13,h14,h22,h23\n"
        + "".join(f"3,0,0,{1000 + t % 2},4,2000\n" for t in range(10)),
        encoding="utf-8",
    )
    out = tmp_path / "out"
    cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--schema",
            "cicy5",
            "--out-dir",
            str(out),
            "--format",
            "json",
        ]
    )
    capsys.readouterr()
    code = cli.main(
        [
            "predict",
            "--input",
            str(out / "rules.json"),
            "--known",
            "item5=4",
            "--target",
            "h11",  # source header resolves to item1
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["target"] == "item1"
    assert payload["predictions"][0]["value"] == 3


def test_predict_no_match_is_empty_success(tmp_path, capsys):
    table = tmp_path / "table.csv"
    table.write_text(UNIFORM, encoding="utf-8")
    out = tmp_path / "out"
    cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--out-dir",
            str(out),
            "--format",
            "json",
        ]
    )
    capsys.readouterr()
    code = cli.main(
        [
            "predict",
            "--input",
            str(out / "rules.json"),
            "--known",
            "a=1",
            "--target",
            "zz",
        ]
    )
    assert code == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["predictions"] == []
    assert "no rule matches" in captured.err


def test_predict_bad_tokens_exit_2(tmp_path, capsys):
    table = tmp_path / "table.csv"
    table.write_text(UNIFORM, encoding="utf-8")
    out = tmp_path / "out"
    cli.main(
        [
            "mine",
            "--input",
            str(table),
            "--out-dir",
            str(out),
            "--format",
            "json",
        ]
    )
    capsys.readouterr()
    rules = str(out / "rules.json")
    code = cli.main(
        ["predict", "--input", rules, "--known", "a-1", "--target", "b"]
    )
    assert code == 2
    assert "malformed item token" in capsys.readouterr().err

    code = cli.main(
        ["predict", "--input", rules, "--known", "a=9", "--target", "b"]
    )
    assert code == 2
    assert "unknown item" in capsys.readouterr().err

    code = cli.main(
        ["predict", "--input", rules, "--known", "a=1", "--target", "a"]
    )
    assert code == 2
    assert "already present" in capsys.readouterr().err


def test_console_script_is_installed():
    exe = shutil.which("rulemine")
    assert exe, "console script should be on PATH after an editable install"
    result = subprocess.run(
        [exe, "--version"], capture_output=True, text=True, check=True
    )
    assert result.stdout.strip() == "rulemine 0.1.0"
