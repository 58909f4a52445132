import json
import shutil

import pytest

from webqa.cli import main
from webqa.fixture import FIXTURE_DIR

SEQUENCE = [
    ["select-templates", "wasBornIn"],
    ["train", "wasBornIn"],
    ["evaluate", "wasBornIn", "--snippets", "10,20,30,all"],
]


def run_sequence(out, workers):
    for cmd in SEQUENCE:
        assert main(["--fixture", "--out-dir", str(out), "--workers", str(workers)] + cmd) == 0
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*"))
            if p.is_file()}


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    return [run_sequence(tmp_path_factory.mktemp(f"run{i}"), w) for i, w in enumerate((1, 1, 8))]


@pytest.fixture(scope="module")
def out_dir(runs, tmp_path_factory):
    out = tmp_path_factory.mktemp("final")
    run_sequence(out, 1)
    return out


def test_outputs_byte_identical(runs):
    first = runs[0]
    assert {"templates/wasBornIn.json", "templates/wasBornIn.curve.csv",
            "models/wasBornIn.filter.json", "models/wasBornIn.ranker.json",
            "reports/wasBornIn.test.k10.json", "reports/wasBornIn.test.kall.csv"} <= set(first)
    assert sum(k.startswith("reports/") for k in first) == 8
    for other in runs[1:]:
        assert other == first


def test_selected_size_two(out_dir):
    sel = json.loads((out_dir / "templates" / "wasBornIn.json").read_text())
    assert sel["templates"] == ["born", "birthplace"]


def answer(out_dir, capsys, *extra):
    capsys.readouterr()
    code = main(["--fixture", "--out-dir", str(out_dir), "answer", "Marvin_Minsky", "wasBornIn",
                 "--json", *extra])
    return code, json.loads(capsys.readouterr().out)


def test_answer_top_is_birth_city(out_dir, capsys):
    code, res = answer(out_dir, capsys)
    assert code == 0 and res["answers"][0]["entity"] == "New_York_City"
    assert "Henry_Minsky" in res["discarded"]
    _, full = answer(out_dir, capsys, "--snippets", "all")
    assert full["answers"][0]["entity"] == "New_York_City"


def test_global_flags_after_command(out_dir, capsys):
    code = main(["answer", "Marvin_Minsky", "wasBornIn", "--fixture", "--out-dir", str(out_dir),
                 "--timings"])
    captured = capsys.readouterr()
    assert code == 0 and "New_York_City" in captured.out and "# rank:" in captured.err


def test_unknown_relation_exit_2(out_dir, capsys):
    code = main(["--fixture", "--out-dir", str(out_dir), "answer", "Marvin_Minsky", "bornIn"])
    assert code == 2 and "bornIn" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["load-check"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["--fixture", "nonsense"])
    assert exc.value.code == 2


def test_missing_models_exit_2(tmp_path, capsys):
    assert main(["--fixture", "--out-dir", str(tmp_path), "evaluate", "wasBornIn"]) == 2
    assert "train" in capsys.readouterr().err


def test_corrupted_facts_exit_1(tmp_path, capsys):
    data = tmp_path / "data"
    shutil.copytree(FIXTURE_DIR, data)
    facts = data / "facts.tsv"
    lines = facts.read_text().splitlines()
    lines.insert(4, "Marvin_Minsky wasBornIn")
    facts.write_text("\n".join(lines) + "\n")
    code = main(["--config", str(data / "config.toml"), "--out-dir", str(tmp_path / "o"),
                 "load-check"])
    assert code == 1 and "facts.tsv:5" in capsys.readouterr().err


def test_load_check(capsys):
    assert main(["--fixture", "load-check"]) == 0
    out = capsys.readouterr().out
    assert "facts: 62" in out and "entities: 50" in out
