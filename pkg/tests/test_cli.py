import json
import subprocess
import sys
from pathlib import Path

import pytest

from pslgaug import build
from pslgaug.cli import main
from pslgaug.instances import (
    fraction_to_decimal,
    generate,
    load,
    oplog_from_jsonl,
    oplog_to_jsonl,
    parse,
    serialize,
)

ROOT = Path(__file__).resolve().parent.parent
SCHEMA = json.loads((ROOT / "schemas" / "cli_output.schema.json").read_text())

FIG3 = {
    "format_version": 1,
    "points": [
        {"id": 1, "x": "0", "y": "0"},
        {"id": 2, "x": "0", "y": "0.1"},
        {"id": 3, "x": "1", "y": "0"},
        {"id": 4, "x": "1", "y": "0.1"},
    ],
    "edges": [[1, 2], [2, 3], [3, 4]],
}


@pytest.fixture
def fig3_file(tmp_path):
    path = tmp_path / "fig3.json"
    path.write_text(json.dumps(FIG3))
    return str(path)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def check_schema(doc):
    import jsonschema

    jsonschema.validate(doc, SCHEMA)


def test_validate(fig3_file, capsys):
    code, out, _ = run_cli(["validate", fig3_file], capsys)
    assert code == 0
    assert "4 points" in out


def test_validate_collinear(tmp_path, capsys):
    bad = dict(FIG3)
    bad["points"] = [
        {"id": 1, "x": "0", "y": "0"},
        {"id": 2, "x": "1", "y": "1"},
        {"id": 3, "x": "2", "y": "2"},
    ]
    bad["edges"] = [[1, 2]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, out, err = run_cli(["validate", str(p)], capsys)
    assert code == 1
    assert "collinear" in err


def test_augment_json(fig3_file, capsys):
    code, out, _ = run_cli(["augment", fig3_file, "--mode", "opt2ec", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    check_schema(doc)
    assert doc["cost"] == pytest.approx(2.0, abs=1e-9)
    assert doc["edges"] == [[1, 3], [2, 4]]
    assert doc["verified"] is True


def test_augment_all_modes(fig3_file, capsys):
    for mode in ("heur2ec", "heur2vc", "opt2ec", "opt2vc"):
        code, out, _ = run_cli(["augment", fig3_file, "--mode", mode, "--json"], capsys)
        assert code == 0
        doc = json.loads(out)
        check_schema(doc)
        assert doc["cost"] == pytest.approx(2.0, abs=1e-9)


def test_transform_replay_roundtrip(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    g = generate(12, 7, 0.4)
    inst.write_text(serialize(g))
    oplog = tmp_path / "run.jsonl"
    code, out, _ = run_cli(
        ["transform", str(inst), "--oplog", str(oplog), "--json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    check_schema(doc)
    assert doc["final_length"] <= 2 * doc["mst_length"] + 1e-9

    code, out, _ = run_cli(["replay", str(inst), str(oplog), "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    check_schema(rep)
    assert rep["steps"] == doc["steps"]


def test_oracle_cli(fig3_file, capsys):
    code, out, _ = run_cli(["oracle", fig3_file, "--mode", "2ec", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    check_schema(doc)
    assert doc["cost"] == pytest.approx(2.0, abs=1e-9)


def test_oracle_exhausted(tmp_path, capsys):
    inst = tmp_path / "big.json"
    inst.write_text(serialize(generate(12, 3, 0.3)))
    code, out, err = run_cli(
        ["oracle", str(inst), "--mode", "2ec", "--limit", "2"], capsys
    )
    assert code == 2
    assert "exceed" in err


def test_gen_deterministic(tmp_path, capsys):
    code, out1, _ = run_cli(["gen", "--n", "9", "--seed", "42", "--density", "0.5"], capsys)
    assert code == 0
    code, out2, _ = run_cli(["gen", "--n", "9", "--seed", "42", "--density", "0.5"], capsys)
    assert out1 == out2
    g = parse(out1)
    assert g.n == 9


def test_gen_env_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PSLG_SEED", "123")
    code, out1, _ = run_cli(["gen", "--n", "5"], capsys)
    code, out2, _ = run_cli(["gen", "--n", "5", "--seed", "123"], capsys)
    assert out1 == out2


def test_render_base_and_overlay(fig3_file, tmp_path, capsys):
    out_svg = tmp_path / "fig3.svg"
    code, _, _ = run_cli(["render", fig3_file, "-o", str(out_svg)], capsys)
    assert code == 0
    svg = out_svg.read_text()
    assert svg.count('class="base"') == 3
    assert 'class="aug"' not in svg

    # overlay the optimal augmentation
    aug_json = tmp_path / "aug.json"
    code, out, _ = run_cli(["augment", fig3_file, "--mode", "opt2ec", "--json"], capsys)
    aug_json.write_text(out)
    out_svg2 = tmp_path / "fig3aug.svg"
    code, _, _ = run_cli(
        ["render", fig3_file, "--overlay", str(aug_json), "-o", str(out_svg2)], capsys
    )
    assert code == 0
    svg = out_svg2.read_text()
    assert svg.count('class="base"') == 3
    assert svg.count('class="aug"') == 2


def test_render_oplog_overlay(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    g = generate(8, 5, 0.5)
    inst.write_text(serialize(g))
    oplog = tmp_path / "run.jsonl"
    run_cli(["transform", str(inst), "--oplog", str(oplog)], capsys)
    out_svg = tmp_path / "run.svg"
    code, _, _ = run_cli(
        ["render", str(inst), "--overlay", str(oplog), "-o", str(out_svg)], capsys
    )
    assert code == 0
    svg = out_svg.read_text()
    assert 'id="phase-' in svg


def test_render_deterministic(fig3_file, tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run_cli(["render", fig3_file, "-o", str(a)], capsys)
    run_cli(["render", fig3_file, "-o", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_bench(tmp_path, capsys):
    code, out, _ = run_cli(["bench", "--sizes", "5,7", "--seeds", "1,2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5  # header + 4 rows
    assert lines[0].startswith("n\tseed")


def test_roundtrip_exact():
    g = build(
        [(0, "0.125", "-3.5"), (1, "7", "0.0625"), (2, "-2.25", "4")],
        [(0, 1), (1, 2)],
    )
    assert serialize(parse(serialize(g))) == serialize(g)


def test_fraction_to_decimal():
    from fractions import Fraction

    assert fraction_to_decimal(Fraction(1, 10)) == "0.1"
    assert fraction_to_decimal(Fraction(-25, 100)) == "-0.25"
    assert fraction_to_decimal(Fraction(3)) == "3"
    assert fraction_to_decimal(Fraction(1, 8)) == "0.125"


def test_oplog_roundtrip():
    from pslgaug.transform import OpStep

    steps = [OpStep("insert", 1, 3, 4), OpStep("delete", 2, 3, 5)]
    text = oplog_to_jsonl(steps, assert_len_le="2.405")
    back = oplog_from_jsonl(text)
    assert back == steps
    for line in text.strip().splitlines():
        doc = json.loads(line)
        assert set(doc) == {"op", "u", "v", "phase", "assert_len_le"}


def test_record_deterministic_modulo_walltime(fig3_file, capsys):
    docs = []
    for _ in range(2):
        code, out, _ = run_cli(["augment", fig3_file, "--mode", "opt2ec", "--json"], capsys)
        doc = json.loads(out)
        doc.pop("wall_ms")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_console_entry_point(fig3_file):
    proc = subprocess.run(
        [sys.executable, "-m", "pslgaug.cli", "validate", fig3_file],
        capture_output=True,
        text=True,
        cwd=str(ROOT),
    )
    assert proc.returncode == 0
    assert "4 points" in proc.stdout
