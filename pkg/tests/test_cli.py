from __future__ import annotations

import subprocess
import sys

import pytest

from stopred.cli import run
from stopred.designs import BlockSystem
from stopred.fieldcore import FieldMatrix


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_table(capsys):
    code, out, _ = call(capsys, "bounds", "--n", "24", "--d", "8", "--q", "2", "--r", "12")
    assert code == 0
    for v in ("2509", "1816", "232", "245", "300"):
        assert v in out


def test_bounds_mds_json(capsys):
    import json

    code, out, _ = call(capsys, "bounds", "--n", "10", "--d", "5", "--r", "5", "--mds", "--format", "json")
    rows = {r["name"]: r for r in json.loads(out)}
    assert rows["best_mds_upper"]["value_int"] == 70


def test_exit_codes(capsys):
    assert call(capsys, "bounds", "--bogus")[0] == 1
    assert call(capsys, "bounds", "--n", "5", "--d", "4", "--r", "3", "--mds")[0] == 0
    assert call(capsys, "design", "construct", "--method", "lemma14", "--n", "3")[0] == 1
    assert call(capsys, "design", "search", "--kind", "turan", "--v", "5")[0] == 1
    assert call(capsys, "enumerate", "--code", "rs:5,5,2", "--decoder", "ml", "--weights", "2..1")[0] == 1


def test_budget_exit(capsys):
    code, _, err = call(capsys, "enumerate", "--code", "golay24", "--decoder", "ml", "--weights", "8", "--budget", "10")
    assert code == 2 and "budget" in err


def test_enumerate_golay(capsys, tmp_path):
    out_file = tmp_path / "ml.csv"
    code, _, _ = call(capsys, "enumerate", "--code", "golay24", "--decoder", "ml", "--weights", "8..10", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_bytes().decode().split("\n")
    assert lines[0] == "w,count,binom,fraction"
    assert [int(x.split(",")[1]) for x in lines[1:4]] == [759, 12144, 91080]
    assert b"\r" not in out_file.read_bytes()


def test_design_construct_and_verify(capsys, tmp_path):
    code, out, _ = call(
        capsys, "design", "construct", "--method", "c1", "--n", "10", "--r", "3", "--l", "2", "--sweep-j", "--out-dir", str(tmp_path)
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 3 and all(",True,True," in ln for ln in lines[1:])
    f = sorted(tmp_path.iterdir())[0]
    s = BlockSystem.from_text(f.read_text())
    assert s.v == 10 and s.r == 3
    code, out, _ = call(capsys, "design", "verify", str(f), "--format", "csv")
    assert code == 0 and "True" in out


def test_design_search_round_trip(capsys, tmp_path):
    p = tmp_path / "g.txt"
    assert call(capsys, "design", "search", "--kind", "se", "--v", "5", "--r", "3", "--out", str(p))[0] == 0
    assert len(BlockSystem.from_text(p.read_text())) == 4


def test_stopping_and_search(capsys, tmp_path):
    m = tmp_path / "h.txt"
    log = tmp_path / "log.jsonl"
    code, _, err = call(capsys, "search", "--code", "rs:5,5,2", "--seed", "1", "--out", str(m), "--log", str(log))
    assert code == 0 and '"rows": 5' in err
    FieldMatrix.from_text(m.read_text())
    code, out, _ = call(capsys, "stopping", "--matrix", str(m), "--code", "rs:5,5,2", "--format", "csv")
    assert code == 0 and out.split("\n")[1].split(",")[2] == "4"
    again = tmp_path / "h2.txt"
    call(capsys, "search", "--code", "rs:5,5,2", "--seed", "1", "--out", str(again))
    assert again.read_bytes() == m.read_bytes()


def test_curves_and_golay(capsys):
    code, out, _ = call(capsys, "curves", "--scenario", "fixed_d", "--d", "5", "--n-min", "8", "--n-max", "10")
    assert code == 0 and out.startswith("n,d,k,bound_name,value,normalized\n")
    code, out, _ = call(capsys, "golay")
    assert code == 0 and "A8=759" in out and "True" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "stopred", "bounds", "--n", "12", "--d", "6", "--q", "3", "--r", "6"], capture_output=True, text=True)
    assert res.returncode == 0 and "332" in res.stdout and "160" in res.stdout
