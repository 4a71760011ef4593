import json
import subprocess
import sys

import pytest

from orthoposet.cli import SCHEMA, main

CYCLIC = "orthoposet bad\nn 4\nlabels 0 a b 1\nprime 3 2 1 0\ncover 0 1\ncover 1 2\ncover 2 1\ncover 2 3\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def shell(cmd):
    return subprocess.run(cmd, shell=True, capture_output=True, text=True,
                          env={"PATH": "/usr/bin:/bin", "PYTHONHASHSEED": "0"} | _pythonpath())


def _pythonpath():
    import os
    return {k: v for k, v in os.environ.items() if k in ("PYTHONPATH", "HOME", "VIRTUAL_ENV")}


PY = f"{sys.executable} -m orthoposet"


def test_check_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", "fig3", "--require", "omp", "--require", "non-lattice")[0] == 0
    code, out, _ = run(capsys, "check", "fig6", "--require", "omp")
    assert code == 1
    assert "FAILED omp: a <= d'" in out
    bad = tmp_path / "cyc.txt"
    bad.write_text(CYCLIC)
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and err.startswith("error:")
    assert run(capsys, "check", "fig9")[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.txt"))[0] == 2


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "fig1", "--format", "json", "--require", "boolean")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == SCHEMA and doc["command"] == "check"
    assert doc["n"] == 12 and doc["failed"] == []
    assert doc["properties"]["boolean"]["holds"] and not doc["properties"]["lattice"]["holds"]


def _cells(out):
    rows = out.splitlines()[2:]
    return [row.split()[1:] for row in rows]


def test_table_commutator(capsys):
    code, out, _ = run(capsys, "table", "fig7_o6", "--relation", "commutator")
    assert code == 0
    cells = _cells(out)
    assert len(cells) == 6 and all(c == ["{1}"] * 6 for c in cells)
    out = run(capsys, "table", "fig3", "--relation", "commutator", "--format", "json")[1]
    doc = json.loads(out)
    labels = doc["labels"]
    assert doc["cells"][labels.index("a")][labels.index("b")] == ["b'", "a'"]


def test_table_compat_and_discriminator(capsys):
    out = run(capsys, "table", "boolean:1", "--relation", "compat")[1]
    assert _cells(out) == [["T", "T"], ["T", "T"]]
    out = run(capsys, "table", "mo:2", "--relation", "discriminator-slice", "--z", "1:b", "--format", "json")[1]
    doc = json.loads(out)
    lab = doc["labels"]
    a, b = lab.index("1:a"), lab.index("2:a")
    assert doc["cells"][a][b] == ["1:a"] and doc["cells"][a][a] == ["1:b"]


def test_pipelines():
    r = shell(f"{PY} gen fig2 | {PY} check - --require omp --require non-lattice")
    assert r.returncode == 0, r.stderr
    r = shell(f"{PY} hsum fig6 fig6 | {PY} check - --require gom")
    assert r.returncode == 0, r.stderr
    r = shell(f"{PY} hsum fig6 fig3 | {PY} check - --require om")
    assert r.returncode == 1


def test_gen_and_dot(capsys):
    out = run(capsys, "gen", "boolean:2")[1]
    assert out.splitlines()[:2] == ["orthoposet boolean2", "n 4"]
    assert run(capsys, "gen", "boolean:9")[0] == 2
    out = run(capsys, "dot", "fig3")[1]
    assert out.startswith('digraph "fig3"') and out.count(" -> n") == 40


def test_enum_and_feasibility(capsys, monkeypatch):
    code, out, _ = run(capsys, "enum", "--max-size", "12", "--filter", "omp", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["counts_by_size"] == {"2": 1, "4": 1, "6": 1, "8": 2, "10": 2, "12": 3}
    code, _, err = run(capsys, "enum", "--max-size", "14", "--filter", "omp")
    assert code == 3 and "ORTHOPOSET_FEASIBILITY_LIMIT" in err
    monkeypatch.setenv("ORTHOPOSET_FEASIBILITY_LIMIT", "14")
    assert run(capsys, "enum", "--max-size", "14", "--filter", "omp")[0] == 0
    assert run(capsys, "enum", "--max-size", "7", "--filter", "omp")[0] == 2


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify-min", "--exhaustive-to", "8")
    assert code == 0 and "non-lattice orthomodular posets found: 0" in out
    code, out, _ = run(capsys, "verify-unique18", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == SCHEMA
    assert doc["ok"] and [st["stage"] for st in doc["certificate"]] == ["fixture", "distinctness", "extensions"]


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "fig3"],
        ["table", "fig3", "--relation", "commutator"],
        ["hsum", "fig1", "fig6", "boolean:3"],
        ["enum", "--max-size", "8", "--representatives"],
        ["verify-unique18"],
    ],
    ids=lambda a: a[0],
)
def test_repeated_runs_are_identical(argv):
    cmd = PY + " " + " ".join(argv)
    first, second = shell(cmd), shell(cmd)
    assert first.returncode == second.returncode
    assert first.stdout == second.stdout and first.stdout
