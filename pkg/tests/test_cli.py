import json
import subprocess
import sys

import pytest

from quaddef import corpus
from quaddef.cli import main
from quaddef.defcomplex import DeformationReport

QUICK = ["hyperbolic-p1", "symplectic-twisted-euler-p1", "ideal-point-p2"]


def write(tmp_path, name):
    path = tmp_path / f"{name}.qd"
    path.write_text(corpus.get(name).text)
    return str(path)


@pytest.mark.parametrize("name", [e.name for e in corpus.valid_entries()])
def test_check_accepts_valid_entries(tmp_path, capsys, name):
    assert main(["check", write(tmp_path, name)]) == 0
    assert "all checks passed" in capsys.readouterr().out


@pytest.mark.parametrize("name", [e.name for e in corpus.invalid_entries()])
def test_invalid_entries_exit_codes(tmp_path, capsys, name):
    e = corpus.get(name)
    assert main([e.command, write(tmp_path, name)]) == e.exit_code
    assert f"error: {e.error}" in capsys.readouterr().err


def test_unstable_suggests_a_window(tmp_path, capsys):
    main(["report", write(tmp_path, "invalid-window")])
    assert "--window" in capsys.readouterr().err


def test_window_flag_overrides_header(tmp_path, capsys):
    assert main(["report", write(tmp_path, "invalid-window"), "--window", "8"]) == 0
    assert "h1 = 5" in capsys.readouterr().out


@pytest.mark.parametrize("name", QUICK)
def test_report_json_roundtrip(tmp_path, capsys, name):
    assert main(["report", write(tmp_path, name), "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    r = DeformationReport.from_dict(d)
    assert (r.h0, r.h1, r.h2) == corpus.get(name).expected
    assert d["les"]["exact"]


@pytest.mark.parametrize("flags", [[], ["--json"]])
def test_report_is_byte_identical(tmp_path, capsys, flags):
    path = write(tmp_path, "ideal-point-p2")
    outs = []
    for _ in range(2):
        assert main(["report", path] + flags) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_text_report_lists_everything(tmp_path, capsys):
    main(["report", write(tmp_path, "ideal-point-p2")])
    out = capsys.readouterr().out
    for key in ("h0 = 0", "h1 = 2", "h2 = 3", "long exact sequence: exact", "agrees"):
        assert key in out
    assert "formally smooth" not in out


def test_realize_then_check(tmp_path, capsys):
    out = tmp_path / "ext.qd"
    assert main(["realize", write(tmp_path, "symplectic-twisted-euler-p1"), "--out", str(out)]) == 0
    text = out.read_text()
    assert "kind = extension" in text and "does not split" in text
    assert main(["check", str(out)]) == 0
    assert "matches the recomputed presentation" in capsys.readouterr().out


def test_tampered_extension_fails_check(tmp_path, capsys):
    out = tmp_path / "ext.qd"
    main(["realize", write(tmp_path, "ideal-point-p2"), "--class", "1", "--out", str(out)])
    lines = out.read_text().splitlines()
    k = lines.index("[form]") + 1
    lines[k] = lines[k].replace("0", "7", 1)
    out.write_text("\n".join(lines) + "\n")
    assert main(["check", str(out)]) == 4
    assert "form" in capsys.readouterr().err


@pytest.mark.parametrize("name, index", [("hyperbolic-p1", 0), ("ideal-point-p2", 5)])
def test_realize_index_out_of_range(tmp_path, capsys, name, index):
    assert main(["realize", write(tmp_path, name), "--class", str(index)]) == 2
    assert "IndexOutOfRange" in capsys.readouterr().err


def test_realize_without_global_representative(tmp_path, capsys):
    assert main(["realize", write(tmp_path, "symplectic-twisted-p1")]) == 2
    assert "NotGloballyRepresentable" in capsys.readouterr().err


def test_corpus_list_and_emit(capsys):
    assert main(["corpus", "--list"]) == 0
    listed = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert len(listed) >= 8 and set(listed) == set(corpus.names())
    assert main(["corpus", "--emit", "ideal-point-p2"]) == 0
    assert capsys.readouterr().out == corpus.get("ideal-point-p2").text


def test_corpus_unknown_name(capsys):
    assert main(["corpus", "--emit", "no-such-entry"]) == 2
    assert "UnknownName" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["check", "/nonexistent/file.qd"]) == 1


def test_stdin_and_console_script():
    text = corpus.get("hyperbolic-p1").text
    res = subprocess.run(
        [sys.executable, "-m", "quaddef.cli", "check", "-"],
        input=text, capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0, res.stderr
    assert "all checks passed" in res.stdout
