import io
import json
import re
import subprocess
import sys

import pytest

from _shared import SQ5
from parannulus import cli
from parannulus.formats import ParseError, parse_points, parse_script, parse_subset


def _write_points(path, pts):
    path.write_text("".join(f"{x} {y}\n" for x, y in pts))
    return str(path)


@pytest.fixture
def sq5_file(tmp_path):
    return _write_points(tmp_path / "sq5.txt", SQ5)


def _run(capsys, *argv):
    rc = cli.run(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def _doc(capsys, *argv):
    rc, out, err = _run(capsys, *argv)
    assert rc == 0, err
    return json.loads(out)


def test_parse_points_comments_and_duplicates():
    ps = parse_points(io.StringIO("# header\n0 0\n1 0  # trailing\n\n0 0\n"))
    assert len(ps) == 2 and ps.duplicates == 1


@pytest.mark.parametrize("text,line", [("0 0\n1\n", 2), ("0 0\n1 x\n", 2), ("nan 0\n", 1)])
def test_parse_points_errors_cite_line(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_points(io.StringIO(text))
    with pytest.raises(ParseError):
        parse_points(io.StringIO("# only a comment\n"))


def test_parse_subset_ids_and_coordinates():
    ps = parse_points(io.StringIO("0 0\n1 0\n1 1\n"))
    assert parse_subset(io.StringIO("2\n0\n1 0\n"), ps) == [0, 1, 2]
    with pytest.raises(ParseError):
        parse_subset(io.StringIO("5\n"), ps)
    with pytest.raises(ParseError):
        parse_subset(io.StringIO("3 3\n"), ps)


def test_parse_script():
    w, ops = parse_script(io.StringIO('{"threshold": 0.5}\n{"op": "insert", "point": [0, 0]}\n{"op": "decide"}\n'))
    assert w == 0.5 and [o.op for o in ops] == ["insert", "decide"]
    with pytest.raises(ParseError, match="line 1"):
        parse_script(io.StringIO('{"op": "jump"}\n'))


def test_double_strip_all(capsys, sq5_file):
    doc = _doc(capsys, "double-strip", sq5_file, "--all")
    assert doc["width"] == pytest.approx(0.5)
    assert doc["problem"] == "double-strip" and doc["n"] == 5
    assert doc["geometry"]["kind"] == "double-strip"


def test_double_strip_theta_degrees(capsys, sq5_file):
    doc = _doc(capsys, "double-strip", sq5_file, "--theta", "45", "--deg")
    assert doc["theta"] == pytest.approx(0.7853981633974483)
    assert doc["width"] == pytest.approx(2**0.5 / 2)


def test_strip_and_constrained(capsys, sq5_file, tmp_path):
    assert _doc(capsys, "strip", sq5_file, "--theta", "0")["width"] == pytest.approx(1.0)
    sub = tmp_path / "q.txt"
    sub.write_text("0.5 0.5\n")
    doc = _doc(capsys, "constrained", sq5_file, "--subset", str(sub))
    assert doc["width"] == pytest.approx(0.5) and doc["subset"] == [4]


def test_annulus_modes(capsys, sq5_file):
    fixed = _doc(capsys, "annulus", sq5_file, "--theta", "0", "--phi", "-90", "--deg")
    assert fixed["width"] == pytest.approx(0.5)
    assert fixed["geometry"]["kind"] == "annulus"
    assert _doc(capsys, "annulus", sq5_file, "--phi", "0")["width"] == pytest.approx(0.5)
    free = _doc(capsys, "annulus", sq5_file, "--free")
    assert free["width"] == pytest.approx(0.5) and free["validated"] is True


def test_dynamic_script(capsys, sq5_file, tmp_path):
    script = tmp_path / "ops.jsonl"
    script.write_text(
        '{"op": "insert", "point": [0.5, 0.5]}\n{"op": "query"}\n{"op": "delete", "point": [0.5, 0.5]}\n{"op": "query"}\n'
    )
    doc = _doc(capsys, "dynamic", sq5_file, "--script", str(script))
    widths = [s["width"] for s in doc["steps"] if s["op"] == "query"]
    assert widths == pytest.approx([0.5, 0.0])
    script.write_text('{"op": "insert", "point": [0.5, 0.5]}\n{"op": "decide"}\n')
    for w, want in (("0.4", False), ("0.5", True)):
        doc = _doc(capsys, "dynamic", sq5_file, "--script", str(script), "--decide", w)
        assert doc["steps"][-1]["decision"] is want


def test_dynamic_bad_op_is_runtime_error(capsys, sq5_file, tmp_path):
    script = tmp_path / "ops.jsonl"
    script.write_text('{"op": "delete", "point": [0.5, 0.5]}\n')
    rc, _, err = _run(capsys, "dynamic", sq5_file, "--script", str(script))
    assert rc == 1 and "line 1" in err


def test_oracle_subcommand(capsys, sq5_file):
    assert _doc(capsys, "oracle", sq5_file, "--problem", "double-strip")["width"] == pytest.approx(0.5)
    doc = _doc(capsys, "oracle", sq5_file, "--problem", "annulus", "--resolution", "200")
    assert doc["width"] == pytest.approx(0.5, abs=1e-9) and doc["certified"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["double-strip", "X"],
        ["double-strip", "X", "--all", "--theta", "0"],
        ["annulus", "X", "--theta", "0"],
        ["annulus", "X", "--free", "--phi", "0"],
        ["annulus", "X"],
        ["render", "X", "--result", "r.json"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(capsys, sq5_file, argv, tmp_path):
    argv = [sq5_file if a == "X" else a for a in argv]
    if "render" in argv:
        (tmp_path / "r.json").write_text("{}")
        argv[-1] = str(tmp_path / "r.json")
    rc, _, _ = _run(capsys, *argv)
    assert rc == 2


def test_runtime_errors_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 2 3\n")
    rc, _, err = _run(capsys, "double-strip", str(bad), "--all")
    assert rc == 1 and "line 2" in err
    rc, _, _ = _run(capsys, "double-strip", str(tmp_path / "missing.txt"), "--all")
    assert rc == 1


def _strip_timing(text):
    return re.sub(r'"timing_s": [^,\n]+', '"timing_s": 0', text)


def test_output_is_stable(capsys, sq5_file, tmp_path):
    runs = []
    for k in range(2):
        svg = tmp_path / f"f{k}.svg"
        rc, out, _ = _run(capsys, "annulus", sq5_file, "--free", "--svg", str(svg))
        assert rc == 0
        runs.append((_strip_timing(out), svg.read_bytes()))
    assert runs[0] == runs[1]


def test_svg_structure(capsys, sq5_file, tmp_path):
    ds_svg = tmp_path / "ds.svg"
    _doc(capsys, "double-strip", sq5_file, "--all", "--svg", str(ds_svg))
    text = ds_svg.read_text()
    assert text.count('class="band"') == 2
    assert text.count('class="width-arrow"') == 1
    assert text.count("<circle") == 5
    ann_svg = tmp_path / "ann.svg"
    _doc(capsys, "annulus", sq5_file, "--theta", "0", "--phi", "-1.5707963267948966", "--svg", str(ann_svg))
    text = ann_svg.read_text()
    assert text.count('class="outer-parallelogram"') == 1
    assert text.count('class="inner-parallelogram"') == 1
    assert text.count('class="annulus-region"') == 1


def test_zero_width_renders_lines(capsys, tmp_path):
    pts = _write_points(tmp_path / "sq4.txt", SQ5[:4])
    svg = tmp_path / "z.svg"
    doc = _doc(capsys, "double-strip", pts, "--all", "--svg", str(svg))
    assert doc["width"] == 0.0
    assert svg.read_text().count('class="inner"') == 2


def test_render_from_saved_result(capsys, sq5_file, tmp_path):
    result = tmp_path / "r.json"
    _run(capsys, "annulus", sq5_file, "--free", "-o", str(result))
    svg, png = tmp_path / "r.svg", tmp_path / "r.png"
    rc, _, err = _run(capsys, "render", sq5_file, "--result", str(result), "--svg", str(svg), "--png", str(png))
    assert rc == 0, err
    assert svg.read_bytes().startswith(b"<?xml")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_gen_parallelogram_ring_roundtrip(capsys, tmp_path):
    path = tmp_path / "ring.txt"
    assert cli.run(["gen", "--n", "40", "--seed", "3", "--dist", "parallelogram-ring", "-o", str(path)]) == 0
    facts = dict(line[2:].split(" ", 1) for line in path.read_text().splitlines() if line.startswith("# "))
    thickness = float(facts["thickness"])
    doc = _doc(capsys, "annulus", str(path), "--free")
    assert doc["n"] == 40
    assert doc["width"] <= thickness + 1e-9


def test_console_script_entry_point(sq5_file):
    proc = subprocess.run([sys.executable, "-m", "parannulus", "double-strip", sq5_file, "--all"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["width"] == pytest.approx(0.5)
