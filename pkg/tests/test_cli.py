import json
import subprocess
import sys
from fractions import Fraction

import pytest

from tmmp_engine import fixtures as fx
from tmmp_engine.cli import main, parse_input, parse_rational, presentation_document
from tmmp_engine.errors import NonRationalValue, SchemaError

from conftest import FIXTURE_DIR, presentation_from_normals


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(fx.ALL))
def test_fixture_files_roundtrip(name):
    p = parse_input(FIXTURE_DIR / f"{name}.json")
    ref = fx.ALL[name]()
    assert p.weights == ref.weights and p.support == ref.support
    assert presentation_document(p) == json.loads((FIXTURE_DIR / f"{name}.json").read_text())


def test_parse_rational():
    assert parse_rational("-7/3", "x").denominator == 3
    assert parse_rational(4, "x") == 4
    for bad in ("1.5", 0.5, "1e3", "2/0"):
        with pytest.raises(NonRationalValue):
            parse_rational(bad, "x")
    with pytest.raises(SchemaError):
        parse_rational(True, "x")


@pytest.mark.parametrize("cmd", ["validate", "analyze", "relations", "tmmp", "crit", "verify"])
def test_every_command_on_blowup(cmd, tmp_path, capsys):
    out_json = tmp_path / "out.json"
    code, out, _ = run([cmd, FIXTURE_DIR / "blowup.json", "--json", out_json], capsys)
    assert code == 0
    doc = json.loads(out_json.read_text())
    assert doc["command"] == cmd and doc["input"]["name"] == "blow-up eps=1/2"
    assert out.strip()


def test_analyze_output(tmp_path, capsys):
    out_json = tmp_path / "a.json"
    code, out, _ = run(["analyze", FIXTURE_DIR / "p2_two_torus.json", "--json", out_json], capsys)
    assert code == 0 and "Kouchnirenko = 5" in out and "dim QH = 3" in out
    res = json.loads(out_json.read_text())["result"]
    assert res["spurious"] == [3] and res["semi_fano"] is False


def test_error_exit_and_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"weights": [[1, 1]], "support": ["1.5", "1"]}))
    out_json = tmp_path / "err.json"
    code, _, err = run(["validate", bad, "--json", out_json], capsys)
    assert code == 1 and "NonRationalValue" in err
    assert json.loads(out_json.read_text())["error"] == "NonRationalValue"

    broken = tmp_path / "broken.json"
    broken.write_text('{"weights": [[1, 1]],\n "support": [1, }')
    code, _, err = run(["validate", broken], capsys)
    assert code == 1 and "line 2" in err
    with pytest.raises(SchemaError):
        parse_input(broken)


def test_non_generic_suggestion_in_json(tmp_path, capsys):
    # square with two opposite corners cut equally: two walls at the same time
    normals = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)]
    p = presentation_from_normals(normals, [0, 0, 2, 2, Fraction(-1, 2), Fraction(7, 2)])
    doc = presentation_document(p)
    src = tmp_path / "sym.json"
    src.write_text(json.dumps(doc))
    out_json = tmp_path / "err.json"
    code, _, _ = run(["tmmp", src, "--json", out_json], capsys)
    err = json.loads(out_json.read_text())
    assert code == 1 and err["error"] == "NonGenericClass"
    assert len(err["suggestion"]) == 6


def test_deform_option(tmp_path, capsys):
    deform = tmp_path / "d.json"
    deform.write_text(json.dumps({"support": ["1", "1", "1"]}))
    out_json = tmp_path / "t.json"
    code, out, _ = run(["tmmp", FIXTURE_DIR / "p2.json", "--deform", deform, "--json", out_json], capsys)
    assert code == 0 and "t = 1:" in out


def test_svg_frames(tmp_path, capsys):
    code, out, _ = run(["tmmp", FIXTURE_DIR / "p2.json", "--svg", tmp_path / "svg"], capsys)
    frames = sorted((tmp_path / "svg").glob("frame_*.svg"))
    assert code == 0 and len(frames) == 2
    assert frames[0].read_text().startswith("<svg") and 'width="800"' in frames[0].read_text()
    code, _, _ = run(["tmmp", FIXTURE_DIR / "blowup.json", "--svg", tmp_path / "b"], capsys)
    assert code == 0 and len(list((tmp_path / "b").glob("*.svg"))) == 4


def test_svg_rejects_threefolds(tmp_path, capsys):
    code, _, err = run(["tmmp", FIXTURE_DIR / "flip3.json", "--svg", tmp_path / "s"], capsys)
    assert code == 1 and "UnsupportedDimension" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tmmp_engine.cli", "analyze", str(FIXTURE_DIR / "teardrop.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "dim QH = 3" in proc.stdout


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bogus", "x.json"])
    assert info.value.code == 2
