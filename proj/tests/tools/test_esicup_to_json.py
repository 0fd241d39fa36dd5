import json
import pathlib
import subprocess
import sys

import pytest

TOOLS = pathlib.Path(__file__).resolve().parents[2] / "tools"
sys.path.insert(0, str(TOOLS))

import esicup_to_json  # noqa: E402

SAMPLE = """<?xml version="1.0" encoding="UTF-8"?>
<nesting xmlns="http://globalnest.fe.up.pt/nesting">
  <name>tiny</name>
  <problem>
    <boards>
      <piece id="board0" quantity="1"><component idPolygon="polygon0" type="0"/></piece>
    </boards>
    <lot>
      <piece id="piece0" quantity="2"><component idPolygon="polygon1" type="0"/></piece>
      <piece id="piece1" quantity="1"><component idPolygon="polygon2" type="0"/></piece>
    </lot>
  </problem>
  <polygons>
    <polygon id="polygon0" nVertices="4">
      <lines>
        <segment n="1" x0="0" y0="0" x1="100" y1="0"/>
        <segment n="2" x0="100" y0="0" x1="100" y1="40"/>
        <segment n="3" x0="100" y0="40" x1="0" y1="40"/>
        <segment n="4" x0="0" y0="40" x1="0" y1="0"/>
      </lines>
    </polygon>
    <polygon id="polygon1" nVertices="3">
      <lines>
        <segment n="2" x0="4" y0="0" x1="0" y1="3"/>
        <segment n="1" x0="0" y0="0" x1="4" y1="0"/>
        <segment n="3" x0="0" y0="3" x1="0" y1="0"/>
      </lines>
    </polygon>
    <polygon id="polygon2" nVertices="4">
      <lines>
        <segment n="1" x0="0" y0="0" x1="2" y1="0"/>
        <segment n="2" x0="2" y0="0" x1="2" y1="1"/>
        <segment n="3" x0="2" y0="1" x1="0" y1="1"/>
        <segment n="4" x0="0" y0="1" x1="0" y1="0"/>
      </lines>
    </polygon>
  </polygons>
</nesting>
"""


def test_convert_reads_board_and_lot():
    inst = esicup_to_json.convert(SAMPLE)
    assert inst["name"] == "tiny"
    assert inst["strip_width"] == 40.0
    assert [p["id"] for p in inst["pieces"]] == ["piece0", "piece1"]
    assert inst["pieces"][0]["count"] == 2
    assert inst["pieces"][0]["vertices"] == [[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]


def test_name_override():
    assert esicup_to_json.convert(SAMPLE, "other")["name"] == "other"


def test_multi_component_piece_is_rejected():
    text = SAMPLE.replace(
        '<component idPolygon="polygon2" type="0"/>',
        '<component idPolygon="polygon2" type="0"/><component idPolygon="polygon1" type="0"/>')
    with pytest.raises(ValueError):
        esicup_to_json.convert(text)


def test_command_line(tmp_path):
    src = tmp_path / "tiny.xml"
    src.write_text(SAMPLE, encoding="utf-8")
    out = tmp_path / "tiny.json"
    script = TOOLS / "esicup_to_json.py"
    subprocess.run([sys.executable, str(script), str(src), "-o", str(out)], check=True)
    assert json.loads(out.read_text())["strip_width"] == 40.0
    bad = tmp_path / "bad.xml"
    bad.write_text("<nesting>", encoding="utf-8")
    result = subprocess.run([sys.executable, str(script), str(bad)], capture_output=True)
    assert result.returncode == 2
