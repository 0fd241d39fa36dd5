#!/usr/bin/env python3
"""Convert an ESICUP nesting XML file into a nestline instance JSON file.

The strip width is the height (y extent) of the first board polygon. Every lot
piece becomes one record whose count is the piece quantity; pieces made of
several components are rejected.
"""

import argparse
import json
import sys
import xml.etree.ElementTree as ET


def _local(tag):
    return tag.rsplit("}", 1)[-1]


def _children(node, name):
    return [c for c in node if _local(c.tag) == name]


def _child(node, name):
    found = _children(node, name)
    if not found:
        raise ValueError(f"<{_local(node.tag)}> has no <{name}> element")
    return found[0]


def _polygon_vertices(polygon):
    segments = _children(_child(polygon, "lines"), "segment")
    segments.sort(key=lambda s: int(s.get("n", "0")))
    if len(segments) < 3:
        raise ValueError(f"polygon {polygon.get('id')} has fewer than 3 segments")
    return [[float(s.get("x0")), float(s.get("y0"))] for s in segments]


def convert(xml_text, name=None):
    root = ET.fromstring(xml_text)
    polygons = {}
    for polygon in root.iter():
        if _local(polygon.tag) == "polygon":
            polygons[polygon.get("id")] = _polygon_vertices(polygon)

    problem = _child(root, "problem")
    boards = _children(_child(problem, "boards"), "piece")
    if not boards:
        raise ValueError("no board")
    board = polygons[_child(boards[0], "component").get("idPolygon")]
    ys = [v[1] for v in board]
    strip_width = max(ys) - min(ys)

    pieces = []
    for piece in _children(_child(problem, "lot"), "piece"):
        components = _children(piece, "component")
        if len(components) != 1:
            raise ValueError(f"piece {piece.get('id')} has {len(components)} components")
        pieces.append({
            "id": piece.get("id"),
            "count": int(piece.get("quantity", "1")),
            "vertices": polygons[components[0].get("idPolygon")],
        })

    if name is None:
        names = _children(root, "name")
        name = names[0].text.strip() if names and names[0].text else "instance"
    return {"name": name, "strip_width": strip_width, "pieces": pieces}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("xml", help="ESICUP XML file")
    parser.add_argument("-o", "--output", help="output JSON file (default: stdout)")
    parser.add_argument("--name", help="instance name (default: the file's <name>)")
    args = parser.parse_args(argv)

    try:
        with open(args.xml, encoding="utf-8") as f:
            instance = convert(f.read(), args.name)
    except (OSError, ValueError, KeyError, ET.ParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    text = json.dumps(instance, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
