import json
import re

import pytest

from rectstruct.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from rectstruct.formats import ParseError, parse_grid, read_structures, read_grid

from conftest import DATA

EDGE = re.compile(r'^\s*(\d+) -> (\d+) \[color="([a-z:]+)"\];$')


def parse_dot(text):
    """Red and blue edge sets of one DOT digraph, with a strict line grammar."""
    lines = text.strip().splitlines()
    assert re.match(r"^digraph \w+ \{$", lines[0]) and lines[-1] == "}"
    red, blue, nodes = set(), set(), set()
    for line in lines[1:-1]:
        if m := re.match(r"^\s*(\d+);$", line):
            nodes.add(int(m.group(1)))
            continue
        if line.strip() == "node [shape=circle];":
            continue
        m = EDGE.match(line)
        assert m, line
        edge = (int(m.group(1)), int(m.group(2)))
        for colour in m.group(3).split(":"):
            (red if colour == "red" else blue).add(edge)
    return nodes, red, blue


def test_enumerate_jsonl_round_trip(tmp_path, capsys):
    out = tmp_path / "rs.jsonl"
    assert main(["enumerate", "2", "2", "--out", str(out)]) == EXIT_OK
    assert "3 rectangular structures" in capsys.readouterr().out
    structures = read_structures(out)
    assert len(structures) == 3
    first = json.loads(out.read_text().splitlines()[0])
    assert set(first) == {"n", "m", "rectangles"}
    assert min(min(r["rows"]) for r in first["rectangles"]) == 1


def test_enumerate_other_formats(tmp_path):
    assert main(["enumerate", "2", "2", "--out", str(tmp_path / "t.txt"), "--format", "table"]) == EXIT_OK
    assert main(["enumerate", "2", "2", "--out", str(tmp_path / "g.dot"), "--format", "dot"]) == EXIT_OK
    assert (tmp_path / "g.dot").read_text().count("digraph") == 3


def test_filter_and_export(tmp_path, capsys):
    out = tmp_path / "cg.jsonl"
    assert main(["filter-cg", "2", "--out", str(out)]) == EXIT_OK
    report = capsys.readouterr().out
    assert "1 natural" in report
    rec = json.loads(out.read_text())
    assert rec["provenance"] == "natural" and rec["order"] == 4
    dots = tmp_path / "dot"
    assert main(["export-dot", str(out), "--out", str(dots)]) == EXIT_OK
    (doc,) = list(dots.glob("*.dot"))
    nodes, red, blue = parse_dot(doc.read_text())
    assert nodes == {1, 2, 3, 4} and red == blue and len(red) == 8


def test_export_structure_dot(tmp_path, capsys):
    src = tmp_path / "rs.jsonl"
    main(["enumerate", "2", "2", "--out", str(src)])
    capsys.readouterr()
    assert main(["export-dot", str(src)]) == EXIT_OK
    docs = capsys.readouterr().out.split("}\n")
    for doc in filter(str.strip, docs):
        nodes, red, blue = parse_dot(doc + "}\n")
        assert len(nodes) == 4 and len(red) == len(blue) == 8


@pytest.mark.parametrize("name", ["cg9_natural.txt", "cg9_rs105.txt"])
def test_verify_printed_tables(name, capsys):
    assert main(["verify", str(DATA / name)]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_verify_matrix(tmp_path):
    from rectstruct.algebra import cg_incidence, natural_central_groupoid
    from rectstruct.formats import format_matrix

    f = tmp_path / "a.txt"
    f.write_text(format_matrix(cg_incidence(natural_central_groupoid(3))))
    assert main(["verify", str(f)]) == EXIT_OK


def test_verify_failure_reports_triple(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\n")
    assert main(["verify", str(f)]) == EXIT_FAILED
    assert "a=1, b=2, c=1" in capsys.readouterr().out


def test_parse_errors(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("1 2\n2 x\n")
    assert main(["verify", str(f)]) == EXIT_USAGE
    assert "line 2, column 3" in capsys.readouterr().err
    g = tmp_path / "bad.jsonl"
    g.write_text('{"n": 2\n')
    assert main(["export-dot", str(g)]) == EXIT_USAGE
    assert main(["enumerate", "0", "2"]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE


def test_grid_layouts():
    assert parse_grid("* 1 2\n1 | 1 2\n2 | 2 1\n") == [[1, 2], [2, 1]]
    assert parse_grid("1 & 2 \\\\\n2 & 1 \\\\\n") == [[1, 2], [2, 1]]
    kind, t = read_grid("1 2\n2 1\n")
    assert kind == "table" and t.tolist() == [[0, 1], [1, 0]]
    with pytest.raises(ParseError):
        parse_grid("1 2 3\n1 2\n")
