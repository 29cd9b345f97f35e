"""Text formats.  Everything on disk is 1-based.

* structures: JSONL, ``{"n":..,"m":..,"rectangles":[{"rows":[..],"cols":[..]},..]}``
* witnesses: JSONL, ``{"source_rs":..,"lifting":"(1,9)(2,7)","provenance":..,"order":..,"table":[[..]]}``
* tables: ``k`` lines of ``k`` integers; a header row, row labels, ``|``
  separators, rule lines and ``#`` comments are accepted on input
* DOT: one digraph per graph pair, edges coloured red, blue or ``red:blue``
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

from .core import PRS, BaseSet, GraphPair, Rectangle, parse_cycles


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


# --------------------------------------------------------------------------
# JSONL


def structure_to_record(prs: PRS) -> dict:
    return {
        "n": prs.base.n,
        "m": prs.base.m,
        "rectangles": [
            {"rows": [x + 1 for x in r.rows], "cols": [x + 1 for x in r.cols]} for r in prs.rectangles
        ],
    }


def record_to_structure(record: dict) -> PRS:
    try:
        base = BaseSet(int(record["n"]), int(record["m"]))
        rects = [
            Rectangle(tuple(x - 1 for x in r["rows"]), tuple(x - 1 for x in r["cols"]))
            for r in record["rectangles"]
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed structure record: {exc}") from exc
    return PRS(base, rects)


def witness_to_record(witness) -> dict:
    return {
        "source_rs": witness.source_rs + 1,
        "lifting": witness.lifting_cycles,
        "provenance": witness.provenance,
        "order": witness.order,
        "table": (np.asarray(witness.table) + 1).tolist(),
    }


def record_to_witness(record: dict):
    from .filter import CentralGroupoidWitness

    table = np.asarray(record["table"], dtype=np.int64) - 1
    table.setflags(write=False)
    k = int(record["order"])
    return CentralGroupoidWitness(
        int(record["source_rs"]) - 1, parse_cycles(record["lifting"], k), table, record["provenance"]
    )


def write_jsonl(path: Union[str, Path], records: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
            count += 1
    return count


def read_jsonl(path: Union[str, Path]) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, lineno, exc.colno) from exc


def read_structures(path: Union[str, Path]) -> list[PRS]:
    out = []
    for lineno, rec in read_jsonl(path):
        try:
            out.append(record_to_structure(rec))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from exc
    return out


# --------------------------------------------------------------------------
# grids

_TOKEN = re.compile(r"\S+")
_RULE = re.compile(r"^[-=+|_]+$")


def format_table(table) -> str:
    t = np.asarray(table) + 1
    width = len(str(t.shape[0]))
    return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in t) + "\n"


def format_matrix(matrix) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in np.asarray(matrix)) + "\n"


def parse_grid(text: str) -> list[list[int]]:
    """Integer rows of a square grid, with header row and row labels removed."""
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace("\\\\", " ").replace("&", " ")
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line) if m.group() != "|"]
        if not tokens or all(_RULE.match(tok) for _, tok in tokens):
            continue
        first_col, first = tokens[0]
        if not _is_int(first):
            if rows:
                raise ParseError(f"unexpected token {first!r}", lineno, first_col)
            for col, tok in tokens[1:]:
                if not _is_int(tok):
                    raise ParseError(f"unexpected token {tok!r}", lineno, col)
            continue  # header such as "* 1 2 3"
        values = []
        for col, tok in tokens:
            if not _is_int(tok):
                raise ParseError(f"unexpected token {tok!r}", lineno, col)
            values.append(int(tok))
        rows.append((lineno, values))
    if not rows:
        raise ParseError("no rows found")
    r = len(rows)
    lengths = [len(v) for _, v in rows]
    if all(n == r for n in lengths):
        return [v for _, v in rows]
    if all(n == r + 1 for n in lengths):
        return [v[1:] for _, v in rows]
    if lengths[0] == r - 1 and all(n == r for n in lengths[1:]):
        return [v[1:] for _, v in rows[1:]]
    for lineno, v in rows:
        if len(v) != r:
            raise ParseError(f"expected {r} entries, found {len(v)}", lineno, 1)
    raise ParseError("grid is not square")


def _is_int(tok: str) -> bool:
    return bool(re.fullmatch(r"[+-]?\d+", tok))


def read_grid(text: str) -> tuple[str, np.ndarray]:
    """``("matrix", A)`` for a 0-1 matrix, else ``("table", T)`` with 0-based entries."""
    grid = np.asarray(parse_grid(text), dtype=np.int64)
    k = grid.shape[0]
    if (grid == 0).any():
        if not np.isin(grid, (0, 1)).all():
            raise ParseError("a matrix containing 0 must be a 0-1 matrix")
        return "matrix", grid
    if grid.min() < 1 or grid.max() > k:
        raise ParseError(f"table entries must lie in 1..{k}")
    return "table", grid - 1


# --------------------------------------------------------------------------
# DOT


def graph_pair_to_dot(gp: GraphPair, name: str = "pair") -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    lines.extend(f"  {x + 1};" for x in range(gp.order))
    for u, v in sorted(gp.red | gp.blue):
        colours = [c for c, edges in (("red", gp.red), ("blue", gp.blue)) if (u, v) in edges]
        lines.append(f'  {u + 1} -> {v + 1} [color="{":".join(colours)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
