"""Command line front end.

    rectstruct enumerate N M [--out F] [--jobs K] [--format jsonl|table|dot]
    rectstruct filter-cg N [--out F] [--jobs K] [--format jsonl|table]
    rectstruct verify FILE
    rectstruct export-dot FILE [--out DIR]

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 internal theory violation.  ``RECTSTRUCT_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    cg_incidence,
    central_groupoid_violation,
    idempotent_count,
    matrix_to_central_groupoid,
    rs_to_operations,
    squares_to_J,
)
from .core import TheoryViolation, is_left_partitioned, is_right_partitioned
from .embed import prs_to_graph_pair
from .filter import central_groupoid_census
from .formats import (
    ParseError,
    format_table,
    graph_pair_to_dot,
    read_grid,
    read_jsonl,
    record_to_structure,
    record_to_witness,
    structure_to_record,
    witness_to_record,
    write_jsonl,
)
from .orderly import enumerate_structures

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_THEORY = 3

log = logging.getLogger("rectstruct")


@dataclass
class RunConfig:
    command: str
    n: int = 1
    m: int = 1
    out: Optional[str] = None
    format: str = "jsonl"
    jobs: int = 1
    verbosity: int = 0


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


# --------------------------------------------------------------------------
# verification of tables and matrices


def _two_path_counts(edges: set[tuple[int, int]], k: int) -> np.ndarray:
    out_nb = [[v for (u, v) in edges if u == a] for a in range(k)]
    counts = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        for c in out_nb[a]:
            for b in out_nb[c]:
                counts[a, b] += 1
    return counts


def verify_grid(kind: str, grid: np.ndarray) -> list[Check]:
    """Central groupoid axiom, A^2 = J, UPP2 path counts and idempotent count."""
    k = grid.shape[0]
    checks = []
    if kind == "matrix":
        matrix = grid
        try:
            table = matrix_to_central_groupoid(matrix)
        except ValueError:
            table = None
    else:
        table = grid
        matrix = cg_incidence(table)

    if table is None:
        checks.append(Check("central groupoid axiom", False, "no operation: some pair lacks a unique 2-path"))
    else:
        witness = central_groupoid_violation(table)
        if witness is None:
            checks.append(Check("central groupoid axiom", True))
        else:
            a, b, c = (x + 1 for x in witness)
            checks.append(Check("central groupoid axiom", False, f"(a.b).(b.c) != b at a={a}, b={b}, c={c}"))

    sq = squares_to_J(matrix)
    checks.append(Check("A^2 = J", sq, "" if sq else "incidence matrix squared is not all ones"))

    edges = {(int(u), int(v)) for u, v in np.argwhere(matrix == 1)}
    counts = _two_path_counts(edges, k)
    bad = np.argwhere(counts != 1)
    if len(bad):
        a, b = (int(x) + 1 for x in bad[0])
        checks.append(Check("UPP2 path counts", False, f"{counts[a - 1, b - 1]} paths of length 2 from {a} to {b}"))
    else:
        checks.append(Check("UPP2 path counts", True))

    root = math.isqrt(k)
    if root * root != k:
        checks.append(Check("idempotent count", False, f"order {k} is not a square"))
    elif table is None:
        checks.append(Check("idempotent count", False, "no operation to count idempotents of"))
    else:
        count = idempotent_count(table)
        checks.append(Check("idempotent count", count == root, f"{count} idempotents, expected {root}"))
    return checks


# --------------------------------------------------------------------------
# commands


def _classify(structures) -> dict[str, int]:
    counts = {"doubly": 0, "left only": 0, "right only": 0, "neither": 0}
    for s in structures:
        left, right = is_left_partitioned(s), is_right_partitioned(s)
        key = "doubly" if left and right else "left only" if left else "right only" if right else "neither"
        counts[key] += 1
    return counts


def cmd_enumerate(cfg: RunConfig) -> int:
    report = enumerate_structures(cfg.n, cfg.m, jobs=cfg.jobs)
    if cfg.out:
        _write_structures(report.structures, cfg.out, cfg.format)
    print(f"format {cfg.n}x{cfg.m}: {len(report.structures)} rectangular structures")
    print("partitioned: " + ", ".join(f"{k} {v}" for k, v in _classify(report.structures).items()))
    print(f"wall time: {report.wall_time:.2f}s")
    for key, value in report.stats.as_dict().items():
        print(f"  {key}: {value}")
    return EXIT_OK


def _write_structures(structures, out: str, fmt: str) -> None:
    if fmt == "jsonl":
        write_jsonl(out, (structure_to_record(s) for s in structures))
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for i, s in enumerate(structures, 1):
            if fmt == "dot":
                fh.write(graph_pair_to_dot(prs_to_graph_pair(s), f"rs_{i}"))
            else:
                ops = rs_to_operations(s)
                fh.write(f"# structure {i}: bullet\n{format_table(ops.bullet)}")
                fh.write(f"# structure {i}: circ\n{format_table(ops.circ)}\n")


def cmd_filter_cg(cfg: RunConfig) -> int:
    census = central_groupoid_census(cfg.n, jobs=cfg.jobs)
    f = census.funnel
    if cfg.out:
        if cfg.format == "jsonl":
            write_jsonl(cfg.out, (witness_to_record(w) for w in census.witnesses))
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                for w in census.witnesses:
                    fh.write(f"# source {w.source_rs + 1} lifting {w.lifting_cycles} ({w.provenance})\n")
                    fh.write(format_table(w.table) + "\n")
    hist = ", ".join(f"{v} with {k}" for k, v in sorted(f.order2_histogram.items())) or "none"
    print(f"order {cfg.n * cfg.n}: funnel")
    print(f"  rectangular structures:        {f.total}")
    print(f"  partitioned (doubly/singly):   {f.doubly_partitioned}/{f.singly_partitioned}")
    print(f"  non-partitioned:               {f.non_partitioned}")
    print(f"  with isomorphic graph pairs:   {f.isomorphic_pairs}")
    print(f"  without order-2 isomorphisms:  {f.no_order2}")
    print(f"  order-2 isomorphism counts:    {hist}")
    print(f"  partitioned with iso. pairs:   {f.partitioned_with_isomorphic_pairs}")
    print(f"  conjugacy orbit reps:          {f.orbit_representatives}")
    print(f"  central groupoids:             {f.witnesses} ({f.natural_witnesses} natural, {f.lifted_witnesses} lifted)")
    for w in census.witnesses:
        print(f"    source {w.source_rs + 1}: lifting {w.lifting_cycles} ({w.provenance})")
    return EXIT_OK


def cmd_verify(path: str) -> int:
    kind, grid = read_grid(Path(path).read_text(encoding="utf-8"))
    checks = verify_grid(kind, grid)
    print(f"{path}: {kind} of order {grid.shape[0]}")
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"  {status}  {c.name}" + (f"  ({c.detail})" if c.detail and not c.passed else ""))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def cmd_export_dot(path: str, out: Optional[str]) -> int:
    docs = []
    stem = Path(path).stem
    for i, (lineno, rec) in enumerate(read_jsonl(path), 1):
        try:
            if "rectangles" in rec:
                gp = prs_to_graph_pair(record_to_structure(rec))
            elif "table" in rec:
                from .algebra import SemicentralBigroupoid, scb_to_graph_pair

                w = record_to_witness(rec)
                gp = scb_to_graph_pair(SemicentralBigroupoid(w.table, w.table))
            else:
                raise ParseError("record has neither 'rectangles' nor 'table'", lineno, 1)
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno, 1) from exc
        docs.append((f"{stem}_{i:04d}", graph_pair_to_dot(gp, f"g{i}")))
    if out is None:
        sys.stdout.write("".join(d for _, d in docs))
    else:
        target = Path(out)
        target.mkdir(parents=True, exist_ok=True)
        for name, doc in docs:
            (target / f"{name}.dot").write_text(doc, encoding="utf-8")
        print(f"wrote {len(docs)} DOT files to {target}")
    return EXIT_OK


# --------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rectstruct", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="all n x m rectangular structures up to isomorphism")
    p.add_argument("n", type=_positive)
    p.add_argument("m", type=_positive)
    p.add_argument("--out")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--format", choices=["jsonl", "table", "dot"], default="jsonl")

    p = sub.add_parser("filter-cg", help="central groupoids of order n^2 up to isomorphism")
    p.add_argument("n", type=_positive)
    p.add_argument("--out")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--format", choices=["jsonl", "table"], default="jsonl")

    p = sub.add_parser("verify", help="check a multiplication table or 0-1 matrix")
    p.add_argument("file")

    p = sub.add_parser("export-dot", help="graph pairs of a JSONL file as DOT")
    p.add_argument("file")
    p.add_argument("--out")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = os.environ.get("RECTSTRUCT_LOG")
    if level is None:
        level = "DEBUG" if verbosity > 1 else "INFO" if verbosity else "WARNING"
    logging.basicConfig(level=level.upper(), format="%(asctime)s %(name)s %(levelname)s %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        if args.command == "enumerate":
            return cmd_enumerate(RunConfig("enumerate", args.n, args.m, args.out, args.format, args.jobs, args.verbose))
        if args.command == "filter-cg":
            return cmd_filter_cg(RunConfig("filter-cg", args.n, args.n, args.out, args.format, args.jobs, args.verbose))
        if args.command == "verify":
            return cmd_verify(args.file)
        return cmd_export_dot(args.file, args.out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TheoryViolation as exc:
        print(f"internal theory violation: {exc}", file=sys.stderr)
        return EXIT_THEORY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
