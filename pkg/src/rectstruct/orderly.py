"""Orderly generation of rectangular structures.

Partial structures grow one rectangle at a time.  A child ``X + R`` is kept
only when ``R`` lies in the canonical orbit of ``X + R``: the orbit, under
the stabiliser of ``X + R``, of the rectangle minimising

    (v1, v2, v3, canonical label of its middle in the embedded graph).

The invariant scores v1..v3 settle most decisions without a canonical
labelling.  Each surviving partial structure is extended only by one
representative per stabiliser orbit of its valid extensions, so every
isomorphism class of full structures is produced exactly once.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .core import PRS, BaseSet, Permutation, Rectangle, elements_of, map_mask, orbits
from .embed import canonical_prs, embed_prs
from .canon import automorphism_generators, canonicalize

log = logging.getLogger(__name__)


class CombinatorialValue(NamedTuple):
    v1: int
    v2: int
    v3: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass
class SearchStats:
    nodes: int = 0
    dead_ends: int = 0
    candidates: int = 0
    extensions: int = 0
    theta_tests: int = 0
    rejected_by_value: int = 0
    accepted_by_value: int = 0
    decided_by_orbit: int = 0
    automorphism_calls: int = 0
    canonical_labelings: int = 0

    def merge(self, other: "SearchStats") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class EnumerationReport:
    n: int
    m: int
    structures: list[PRS]
    stats: SearchStats = field(default_factory=SearchStats)
    wall_time: float = 0.0

    @property
    def format(self) -> tuple[int, int]:
        return self.n, self.m


def combinatorial_value(prs: PRS, rect: Rectangle) -> CombinatorialValue:
    if rect not in prs:
        raise KeyError(f"{rect} is not in the structure")
    mid = rect.middle
    v1 = sum(1 for q in prs if (q.rows_mask >> mid) & 1)
    v2 = sum(1 for q in prs if (q.cols_mask >> mid) & 1)
    rows = tuple(sorted((rect.rows_mask & q.rows_mask).bit_count() for q in prs))
    cols = tuple(sorted((rect.cols_mask & q.cols_mask).bit_count() for q in prs))
    return CombinatorialValue(v1, v2, (rows, cols))


# --------------------------------------------------------------------------
# candidate extensions


def _side_options(prs: PRS, mid: int, size: int, rows: bool) -> list[int]:
    """Masks of ``size``-sets through ``mid`` meeting every opposite side once."""
    k = prs.base.size
    cover = prs.cover
    if rows:
        # (a, mid) must be uncovered for every row a
        pool = [a for a in range(k) if a != mid and not (cover[a] >> mid) & 1]
        others = [q.cols_mask for q in prs]
    else:
        pool = [b for b in range(k) if b != mid and not (cover[mid] >> b) & 1]
        others = [q.rows_mask for q in prs]
    out = []
    for extra in combinations(pool, size - 1):
        mask = 1 << mid
        for e in extra:
            mask |= 1 << e
        if all((mask & o).bit_count() == 1 for o in others):
            out.append(mask)
    return out


def _candidate_masks(prs: PRS) -> tuple[list[tuple[int, int]], bool]:
    """All valid extensions as mask pairs, plus whether completion is still possible."""
    base = prs.base
    k = base.size
    cover = prs.cover
    full = (1 << k) - 1
    reach = [0] * k
    result = []
    feasible = True
    for mid in range(k):
        if (prs.middle_mask >> mid) & 1:
            continue
        row_sets = _side_options(prs, mid, base.n, rows=True)
        col_sets = _side_options(prs, mid, base.m, rows=False)
        found = False
        for rm in row_sets:
            forbid = rm & ~(1 << mid)
            rows = elements_of(rm)
            for a in rows:
                forbid |= cover[a]
            for cm in col_sets:
                if not cm & forbid:
                    result.append((rm, cm))
                    found = True
                    for a in rows:
                        reach[a] |= cm
        if not found:
            feasible = False
    if feasible:
        for a in range(k):
            need = full & ~cover[a]
            if reach[a] & need != need:
                feasible = False
                break
    return result, feasible


def candidate_extensions(prs: PRS) -> list[Rectangle]:
    """Every rectangle whose addition keeps ``prs`` a valid partial structure."""
    masks, _ = _candidate_masks(prs)
    return sorted(Rectangle.from_masks(rm, cm) for rm, cm in masks)


def orbit_representatives(rects: Sequence[Rectangle], generators: Sequence[Permutation]) -> list[Rectangle]:
    """Least rectangle of each orbit of the generated group on ``rects``."""
    rects = sorted(rects)
    if not generators:
        return list(rects)
    index = {r: i for i, r in enumerate(rects)}
    parent = list(range(len(rects)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for i, r in enumerate(rects):
            j = index[Rectangle.from_masks(map_mask(r.rows_mask, g), map_mask(r.cols_mask, g))]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [r for i, r in enumerate(rects) if find(i) == i]


# --------------------------------------------------------------------------
# canonical orbit test


def _tied_minimum(prs: PRS, new: Rectangle) -> Optional[list[Rectangle]]:
    """Rectangles tied with ``new`` at the least score, or ``None`` if ``new`` is beaten.

    Scores are compared stage by stage; later stages are only computed for
    rectangles still tied.
    """
    rects = list(prs)

    def v1(r):
        m = r.middle
        return sum(1 for q in rects if (q.rows_mask >> m) & 1)

    def v2(r):
        m = r.middle
        return sum(1 for q in rects if (q.cols_mask >> m) & 1)

    def v3(r):
        return (
            tuple(sorted((r.rows_mask & q.rows_mask).bit_count() for q in rects)),
            tuple(sorted((r.cols_mask & q.cols_mask).bit_count() for q in rects)),
        )

    tied = rects
    for stage in (v1, v2, v3):
        scores = [stage(r) for r in tied]
        own = scores[tied.index(new)]
        best = min(scores)
        if own > best:
            return None
        tied = [r for r, s in zip(tied, scores) if s == best]
        if len(tied) == 1:
            return tied
    return tied


def _theta(prs: PRS, new: Rectangle, stats: SearchStats) -> tuple[bool, Optional[list[Permutation]]]:
    """Orbit test plus, when it had to be computed, the stabiliser of ``prs``."""
    stats.theta_tests += 1
    if len(prs) == 1:
        stats.accepted_by_value += 1
        return True, None
    tied = _tied_minimum(prs, new)
    if tied is None:
        stats.rejected_by_value += 1
        return False, None
    if len(tied) == 1:
        stats.accepted_by_value += 1
        return True, None
    k = prs.base.size
    emb = embed_prs(prs)
    stats.automorphism_calls += 1
    gens = [tuple(g[:k]) for g in automorphism_generators(emb.graph, emb.layers)]
    orbit_of = {}
    for i, orb in enumerate(orbits(gens, k)):
        for x in orb:
            orbit_of[x] = i
    if len({orbit_of[r.middle] for r in tied}) == 1:
        stats.decided_by_orbit += 1
        return True, gens
    stats.canonical_labelings += 1
    labels = canonicalize(emb.graph, emb.layers).labeling
    chosen = min(tied, key=lambda r: labels[r.middle])
    return orbit_of[chosen.middle] == orbit_of[new.middle], gens


def theta_accept(prs: PRS, new: Rectangle, stats: Optional[SearchStats] = None) -> bool:
    """Whether ``new`` lies in the canonical orbit of ``prs`` (which must contain it)."""
    if new not in prs:
        raise KeyError(f"{new} is not in the structure")
    return _theta(prs, new, stats if stats is not None else SearchStats())[0]


# --------------------------------------------------------------------------
# search


def _children(prs: PRS, gens: Optional[list[Permutation]], stats: SearchStats) -> list[tuple[PRS, Optional[list]]]:
    """Accepted children of a non-full node, each with its stabiliser if already known."""
    masks, feasible = _candidate_masks(prs)
    if not feasible:
        stats.dead_ends += 1
        return []
    if gens is None:
        stats.automorphism_calls += 1
        emb = embed_prs(prs)
        k = prs.base.size
        gens = [tuple(g[:k]) for g in automorphism_generators(emb.graph, emb.layers)]
    stats.candidates += len(masks)
    reps = orbit_representatives([Rectangle.from_masks(rm, cm) for rm, cm in masks], gens)
    stats.extensions += len(reps)
    out = []
    for rect in reps:
        child = prs._extend_unchecked(rect)
        accepted, child_gens = _theta(child, rect, stats)
        if accepted:
            out.append((child, child_gens))
    return out


def _expand(prs: PRS, gens: Optional[list[Permutation]], stats: SearchStats, out: list[PRS]) -> None:
    stats.nodes += 1
    if prs.full:
        out.append(prs)
        return
    for child, child_gens in _children(prs, gens, stats):
        _expand(child, child_gens, stats, out)


def _frontier(root: PRS, stats: SearchStats, width: int, out: list[PRS]) -> list[tuple[PRS, Optional[list]]]:
    """Breadth-first expansion until at least ``width`` open nodes exist."""
    level = [(root, None)]
    while level and len(level) < width:
        nxt = []
        for prs, gens in level:
            stats.nodes += 1
            if prs.full:
                out.append(prs)
            else:
                nxt.extend(_children(prs, gens, stats))
        level = nxt
    return level


def _run_subtree(item) -> tuple[list[PRS], SearchStats]:
    prs, gens = item
    stats = SearchStats()
    out: list[PRS] = []
    _expand(prs, gens, stats, out)
    return out, stats


def enumerate_structures(n: int, m: int, jobs: int = 1) -> EnumerationReport:
    """One representative of every isomorphism class of full ``n x m`` structures.

    The representatives are returned in canonical form, sorted, so serial and
    parallel runs agree exactly.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if jobs < 1:
        raise ValueError("jobs must be positive")
    start = time.perf_counter()
    root = PRS(BaseSet(n, m))
    stats = SearchStats()
    found: list[PRS] = []
    if jobs == 1:
        _expand(root, None, stats, found)
    else:
        frontier = _frontier(root, stats, 8 * jobs, found)
        log.info("parallel search over %d subtrees with %d workers", len(frontier), jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for sub_found, sub_stats in pool.map(_run_subtree, frontier):
                found.extend(sub_found)
                stats.merge(sub_stats)
    structures = sorted({canonical_prs(s) for s in found}, key=lambda s: s.rectangles)
    if len(structures) != len(found):
        raise RuntimeError(f"orderly search produced isomorphic duplicates ({len(found)} vs {len(structures)})")
    elapsed = time.perf_counter() - start
    log.info("%dx%d: %d structures in %.2fs", n, m, len(structures), elapsed)
    return EnumerationReport(n, m, structures, stats, elapsed)
