"""Canonical labelling and automorphism groups of small digraphs.

A compact individualisation-refinement search in the style of nauty:

* ordered partitions are refined to equitable ones using (out-count,
  in-count) signatures against splitter cells;
* the search tree individualises vertices of the first smallest
  non-singleton cell;
* leaves are ranked by (refinement traces along the path, relabelled
  adjacency), the least leaf gives the canonical form;
* leaves equivalent to the first or best leaf yield automorphisms, which
  prune sibling subtrees and let the search jump back up the tree.

Loops are ordinary edges, so a node's loop status is part of every
signature.  Graphs here have at most a few dozen nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import Permutation, elements_of, group_elements, is_identity, mask_of, perm_inverse, perm_mul


@dataclass(frozen=True)
class Digraph:
    """Directed graph on ``0..order-1``; ``out[v]`` is the out-neighbour mask of ``v``."""

    order: int
    out: tuple[int, ...]

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        out = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge {(u, v)} out of range for {order} nodes")
            out[u] |= 1 << v
        return cls(order, tuple(out))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in elements_of(self.out[u])]

    def in_masks(self) -> tuple[int, ...]:
        inn = [0] * self.order
        for u in range(self.order):
            for v in elements_of(self.out[u]):
                inn[v] |= 1 << u
        return tuple(inn)

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Rename node ``v`` to ``perm[v]``."""
        return Digraph.from_edges(self.order, ((perm[u], perm[v]) for u, v in self.edges()))

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        return self.relabel(perm) == self


@dataclass(frozen=True)
class CanonicalResult:
    labeling: Permutation
    canonical_form: tuple[tuple[int, int], ...]
    automorphism_generators: tuple[Permutation, ...]


class _Search:
    def __init__(self, g: Digraph, canonical: bool):
        self.k = g.order
        self.out = g.out
        self.inn = g.in_masks()
        self.canonical = canonical
        self.gens: list[Permutation] = []
        self.first: Optional[tuple] = None  # (order, key, path, traces)
        self.best: Optional[tuple] = None

    def refine(self, cells: list[list[int]], splitters: Iterable[int]) -> tuple:
        out, inn = self.out, self.inn
        base = self.k + 1
        trace = []
        queue = deque(splitters)
        singletons = sum(1 for c in cells if len(c) == 1)
        while queue and singletons < self.k:
            w = queue.popleft()
            idx = 0
            while idx < len(cells):
                cell = cells[idx]
                if len(cell) == 1:
                    idx += 1
                    continue
                keys = [(out[v] & w).bit_count() * base + (inn[v] & w).bit_count() for v in cell]
                k0 = keys[0]
                if all(key == k0 for key in keys):
                    idx += 1
                    continue
                groups: dict[int, list[int]] = {}
                for v, key in zip(cell, keys):
                    groups.setdefault(key, []).append(v)
                ordered = sorted(groups)
                frags = [groups[key] for key in ordered]
                cells[idx:idx + 1] = frags
                trace.append((idx, tuple(ordered), tuple(len(f) for f in frags)))
                singletons += sum(1 for f in frags if len(f) == 1)
                for f in frags:
                    queue.append(mask_of(f))
                idx += len(frags)
        return tuple(trace)

    def leaf_key(self, order: list[int]) -> tuple[int, ...]:
        pos = [0] * self.k
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for v in order:
            r = 0
            for u in elements_of(self.out[v]):
                r |= 1 << pos[u]
            rows.append(r)
        return tuple(rows)

    def add_generator(self, gamma: Permutation) -> None:
        if not is_identity(gamma) and gamma not in self.gens:
            self.gens.append(gamma)

    def pruned(self, v: int, explored: list[int], path: list[int]) -> bool:
        gens = [g for g in self.gens if all(g[p] == p for p in path)]
        if not gens:
            return False
        orbit = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return any(e in orbit for e in explored)

    def run(self, cells: list[list[int]]) -> None:
        self.refine(cells, [mask_of(c) for c in cells])
        self.node(cells, [], [], True)

    def node(self, cells: list[list[int]], path: list[int], traces: list[tuple], first_eq: bool):
        """Explore one search node; a non-None return is the depth to jump back to."""
        depth = len(path)
        if len(cells) == self.k:
            return self.leaf([c[0] for c in cells], path, traces, first_eq)
        target = min(range(len(cells)), key=lambda i: (len(cells[i]) == 1, len(cells[i]), i))
        tcell = cells[target]
        explored: list[int] = []
        for v in sorted(tcell):
            if explored and self.pruned(v, explored, path):
                continue
            explored.append(v)
            child = cells[:target] + [[v], [u for u in tcell if u != v]] + cells[target + 1:]
            trace = self.refine(child, [1 << v])
            child_traces = traces + [trace]
            child_first_eq = first_eq
            if self.first is not None:
                child_first_eq = first_eq and depth < len(self.first[3]) and self.first[3][depth] == trace
                if not child_first_eq:
                    if not self.canonical:
                        continue
                    if child_traces > self.best[3][: depth + 1]:
                        continue
            jump = self.node(child, path + [v], child_traces, child_first_eq)
            if jump is not None and jump < depth:
                return jump
        return None

    def leaf(self, order: list[int], path: list[int], traces: list[tuple], first_eq: bool):
        key = self.leaf_key(order)
        if self.first is None:
            self.first = self.best = (order, key, path, traces)
            return None
        if first_eq and key == self.first[1]:
            self.add_generator(_map_between(self.first[0], order, self.k))
            return _common_prefix(path, self.first[2])
        if not self.canonical:
            return None
        best_order, best_key, best_path, best_traces = self.best
        rank = (traces, key)
        if rank < (best_traces, best_key):
            self.best = (order, key, path, traces)
        elif rank == (best_traces, best_key):
            self.add_generator(_map_between(best_order, order, self.k))
            return _common_prefix(path, best_path)
        return None


def _map_between(src: list[int], dst: list[int], k: int) -> Permutation:
    gamma = [0] * k
    for a, b in zip(src, dst):
        gamma[a] = b
    return tuple(gamma)


def _common_prefix(a: list[int], b: list[int]) -> int:
    d = 0
    for x, y in zip(a, b):
        if x != y:
            break
        d += 1
    return d


def _initial_cells(g: Digraph, cells: Optional[Sequence[Sequence[int]]]) -> list[list[int]]:
    if cells is None:
        return [list(range(g.order))]
    out = [sorted(c) for c in cells if len(c)]
    if sorted(v for c in out for v in c) != list(range(g.order)):
        raise ValueError("initial cells must partition the node set")
    return out


def canonicalize(g: Digraph, cells: Optional[Sequence[Sequence[int]]] = None) -> CanonicalResult:
    """Canonical labelling of ``g``, optionally respecting an ordered vertex colouring.

    ``labeling[v]`` is the canonical label of node ``v``; relabelling ``g``
    by it gives ``canonical_form``.  Graphs isomorphic by a colour-preserving
    map share a canonical form.
    """
    if g.order == 0:
        return CanonicalResult((), (), ())
    search = _Search(g, canonical=True)
    search.run(_initial_cells(g, cells))
    order, key, _, _ = search.best
    labeling = [0] * g.order
    for i, v in enumerate(order):
        labeling[v] = i
    form = tuple((i, j) for i, row in enumerate(key) for j in elements_of(row))
    return CanonicalResult(tuple(labeling), form, tuple(search.gens))


def automorphism_generators(g: Digraph, cells: Optional[Sequence[Sequence[int]]] = None) -> list[Permutation]:
    """Generators of the colour-preserving automorphism group, without a canonical form."""
    if g.order == 0:
        return []
    search = _Search(g, canonical=False)
    search.run(_initial_cells(g, cells))
    return list(search.gens)


def are_isomorphic(g1: Digraph, g2: Digraph) -> Optional[Permutation]:
    """A node bijection carrying ``g1`` onto ``g2``, or ``None``."""
    if g1.order != g2.order or sorted(m.bit_count() for m in g1.out) != sorted(m.bit_count() for m in g2.out):
        return None
    c1, c2 = canonicalize(g1), canonicalize(g2)
    if c1.canonical_form != c2.canonical_form:
        return None
    return perm_mul(c1.labeling, perm_inverse(c2.labeling))


def all_isomorphisms(g1: Digraph, g2: Digraph) -> list[Permutation]:
    """Every ``pi`` with ``g1.relabel(pi) == g2``."""
    if g1.order != g2.order:
        return []
    c1, c2 = canonicalize(g1), canonicalize(g2)
    if c1.canonical_form != c2.canonical_form:
        return []
    witness = perm_mul(c1.labeling, perm_inverse(c2.labeling))
    return sorted(perm_mul(a, witness) for a in group_elements(c1.automorphism_generators, g1.order))
