"""Graph pairs of partial structures and their combined two-layer digraph.

The combined digraph on ``2k`` nodes carries the red graph on the a-layer
(nodes ``0..k-1``), the blue graph on the b-layer (nodes ``k..2k-1``), a
cross edge ``a_x -> b_x`` for every ``x`` and a loop on every a-node.  The
layers are also handed to the canonicaliser as an ordered colouring, so an
automorphism can never swap them; restricted to the a-layer, the
automorphisms are exactly the base permutations fixing the structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canon import CanonicalResult, Digraph, automorphism_generators, canonicalize
from .core import PRS, GraphPair, Permutation, elements_of


@dataclass(frozen=True)
class EmbeddedGraph:
    graph: Digraph
    base_size: int
    rectangle_node_of: dict

    @property
    def layers(self) -> list[list[int]]:
        k = self.base_size
        return [list(range(k)), list(range(k, 2 * k))]


def prs_to_graph_pair(prs: PRS) -> GraphPair:
    """Red edges ``middle -> column``, blue edges ``row -> middle``."""
    red, blue = set(), set()
    for r in prs:
        mid = r.middle
        red.update((mid, y) for y in r.cols)
        blue.update((x, mid) for x in r.rows)
    return GraphPair(prs.base.size, frozenset(red), frozenset(blue))


def _combined_out(k: int, red_out: list[int], blue_out: list[int]) -> tuple[int, ...]:
    out = [0] * (2 * k)
    for x in range(k):
        out[x] = red_out[x] | (1 << x) | (1 << (k + x))
        out[k + x] = blue_out[x] << k
    return tuple(out)


def combine(gp: GraphPair) -> EmbeddedGraph:
    k = gp.order
    red_out, blue_out = [0] * k, [0] * k
    for u, v in gp.red:
        red_out[u] |= 1 << v
    for u, v in gp.blue:
        blue_out[u] |= 1 << v
    return EmbeddedGraph(Digraph(2 * k, _combined_out(k, red_out, blue_out)), k, {})


def embed_prs(prs: PRS) -> EmbeddedGraph:
    """``combine(prs_to_graph_pair(prs))`` built straight from masks."""
    k = prs.base.size
    red_out, blue_out = [0] * k, [0] * k
    for r in prs:
        mid = r.middle
        red_out[mid] |= r.cols_mask
        for x in elements_of(r.rows_mask):
            blue_out[x] |= 1 << mid
    node_of = {r: r.middle for r in prs}
    return EmbeddedGraph(Digraph(2 * k, _combined_out(k, red_out, blue_out)), k, node_of)


def restrict_to_base(perm: Permutation, k: int) -> Permutation:
    return tuple(perm[:k])


def canonical_embedding(prs: PRS) -> CanonicalResult:
    emb = embed_prs(prs)
    return canonicalize(emb.graph, emb.layers)


def prs_automorphisms(prs: PRS) -> list[Permutation]:
    """Generators of the stabiliser of ``prs`` in the symmetric group on its base set."""
    emb = embed_prs(prs)
    k = prs.base.size
    return [restrict_to_base(g, k) for g in automorphism_generators(emb.graph, emb.layers)]


def base_labeling(result: CanonicalResult, k: int) -> Permutation:
    """Canonical labels of the a-layer, as a permutation of the base set."""
    return tuple(result.labeling[:k])


def canonical_prs(prs: PRS) -> PRS:
    """The representative of the isomorphism class of ``prs`` fixed by the canonical labelling."""
    return prs.image(base_labeling(canonical_embedding(prs), prs.base.size))
