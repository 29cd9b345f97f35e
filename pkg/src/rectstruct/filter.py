"""Central groupoids carried by square rectangular structures.

For a square structure with idempotent operations (. , o) the central
groupoid liftings are the order-2 isomorphisms from the blue graph onto the
red graph, taken up to conjugation by the structure's automorphism group.
Each lifting ``phi`` gives the table ``a * b = phi(a o b)``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    central_groupoid_violation,
    cg_incidence,
    idempotent_count,
    rs_to_operations,
    squares_to_J,
)
from .canon import Digraph, all_isomorphisms, canonicalize
from .core import (
    PRS,
    Permutation,
    TheoryViolation,
    format_cycles,
    is_doubly_partitioned,
    is_identity,
    is_left_partitioned,
    is_right_partitioned,
    perm_conjugate,
    perm_mul,
)
from .embed import prs_automorphisms, prs_to_graph_pair
from .orderly import EnumerationReport, enumerate_structures

log = logging.getLogger(__name__)

NATURAL = "natural"
LIFTED = "lifted"


@dataclass(frozen=True, eq=False)
class CentralGroupoidWitness:
    source_rs: int
    lifting: Permutation
    table: np.ndarray
    provenance: str

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def lifting_cycles(self) -> str:
        return format_cycles(self.lifting)

    def digraph(self) -> Digraph:
        k = self.order
        return Digraph.from_edges(k, ((a, int(self.table[a, b])) for a in range(k) for b in range(k)))


@dataclass
class Funnel:
    """Stage counts of the filter, over every structure it was given."""

    total: int = 0
    doubly_partitioned: int = 0
    singly_partitioned: int = 0
    non_partitioned: int = 0
    isomorphic_pairs: int = 0
    no_order2: int = 0
    order2_histogram: Counter = field(default_factory=Counter)
    orbit_representatives: int = 0
    natural_witnesses: int = 0
    lifted_witnesses: int = 0
    partitioned_with_isomorphic_pairs: int = 0

    @property
    def witnesses(self) -> int:
        return self.natural_witnesses + self.lifted_witnesses

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "doubly_partitioned": self.doubly_partitioned,
            "singly_partitioned": self.singly_partitioned,
            "non_partitioned": self.non_partitioned,
            "isomorphic_pairs": self.isomorphic_pairs,
            "no_order2": self.no_order2,
            "order2_histogram": {str(k): v for k, v in sorted(self.order2_histogram.items())},
            "orbit_representatives": self.orbit_representatives,
            "natural_witnesses": self.natural_witnesses,
            "lifted_witnesses": self.lifted_witnesses,
            "witnesses": self.witnesses,
            "partitioned_with_isomorphic_pairs": self.partitioned_with_isomorphic_pairs,
        }


@dataclass
class Census:
    n: int
    witnesses: list[CentralGroupoidWitness]
    funnel: Funnel
    enumeration: Optional[EnumerationReport] = None


def _graphs(rs: PRS) -> tuple[Digraph, Digraph]:
    gp = prs_to_graph_pair(rs)
    k = gp.order
    return Digraph.from_edges(k, gp.red), Digraph.from_edges(k, gp.blue)


def graph_pair_isomorphisms(rs: PRS) -> list[Permutation]:
    """Every ``phi`` carrying the blue graph of ``rs`` onto its red graph."""
    red, blue = _graphs(rs)
    return all_isomorphisms(blue, red)


def order2_isomorphisms(isos: Sequence[Permutation]) -> list[Permutation]:
    return [phi for phi in isos if is_identity(perm_mul(phi, phi))]


def conjugacy_orbit_representatives(perms: Sequence[Permutation], rs: PRS) -> list[Permutation]:
    """Least member of each orbit of the structure's automorphism group acting by conjugation."""
    perms = sorted(set(perms))
    if not perms:
        return []
    gens = prs_automorphisms(rs)
    index = {p: i for i, p in enumerate(perms)}
    parent = list(range(len(perms)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, p in enumerate(perms):
            q = perm_conjugate(p, g)
            if q not in index:
                raise TheoryViolation("lifting set is not closed under conjugation", (p, g))
            a, b = find(i), find(index[q])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [p for i, p in enumerate(perms) if find(i) == i]


def lifted_table(rs: PRS, phi: Permutation) -> np.ndarray:
    """``a * b = phi(a o b)``, cross-checked against ``phi(a) . phi(b)``."""
    ops = rs_to_operations(rs)
    p = np.asarray(phi, dtype=np.int64)
    plus_side = p[ops.circ]
    star_side = ops.bullet[np.ix_(p, p)]
    if not np.array_equal(plus_side, star_side):
        a, b = (int(x) for x in np.argwhere(plus_side != star_side)[0])
        raise TheoryViolation("order-2 graph isomorphism is not an isomorphism of operations", (a, b))
    return plus_side


def _witness(rs: PRS, index: int, phi: Permutation) -> CentralGroupoidWitness:
    table = lifted_table(rs, phi)
    violation = central_groupoid_violation(table)
    if violation is not None:
        raise TheoryViolation("lifted table fails the central groupoid axiom", violation)
    if not squares_to_J(cg_incidence(table)):
        raise TheoryViolation("lifted table's incidence matrix does not square to J")
    k = table.shape[0]
    root = int(round(k ** 0.5))
    if root * root != k or idempotent_count(table) != root:
        raise TheoryViolation("central groupoid with wrong idempotent count", idempotent_count(table))
    provenance = NATURAL if is_doubly_partitioned(rs) else LIFTED
    table.setflags(write=False)
    return CentralGroupoidWitness(index, tuple(phi), table, provenance)


def central_groupoids_from_rs(rs: PRS, index: int = 0, funnel: Optional[Funnel] = None) -> list[CentralGroupoidWitness]:
    """All central groupoids lifted from one square structure, one per isomorphism class."""
    if rs.base.n != rs.base.m:
        return []
    funnel = funnel if funnel is not None else Funnel()
    funnel.total += 1
    left, right = is_left_partitioned(rs), is_right_partitioned(rs)
    if left and right:
        funnel.doubly_partitioned += 1
    elif left or right:
        funnel.singly_partitioned += 1
    else:
        funnel.non_partitioned += 1
    isos = graph_pair_isomorphisms(rs)
    if not isos:
        return []
    if left or right:
        funnel.partitioned_with_isomorphic_pairs += 1
    else:
        funnel.isomorphic_pairs += 1
    candidates = order2_isomorphisms(isos)
    if not left and not right:
        if candidates:
            funnel.order2_histogram[len(candidates)] += 1
        else:
            funnel.no_order2 += 1
    reps = conjugacy_orbit_representatives(candidates, rs)
    funnel.orbit_representatives += len(reps)
    witnesses = [_witness(rs, index, phi) for phi in reps]
    for w in witnesses:
        if w.provenance == NATURAL:
            funnel.natural_witnesses += 1
        else:
            funnel.lifted_witnesses += 1
    return witnesses


def filter_structures(structures: Sequence[PRS]) -> tuple[list[CentralGroupoidWitness], Funnel]:
    funnel = Funnel()
    witnesses: list[CentralGroupoidWitness] = []
    for i, rs in enumerate(structures):
        witnesses.extend(central_groupoids_from_rs(rs, i, funnel))
    forms = [canonicalize(w.digraph()).canonical_form for w in witnesses]
    if len(set(forms)) != len(forms):
        raise TheoryViolation("two witnesses are isomorphic central groupoids")
    return witnesses, funnel


def central_groupoid_census(n: int, jobs: int = 1) -> Census:
    report = enumerate_structures(n, n, jobs=jobs)
    witnesses, funnel = filter_structures(report.structures)
    log.info("order %d: %d central groupoids from %d structures", n * n, len(witnesses), funnel.total)
    return Census(n, witnesses, funnel, report)


def enumerate_central_groupoids(n: int, jobs: int = 1) -> list[CentralGroupoidWitness]:
    """Every central groupoid of order ``n*n`` up to isomorphism."""
    return central_groupoid_census(n, jobs).witnesses
