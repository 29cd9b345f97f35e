import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectstruct.canon import Digraph, all_isomorphisms, are_isomorphic, automorphism_generators, canonicalize
from rectstruct.core import group_elements, perm_inverse


def brute_form(g: Digraph):
    """Lexicographically least relabelled edge list over all k! relabellings."""
    return min(tuple(sorted(g.relabel(p).edges())) for p in permutations(range(g.order)))


def brute_automorphisms(g: Digraph):
    return [p for p in permutations(range(g.order)) if g.relabel(p) == g]


def random_digraph(rng, k, density=None):
    d = rng.random() if density is None else density
    return Digraph.from_edges(k, [(u, v) for u in range(k) for v in range(k) if rng.random() < d])


digraphs = st.integers(1, 6).flatmap(
    lambda k: st.sets(st.tuples(st.integers(0, k - 1), st.integers(0, k - 1))).map(lambda e: Digraph.from_edges(k, e))
)


def cycle3():
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


def test_three_cycle():
    g = cycle3()
    res = canonicalize(g)
    assert len(group_elements(res.automorphism_generators, 3)) == 3
    assert {canonicalize(g.relabel(p)).canonical_form for p in permutations(range(3))} == {res.canonical_form}
    rev = Digraph.from_edges(3, [(1, 0), (2, 1), (0, 2)])
    assert are_isomorphic(g, rev) is not None
    assert len(all_isomorphisms(g, g)) == 3


@settings(max_examples=150, deadline=None)
@given(digraphs, st.randoms(use_true_random=False))
def test_result_invariants(g, rnd):
    res = canonicalize(g)
    assert tuple(sorted(g.relabel(res.labeling).edges())) == res.canonical_form
    for gen in res.automorphism_generators:
        assert g.is_automorphism(gen)
    p = list(range(g.order))
    rnd.shuffle(p)
    assert canonicalize(g.relabel(p)).canonical_form == res.canonical_form


@pytest.mark.parametrize("seed", range(40))
def test_against_brute_force(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 6)
    g, h = random_digraph(rng, k), random_digraph(rng, k)
    if rng.random() < 0.5:
        p = list(range(k))
        rng.shuffle(p)
        h = g.relabel(p)
    same = brute_form(g) == brute_form(h)
    assert (canonicalize(g).canonical_form == canonicalize(h).canonical_form) == same
    iso = are_isomorphic(g, h)
    assert (iso is not None) == same
    if iso is not None:
        assert g.relabel(iso) == h
        assert sorted(all_isomorphisms(g, h)) == sorted(
            p for p in permutations(range(k)) if g.relabel(p) == h
        )
    assert len(group_elements(automorphism_generators(g), k)) == len(brute_automorphisms(g))


@pytest.mark.parametrize("k,steps", [(8, (1, 3)), (10, (1, 2, 5)), (12, (1, 4)), (9, (1, 3))])
def test_circulant_groups_against_sympy(k, steps):
    sympy = pytest.importorskip("sympy.combinatorics")
    g = Digraph.from_edges(k, [(i, (i + s) % k) for i in range(k) for s in steps])
    gens = automorphism_generators(g)
    order = sympy.PermutationGroup([sympy.Permutation(list(p)) for p in gens]).order() if gens else 1
    assert order == len(group_elements(gens, k))
    rng = random.Random(k)
    p = list(range(k))
    rng.shuffle(p)
    assert canonicalize(g.relabel(p)).canonical_form == canonicalize(g).canonical_form


def test_cells_respected():
    g = Digraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    assert len(group_elements(automorphism_generators(g), 4)) == 8
    gens = automorphism_generators(g, [[0, 1], [2, 3]])
    assert len(group_elements(gens, 4)) == 4
    for gen in gens:
        assert set(gen[:2]) == {0, 1}


def test_isomorphism_direction():
    rng = random.Random(11)
    g = random_digraph(rng, 6, 0.4)
    p = (3, 0, 5, 1, 2, 4)
    h = g.relabel(p)
    iso = are_isomorphic(g, h)
    assert g.relabel(iso) == h
    assert h.relabel(perm_inverse(iso)) == g
