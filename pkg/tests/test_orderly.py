import random

import pytest

from rectstruct.canon import canonicalize
from rectstruct.core import (
    PRS,
    BaseSet,
    Rectangle,
    is_doubly_partitioned,
    is_left_partitioned,
    is_rectangular_structure,
    is_right_partitioned,
)
from rectstruct.embed import embed_prs
from rectstruct.orderly import (
    SearchStats,
    candidate_extensions,
    combinatorial_value,
    enumerate_structures,
    orbit_representatives,
    theta_accept,
)

from oracles import all_rectangles, generate_all_structures, min_image, stabiliser


def R(rows, cols):
    return Rectangle(tuple(x - 1 for x in rows), tuple(x - 1 for x in cols))


def naive_value(rects, rect):
    """(v1, v2, v3) recounted from plain sets."""
    mid = (set(rect.rows) & set(rect.cols)).pop()
    v1 = sum(mid in q.rows for q in rects)
    v2 = sum(mid in q.cols for q in rects)
    v3 = (
        tuple(sorted(len(set(rect.rows) & set(q.rows)) for q in rects)),
        tuple(sorted(len(set(rect.cols) & set(q.cols)) for q in rects)),
    )
    return v1, v2, v3


def test_single_rectangle_value():
    x = PRS(BaseSet(2, 2), [R([1, 2], [1, 3])])
    assert combinatorial_value(x, R([1, 2], [1, 3])) == (1, 1, ((2,), (2,)))


def test_three_rectangle_values_against_naive_count():
    x = PRS(BaseSet(2, 2), [R([1, 2], [1, 3]), R([3, 4], [2, 3]), R([1, 3], [4, 3])][:2])
    x = x.extend(candidate_extensions(x)[0])
    assert len(x) == 3
    for r in x:
        assert combinatorial_value(x, r) == naive_value(list(x), r)


def test_value_invariance():
    rng = random.Random(1)
    for _ in range(100):
        x = PRS(BaseSet(2, 2))
        for _ in range(rng.randint(1, 4)):
            x = x.extend(rng.choice(candidate_extensions(x)))
        p = list(range(4))
        rng.shuffle(p)
        y = x.image(p)
        for r in x:
            assert combinatorial_value(x, r) == combinatorial_value(y, r.image(p))


def test_candidate_counts():
    assert candidate_extensions(PRS(BaseSet(1, 2))) == [R([1], [1, 2]), R([2], [1, 2])]
    # middle, then an extra row element, then a different extra column element
    assert len(all_rectangles(2, 2)) == 4 * 3 * 2
    assert len(candidate_extensions(PRS(BaseSet(2, 2)))) == 24
    from rectstruct.core import product_of_points

    assert candidate_extensions(product_of_points(2, 2)) == []


@pytest.mark.parametrize("seed", range(15))
def test_candidates_match_exhaustive_filter(seed):
    rng = random.Random(seed)
    n, m = rng.choice([(2, 2), (2, 3), (3, 2)])
    x = PRS(BaseSet(n, m))
    for _ in range(rng.randint(0, 3)):
        c = candidate_extensions(x)
        if not c:
            break
        x = x.extend(rng.choice(c))
    expected = sorted(
        Rectangle(r, c) for r, c in all_rectangles(n, m) if Rectangle(r, c) not in x and x.is_valid_extension(Rectangle(r, c))
    )
    assert candidate_extensions(x) == expected


def test_orbit_representatives_group_action():
    x = PRS(BaseSet(2, 2), [R([1, 2], [1, 3])])
    gens = stabiliser(list(x), 4)
    cands = candidate_extensions(x)
    reps = orbit_representatives(cands, gens)
    orbit_sets = {frozenset(r.image(g) for g in gens) for r in cands}
    assert len(reps) == len(orbit_sets)


def shortcut_free_theta(x, new):
    """Accept iff ``new`` is in the stabiliser orbit of the rectangle with least full score."""
    emb = embed_prs(x)
    labels = canonicalize(emb.graph, emb.layers).labeling
    rects = list(x)
    best = min(rects, key=lambda r: (naive_value(rects, r), labels[r.middle]))
    return any(best.image(g) == new for g in stabiliser(rects, x.base.size))


def test_theta_single_rectangle_always_accepts():
    for r in candidate_extensions(PRS(BaseSet(2, 2))):
        assert theta_accept(PRS(BaseSet(2, 2), [r]), r)


def test_theta_matches_shortcut_free_oracle():
    x = PRS(BaseSet(2, 2), [R([1, 2], [1, 3])])
    decisions = 0
    for r in candidate_extensions(x):
        y = x.extend(r)
        for s in candidate_extensions(y):
            z = y.extend(s)
            for new in (r, s):
                assert theta_accept(z, new) == shortcut_free_theta(z, new)
                decisions += 1
    assert decisions > 0


@pytest.mark.parametrize("seed", range(30))
def test_theta_covariance(seed):
    rng = random.Random(seed)
    n, m = rng.choice([(2, 2), (2, 3), (3, 3)])
    k = n * m
    x = PRS(BaseSet(n, m))
    for _ in range(rng.randint(1, k)):
        c = candidate_extensions(x)
        if not c:
            break
        x = x.extend(rng.choice(c))
    p = list(range(k))
    rng.shuffle(p)
    y = x.image(p)
    for r in x:
        assert theta_accept(x, r) == theta_accept(y, r.image(p))


def test_theta_accepts_some_rectangle():
    rng = random.Random(4)
    for _ in range(30):
        x = PRS(BaseSet(3, 3))
        for _ in range(rng.randint(1, 9)):
            c = candidate_extensions(x)
            if not c:
                break
            x = x.extend(rng.choice(c))
        assert any(theta_accept(x, r) for r in x)


def test_one_by_m():
    for m in (1, 2, 3, 4):
        structures = enumerate_structures(1, m).structures
        assert len(structures) == 1
        assert all(r.cols == tuple(range(m)) for r in structures[0])


def test_order_four_classes():
    rep = enumerate_structures(2, 2)
    assert len(rep.structures) == 3
    doubly = sum(is_doubly_partitioned(s) for s in rep.structures)
    singly = sum(is_left_partitioned(s) != is_right_partitioned(s) for s in rep.structures)
    assert (doubly, singly) == (1, 2)


@pytest.mark.parametrize("fmt", [(2, 2), (2, 3), (3, 2)])
def test_generate_all_oracle(fmt):
    n, m = fmt
    k = n * m
    oracle = {min_image(list(s), k) for s in generate_all_structures(n, m)}
    found = enumerate_structures(n, m).structures
    images = [min_image(list(s), k) for s in found]
    assert len(set(images)) == len(images)
    assert set(images) == oracle


def test_outputs_are_valid(structures23):
    for s in structures23:
        assert is_rectangular_structure(s)
        assert all(r.format == (2, 3) for r in s)


def test_parallel_matches_serial():
    serial = enumerate_structures(2, 3)
    parallel = enumerate_structures(2, 3, jobs=2)
    assert serial.structures == parallel.structures


def test_stats_counters():
    stats = enumerate_structures(2, 3).stats
    assert isinstance(stats, SearchStats)
    assert stats.theta_tests == stats.rejected_by_value + stats.accepted_by_value + stats.decided_by_orbit + stats.canonical_labelings
    assert set(stats.as_dict()) >= {"theta_tests", "canonical_labelings"}
