"""Semicentral bigroupoids, central groupoids and their conversions.

Tables are ``k x k`` integer arrays over ``0..k-1``; ``table[a, b]`` is the
product of ``a`` and ``b``.  Every axiom check is exhaustive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    PRS,
    BaseSet,
    GraphPair,
    Permutation,
    Rectangle,
    StructureError,
    TheoryViolation,
    is_permutation,
    operation_table,
    perm_inverse,
)


@dataclass(frozen=True, eq=False)
class SemicentralBigroupoid:
    bullet: np.ndarray
    circ: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bullet", operation_table(self.bullet))
        object.__setattr__(self, "circ", operation_table(self.circ))
        if self.bullet.shape != self.circ.shape:
            raise StructureError("both operations must have the same order")

    @property
    def order(self) -> int:
        return self.bullet.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemicentralBigroupoid):
            return NotImplemented
        return np.array_equal(self.bullet, other.bullet) and np.array_equal(self.circ, other.circ)

    def dual(self) -> "SemicentralBigroupoid":
        return SemicentralBigroupoid(self.circ, self.bullet)

    def is_idempotent(self) -> bool:
        return is_idempotent(self.bullet)


def natural_central_groupoid(n: int) -> np.ndarray:
    """``(a, b) . (c, d) = (b, c)`` on pairs encoded as ``a*n + b``."""
    k = n * n
    x = np.arange(k)
    first, second = divmod(x, n)
    return operation_table(second[:, None] * n + first[None, :])


def product_of_points_scb(n: int, m: int) -> SemicentralBigroupoid:
    """``(a1,b1).(a2,b2) = (a1,b2)`` and ``(a1,b1)o(a2,b2) = (a2,b1)`` on ``A x B``."""
    x = np.arange(n * m)
    a, b = divmod(x, m)
    bullet = a[:, None] * m + b[None, :]
    circ = a[None, :] * m + b[:, None]
    return SemicentralBigroupoid(bullet, circ)


def is_idempotent(table: np.ndarray) -> bool:
    return bool(np.array_equal(np.diagonal(table), np.arange(table.shape[0])))


def idempotent_count(table: np.ndarray) -> int:
    return int(np.sum(np.diagonal(table) == np.arange(table.shape[0])))


# --------------------------------------------------------------------------
# axiom checks


def _mixed_violation(first: np.ndarray, second: np.ndarray) -> Optional[tuple[int, int, int]]:
    """First triple with ``(a first b) second (b first c) != b``."""
    lhs = second[first[:, :, None], first[None, :, :]]
    bad = np.argwhere(lhs != np.arange(first.shape[0])[None, :, None])
    if len(bad):
        return tuple(int(x) for x in bad[0])
    return None


def scb_violation(bullet, circ) -> Optional[tuple[str, tuple[int, int, int]]]:
    bullet, circ = operation_table(bullet), operation_table(circ)
    if bullet.shape != circ.shape:
        raise StructureError("order mismatch between the two operations")
    witness = _mixed_violation(bullet, circ)
    if witness is not None:
        return "(a.b)o(b.c) = b", witness
    witness = _mixed_violation(circ, bullet)
    if witness is not None:
        return "(aob).(boc) = b", witness
    return None


def check_scb(bullet, circ) -> bool:
    return scb_violation(bullet, circ) is None


def central_groupoid_violation(table) -> Optional[tuple[int, int, int]]:
    """First triple with ``(a.b).(b.c) != b``, or ``None``."""
    table = operation_table(table)
    return _mixed_violation(table, table)


def check_central_groupoid(table) -> bool:
    """``(a.b).(b.c) = b`` for all triples; non-square orders fail at once."""
    table = operation_table(table)
    if math.isqrt(table.shape[0]) ** 2 != table.shape[0]:
        return False
    return _mixed_violation(table, table) is None


def anticommutativity_check(table) -> bool:
    table = np.asarray(table)
    same = table == table.T
    np.fill_diagonal(same, False)
    return not same.any()


def swap_property_check(table) -> bool:
    """``a*b = c*d = x`` implies ``a*d = c*b = x``.

    Equivalently every value class ``{(a, b) : a*b = x}`` is a full
    rectangle ``A x B``.
    """
    table = np.asarray(table)
    for x in np.unique(table):
        hits = table == x
        rows = hits.any(axis=1)
        cols = hits.any(axis=0)
        if not hits[np.ix_(rows, cols)].all():
            return False
    return True


# --------------------------------------------------------------------------
# square map and lifting


def square_map(scb: SemicentralBigroupoid) -> Permutation:
    phi = tuple(int(x) for x in np.diagonal(scb.bullet))
    if not is_permutation(phi):
        raise StructureError("square map is not a permutation: not a semicentral bigroupoid")
    return phi


def lift(scb: SemicentralBigroupoid, phi: Sequence[int]) -> SemicentralBigroupoid:
    """``a*b = phi^-1(a.b)`` and ``a+b = phi(a) o phi(b)``."""
    phi_arr = np.asarray(phi, dtype=np.int64)
    if len(phi_arr) != scb.order or not is_permutation(list(phi)):
        raise StructureError("lifting requires a permutation of the carrier")
    inv = np.asarray(perm_inverse(phi), dtype=np.int64)
    star = inv[scb.bullet]
    plus = scb.circ[np.ix_(phi_arr, phi_arr)]
    lifted = SemicentralBigroupoid(star, plus)
    violation = scb_violation(lifted.bullet, lifted.circ)
    if violation is not None:
        raise TheoryViolation("lifting left the variety", violation)
    return lifted


def idempotent_lifting(scb: SemicentralBigroupoid) -> tuple[SemicentralBigroupoid, Permutation]:
    phi = square_map(scb)
    lifted = lift(scb, phi)
    if not lifted.is_idempotent():
        raise TheoryViolation("idempotent lifting is not idempotent")
    return lifted, phi


# --------------------------------------------------------------------------
# rectangular structures <-> idempotent bigroupoids


def scb_to_rs(scb: SemicentralBigroupoid, n: Optional[int] = None) -> PRS:
    """Rectangles ``(S.x, x.S)`` for every ``x``; the format is read off the tables."""
    if not scb.is_idempotent():
        raise StructureError("only idempotent bigroupoids carry a rectangular structure directly")
    k = scb.order
    rects = []
    for x in range(k):
        rows = tuple(sorted(set(int(v) for v in scb.bullet[:, x])))
        cols = tuple(sorted(set(int(v) for v in scb.bullet[x, :])))
        rects.append(Rectangle(rows, cols))
    fmt = rects[0].format
    if n is not None and fmt[0] != n:
        raise StructureError(f"expected {n} rows per rectangle, found {fmt[0]}")
    if any(r.format != fmt for r in rects) or fmt[0] * fmt[1] != k:
        raise TheoryViolation("rectangles of one structure must share a format", fmt)
    return PRS(BaseSet(*fmt), rects)


def rs_to_operations(rs: PRS) -> SemicentralBigroupoid:
    """``s.t`` = the point where the columns of rect(s) meet the rows of rect(t);
    ``s o t`` = the middle of the rectangle covering ``(s, t)``."""
    if not rs.full:
        raise StructureError("rs_to_operations needs a full structure")
    k = rs.base.size
    by_middle = {r.middle: r for r in rs}
    bullet = np.zeros((k, k), dtype=np.int64)
    circ = np.full((k, k), -1, dtype=np.int64)
    for s in range(k):
        cols = by_middle[s].cols_mask
        for t in range(k):
            meet = cols & by_middle[t].rows_mask
            if meet.bit_count() != 1:
                raise StructureError(f"rectangles {s} and {t} do not meet in one point")
            bullet[s, t] = meet.bit_length() - 1
    for r in rs:
        for a in r.rows:
            for b in r.cols:
                circ[a, b] = r.middle
    if (circ < 0).any():
        raise StructureError("structure leaves a pair uncovered")
    scb = SemicentralBigroupoid(bullet, circ)
    violation = scb_violation(scb.bullet, scb.circ)
    if violation is not None:
        raise TheoryViolation("operations of a rectangular structure fail the axioms", violation)
    return scb


def is_associative(table) -> bool:
    t = np.asarray(table)
    k = t.shape[0]
    lhs = t[t]  # lhs[a, b, c] = (a b) c
    rhs = t[np.arange(k)[:, None, None], t[None, :, :]]
    return bool(np.array_equal(lhs, rhs))


def table_format(table) -> tuple[int, int]:
    """Format ``(|S x|, |x S|)`` of an idempotent table, read at ``x = 0``."""
    t = np.asarray(table)
    return len(set(t[:, 0].tolist())), len(set(t[0, :].tolist()))


# --------------------------------------------------------------------------
# graphs and matrices


def scb_to_graph_pair(scb: SemicentralBigroupoid) -> GraphPair:
    k = scb.order
    red = frozenset((a, int(scb.bullet[a, c])) for a in range(k) for c in range(k))
    blue = frozenset((a, int(scb.circ[a, c])) for a in range(k) for c in range(k))
    return GraphPair(k, red, blue)


def graph_pair_to_scb(gp: GraphPair) -> SemicentralBigroupoid:
    """Midpoints of the unique red-blue and blue-red 2-paths."""
    red, blue = gp.matrices()
    if not verify_product_J(gp):
        raise StructureError("graph pair lacks unique two-coloured 2-paths")
    k = gp.order
    bullet = np.zeros((k, k), dtype=np.int64)
    circ = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            bullet[a, b] = int(np.flatnonzero(red[a] & blue[:, b])[0])
            circ[a, b] = int(np.flatnonzero(blue[a] & red[:, b])[0])
    return SemicentralBigroupoid(bullet, circ)


def verify_product_J(gp: GraphPair) -> bool:
    red, blue = gp.matrices()
    ones = np.ones_like(red)
    return bool(np.array_equal(red @ blue, ones) and np.array_equal(blue @ red, ones))


def cg_incidence(table) -> np.ndarray:
    """Incidence matrix of the digraph ``a -> a.b``."""
    t = np.asarray(table)
    k = t.shape[0]
    a = np.zeros((k, k), dtype=np.int64)
    a[np.repeat(np.arange(k), k), t.reshape(-1)] = 1
    return a


def squares_to_J(matrix) -> bool:
    a = np.asarray(matrix)
    return bool(np.array_equal(a @ a, np.ones_like(a)))


def matrix_to_central_groupoid(matrix) -> np.ndarray:
    """``a.b`` = midpoint of the unique 2-path ``a -> c -> b``."""
    a = np.asarray(matrix)
    if not squares_to_J(a):
        raise StructureError("matrix does not square to J")
    k = a.shape[0]
    out = np.zeros((k, k), dtype=np.int64)
    for s in range(k):
        for t in range(k):
            out[s, t] = int(np.flatnonzero(a[s] & a[:, t])[0])
    return operation_table(out)
