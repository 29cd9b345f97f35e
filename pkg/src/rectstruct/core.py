"""Value types shared across the package.

Base elements are the integers ``0 .. k-1`` with ``k = n*m``.  Every text or
JSON format the CLI reads or writes is 1-based; conversion happens only there.

A permutation is a plain tuple ``p`` with ``p[i]`` the image of ``i``.
Products act on the right: ``perm_mul(p, q)`` applies ``p`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

Permutation = tuple[int, ...]


class StructureError(ValueError):
    """Input violates the defining axioms of the structure it claims to be."""


class TheoryViolation(RuntimeError):
    """A computed object contradicts a proven identity; carries the witness."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


@lru_cache(maxsize=None)
def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def map_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for e in elements_of(mask):
        out |= 1 << perm[e]
    return out


# --------------------------------------------------------------------------
# permutations


def perm_identity(k: int) -> Permutation:
    return tuple(range(k))


def perm_mul(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """Apply ``p`` then ``q``."""
    return tuple(q[x] for x in p)


def perm_inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_conjugate(p: Sequence[int], g: Sequence[int]) -> Permutation:
    """``g^-1 p g``: the permutation ``g(x) -> g(p(x))``."""
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[g[x]] = g[y]
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def perm_cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            seen.add(x)
            cycle.append(x)
            x = p[x]
        cycles.append(tuple(cycle))
    return cycles


def format_cycles(p: Sequence[int]) -> str:
    """Disjoint-cycle notation with 1-based points, e.g. ``(1,9)(2,7)``."""
    cycles = perm_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycles)


def parse_cycles(text: str, k: int) -> Permutation:
    """Inverse of :func:`format_cycles`."""
    images = list(range(k))
    body = text.replace(" ", "")
    if body in ("", "()"):
        return tuple(images)
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad cycle notation: {text!r}")
    seen: set[int] = set()
    for chunk in body[1:-1].split(")("):
        points = [int(tok) - 1 for tok in chunk.split(",")]
        for x in points:
            if not 0 <= x < k or x in seen:
                raise ValueError(f"bad cycle notation: {text!r}")
            seen.add(x)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a] = b
    return tuple(images)


def orbits(generators: Iterable[Sequence[int]], k: int) -> list[list[int]]:
    """Orbits of the group generated by ``generators`` on ``range(k)``."""
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for x, y in enumerate(g):
            rx, ry = find(x), find(y)
            if rx != ry:
                if rx < ry:
                    parent[ry] = rx
                else:
                    parent[rx] = ry
    groups: dict[int, list[int]] = {}
    for x in range(k):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def group_elements(generators: Sequence[Sequence[int]], k: int) -> list[Permutation]:
    """All elements of the generated group, by closure.  Small groups only."""
    ident = perm_identity(k)
    gens = [tuple(g) for g in generators]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                hg = perm_mul(h, g)
                if hg not in seen:
                    seen.add(hg)
                    nxt.append(hg)
        frontier = nxt
    return sorted(seen)


# --------------------------------------------------------------------------
# rectangles and partial rectangular structures


@dataclass(frozen=True)
class BaseSet:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise StructureError(f"format must be positive, got {self.n}x{self.m}")

    @property
    def size(self) -> int:
        return self.n * self.m


@dataclass(frozen=True, order=True)
class Rectangle:
    """An ordered pair (rows, cols) of element sets meeting in exactly one point."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    rows_mask: int = field(init=False, compare=False, repr=False)
    cols_mask: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        rows = tuple(sorted(set(self.rows)))
        cols = tuple(sorted(set(self.cols)))
        if len(rows) != len(self.rows) or len(cols) != len(self.cols):
            raise StructureError("rectangle sides must not repeat elements")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "rows_mask", mask_of(rows))
        object.__setattr__(self, "cols_mask", mask_of(cols))
        if (self.rows_mask & self.cols_mask).bit_count() != 1:
            raise StructureError(f"rows {rows} and cols {cols} must meet in exactly one element")

    @classmethod
    def from_masks(cls, rows_mask: int, cols_mask: int) -> "Rectangle":
        return _rect_from_masks(rows_mask, cols_mask)

    @property
    def middle(self) -> int:
        return (self.rows_mask & self.cols_mask).bit_length() - 1

    @property
    def format(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def image(self, perm: Sequence[int]) -> "Rectangle":
        return _rect_from_masks(map_mask(self.rows_mask, perm), map_mask(self.cols_mask, perm))


@lru_cache(maxsize=1 << 16)
def _rect_from_masks(rows_mask: int, cols_mask: int) -> Rectangle:
    return Rectangle(elements_of(rows_mask), elements_of(cols_mask))


def rectangle_middle(rect: Rectangle) -> int:
    return rect.middle


class PartialRectangularStructure:
    """A set of pairwise compatible rectangles over a fixed base set.

    Rectangles are kept sorted.  ``cover[a]`` is the mask of all ``b`` such
    that the pair ``(a, b)`` already lies in some rectangle.
    """

    __slots__ = ("base", "rectangles", "cover", "middle_mask", "_hash")

    def __init__(self, base: BaseSet, rectangles: Iterable[Rectangle] = ()):
        self.base = base
        self.rectangles: tuple[Rectangle, ...] = ()
        self.cover: tuple[int, ...] = (0,) * base.size
        self.middle_mask = 0
        self._hash = None
        current = self
        for rect in rectangles:
            current = current.extend(rect)
        self.rectangles = current.rectangles
        self.cover = current.cover
        self.middle_mask = current.middle_mask

    @classmethod
    def _unchecked(cls, base, rectangles, cover, middle_mask):
        obj = cls.__new__(cls)
        obj.base = base
        obj.rectangles = rectangles
        obj.cover = cover
        obj.middle_mask = middle_mask
        obj._hash = None
        return obj

    def __len__(self) -> int:
        return len(self.rectangles)

    def __iter__(self) -> Iterator[Rectangle]:
        return iter(self.rectangles)

    def __contains__(self, rect: object) -> bool:
        return rect in self.rectangles

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialRectangularStructure):
            return NotImplemented
        return self.base == other.base and self.rectangles == other.rectangles

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.base, self.rectangles))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"({list(r.rows)}, {list(r.cols)})" for r in self.rectangles)
        return f"PRS({self.base.n}x{self.base.m}: {body})"

    @property
    def full(self) -> bool:
        return len(self.rectangles) == self.base.size

    @property
    def middles(self) -> tuple[int, ...]:
        return elements_of(self.middle_mask)

    def rectangle_with_middle(self, x: int) -> Rectangle:
        for r in self.rectangles:
            if r.middle == x:
                return r
        raise KeyError(x)

    def is_valid_extension(self, rect: Rectangle) -> bool:
        if rect.format != (self.base.n, self.base.m):
            return False
        if rect.cols[-1] >= self.base.size or rect.rows[-1] >= self.base.size:
            return False
        rm, cm = rect.rows_mask, rect.cols_mask
        for q in self.rectangles:
            if (q.rows_mask & cm).bit_count() != 1 or (rm & q.cols_mask).bit_count() != 1:
                return False
        cover = self.cover
        return all(not cover[a] & cm for a in rect.rows)

    def extend(self, rect: Rectangle) -> "PartialRectangularStructure":
        if not self.is_valid_extension(rect):
            raise StructureError(f"{rect} is not a valid extension of {self}")
        return self._extend_unchecked(rect)

    def _extend_unchecked(self, rect: Rectangle) -> "PartialRectangularStructure":
        cover = list(self.cover)
        for a in rect.rows:
            cover[a] |= rect.cols_mask
        rects = tuple(sorted(self.rectangles + (rect,)))
        return PartialRectangularStructure._unchecked(
            self.base, rects, tuple(cover), self.middle_mask | (1 << rect.middle)
        )

    def image(self, perm: Sequence[int]) -> "PartialRectangularStructure":
        """The structure with every element ``x`` renamed ``perm[x]``."""
        rects = tuple(sorted(r.image(perm) for r in self.rectangles))
        cover = [0] * self.base.size
        for x, c in enumerate(self.cover):
            cover[perm[x]] = map_mask(c, perm)
        return PartialRectangularStructure._unchecked(
            self.base, rects, tuple(cover), map_mask(self.middle_mask, perm)
        )


PRS = PartialRectangularStructure


def prs_is_valid_extension(prs: PRS, rect: Rectangle) -> bool:
    return prs.is_valid_extension(rect)


def rectangular_structure_violation(prs: PRS) -> tuple | None:
    """First axiom failure of a claimed full structure, or ``None``."""
    k = prs.base.size
    if len(prs) != k:
        return ("size", len(prs))
    for q, r in product(prs.rectangles, repeat=2):
        if (q.rows_mask & r.cols_mask).bit_count() != 1:
            return ("intersection", q, r)
    for s, t in product(range(k), repeat=2):
        hits = [r for r in prs.rectangles if (r.rows_mask >> s) & 1 and (r.cols_mask >> t) & 1]
        if len(hits) != 1:
            return ("cover", (s, t), len(hits))
    for r in prs.rectangles:
        if len(r.rows) * len(r.cols) != k:
            return ("size-identity", r)
    return None


def is_rectangular_structure(prs: PRS) -> bool:
    return rectangular_structure_violation(prs) is None


def _require_full(prs: PRS) -> None:
    if not prs.full:
        raise StructureError(f"expected a full structure, got {len(prs)} of {prs.base.size} rectangles")


def _is_partition(blocks: Iterable[int], k: int) -> bool:
    distinct = set(blocks)
    union = 0
    for b in distinct:
        if union & b:
            return False
        union |= b
    return union == (1 << k) - 1


def is_left_partitioned(rs: PRS) -> bool:
    _require_full(rs)
    return _is_partition((r.rows_mask for r in rs), rs.base.size)


def is_right_partitioned(rs: PRS) -> bool:
    _require_full(rs)
    return _is_partition((r.cols_mask for r in rs), rs.base.size)


def is_doubly_partitioned(rs: PRS) -> bool:
    return is_left_partitioned(rs) and is_right_partitioned(rs)


def product_of_points(n: int, m: int) -> PRS:
    """Rectangles ``({a} x B, A x {b})`` on ``A x B`` with |A| = m, |B| = n.

    Element ``(a, b)`` is encoded as ``a*n + b``, so every rectangle has n
    rows and m columns.
    """
    rects = []
    for a in range(m):
        for b in range(n):
            rows = tuple(a * n + j for j in range(n))
            cols = tuple(i * n + b for i in range(m))
            rects.append(Rectangle(rows, cols))
    return PartialRectangularStructure(BaseSet(n, m), rects)


# --------------------------------------------------------------------------
# operation tables and graph pairs


def operation_table(data) -> np.ndarray:
    """Validate and freeze a square table with entries in ``0..k-1``."""
    table = np.array(data, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise StructureError(f"operation table must be square and non-empty, got shape {table.shape}")
    k = table.shape[0]
    if table.min() < 0 or table.max() >= k:
        raise StructureError("table entries out of range")
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class GraphPair:
    """Red and blue digraphs on nodes ``0..order-1``."""

    order: int
    red: frozenset[tuple[int, int]]
    blue: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.red | self.blue:
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise StructureError(f"edge {(u, v)} out of range")

    def image(self, perm: Sequence[int]) -> "GraphPair":
        return GraphPair(
            self.order,
            frozenset((perm[u], perm[v]) for u, v in self.red),
            frozenset((perm[u], perm[v]) for u, v in self.blue),
        )

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        red = np.zeros((self.order, self.order), dtype=np.int64)
        blue = np.zeros_like(red)
        for u, v in self.red:
            red[u, v] = 1
        for u, v in self.blue:
            blue[u, v] = 1
        return red, blue
