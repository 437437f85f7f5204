"""Finite median algebras given by explicit ternary operation tables.

Element ids are dense integers 0..size-1, subsets are int bitmasks, and
the table is stored fully (size**3 entries) so evaluation is a flat
lookup.  Algebras are immutable after construction and every operation
here is a pure function; shared tables are safe for concurrent use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .bits import bit_count, iter_bits, mask_of


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violations: tuple[tuple[str, tuple[int, ...]], ...]

    def first(self) -> Optional[tuple[str, tuple[int, ...]]]:
        return self.violations[0] if self.violations else None


def check_median_axioms(size: int, table: Sequence[int], max_violations: int = 20) -> AxiomReport:
    """Check symmetry, absorption and self-distributivity of a ternary table.

    `table` is flat, indexed by (x*size + y)*size + z.  Malformed tables
    (wrong length, out-of-range ids) are rejected before any axiom runs.
    """
    n = size
    if n < 1:
        raise ValueError("median algebras are nonempty")
    if len(table) != n * n * n:
        raise ValueError(f"table must have {n ** 3} entries, got {len(table)}")
    for v in table:
        if not (0 <= v < n):
            raise ValueError(f"table value {v} out of range 0..{n - 1}")

    bad: list[tuple[str, tuple[int, ...]]] = []

    def t(x: int, y: int, z: int) -> int:
        return table[(x * n + y) * n + z]

    for x, y, z in product(range(n), repeat=3):
        v = t(x, y, z)
        if v != t(y, x, z) or v != t(x, z, y):
            bad.append(("M1", (x, y, z)))
            if len(bad) >= max_violations:
                return AxiomReport(False, tuple(bad))
    for x, y in product(range(n), repeat=2):
        if t(x, y, x) != x:
            bad.append(("M2", (x, y)))
            if len(bad) >= max_violations:
                return AxiomReport(False, tuple(bad))
    for x, y, z, u, v in product(range(n), repeat=5):
        if t(t(x, y, z), u, v) != t(t(x, u, v), t(y, u, v), z):
            bad.append(("M3", (x, y, z, u, v)))
            if len(bad) >= max_violations:
                return AxiomReport(False, tuple(bad))
    return AxiomReport(not bad, tuple(bad))


class MedianAlgebra:
    """A finite median algebra: element count, flat table, label sidecar."""

    __slots__ = ("size", "table", "labels", "_ivals")

    def __init__(
        self,
        size: int,
        table: Sequence[int],
        labels: Optional[Sequence[str]] = None,
        checked: bool = True,
    ):
        if checked:
            report = check_median_axioms(size, table)
            if not report.ok:
                raise ValueError(f"not a median algebra: {report.violations[:3]}")
        else:
            if size < 1 or len(table) != size ** 3:
                raise ValueError("malformed table")
        self.size = size
        self.table = tuple(table)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(size))
        if len(self.labels) != size:
            raise ValueError("labels must match size")
        n = size
        ivals = []
        for x in range(n):
            for y in range(n):
                m = 0
                for z in range(n):
                    if self.table[(x * n + y) * n + z] == z:
                        m |= 1 << z
                ivals.append(m)
        self._ivals = tuple(ivals)

    def m(self, x: int, y: int, z: int) -> int:
        n = self.size
        return self.table[(x * n + y) * n + z]

    def interval_mask(self, x: int, y: int) -> int:
        return self._ivals[x * self.size + y]

    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MedianAlgebra)
            and self.size == other.size
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.size, self.table))

    def __repr__(self) -> str:
        return f"MedianAlgebra(size={self.size})"


def from_function(size, fn, labels=None, checked=True) -> MedianAlgebra:
    table = [fn(x, y, z) for x in range(size) for y in range(size) for z in range(size)]
    return MedianAlgebra(size, table, labels, checked=checked)


def _check_ids(M: MedianAlgebra, *ids: int) -> None:
    for i in ids:
        if not (0 <= i < M.size):
            raise ValueError(f"element id {i} out of range")


def interval(M: MedianAlgebra, x: int, y: int) -> int:
    """Mask of the cell between x and y: all z with m(x,y,z) = z."""
    _check_ids(M, x, y)
    return M.interval_mask(x, y)


def is_convex(M: MedianAlgebra, mask: int) -> bool:
    for x in iter_bits(mask):
        for y in iter_bits(mask):
            if M.interval_mask(x, y) & ~mask:
                return False
    return True


def convex_hull(M: MedianAlgebra, mask: int) -> int:
    """Least convex superset; the hull of the empty set is empty."""
    cur = mask
    while True:
        nxt = cur
        for x in iter_bits(cur):
            for y in iter_bits(cur):
                nxt |= M.interval_mask(x, y)
        if nxt == cur:
            return cur
        cur = nxt


def median_closure(M: MedianAlgebra, mask: int) -> int:
    """Least median subset containing the given elements."""
    if mask == 0:
        raise ValueError("median closure needs a nonempty seed")
    cur = mask
    while True:
        nxt = cur
        elems = list(iter_bits(cur))
        for x in elems:
            for y in elems:
                for z in elems:
                    nxt |= 1 << M.m(x, y, z)
        if nxt == cur:
            return cur
        cur = nxt


def base_meet(M: MedianAlgebra, base: int, y: int, z: int) -> int:
    """Meet of y and z in the semilattice anchored at `base`."""
    return M.m(y, base, z)


def base_leq(M: MedianAlgebra, base: int, x: int, y: int) -> bool:
    """x below y in the partial order anchored at `base`."""
    return M.m(x, base, y) == x


def folding_for(M: MedianAlgebra, mask: int) -> tuple[int, ...]:
    """The retraction onto the convex hull of a nonempty subset.

    Each x is sent to the meet of the subset in the order anchored at x,
    computed by folding the binary meet over the subset.
    """
    if mask == 0:
        raise ValueError("folding needs a nonempty subset")
    elems = list(iter_bits(mask))
    out = []
    for x in range(M.size):
        acc = elems[0]
        for a in elems[1:]:
            acc = M.m(acc, x, a)
        out.append(acc)
    return tuple(out)


def is_folding(M: MedianAlgebra, mapping: Sequence[int]) -> bool:
    """True iff f(m(x,y,z)) = m(f(x), y, f(z)) for all triples.

    When the identity holds, idempotence and convexity of the image are
    guaranteed consequences; they are re-asserted here as a consistency
    check on the table.
    """
    if len(mapping) != M.size:
        raise ValueError("mapping must be total")
    n = M.size
    for x, y, z in product(range(n), repeat=3):
        if mapping[M.m(x, y, z)] != M.m(mapping[x], y, mapping[z]):
            return False
    image = mask_of(mapping)
    assert all(mapping[mapping[x]] == mapping[x] for x in range(n))
    assert is_convex(M, image)
    return True


def cell_boundary(M: MedianAlgebra, x: int, y: int) -> int:
    """Ends of the cell [x,y]: elements a with [a,b] = [x,y] for some b."""
    _check_ids(M, x, y)
    cell = M.interval_mask(x, y)
    ends = 0
    for a in iter_bits(cell):
        for b in iter_bits(cell):
            if M.interval_mask(a, b) == cell:
                ends |= 1 << a
                break
    return ends


def boundary_partner(M: MedianAlgebra, x: int, y: int) -> dict[int, int]:
    """The complement involution on the ends of [x,y]; partners are unique."""
    cell = M.interval_mask(x, y)
    ends = cell_boundary(M, x, y)
    pairing: dict[int, int] = {}
    for a in iter_bits(ends):
        partners = [b for b in iter_bits(cell) if M.interval_mask(a, b) == cell]
        if len(partners) != 1:
            raise AssertionError(f"end {a} of cell [{x},{y}] has partners {partners}")
        pairing[a] = partners[0]
    return pairing


def is_locally_linear(M: MedianAlgebra) -> bool:
    """Every cell splits as [a,c] union [c,b] for each c inside it."""
    n = M.size
    for a, b in product(range(n), repeat=2):
        cell = M.interval_mask(a, b)
        for c in iter_bits(cell):
            if M.interval_mask(a, c) | M.interval_mask(c, b) != cell:
                return False
    return True


def distance(M: MedianAlgebra, x: int, y: int) -> int:
    """Length of a maximal chain in the cell [x,y] ordered from x."""
    _check_ids(M, x, y)
    cell = list(iter_bits(M.interval_mask(x, y)))
    # longest-path DP over the anchored order; all maximal chains in the
    # finite distributive lattice have the same length
    depth = {x: 0}
    changed = True
    while changed:
        changed = False
        for a in cell:
            for b in cell:
                if a != b and base_leq(M, x, a, b) and a in depth:
                    d = depth[a] + 1
                    if depth.get(b, -1) < d:
                        depth[b] = d
                        changed = True
    return depth[y]


def algebra_to_json(M: MedianAlgebra) -> dict:
    triples = []
    for x, y, z in combinations(range(M.size), 3):
        triples.append([x, y, z, M.m(x, y, z)])
    return {"size": M.size, "labels": list(M.labels), "triples": triples}


def algebra_from_json(data: dict, checked: bool = True) -> MedianAlgebra:
    """Load a median algebra from its file form.

    Only multiset-indexed triples are required: symmetry closure is
    applied on load and triples with a repeated element are forced by
    absorption.  Tables failing the axioms are rejected unless
    `checked=False`.
    """
    n = int(data["size"])
    if n < 1:
        raise ValueError("size must be >= 1")
    labels = data.get("labels") or [str(i) for i in range(n)]
    table: list[Optional[int]] = [None] * (n ** 3)

    def put(x: int, y: int, z: int, v: int) -> None:
        idx = (x * n + y) * n + z
        if table[idx] is not None and table[idx] != v:
            raise ValueError(f"conflicting entries for triple ({x},{y},{z})")
        table[idx] = v

    for x, y in product(range(n), repeat=2):
        put(x, x, y, x)
        put(x, y, x, x)
        put(y, x, x, x)
    for entry in data.get("triples", []):
        x, y, z, v = (int(c) for c in entry)
        for ids in ((x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)):
            put(*ids, v)
    missing = [i for i, v in enumerate(table) if v is None]
    if missing:
        i = missing[0]
        raise ValueError(f"table not total: missing triple index {i}")
    return MedianAlgebra(n, [v for v in table if v is not None], labels, checked=checked)


def load_algebra(path: str, checked: bool = True) -> MedianAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh), checked=checked)


def save_algebra(M: MedianAlgebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra_to_json(M), fh, indent=2, sort_keys=True)
        fh.write("\n")
