"""The free median algebra over a finite base, computed two ways.

Elements are canonical antichains of pairwise-meeting nonempty subsets
of the base, closed under the minimal-transversal condition; each one is
the family of minimal satisfying sets of a self-dual monotone boolean
function.  The second, independent route enumerates truth tables closed
under pointwise majority.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .bits import antichain_minimal, bit_count, iter_bits, minimal_transversals

ENUMERATE_LIMIT = 5
ELEMENT_BASE_LIMIT = 30

Family = tuple[int, ...]


def canonical_family(masks: Iterable[int]) -> Family:
    """Inclusion-minimal antichain sorted by (popcount, mask)."""
    keep = antichain_minimal(masks)
    return tuple(sorted(keep, key=lambda m: (bit_count(m), m)))


def family_negate(family: Family) -> Family:
    """Minimal transversals of the family; an involution on antichains."""
    if not family:
        raise ValueError("empty family")
    return canonical_family(minimal_transversals(family))


def family_join(*families: Family) -> Family:
    out: list[int] = []
    for f in families:
        out.extend(f)
    return canonical_family(out)


def family_meet(*families: Family) -> Family:
    cur = families[0]
    for nxt in families[1:]:
        cur = canonical_family(a | b for a in cur for b in nxt)
    return cur


def family_median(x: Family, y: Family, z: Family) -> Family:
    return family_join(family_meet(x, y), family_meet(y, z), family_meet(z, x))


def family_eval(family: Family, s_mask: int) -> bool:
    """Membership of the element in the prime whose base trace is s_mask."""
    return all(f & s_mask for f in family)


def is_element_family(family: Family) -> bool:
    """Conditions for a family to denote a free-median element: pairwise
    meeting, and every transversal contains a member."""
    if not family:
        return False
    for a, b in combinations(family, 2):
        if not a & b:
            return False
    for t in minimal_transversals(family):
        if not any(f & t == f for f in family):
            return False
    return True


@dataclass(frozen=True)
class FreeMedianElement:
    base_size: int
    family: Family

    def __post_init__(self):
        if self.base_size < 1 or self.base_size > ELEMENT_BASE_LIMIT:
            raise ValueError("base size out of range")
        if self.family != canonical_family(self.family):
            raise ValueError("family not canonical")
        if not is_element_family(self.family):
            raise ValueError("family does not satisfy the element conditions")

    def __str__(self) -> str:
        return render_family(self.family)


def render_family(family: Family) -> str:
    def one(mask: int) -> str:
        return "{" + ",".join(_base_name(i) for i in iter_bits(mask)) + "}"

    return "{" + ",".join(one(f) for f in family) + "}"


def _base_name(i: int) -> str:
    if i < 26:
        return chr(ord("a") + i)
    return f"a{i}"


def parse_family(text: str, base_size: int) -> Family:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError("family syntax: {{a,b},{c}}")
    inner = text[1:-1]
    masks = []
    depth = 0
    cur = ""
    parts = []
    for ch in inner:
        if ch == "{":
            depth += 1
            cur = ""
        elif ch == "}":
            depth -= 1
            parts.append(cur)
        elif ch == "," and depth == 0:
            continue
        else:
            cur += ch
    for part in parts:
        mask = 0
        for name in part.split(","):
            name = name.strip()
            if not name:
                continue
            idx = ord(name) - ord("a") if len(name) == 1 else int(name[1:])
            if not (0 <= idx < base_size):
                raise ValueError(f"base element {name!r} out of range")
            mask |= 1 << idx
        if mask == 0:
            raise ValueError("empty member set")
        masks.append(mask)
    return canonical_family(masks)


def fms_generator(base_size: int, a: int) -> FreeMedianElement:
    if not (0 <= a < base_size):
        raise ValueError("generator index out of range")
    return FreeMedianElement(base_size, ((1 << a),))


def fms_negate(base_size: int, family: Family) -> Family:
    return family_negate(family)


def fms_median(
    x: FreeMedianElement, y: FreeMedianElement, z: FreeMedianElement
) -> FreeMedianElement:
    if not (x.base_size == y.base_size == z.base_size):
        raise ValueError("mixed bases")
    return FreeMedianElement(x.base_size, family_median(x.family, y.family, z.family))


def fms_eval(x: FreeMedianElement, s_mask: int) -> bool:
    return family_eval(x.family, s_mask)


def _antichains(base_size: int) -> Iterable[Family]:
    """All nonempty antichains of nonempty subsets of the base."""
    subsets = sorted(range(1, 1 << base_size), key=lambda m: (bit_count(m), m))

    def extend(prefix: list[int], start: int):
        if prefix:
            yield tuple(prefix)
        for i in range(start, len(subsets)):
            s = subsets[i]
            if any(p & s == p or p & s == s for p in prefix):
                continue
            prefix.append(s)
            yield from extend(prefix, i + 1)
            prefix.pop()

    yield from extend([], 0)


def fms_enumerate(base_size: int) -> list[FreeMedianElement]:
    """All elements of the free median algebra, by the antichain conditions."""
    if not (1 <= base_size <= ENUMERATE_LIMIT):
        raise ValueError(f"enumeration limited to bases of size <= {ENUMERATE_LIMIT}")
    out = []
    for fam in _antichains(base_size):
        fam = canonical_family(fam)
        if is_element_family(fam):
            out.append(FreeMedianElement(base_size, fam))
    out.sort(key=lambda e: (len(e.family), e.family))
    seen = set()
    uniq = []
    for e in out:
        if e.family not in seen:
            seen.add(e.family)
            uniq.append(e)
    return uniq


def truth_table(family: Family, base_size: int) -> int:
    """Bit S of the result is the evaluation at base trace S."""
    tt = 0
    for s in range(1 << base_size):
        if family_eval(family, s):
            tt |= 1 << s
    return tt


def enumerate_by_majority_closure(base_size: int) -> frozenset[int]:
    """Truth tables of the closure of the generators under pointwise majority.

    Independent oracle for fms_enumerate: both routes must produce the
    same set of monotone self-dual functions.
    """
    if base_size < 1:
        raise ValueError("base size out of range")
    gens = []
    for a in range(base_size):
        tt = 0
        for s in range(1 << base_size):
            if (s >> a) & 1:
                tt |= 1 << s
        gens.append(tt)
    closed = set(gens)
    frontier = list(closed)
    while frontier:
        new = []
        current = list(closed)
        for x in current:
            for y in current:
                for z in frontier:
                    med = (x & y) | (y & z) | (z & x)
                    if med not in closed:
                        closed.add(med)
                        new.append(med)
        frontier = new
    return frozenset(closed)
