"""Bitmask helpers for subsets of small element ranges."""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_count(mask: int) -> int:
    return mask.bit_count()


def subsets_by_size(universe: int) -> Iterator[int]:
    """All submasks of `universe`, nonempty, in ascending popcount order."""
    items = list(iter_bits(universe))
    from itertools import combinations

    for k in range(1, len(items) + 1):
        for combo in combinations(items, k):
            yield mask_of(combo)


def minimal_transversals(families: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-minimal masks E with E & F != 0 for every family mask F.

    Exhaustive scan of the union in ascending popcount order; no
    sophisticated dualization.  Union size is capped to keep the scan at
    desk scale.
    """
    fams = list(families)
    if not fams or any(f == 0 for f in fams):
        raise ValueError("families must be nonempty masks")
    union = 0
    for f in fams:
        union |= f
    if bit_count(union) > 22:
        raise ValueError("transversal scan limited to unions of <= 22 elements")
    found: list[int] = []
    for cand in subsets_by_size(union):
        if any(prev & cand == prev for prev in found):
            continue
        if all(cand & f for f in fams):
            found.append(cand)
    return tuple(sorted(found))


def antichain_minimal(masks: Iterable[int]) -> tuple[int, ...]:
    """Drop masks that strictly contain another mask; sort ascending."""
    ms = sorted(set(masks), key=lambda m: (bit_count(m), m))
    keep: list[int] = []
    for m in ms:
        if not any(prev & m == prev for prev in keep):
            keep.append(m)
    return tuple(sorted(keep))
