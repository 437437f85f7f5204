"""Prime convex subsets of a finite median algebra and the lattice of
finitely generated opens over them, with the negation operator.

The spectrum is materialized only for algebras of at most
MATERIALIZE_LIMIT elements; the generator-antichain form of an open set
never needs the full lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .algebra import MedianAlgebra, convex_hull, is_convex
from .bits import antichain_minimal, bit_count, iter_bits, minimal_transversals

MATERIALIZE_LIMIT = 12


def spectrum(M: MedianAlgebra) -> tuple[int, ...]:
    """All prime convex subsets (convex with convex complement), as masks.

    Sorted by (popcount, mask).  Contains the empty set and the whole
    algebra, and is closed under complement.
    """
    if M.size > MATERIALIZE_LIMIT:
        raise ValueError(f"spectrum materialized only for size <= {MATERIALIZE_LIMIT}")
    full = M.full_mask()
    primes = [
        s for s in range(full + 1)
        if is_convex(M, s) and is_convex(M, full & ~s)
    ]
    return tuple(sorted(primes, key=lambda s: (bit_count(s), s)))


@dataclass(frozen=True)
class OpenSet:
    """A finitely generated open: union of U(A) over the generator antichain.

    `generators` is the inclusion-minimal antichain of nonempty masks A,
    sorted; `extension` lists the primes in the union when materialized.
    The empty generator tuple denotes the whole spectrum (the improper
    open U of the empty subset), which only trivial queries produce.
    """

    generators: tuple[int, ...]
    extension: Optional[frozenset[int]] = None

    def __post_init__(self):
        if any(g == 0 for g in self.generators):
            raise ValueError("open sets need nonempty generator subsets")


def extension_of(M: MedianAlgebra, generators: tuple[int, ...], primes=None) -> frozenset[int]:
    if primes is None:
        primes = spectrum(M)
    if not generators:
        return frozenset(primes)
    return frozenset(p for p in primes if any(p & g == 0 for g in generators))


def make_open(M: MedianAlgebra, generators, primes=None) -> OpenSet:
    gens = antichain_minimal(generators)
    return OpenSet(gens, extension_of(M, gens, primes))


def u_set(M: MedianAlgebra, a_mask: int) -> OpenSet:
    """U(A): the primes missing A; the empty A yields the whole spectrum."""
    if a_mask == 0:
        return OpenSet((), extension_of(M, ()))
    return make_open(M, (a_mask,))


def v_set(M: MedianAlgebra, a_mask: int, primes=None) -> tuple[int, ...]:
    """V(A): the primes containing A."""
    if primes is None:
        primes = spectrum(M)
    return tuple(p for p in primes if p & a_mask == a_mask)


def negate_open(M: MedianAlgebra, o: OpenSet) -> OpenSet:
    """The negation operator on proper opens: P is in the result iff the
    complement of P is outside the input.

    Computes the generator antichain syntactically (minimal transversals
    of the input antichain) and the extension semantically, and checks
    the two routes agree.
    """
    primes = spectrum(M)
    ext = o.extension if o.extension is not None else extension_of(M, o.generators, primes)
    if not ext or len(ext) == len(primes):
        raise ValueError("negation is defined for proper opens only")
    full = M.full_mask()
    semantic = frozenset(p for p in primes if (full & ~p) not in ext)
    gens = antichain_minimal(minimal_transversals(o.generators))
    syntactic = extension_of(M, gens, primes)
    if syntactic != semantic:
        raise AssertionError("transversal negation disagrees with semantic negation")
    return OpenSet(gens, semantic)


def lattice_extensions(M: MedianAlgebra, limit: int = 200000) -> frozenset[frozenset[int]]:
    """Extensions of every finitely generated open: all unions of the
    basic opens U(A) for nonempty A.  Guarded against blowup."""
    primes = spectrum(M)
    basics = set()
    full = M.full_mask()
    for k in range(1, M.size + 1):
        for combo in combinations(range(M.size), k):
            a = 0
            for i in combo:
                a |= 1 << i
            basics.add(frozenset(p for p in primes if p & a == 0))
    opens = set(basics)
    frontier = set(basics)
    while frontier:
        new = set()
        for u in frontier:
            for b in basics:
                c = u | b
                if c not in opens:
                    new.add(c)
        opens |= new
        if len(opens) > limit:
            raise ValueError("open lattice too large to materialize")
        frontier = new
    return frozenset(opens)


def invariant_opens(M: MedianAlgebra) -> list[OpenSet]:
    """The negation-fixed opens; exactly the point opens U(x), in element order.

    Also checks that the canonical median on point opens mirrors the
    algebra's table.
    """
    primes = spectrum(M)
    full = M.full_mask()
    exts = lattice_extensions(M)
    invariant = {
        e for e in exts
        if e == frozenset(p for p in primes if (full & ~p) not in e)
    }
    points = []
    for x in range(M.size):
        e = frozenset(p for p in primes if not (p >> x) & 1)
        points.append(e)
    if invariant != set(points):
        raise AssertionError("negation-invariant opens do not match the point opens")
    for x in range(M.size):
        for y in range(M.size):
            for z in range(M.size):
                ex, ey, ez = points[x], points[y], points[z]
                med = (ex & ey) | (ey & ez) | (ez & ex)
                if med != points[M.m(x, y, z)]:
                    raise AssertionError("median on point opens disagrees with the table")
    return [OpenSet((1 << x,), points[x]) for x in range(M.size)]


@dataclass(frozen=True)
class DualityReport:
    ok: bool
    pairs_checked: int
    hulls_checked: int
    counterexample: Optional[tuple[str, tuple[int, int]]]


def duality_check(M: MedianAlgebra, cap: int = 3) -> DualityReport:
    """Finite-scale duality identities over subsets of size <= cap:

    - V(A) and U(B) share a prime exactly when the hulls of A and B are
      disjoint, and
    - the hull of A is the intersection of the primes containing A.
    """
    primes = spectrum(M)
    subsets = []
    for k in range(1, cap + 1):
        for combo in combinations(range(M.size), k):
            a = 0
            for i in combo:
                a |= 1 << i
            subsets.append(a)
    pairs = 0
    hulls = 0
    for a in subsets:
        va = v_set(M, a, primes)
        inter = M.full_mask()
        for p in va:
            inter &= p
        if inter != convex_hull(M, a):
            return DualityReport(False, pairs, hulls, ("hull", (a, 0)))
        hulls += 1
        hull_a = convex_hull(M, a)
        for b in subsets:
            pairs += 1
            hull_b = convex_hull(M, b)
            meets = any(p & b == 0 for p in va)
            if meets != (hull_a & hull_b == 0):
                return DualityReport(False, pairs, hulls, ("separation", (a, b)))
    return DualityReport(True, pairs, hulls, None)
