"""One bounded-radius step of extending a free median action towards a
transitive one, plus a bounded-depth iteration report.

Finitely generated opens over the big prime family are antichains of
finite word sets; negation is minimal-transversal dualization, which is
exact because the family is complement-closed.  Equality is only ever
semi-decided: evaluation runs over the translated pullback primes up to
a radius, so "indistinguishable" is relative to the sampled primes and
all fragment counts are lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .duality import spectrum
from .deform import DeformedGroup
from .freemedian import enumerate_by_majority_closure, fms_enumerate
from .words import Word, ball, inv, mul, retract_id, word_sort_key

FamilyExpr = tuple[tuple[Word, ...], ...]
PrimeHandle = tuple[Word, int]  # (translation word, prime mask on X)


def _canon(ctx, families: Iterable[tuple[Word, ...]]) -> FamilyExpr:
    sets = {frozenset(f) for f in families}
    if not sets or any(not f for f in sets):
        raise ValueError("families must be nonempty word sets")
    keep = [f for f in sets if not any(o < f for o in sets)]
    key = lambda w: word_sort_key(ctx, w)
    fams = [tuple(sorted(f, key=key)) for f in keep]
    fams.sort(key=lambda f: (len(f), [key(w) for w in f]))
    return tuple(fams)


def point_open(ctx, w: Word) -> FamilyExpr:
    return ((w,),)


def join_expr(ctx, *exprs: FamilyExpr) -> FamilyExpr:
    out = []
    for e in exprs:
        out.extend(e)
    return _canon(ctx, out)


def meet_expr(ctx, *exprs: FamilyExpr) -> FamilyExpr:
    cur = exprs[0]
    for nxt in exprs[1:]:
        cur = _canon(ctx, (tuple(set(a) | set(b)) for a in cur for b in nxt))
    return cur


def negate_expr(ctx, e: FamilyExpr) -> FamilyExpr:
    """Minimal transversals of the family; a syntactic involution and de
    Morgan dual of join/meet."""
    if not e:
        raise ValueError("empty expression")
    fams = [frozenset(f) for f in e]
    universe = sorted(set().union(*fams), key=lambda w: word_sort_key(ctx, w))
    if len(universe) > 20:
        raise ValueError("transversal scan limited to unions of <= 20 words")
    idx = {w: i for i, w in enumerate(universe)}
    masks = [sum(1 << idx[w] for w in f) for f in fams]
    from .bits import iter_bits, minimal_transversals

    trans = minimal_transversals(masks)
    return _canon(ctx, (tuple(universe[i] for i in iter_bits(t)) for t in trans))


def median_expr(ctx, x: FamilyExpr, y: FamilyExpr, z: FamilyExpr) -> FamilyExpr:
    return join_expr(ctx, meet_expr(ctx, x, y), meet_expr(ctx, y, z), meet_expr(ctx, z, x))


def translate_expr(ctx, u: Word, e: FamilyExpr) -> FamilyExpr:
    return _canon(ctx, (tuple(mul(ctx, u, w) for w in f) for f in e))


def is_invariant(ctx, e: FamilyExpr) -> bool:
    return negate_expr(ctx, e) == e


class ClosureContext:
    """Evaluation of family expressions over the pullback primes of a
    deformed group."""

    def __init__(self, D: DeformedGroup):
        self.D = D
        self.ctx = D.ctx
        self.primes = spectrum(D.algebra)

    def prime_member(self, handle: PrimeHandle, w: Word) -> bool:
        """w lies in the translated pullback prime: the retract of the
        shifted word lands in the trace prime."""
        shift, mask = handle
        xid = retract_id(self.ctx, mul(self.ctx, shift, w))
        return bool((mask >> xid) & 1)

    def eval_expr(self, e: FamilyExpr, handle: PrimeHandle) -> bool:
        """Membership of the prime in the open: some family is disjoint
        from the prime."""
        return any(
            not any(self.prime_member(handle, w) for w in fam) for fam in e
        )

    def handles(self, radius: int) -> list[PrimeHandle]:
        return [(u, p) for u in ball(self.ctx, radius) for p in self.primes]

    def equal_at_radius(self, e: FamilyExpr, f: FamilyExpr, radius: int) -> str:
        """'distinct' is definitive; 'indistinguishable' holds only over
        the sampled primes."""
        if e == f:
            return "indistinguishable"
        for h in self.handles(radius):
            if self.eval_expr(e, h) != self.eval_expr(f, h):
                return "distinct"
        return "indistinguishable"


@dataclass
class FragmentReport:
    radius: int
    generator_count: int
    element_count: int
    new_elements: int
    pi_words: list[Word]
    checks: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, name: str, count: int, bad: list) -> None:
        self.checks[name] = count
        if bad:
            self.violations[name] = bad


def rtc_fragment(
    D: DeformedGroup,
    radius: int,
    max_elements: int = 400,
    action_radius: int = 1,
) -> FragmentReport:
    """Median-close the point opens of the radius ball, dedup at radius+2,
    then find the section back to words and check the structure maps.

    The section is found by search over the word ball (radius escalates
    once by 2 before failing); all counts are distinct-at-radius lower
    bounds.
    """
    cc = ClosureContext(D)
    ctx = D.ctx
    dedup_radius = radius + 2
    seed_words = list(ball(ctx, radius))
    for e in D._emb:
        if e not in seed_words:
            seed_words.append(e)
    gens = [point_open(ctx, w) for w in seed_words]

    elements: list[FamilyExpr] = []

    def find(e: FamilyExpr) -> Optional[int]:
        for i, o in enumerate(elements):
            if cc.equal_at_radius(e, o, dedup_radius) == "indistinguishable":
                return i
        return None

    for g in gens:
        if find(g) is None:
            elements.append(g)
    frontier = list(elements)
    while frontier:
        new: list[FamilyExpr] = []
        current = list(elements)
        for i, x in enumerate(current):
            for y in current[i:]:
                for z in frontier:
                    med = median_expr(ctx, x, y, z)
                    if find(med) is None:
                        elements.append(med)
                        new.append(med)
                        if len(elements) > max_elements:
                            raise ValueError("fragment exceeded the element cap")
        frontier = new

    rep = FragmentReport(radius, len(gens), len(elements), len(elements) - len(gens), [])

    # every element is negation-invariant
    bad = [e for e in elements if not is_invariant(ctx, e)]
    rep.record("negation_invariant", len(elements), bad)

    # the section: for each element the unique matching ball word
    search_words = ball(ctx, radius + 2)
    pi: list[Optional[Word]] = []
    bad = []
    for e in elements:
        matches = [
            u for u in search_words
            if cc.equal_at_radius(e, point_open(ctx, u), dedup_radius) == "indistinguishable"
        ]
        if not matches:
            wider = ball(ctx, radius + 4)
            matches = [
                u for u in wider
                if cc.equal_at_radius(e, point_open(ctx, u), dedup_radius) == "indistinguishable"
            ]
        if len(matches) != 1:
            bad.append((e, matches))
            pi.append(None)
        else:
            pi.append(matches[0])
    rep.record("section_unique", len(elements), bad)
    rep.pi_words = [w for w in pi if w is not None]

    # section composed with the embedding is the identity on ball words
    bad = []
    for w in ball(ctx, radius):
        i = find(point_open(ctx, w))
        if i is None or pi[i] != w:
            bad.append(w)
    rep.record("section_after_embed", len(gens), bad)

    # the composite retraction restricted to X is the identity
    bad = []
    for xid in range(D.algebra.size):
        e = point_open(ctx, D._emb[xid])
        i = find(e)
        if i is None or pi[i] is None or retract_id(ctx, pi[i]) != xid:
            bad.append(xid)
    rep.record("retraction_on_x", D.algebra.size, bad)

    # embedded orbit forms a median subalgebra matching the table
    bad = []
    count = 0
    s = D.algebra.size
    for x in range(s):
        for y in range(x, s):
            for z in range(y, s):
                count += 1
                med = median_expr(
                    ctx,
                    point_open(ctx, D._emb[x]),
                    point_open(ctx, D._emb[y]),
                    point_open(ctx, D._emb[z]),
                )
                want = point_open(ctx, D._emb[D.algebra.m(x, y, z)])
                if cc.equal_at_radius(med, want, dedup_radius) != "indistinguishable":
                    bad.append((x, y, z))
    rep.record("embedded_median", count, bad)

    # medians of point opens match the deformed median over the samples
    bad = []
    count = 0
    bw = ball(ctx, min(radius, 2))
    for x in bw:
        for y in bw:
            for z in bw:
                count += 1
                med = median_expr(ctx, point_open(ctx, x), point_open(ctx, y), point_open(ctx, z))
                want = point_open(ctx, D.median(x, y, z))
                if cc.equal_at_radius(med, want, dedup_radius) != "indistinguishable":
                    bad.append((x, y, z))
    rep.record("bridge_to_deformed", count, bad)

    # the action is fixed-point-free on the distinguishable fragment
    bad = []
    count = 0
    for sword in ball(ctx, action_radius):
        if sword == ():
            continue
        for e in elements:
            count += 1
            if cc.equal_at_radius(translate_expr(ctx, sword, e), e, dedup_radius) == "indistinguishable":
                bad.append((sword, e))
    rep.record("action_free", count, bad)

    # translation equivariance of the section
    bad = []
    count = 0
    for sword in ball(ctx, 1):
        for i, e in enumerate(elements):
            if pi[i] is None:
                continue
            count += 1
            moved = translate_expr(ctx, sword, e)
            want = mul(ctx, sword, pi[i])
            if cc.equal_at_radius(moved, point_open(ctx, want), dedup_radius) != "indistinguishable":
                bad.append((sword, i))
    rep.record("section_equivariant", count, bad)
    return rep


@dataclass(frozen=True)
class IterationLevel:
    level: int
    group_fragment_size: int
    median_fragment_size: int
    oracle_size: Optional[int]


def tc_iterate(seed_orbits: int, depth: int, radii: Iterable[int]) -> list[IterationLevel]:
    """Alternating fragment sizes for the tower that repeats the one-step
    extension starting from the trivial group acting on a finite set.

    Group fragments are materialized as free-group balls over the
    previous median fragment (no relations are visible at these radii);
    median fragments are free median closures, cross-checked against the
    majority-closure oracle.  Only the first two levels are materialized.
    """
    if depth < 0 or depth > 2:
        raise ValueError("depth limited to 0..2")
    radii = list(radii)
    if len(radii) < depth:
        raise ValueError("need one radius per level")
    levels = [IterationLevel(0, 1, seed_orbits, None)]
    if depth == 0:
        return levels

    # level 1: the group generated by the seed is free of rank seed-1
    rank1 = seed_orbits - 1
    r1 = radii[0]
    g1 = _free_ball_size(rank1, r1)
    base = g1
    if base > 5:
        raise ValueError("free median enumeration limited to 5 generators; shrink the radius")
    med1 = len(fms_enumerate(base))
    oracle1 = len(enumerate_by_majority_closure(base))
    if med1 != oracle1:
        raise AssertionError("free median closure disagrees with the majority oracle")
    levels.append(IterationLevel(1, g1, med1, oracle1))
    if depth == 1:
        return levels

    # level 2: sizes only
    rank2 = med1 - 1
    g2 = _free_ball_size(rank2, radii[1])
    levels.append(IterationLevel(2, g2, -1, None))
    return levels


def _free_ball_size(rank: int, radius: int) -> int:
    if rank == 0:
        return 1
    total = 1
    cur = 1
    for step in range(radius):
        cur = cur * (2 * rank - 1) if step else 2 * rank
        total += cur
    return total
