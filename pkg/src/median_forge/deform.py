"""Deformation of the word tree of H * F(I') into median group operations.

Given a compatible median table m on the orbit set X = H x I, the unique
median group operation extending it evaluates as

    median(u, v, w) = t * m(r(t^-1 u), r(t^-1 v), r(t^-1 w)),

where t is the tree median of the words and r the retraction onto X.
The evaluator works over unbounded words and memoizes on interned word
ids; verification sweeps finite balls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Optional, Sequence

from .algebra import (
    MedianAlgebra,
    check_median_axioms,
    is_folding,
    is_locally_linear,
)
from .bits import iter_bits
from .words import (
    CayleyGroup,
    Word,
    WordContext,
    ball,
    embed,
    inv,
    leq,
    meet,
    mul,
    retract_id,
    tree_median,
    word_sort_key,
    xid_of_word,
    xpoint_from_id,
)

ENUM_X_LIMIT = 5
ENUM_GROUP_LIMIT = 8


@dataclass(frozen=True)
class CompatReport:
    ok: bool
    axiom_violations: tuple
    compat_violations: tuple[tuple[int, int, int, int], ...]
    locally_linear: bool
    simplicial: bool


def check_compat(group: CayleyGroup, index_count: int, M: MedianAlgebra) -> CompatReport:
    """Median axioms plus H-compatibility of a table on X = H x I.

    Element ids follow xid = h * index_count + (orbit - 1).  Finite X is
    always simplicial; local linearity is recorded for bookkeeping.
    """
    k = index_count
    n = group.order
    if M.size != n * k:
        raise ValueError("algebra size must be |H| * |I|")
    axioms = check_median_axioms(M.size, M.table)
    bad: list[tuple[int, int, int, int]] = []
    for h in range(1, n):
        for x, y, z in product(range(M.size), repeat=3):
            hx = group.mul(h, x // k) * k + x % k
            hy = group.mul(h, y // k) * k + y % k
            hz = group.mul(h, z // k) * k + z % k
            hm = group.mul(h, M.m(x, y, z) // k) * k + M.m(x, y, z) % k
            if M.m(hx, hy, hz) != hm:
                bad.append((h, x, y, z))
                if len(bad) >= 20:
                    break
    ok = axioms.ok and not bad
    return CompatReport(ok, axioms.violations, tuple(bad),
                        is_locally_linear(M) if axioms.ok else False, True)


@dataclass(frozen=True)
class MedianAction:
    """A group acting freely on X = H x I with a compatible median table."""

    group: CayleyGroup
    index_count: int
    algebra: MedianAlgebra

    def __post_init__(self):
        report = check_compat(self.group, self.index_count, self.algebra)
        if not report.ok:
            raise ValueError(
                f"incompatible median table: axioms={report.axiom_violations[:2]} "
                f"compat={report.compat_violations[:2]}"
            )

    def context(self) -> WordContext:
        return WordContext(self.group, self.index_count)


@dataclass(frozen=True)
class Configuration:
    """The chain of cut words below v and the tree intervals they bound."""

    cut_words: tuple[Word, ...]
    landings: tuple[Word, ...]          # cut word times the retract of its inverse
    intervals: tuple[tuple[Word, Word], ...]
    interval_sizes: tuple[int, ...]


def configuration(ctx: WordContext, v: Word) -> Configuration:
    """Cut words below v, their landings, and the bounded tree intervals.

    A prefix w of v is a cut word when the retract of w^-1 lies in the
    orbit-representative set and, if that retract is the basepoint, the
    retract of w^-1 v is not.  Pure tree combinatorics: independent of
    any median table on the orbit set.
    """
    if v == ():
        raise ValueError("the identity has no configuration")
    k = ctx.index_count
    cuts: list[Word] = []
    for j in range(len(v) + 1):
        w = v[:j]
        lo = retract_id(ctx, inv(ctx, w))
        if lo >= k:
            continue
        if lo == 0 and retract_id(ctx, v[j:]) == 0:
            continue
        cuts.append(w)
    if not cuts:
        raise AssertionError(f"no cut words below {v}")
    landings = tuple(
        mul(ctx, w, embed(ctx, xpoint_from_id(ctx, retract_id(ctx, inv(ctx, w)))))
        for w in cuts
    )
    if landings[0] != ():
        raise AssertionError("the first landing must be the identity")
    bounds = []
    sizes = []
    for i, w in enumerate(cuts):
        lo_word = landings[i]
        hi_word = landings[i + 1] if i + 1 < len(cuts) else v
        if not (leq(lo_word, w) and leq(w, hi_word) and leq(hi_word, v)):
            raise AssertionError("cut word escapes its interval")
        bounds.append((lo_word, hi_word))
        sizes.append(len(hi_word) - len(lo_word) + 1)
    return Configuration(tuple(cuts), landings, tuple(bounds), tuple(sizes))


class DeformedGroup:
    """Evaluators for the deformed median, meet and order on words."""

    def __init__(self, action: MedianAction):
        self.action = action
        self.ctx = action.context()
        self.algebra = action.algebra
        s = self.algebra.size
        self._emb = tuple(embed(self.ctx, xpoint_from_id(self.ctx, x)) for x in range(s))
        self._words: list[Word] = [()]
        self._ids: dict[Word, int] = {(): 0}
        self._memo: dict[tuple[int, int, int], int] = {}

    # word interning ----------------------------------------------------
    def intern(self, w: Word) -> int:
        i = self._ids.get(w)
        if i is None:
            i = len(self._words)
            self._words.append(w)
            self._ids[w] = i
        return i

    def word(self, i: int) -> Word:
        return self._words[i]

    # core evaluators ---------------------------------------------------
    def _strip(self, w: Word, t: Word) -> Word:
        if w[: len(t)] == t:
            return w[len(t):]
        return mul(self.ctx, inv(self.ctx, t), w)

    def median(self, u: Word, v: Word, w: Word) -> Word:
        return self.word(self.median_idx(self.intern(u), self.intern(v), self.intern(w)))

    def median_idx(self, a: int, b: int, c: int) -> int:
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
            if a > b:
                a, b = b, a
        key = (a, b, c)
        r = self._memo.get(key)
        if r is None:
            r = self._median_eval(self._words[a], self._words[b], self._words[c])
            self._memo[key] = r
        return r

    def _median_eval(self, u: Word, v: Word, w: Word) -> int:
        ctx = self.ctx
        t = tree_median(u, v, w)
        xu = retract_id(ctx, self._strip(u, t))
        xv = retract_id(ctx, self._strip(v, t))
        xw = retract_id(ctx, self._strip(w, t))
        x = self.algebra.m(xu, xv, xw)
        return self.intern(mul(ctx, t, self._emb[x]))

    def meet(self, u: Word, v: Word) -> Word:
        """The induced meet anchored at the identity."""
        ctx = self.ctx
        a = meet(u, v)
        xu = retract_id(ctx, self._strip(u, a))
        xa = retract_id(ctx, inv(ctx, a))
        xv = retract_id(ctx, self._strip(v, a))
        return mul(ctx, a, self._emb[self.algebra.m(xu, xa, xv)])

    def below(self, u: Word, v: Word) -> bool:
        """The induced order: the meet-anchored membership criterion."""
        ctx = self.ctx
        a = meet(u, v)
        p = self._strip(u, a)
        xid = xid_of_word(ctx, p)
        if xid is None:
            return False
        lo = retract_id(ctx, inv(ctx, a))
        hi = retract_id(ctx, self._strip(v, a))
        return bool((self.algebra.interval_mask(lo, hi) >> xid) & 1)

    def below_by_search(self, u: Word, v: Word) -> bool:
        """Order test via a witness prefix of v (no cut-word constraints)."""
        ctx = self.ctx
        for j in range(len(v) + 1):
            w = v[:j]
            p = mul(ctx, inv(ctx, w), u)
            xid = xid_of_word(ctx, p)
            if xid is None:
                continue
            lo = retract_id(ctx, inv(ctx, w))
            hi = retract_id(ctx, v[j:])
            if (self.algebra.interval_mask(lo, hi) >> xid) & 1:
                return True
        return False

    def below_by_config(self, u: Word, v: Word) -> bool:
        """Order test via a cut-word witness: the prefix must retract into
        the orbit-representative set, with the basepoint guard on the
        retract of the prefix inverse."""
        if u == v == ():
            return True
        ctx = self.ctx
        k = self.ctx.index_count
        for j in range(len(v) + 1):
            w = v[:j]
            lo = retract_id(ctx, inv(ctx, w))
            if lo >= k:
                continue
            hi = retract_id(ctx, v[j:])
            if lo == 0 and hi == 0:
                continue
            p = mul(ctx, inv(ctx, w), u)
            xid = xid_of_word(ctx, p)
            if xid is None:
                continue
            if (self.algebra.interval_mask(lo, hi) >> xid) & 1:
                return True
        return False

    # configurations and cells ------------------------------------------
    def configuration(self, v: Word) -> Configuration:
        return configuration(self.ctx, v)

    def cell(self, u: Word, v: Word) -> list[Word]:
        """The deformed cell [u, v]: translated unions of X-intervals along
        the configuration of u^-1 v."""
        ctx = self.ctx
        if u == v:
            return [u]
        rel = mul(ctx, inv(ctx, u), v)
        cfg = self.configuration(rel)
        out: set[Word] = set()
        for w in cfg.cut_words:
            lo = retract_id(ctx, inv(ctx, w))
            hi = retract_id(ctx, self._strip(rel, w))
            base = mul(ctx, u, w)
            for xid in iter_bits(self.algebra.interval_mask(lo, hi)):
                out.add(mul(ctx, base, self._emb[xid]))
        return sorted(out, key=lambda t: word_sort_key(ctx, t))

    # verification -------------------------------------------------------
    def verify(
        self,
        radius: int,
        m3_radius: Optional[int] = None,
        compat_radius: Optional[int] = None,
        cell_radius: Optional[int] = None,
        cell_oracle_limit: int = 30000,
    ) -> "VerifyReport":
        return run_verification(self, radius, m3_radius, compat_radius,
                                cell_radius, cell_oracle_limit)


@dataclass
class VerifyReport:
    radius: int
    checks: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list] = field(default_factory=dict)

    def record(self, name: str, count: int, bad: list) -> None:
        self.checks[name] = count
        if bad:
            self.violations[name] = bad

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        lines = []
        for name in sorted(self.checks):
            bad = self.violations.get(name, [])
            status = "ok" if not bad else f"{len(bad)} violations"
            lines.append(f"{name}: {self.checks[name]} checked, {status}")
        return "\n".join(lines)


def run_verification(
    D: DeformedGroup,
    radius: int,
    m3_radius: Optional[int] = None,
    compat_radius: Optional[int] = None,
    cell_radius: Optional[int] = None,
    cell_oracle_limit: int = 30000,
) -> VerifyReport:
    """Sweep the finite ball for every axiom and structure identity.

    Nested medians land outside the ball; the evaluator is unbounded so
    the ambient scope is implicit.  The self-distributivity sweep and the
    translation sweep take their own radii since their cost grows with a
    high power of the ball size.
    """
    ctx = D.ctx
    M = D.algebra
    rep = VerifyReport(radius)
    m3_radius = radius if m3_radius is None else m3_radius
    compat_radius = radius if compat_radius is None else compat_radius
    cell_radius = min(radius, 2) if cell_radius is None else cell_radius

    wordlist = ball(ctx, radius)
    ids = [D.intern(w) for w in wordlist]
    nb = len(ids)

    # restriction to X equals the table
    bad = []
    s = M.size
    for x, y, z in product(range(s), repeat=3):
        got = D.median(D._emb[x], D._emb[y], D._emb[z])
        if got != D._emb[M.m(x, y, z)]:
            bad.append((x, y, z))
    rep.record("restriction", s ** 3, bad)

    # median table over the ball, then symmetry and absorption; the
    # symmetry sweep evaluates the raw formula on ordered triples, not
    # the canonicalizing cache
    med = [[[0] * nb for _ in range(nb)] for _ in range(nb)]
    for a in range(nb):
        for b in range(a, nb):
            for c in range(b, nb):
                r = D.median_idx(ids[a], ids[b], ids[c])
                for i, j, k in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
                    med[i][j][k] = r
    bad = []
    count = 0
    for a in range(nb):
        for b in range(nb):
            for c in range(nb):
                count += 1
                r = D._median_eval(wordlist[a], wordlist[b], wordlist[c])
                if r != med[a][b][c]:
                    bad.append((a, b, c))
    rep.record("symmetry", count, bad)
    bad = [(a, b) for a in range(nb) for b in range(nb) if med[a][b][a] != ids[a]]
    rep.record("absorption", nb * nb, bad)

    # self-distributivity: full five-variable sweep at its own radius
    m3_words = ball(ctx, m3_radius)
    m3_ids = [D.intern(w) for w in m3_words]
    nm = len(m3_ids)
    memo = D._memo
    eval_idx = D.median_idx
    bad = []
    count = 0
    for ai in range(nm):
        a_id = m3_ids[ai]
        for bi in range(ai, nm):
            b_id = m3_ids[bi]
            for ui in range(nm):
                u_id = m3_ids[ui]
                for vi in range(ui, nm):
                    v_id = m3_ids[vi]
                    m_auv = eval_idx(a_id, u_id, v_id)
                    m_buv = eval_idx(b_id, u_id, v_id)
                    for ci in range(nm):
                        count += 1
                        c_id = m3_ids[ci]
                        lhs = eval_idx(eval_idx(a_id, b_id, c_id), u_id, v_id)
                        rhs = eval_idx(m_auv, m_buv, c_id)
                        if lhs != rhs:
                            bad.append((ai, bi, ci, ui, vi))
    rep.record("self_distributivity", count, bad)

    # left compatibility: s * median = median of translates
    cw = ball(ctx, compat_radius)
    bad = []
    count = 0
    for sword in cw:
        strans = [D.intern(mul(ctx, sword, w)) for w in wordlist]
        for a in range(nb):
            for b in range(a, nb):
                for c in range(b, nb):
                    count += 1
                    lhs = D.intern(mul(ctx, sword, D.word(med[a][b][c])))
                    rhs = D.median_idx(strans[a], strans[b], strans[c])
                    if lhs != rhs:
                        bad.append((sword, a, b, c))
    rep.record("left_compatibility", count, bad)

    # the retraction is a folding with image X
    bad = []
    count = 0
    emb_ids = [D.intern(e) for e in D._emb]
    retract_of = [retract_id(ctx, w) for w in wordlist]
    for a in range(nb):
        fa = emb_ids[retract_of[a]]
        for c in range(a, nb):
            fc = emb_ids[retract_of[c]]
            for b in range(nb):
                count += 1
                lhs = emb_ids[retract_id(ctx, D.word(med[a][b][c]))]
                rhs = D.median_idx(fa, ids[b], fc)
                if lhs != rhs:
                    bad.append((a, b, c))
    rep.record("folding", count, bad)

    # meet-semilattice conditions for the induced meet
    one = D.intern(())
    cap = [[0] * nb for _ in range(nb)]
    for a in range(nb):
        for b in range(a, nb):
            r = D.median_idx(ids[a], one, ids[b])
            cap[a][b] = cap[b][a] = r
            direct = D.intern(D.meet(wordlist[a], wordlist[b]))
            if direct != r:
                rep.violations.setdefault("meet_formula", []).append((a, b))
    rep.checks["meet_formula"] = nb * (nb + 1) // 2
    bad = [a for a in range(nb) if cap[a][a] != ids[a]]
    rep.record("meet_idempotent", nb, bad)
    bad = [a for a in range(nb) if D.median_idx(one, one, ids[a]) != one]
    rep.record("meet_least", nb, bad)
    bad = []
    count = 0
    for a in range(nb):
        for b in range(a, nb):
            for c in range(b, nb):
                count += 1
                lhs = D.median_idx(cap[a][b], one, ids[c])
                rhs = D.median_idx(ids[a], one, cap[b][c])
                if lhs != rhs:
                    bad.append((a, b, c))
    rep.record("meet_associative", count, bad)

    below = [[cap[a][b] == ids[a] for b in range(nb)] for a in range(nb)]
    # antitone translation: a below b below c forces c^-1 b below c^-1 a
    bad = []
    count = 0
    for a in range(nb):
        for b in range(nb):
            if not below[a][b]:
                continue
            for c in range(nb):
                if not below[b][c]:
                    continue
                count += 1
                ic = inv(ctx, wordlist[c])
                p = mul(ctx, ic, wordlist[b])
                q = mul(ctx, ic, wordlist[a])
                if not D.below(p, q):
                    bad.append((a, b, c))
    rep.record("order_antitone", count, bad)
    # the meet pulls back below the quotient
    bad = []
    for a in range(nb):
        ia = inv(ctx, wordlist[a])
        for b in range(nb):
            p = mul(ctx, ia, D.word(cap[a][b]))
            q = mul(ctx, ia, wordlist[b])
            if not D.below(p, q):
                bad.append((a, b))
    rep.record("meet_pullback", nb * nb, bad)

    # agreement of the three order characterizations
    bad = []
    for a in range(nb):
        for b in range(nb):
            r1 = below[a][b]
            r2 = D.below(wordlist[a], wordlist[b])
            r3 = D.below_by_search(wordlist[a], wordlist[b])
            r4 = D.below_by_config(wordlist[a], wordlist[b])
            if not (r1 == r2 == r3 == r4):
                bad.append((a, b, r1, r2, r3, r4))
    rep.record("order_agreement", nb * nb, bad)

    # tree order refines the deformed order when the basepoint sits in
    # the connecting interval
    bad = []
    count = 0
    for a in range(nb):
        for b in range(nb):
            u, v = wordlist[a], wordlist[b]
            if not leq(u, v):
                continue
            lo = retract_id(ctx, inv(ctx, u))
            hi = retract_id(ctx, v[len(u):])
            if (M.interval_mask(lo, hi) >> 0) & 1:
                count += 1
                if not below[a][b]:
                    bad.append((a, b))
    rep.record("order_deformation", count, bad)

    # cells: fixed-point description and the translated-ball oracle; local
    # linearity is preserved cell by cell when the table is locally linear
    ll = is_locally_linear(M)
    cell_words = ball(ctx, cell_radius)
    oracle_balls: dict[int, Optional[list[Word]]] = {}
    bad = []
    bad_ll = []
    count = 0
    for u in cell_words:
        for v in cell_words:
            count += 1
            cellset = set(D.cell(u, v))
            for z in cellset:
                if D.median(u, v, z) != z:
                    bad.append((u, v, z, "member-not-fixed"))
            rel_len = len(mul(ctx, inv(ctx, u), v))
            if rel_len not in oracle_balls:
                try:
                    oracle_balls[rel_len] = ball(ctx, rel_len + 2, limit=cell_oracle_limit)
                except ValueError:
                    oracle_balls[rel_len] = None
            oracle = oracle_balls[rel_len]
            if oracle is not None:
                for b in oracle:
                    z = mul(ctx, u, b)
                    if (z in cellset) != (D.median(u, v, z) == z):
                        bad.append((u, v, z, "oracle-mismatch"))
            if ll:
                for c in cellset:
                    left = {z for z in cellset if D.median(u, c, z) == z}
                    right = {z for z in cellset if D.median(c, v, z) == z}
                    if left | right != cellset:
                        bad_ll.append((u, v, c))
    rep.record("cells", count, bad)
    if ll:
        rep.record("local_linearity_preserved", count, bad_ll)

    # configuration chain: landings ascend in the deformed order
    bad = []
    count = 0
    for v in cell_words:
        if v == ():
            continue
        cfg = D.configuration(v)
        chain = list(cfg.landings) + [v]
        if cfg.landings[0] != ():
            bad.append((v, "first-landing"))
        for lo_w, hi_w in zip(chain, chain[1:]):
            count += 1
            if not D.below(lo_w, hi_w):
                bad.append((v, lo_w, hi_w))
    rep.record("configuration_chain", count, bad)
    return rep


# enumeration ------------------------------------------------------------

def _orbit_sorted_triple(group: CayleyGroup, k: int, h: int, t: tuple[int, int, int]):
    moved = tuple(sorted(group.mul(h, x // k) * k + x % k for x in t))
    return moved


def enumerate_compatible_medians(group: CayleyGroup, index_count: int) -> list[MedianAlgebra]:
    """All H-compatible median tables on X = H x I, by assigning values on
    sorted distinct triples (symmetry and absorption force the rest),
    propagating along H-orbits and pruning with partial instances of the
    short self-distributivity law."""
    k = index_count
    n = group.order
    s = n * k
    if s > ENUM_X_LIMIT:
        raise ValueError(f"orbit set too large to enumerate (limit {ENUM_X_LIMIT})")

    def act(h: int, x: int) -> int:
        return group.mul(h, x // k) * k + x % k

    triples = list(combinations(range(s), 3))
    orbit_of: dict[tuple[int, int, int], list[tuple[int, tuple[int, int, int]]]] = {}
    seen: set[tuple[int, int, int]] = set()
    reps: list[tuple[int, int, int]] = []
    for t in triples:
        if t in seen:
            continue
        orbit = []
        for h in range(n):
            moved = tuple(sorted(act(h, x) for x in t))
            orbit.append((h, moved))
            seen.add(moved)
        reps.append(t)
        orbit_of[t] = orbit

    results: list[MedianAlgebra] = []
    assign: dict[tuple[int, int, int], int] = {}

    def lookup(x: int, y: int, z: int) -> Optional[int]:
        if x == y or x == z:
            return x
        if y == z:
            return y
        return assign.get(tuple(sorted((x, y, z))))

    def partial_ok() -> bool:
        # short self-distributivity: m(m(x,u,v), m(y,u,v), x) = m(x,u,v)
        for x, y, u, v in product(range(s), repeat=4):
            a = lookup(x, u, v)
            if a is None:
                continue
            b = lookup(y, u, v)
            if b is None:
                continue
            c = lookup(a, b, x)
            if c is not None and c != a:
                return False
        return True

    def dfs(i: int) -> None:
        if i == len(reps):
            table = [
                lookup(x, y, z)
                for x in range(s) for y in range(s) for z in range(s)
            ]
            M = MedianAlgebra(s, table, checked=False)
            if check_median_axioms(s, M.table).ok:
                report = check_compat(group, k, M)
                if report.ok:
                    results.append(MedianAlgebra(s, table))
            return
        rep = reps[i]
        for v in range(s):
            placed = []
            conflict = False
            for h, moved in orbit_of[rep]:
                hv = act(h, v)
                cur = assign.get(moved)
                if cur is None:
                    assign[moved] = hv
                    placed.append(moved)
                elif cur != hv:
                    conflict = True
                    break
            if not conflict and partial_ok():
                dfs(i + 1)
            for key in placed:
                del assign[key]

    dfs(0)
    return results


def classify_median_algebra(M: MedianAlgebra) -> str:
    """Shape of a small median algebra from its covering graph."""
    n = M.size
    edges = [
        (x, y) for x in range(n) for y in range(x + 1, n)
        if M.interval_mask(x, y) == (1 << x) | (1 << y)
    ]
    deg = [0] * n
    for x, y in edges:
        deg[x] += 1
        deg[y] += 1
    if n == 1:
        return "point"
    if n == 2:
        return "segment"
    if len(edges) == n - 1:
        return "star" if max(deg) == n - 1 and n > 3 else "chain"
    if len(edges) == n and all(d == 2 for d in deg):
        return "square" if n == 4 else "cycle"
    return "other"


# median group operations on a finite group -------------------------------

def enumerate_group_medians(group: CayleyGroup) -> list[MedianAlgebra]:
    """All median group operations on the group, by backtracking over the
    meet table x ^ y = m(x, 1, y) under the order-theoretic conditions:
    a meet-semilattice with least element 1, the antitone translation law,
    and the meet pulling back below the quotient."""
    n = group.order
    if n > ENUM_GROUP_LIMIT:
        raise ValueError(f"group too large to search (limit {ENUM_GROUP_LIMIT})")
    cay = group.table
    ginv = group.inverse

    keys = [(a, b) for a in range(1, n) for b in range(a + 1, n)]

    def key(a: int, b: int):
        return (a, b) if a < b else (b, a)

    results: list[MedianAlgebra] = []

    def propagate(assign: dict, rels: set, queue: list) -> bool:
        while queue:
            a, b, v = queue.pop()
            if a == b:
                if v != a:
                    return False
                continue
            if a == 0 or b == 0:
                if v != 0:
                    return False
                continue
            kk = key(a, b)
            cur = assign.get(kk)
            if cur is not None:
                if cur != v:
                    return False
                continue
            assign[kk] = v
            # the meet lies below both arguments
            if v != a:
                queue.append((v, a, v))
            if v != b:
                queue.append((v, b, v))
            # new order relations from this entry
            new_rels = []
            if v == a:
                new_rels.append((a, b))
            if v == b:
                new_rels.append((b, a))
            # condition (4) both ways: x^-1 (x ^ y) below x^-1 y
            for x, y in ((a, b), (b, a)):
                p = cay[ginv[x]][v]
                q = cay[ginv[x]][y]
                if p != q:
                    queue.append((p, q, p))
            for lo, hi in new_rels:
                if (hi, lo) in rels and lo != hi:
                    return False
                if (lo, hi) in rels:
                    continue
                rels.add((lo, hi))
                # transitivity
                for (x, y) in list(rels):
                    if x == hi:
                        queue.append((lo, y, lo))
                    if y == lo:
                        queue.append((x, hi, x))
                # antitone translation: x below y below z forces
                # z^-1 y below z^-1 x
                for (x, y) in list(rels):
                    if y == lo:  # x below lo below hi
                        g = ginv[hi]
                        queue.append((cay[g][lo], cay[g][x], cay[g][lo]))
                    if x == hi:  # lo below hi below y
                        g = ginv[y]
                        queue.append((cay[g][hi], cay[g][lo], cay[g][hi]))
            # associativity propagation through every triple with this pair
            for z in range(n):
                for x, y, w in ((a, b, z), (z, a, b), (b, z, a)):
                    xy = _cap_get(assign, x, y)
                    yz = _cap_get(assign, y, z)
                    if xy is None or yz is None:
                        continue
                    lhs = _cap_get(assign, xy, z)
                    rhs = _cap_get(assign, x, yz)
                    if lhs is not None and rhs is not None:
                        if lhs != rhs:
                            return False
                    elif lhs is not None:
                        queue.append((x, yz, lhs))
                    elif rhs is not None:
                        queue.append((xy, z, rhs))
        return True

    def dfs(assign: dict, rels: set) -> None:
        missing = [kk for kk in keys if kk not in assign]
        if not missing:
            if _finalize(group, assign, results):
                pass
            return
        kk = missing[0]
        for v in range(n):
            a2 = dict(assign)
            r2 = set(rels)
            if propagate(a2, r2, [(kk[0], kk[1], v)]):
                dfs(a2, r2)

    base_rels = {(0, x) for x in range(n)} | {(x, x) for x in range(n)}
    dfs({}, base_rels)
    uniq = []
    seen_tables = set()
    for M in results:
        if M.table not in seen_tables:
            seen_tables.add(M.table)
            uniq.append(M)
    return uniq


def _cap_get(assign: dict, a: int, b: int) -> Optional[int]:
    if a == b:
        return a
    if a == 0 or b == 0:
        return 0
    return assign.get((a, b) if a < b else (b, a))


def _finalize(group: CayleyGroup, assign: dict, results: list) -> bool:
    """Reconstruct the ternary operation from a complete meet table and
    keep it when all checks pass."""
    n = group.order
    cay = group.table
    ginv = group.inverse

    def cap(a: int, b: int) -> int:
        v = _cap_get(assign, a, b)
        assert v is not None
        return v

    def below(a: int, b: int) -> bool:
        return cap(a, b) == a

    # greatest-lower-bound property
    for a in range(n):
        for b in range(n):
            v = cap(a, b)
            for w in range(n):
                if below(w, a) and below(w, b) and not below(w, v):
                    return False

    def med(x: int, y: int, z: int) -> int:
        return cay[x][cap(cay[ginv[x]][y], cay[ginv[x]][z])]

    for x, y, z in product(range(n), repeat=3):
        m1 = med(x, y, z)
        m2 = cay[y][cap(cay[ginv[y]][x], cay[ginv[y]][z])]
        m3 = cay[z][cap(cay[ginv[z]][x], cay[ginv[z]][y])]
        if not (m1 == m2 == m3):
            return False

    table = [med(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
    if not check_median_axioms(n, table).ok:
        return False
    for u, x, y, z in product(range(n), repeat=4):
        if cay[u][table[(x * n + y) * n + z]] != table[
            (cay[u][x] * n + cay[u][y]) * n + cay[u][z]
        ]:
            return False
    results.append(MedianAlgebra(n, table))
    return True


def admissible_retractions(group: CayleyGroup, x_mask: int):
    """Surjective retractions of the group onto a generating subset
    containing 1, paired with the median group operations for which the
    subset is retractible convex with that folding."""
    n = group.order
    if n > ENUM_GROUP_LIMIT:
        raise ValueError(f"group too large (limit {ENUM_GROUP_LIMIT})")
    if not (x_mask >> 0) & 1:
        raise ValueError("the subset must contain the identity")
    xs = list(iter_bits(x_mask))
    closure = {0}
    frontier = {0}
    while frontier:
        new = set()
        for g in closure:
            for x in xs:
                for cand in (group.mul(g, x), group.mul(g, group.inverse[x])):
                    if cand not in closure:
                        new.add(cand)
        closure |= new
        frontier = new
    if len(closure) != n:
        raise ValueError("the subset must generate the group")

    ops = enumerate_group_medians(group)
    outside = [g for g in range(n) if not (x_mask >> g) & 1]
    admissible = []
    for values in product(xs, repeat=len(outside)):
        phi = list(range(n))
        for g, v in zip(outside, values):
            phi[g] = v
        matched = [M for M in ops if is_folding(M, phi)]
        if matched:
            admissible.append((tuple(phi), matched))
    return admissible
