"""Cayley-table groups and reduced words in the free product of a finite
group H with a free group on the non-basepoint orbit indices.

Letters are encoded as ints: H-letters are their nonzero Cayley ids
1..n-1, the free generator for orbit index i (2 <= i <= k) is n + i - 2,
and its inverse is the negative.  A word is a tuple of letters in
reduced normal form: no adjacent H-letters, no cancelling generator
pair.  All values are immutable and all operations pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Word = tuple[int, ...]
XPoint = tuple[int, int]  # (H element id, orbit index 1..k); (0, 1) is the basepoint

_GEN_NAMES = "ijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class CayleyGroup:
    """A finite group as a Cayley table with identity id 0."""

    order: int
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    element_orders: tuple[int, ...]

    @staticmethod
    def from_table(table: Sequence[Sequence[int]]) -> "CayleyGroup":
        n = len(table)
        if n < 1:
            raise ValueError("empty group")
        rows = tuple(tuple(int(v) for v in row) for row in table)
        for row in rows:
            if len(row) != n or any(not (0 <= v < n) for v in row):
                raise ValueError("malformed Cayley table")
        for x in range(n):
            if rows[0][x] != x or rows[x][0] != x:
                raise ValueError("identity must have id 0")
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if rows[rows[x][y]][z] != rows[x][rows[y][z]]:
                        raise ValueError(f"not associative at ({x},{y},{z})")
        inv = []
        for x in range(n):
            cands = [y for y in range(n) if rows[x][y] == 0 and rows[y][x] == 0]
            if len(cands) != 1:
                raise ValueError(f"element {x} lacks a unique inverse")
            inv.append(cands[0])
        orders = []
        for x in range(n):
            p, o = x, 1
            while p != 0:
                p = rows[p][x]
                o += 1
            orders.append(o if x else 1)
        return CayleyGroup(n, rows, tuple(inv), tuple(orders))

    @staticmethod
    def cyclic(n: int) -> "CayleyGroup":
        return CayleyGroup.from_table([[(i + j) % n for j in range(n)] for i in range(n)])

    @staticmethod
    def trivial() -> "CayleyGroup":
        return CayleyGroup.cyclic(1)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def group_from_json(data: dict) -> CayleyGroup:
    if int(data["order"]) != len(data["table"]):
        raise ValueError("order does not match table")
    return CayleyGroup.from_table(data["table"])


def group_to_json(G: CayleyGroup) -> dict:
    return {"order": G.order, "table": [list(r) for r in G.table]}


def load_group(path: str) -> CayleyGroup:
    with open(path, "r", encoding="utf-8") as fh:
        return group_from_json(json.load(fh))


@dataclass(frozen=True)
class WordContext:
    """A group H together with the orbit index count k (index 1 is the
    basepoint orbit, so there are k-1 free generators)."""

    group: CayleyGroup
    index_count: int

    def __post_init__(self):
        if self.index_count < 1:
            raise ValueError("need at least the basepoint orbit")

    @property
    def gen_base(self) -> int:
        return self.group.order

    def generators(self) -> list[int]:
        n = self.group.order
        return [n + t for t in range(self.index_count - 1)]

    def letters(self) -> list[int]:
        """The generating alphabet: H-letters and free generators both ways."""
        hs = list(range(1, self.group.order))
        gens = self.generators()
        return hs + gens + [-g for g in gens]

    def is_h_letter(self, a: int) -> bool:
        return 0 < a < self.group.order

    def x_size(self) -> int:
        return self.group.order * self.index_count


def normalize(ctx: WordContext, letters: Iterable[int]) -> Word:
    """Reduced normal form: merge adjacent H-letters through the Cayley
    table (dropping identities) and cancel adjacent inverse generators."""
    n = ctx.group.order
    top = n + ctx.index_count - 1
    table = ctx.group.table
    out: list[int] = []
    for a in letters:
        if a == 0:
            continue
        if 0 < a < n:
            if out and 0 < out[-1] < n:
                merged = table[out[-1]][a]
                out.pop()
                if merged:
                    out.append(merged)
            else:
                out.append(a)
        elif n <= abs(a) < top:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        else:
            raise ValueError(f"unknown letter {a}")
    return tuple(out)


def inv(ctx: WordContext, w: Word) -> Word:
    n = ctx.group.order
    ginv = ctx.group.inverse
    return tuple(ginv[a] if 0 < a < n else -a for a in reversed(w))


def mul(ctx: WordContext, *ws: Word) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return normalize(ctx, out)


def word_length(w: Word) -> int:
    return len(w)


def leq(u: Word, v: Word) -> bool:
    """Tree order: u is a prefix of v's normal form."""
    return len(u) <= len(v) and v[: len(u)] == u


def meet(u: Word, v: Word) -> Word:
    i = 0
    n = min(len(u), len(v))
    while i < n and u[i] == v[i]:
        i += 1
    return u[:i]


def tree_median(u: Word, v: Word, w: Word) -> Word:
    """Median of the rooted word tree: the longest pairwise common prefix."""
    a, b, c = meet(u, v), meet(v, w), meet(w, u)
    best = a
    if len(b) > len(best):
        best = b
    if len(c) > len(best):
        best = c
    return best


def origin(w: Word) -> int:
    return w[0] if w else 0


def retract(ctx: WordContext, w: Word) -> XPoint:
    """The greatest point of X below w in the tree order."""
    n = ctx.group.order
    if not w:
        return (0, 1)
    a = w[0]
    if 0 < a < n:
        if len(w) >= 2 and w[1] >= n:
            return (a, w[1] - n + 2)
        return (a, 1)
    if a >= n:
        return (0, a - n + 2)
    return (0, 1)


def retract_h(ctx: WordContext, w: Word) -> int:
    """The H-component at the origin: o(w) when it is an H-letter, else 1."""
    if w and 0 < w[0] < ctx.group.order:
        return w[0]
    return 0


def embed(ctx: WordContext, xp: XPoint) -> Word:
    h, i = xp
    if not (0 <= h < ctx.group.order and 1 <= i <= ctx.index_count):
        raise ValueError(f"X point {xp} out of range")
    letters: list[int] = []
    if h:
        letters.append(h)
    if i > 1:
        letters.append(ctx.group.order + i - 2)
    return tuple(letters)


def xpoint_id(ctx: WordContext, xp: XPoint) -> int:
    h, i = xp
    return h * ctx.index_count + (i - 1)


def xpoint_from_id(ctx: WordContext, xid: int) -> XPoint:
    k = ctx.index_count
    return (xid // k, xid % k + 1)


def retract_id(ctx: WordContext, w: Word) -> int:
    return xpoint_id(ctx, retract(ctx, w))


def xid_of_word(ctx: WordContext, w: Word) -> Optional[int]:
    """The X id of a word that embeds a point of X, if it does."""
    n, k = ctx.group.order, ctx.index_count
    if not w:
        return 0
    if len(w) == 1:
        a = w[0]
        if 0 < a < n:
            return a * k
        if a >= n:
            return a - n + 1
        return None
    if len(w) == 2 and 0 < w[0] < n and w[1] >= n:
        return w[0] * k + (w[1] - n + 1)
    return None


def letter_sort_key(ctx: WordContext, a: int) -> tuple[int, int]:
    if 0 < a < ctx.group.order:
        return (0, a)
    if a > 0:
        return (1, a)
    return (2, -a)


def word_sort_key(ctx: WordContext, w: Word):
    return (len(w), tuple(letter_sort_key(ctx, a) for a in w))


def ball(ctx: WordContext, radius: int, limit: int = 200000) -> list[Word]:
    """All reduced words of length <= radius, sorted by (length, letters)."""
    words: list[Word] = [()]
    frontier: list[Word] = [()]
    n = ctx.group.order
    gens = ctx.generators()
    hs = list(range(1, n))
    for _ in range(radius):
        new: list[Word] = []
        for w in frontier:
            last = w[-1] if w else 0
            if not (0 < last < n):
                for h in hs:
                    new.append(w + (h,))
            for g in gens:
                if last != -g:
                    new.append(w + (g,))
                if last != g:
                    new.append(w + (-g,))
        words.extend(new)
        if len(words) > limit:
            raise ValueError(f"ball exceeds {limit} words")
        frontier = new
    words.sort(key=lambda w: word_sort_key(ctx, w))
    return words


def ball_count(ctx: WordContext, radius: int) -> int:
    """Ball size by the child-count recursion, independent of generation:
    a word ending in an H-letter has 2(k-1) reduced extensions, a word
    ending in a generator has (n-1) + 2(k-1) - 1, and the root has
    (n-1) + 2(k-1)."""
    n = ctx.group.order
    g2 = 2 * (ctx.index_count - 1)
    total = 1
    # counts of length-L words by last-letter kind
    cur_root, cur_h, cur_gen = 1, 0, 0
    for _ in range(radius):
        nxt_h = (cur_root + cur_gen) * (n - 1)
        nxt_gen = (cur_root + cur_h) * g2 + (cur_gen * (g2 - 1) if g2 else 0)
        cur_root, cur_h, cur_gen = 0, nxt_h, nxt_gen
        total += cur_h + cur_gen
    return total


def word_to_text(ctx: WordContext, w: Word) -> str:
    if not w:
        return "1"
    parts: list[str] = []
    i = 0
    while i < len(w):
        a = w[i]
        if 0 < a < ctx.group.order:
            parts.append(f"h{a}")
            i += 1
            continue
        j = i
        while j < len(w) and w[j] == a:
            j += 1
        count = j - i
        name = _GEN_NAMES[abs(a) - ctx.group.order]
        power = count if a > 0 else -count
        parts.append(name if power == 1 else f"{name}^{power}")
        i = j
    return " ".join(parts)


def word_from_text(ctx: WordContext, text: str) -> Word:
    letters: list[int] = []
    for token in text.split():
        if token == "1":
            continue
        name, _, exp = token.partition("^")
        power = int(exp) if exp else 1
        if name.startswith("h") and name[1:].isdigit():
            h = int(name[1:])
            if not (1 <= h < ctx.group.order):
                raise ValueError(f"H letter {token!r} out of range")
            base: int = h
            is_gen = False
        else:
            if len(name) != 1 or name not in _GEN_NAMES:
                raise ValueError(f"unknown token {token!r}")
            t = _GEN_NAMES.index(name)
            if t >= ctx.index_count - 1:
                raise ValueError(f"generator {token!r} out of range")
            base = ctx.group.order + t
            is_gen = True
        if power == 0:
            continue
        letter = base if power > 0 else (-base if is_gen else ctx.group.inverse[base])
        for _ in range(abs(power)):
            letters.append(letter)
    return normalize(ctx, letters)


def mul_factorization(ctx: WordContext, u: Word, v: Word) -> tuple[Word, int, Word]:
    """Diagnostic factorization of a product: returns (u2, h, v2) with
    u*v = u2 . h . v2 as a reduced concatenation, so the lengths add.

    The cancelling tail of u and head of v are stripped first; the two
    H-letters meeting at the junction merge into h (id 0 when absent).
    """
    n = ctx.group.order
    a = meet(inv(ctx, u), v)
    u1 = u[: len(u) - len(a)]
    v1 = v[len(a):]
    tail_h = u1[-1] if (u1 and 0 < u1[-1] < n) else 0
    head_h = v1[0] if (v1 and 0 < v1[0] < n) else 0
    u2 = u1[:-1] if tail_h else u1
    v2 = v1[1:] if head_h else v1
    return u2, ctx.group.mul(tail_h, head_h), v2


def has_free_median_action(G: CayleyGroup) -> tuple[bool, Optional[int]]:
    """Whether every element order is a power of two; that is exactly the
    condition for a free action on some nonempty median algebra.

    On failure returns a witness of odd prime order p (so witness**p = 1
    with witness != 1)."""
    for g in range(1, G.order):
        o = G.element_orders[g]
        if o & (o - 1):
            p = 3
            while o % p:
                p += 2
            witness = g
            for _ in range((o // p) - 1):
                witness = G.mul(witness, g)
            # witness = g**(o/p) has exact order p
            return False, witness
    return True, None


def free_median_fixed_point(G: CayleyGroup):
    """Search the free median algebra over the group's elements for a
    nontrivial stabilized element under left translation.

    Returns (g, element) or None; None exactly when every element order
    is a power of two.
    """
    from .bits import iter_bits
    from .freemedian import canonical_family, fms_enumerate

    if G.order > 4:
        raise ValueError("fixed-point search limited to groups of order <= 4")
    elements = fms_enumerate(G.order)
    for g in range(1, G.order):
        for e in elements:
            moved = canonical_family(
                sum(1 << G.mul(g, b) for b in iter_bits(f)) for f in e.family
            )
            if moved == e.family:
                return g, e
    return None
