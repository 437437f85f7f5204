"""The three translation-compatible medians on the integers, verified on
finite symmetric windows.

M0 is betweenness for the usual order.  M1 is betweenness for the total
order with evens ascending, odds descending, and every even below every
odd; MM1 is its conjugate under negation.  The middle of three integers
is always one of them, so window sweeps never escape the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Optional


class ZOp(Enum):
    M0 = "m0"
    M1 = "m1"
    MM1 = "m-1"


def _key_m0(x: int):
    return x


def _key_m1(x: int):
    # evens ascending, then odds descending
    return (1, -x) if x & 1 else (0, x)


def z_median(op: ZOp, x: int, y: int, z: int) -> int:
    if op is ZOp.MM1:
        return -z_median(ZOp.M1, -x, -y, -z)
    key = _key_m0 if op is ZOp.M0 else _key_m1
    return sorted((x, y, z), key=key)[1]


def z_interval(op: ZOp, a: int, b: int, window: int) -> list[int]:
    return [z for z in range(-window, window + 1) if z_median(op, a, b, z) == z]


@dataclass(frozen=True)
class WindowReport:
    ok: bool
    checks: int
    violation: Optional[tuple]


def window_verify(op: ZOp, window: int, full_m3_window: int = 6) -> WindowReport:
    """Median axioms and translation compatibility on [-window, window].

    Self-distributivity is checked through its four-variable equivalent
    over the full window and through the five-variable law over a
    smaller window; translation compatibility skips tuples whose
    translate leaves the window.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    rng = range(-window, window + 1)
    med = {}
    for x, y, z in product(rng, repeat=3):
        med[(x, y, z)] = z_median(op, x, y, z)
    checks = 0
    for x, y, z in product(rng, repeat=3):
        checks += 1
        v = med[(x, y, z)]
        if v != med[(y, x, z)] or v != med[(x, z, y)]:
            return WindowReport(False, checks, ("M1", (x, y, z)))
        if v not in (x, y, z):
            return WindowReport(False, checks, ("closure", (x, y, z)))
    for x, y in product(rng, repeat=2):
        checks += 1
        if med[(x, y, x)] != x:
            return WindowReport(False, checks, ("M2", (x, y)))
    # short form: m(m(x,u,v), m(y,u,v), x) = m(x,u,v)
    for x, y, u, v in product(rng, repeat=4):
        checks += 1
        a = med[(x, u, v)]
        if med[(a, med[(y, u, v)], x)] != a:
            return WindowReport(False, checks, ("M3'", (x, y, u, v)))
    small = range(-min(window, full_m3_window), min(window, full_m3_window) + 1)
    for x, y, z, u, v in product(small, repeat=5):
        checks += 1
        if med[(med[(x, y, z)], u, v)] != med[(med[(x, u, v)], med[(y, u, v)], z)]:
            return WindowReport(False, checks, ("M3", (x, y, z, u, v)))
    for x, y, z in product(range(-window, window), repeat=3):
        checks += 1
        if med[(x + 1, y + 1, z + 1)] != med[(x, y, z)] + 1:
            return WindowReport(False, checks, ("translation", (x, y, z)))
    return WindowReport(True, checks, None)


def z_retraction(op: ZOp, n: int) -> int:
    """The retraction onto the naturals associated to a compatible median
    for which the naturals are retractible convex.

    For M0 this clamps at zero; for M1 negative evens land on 0 and
    negative odds on 1, the folding n -> m1(0, n, 1).  The conjugate
    median MM1 admits no such retraction.
    """
    if op is ZOp.M0:
        return max(n, 0)
    if op is ZOp.M1:
        if n >= 0:
            return n
        return 1 if n & 1 else 0
    raise ValueError("the naturals are not retractible convex for m-1")


@dataclass(frozen=True)
class QuotientReport:
    ok: bool
    checks: int
    violation: Optional[tuple]


def z_quotient_check(window: int) -> QuotientReport:
    """Evens form a convex median subgroup of (Z, m1) on the window; the
    parity map is a median morphism onto the two-element median group;
    m1 and m-1 restrict to m0 on even arguments."""
    rng = range(-window, window + 1)
    checks = 0
    evens = [x for x in rng if not x & 1]
    for a, b in product(evens, repeat=2):
        checks += 1
        inside = z_interval(ZOp.M1, a, b, window)
        if any(z & 1 for z in inside):
            return QuotientReport(False, checks, ("convexity", (a, b)))
    for x, y, z in product(rng, repeat=3):
        checks += 1
        par = z_median(ZOp.M1, x, y, z) & 1
        maj = ((x & 1) + (y & 1) + (z & 1)) >> 1
        if par != maj:
            return QuotientReport(False, checks, ("parity-morphism", (x, y, z)))
    for x, y, z in product(evens, repeat=3):
        checks += 1
        m0v = z_median(ZOp.M0, x, y, z)
        if z_median(ZOp.M1, x, y, z) != m0v or z_median(ZOp.MM1, x, y, z) != m0v:
            return QuotientReport(False, checks, ("even-restriction", (x, y, z)))
    return QuotientReport(True, checks, None)
