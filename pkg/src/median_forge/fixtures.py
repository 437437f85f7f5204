"""Canonical input fixtures: small groups, the worked median tables, the
configuration example word, and an admissible retraction table.

The file writer pins content hashes so golden tests notice drift.
"""

from __future__ import annotations

import hashlib
import json
import os

from .algebra import MedianAlgebra, algebra_to_json, from_function
from .words import CayleyGroup, WordContext, group_to_json


def chain_table(n: int) -> MedianAlgebra:
    return from_function(n, lambda x, y, z: sorted((x, y, z))[1],
                         labels=[str(i) for i in range(n)])


def star_table(n: int, center: int = 0) -> MedianAlgebra:
    def med(x, y, z):
        if x == y or x == z:
            return x
        if y == z:
            return y
        return center

    return from_function(n, med)


def square_table(pairing: tuple[tuple[int, int], tuple[int, int]] = ((0, 2), (1, 3)),
                 labels=None) -> MedianAlgebra:
    """The four-point median algebra with the given opposite pairs."""
    (p, q), (r, s) = pairing
    enc = {p: 0b00, r: 0b01, q: 0b11, s: 0b10}
    dec = {v: k for k, v in enc.items()}

    def med(x, y, z):
        a, b, c = enc[x], enc[y], enc[z]
        return dec[(a & b) | (b & c) | (c & a)]

    return from_function(4, med, labels=labels)


def product_algebra(A: MedianAlgebra, B: MedianAlgebra) -> MedianAlgebra:
    nb = B.size

    def med(x, y, z):
        return A.m(x // nb, y // nb, z // nb) * nb + B.m(x % nb, y % nb, z % nb)

    return from_function(A.size * B.size, med)


def grid_table(rows: int, cols: int) -> MedianAlgebra:
    return product_algebra(chain_table(rows), chain_table(cols))


def cube_table(dim: int) -> MedianAlgebra:
    M = chain_table(2)
    for _ in range(dim - 1):
        M = product_algebra(M, chain_table(2))
    return M


def orbit_tree_table(group: CayleyGroup, index_count: int) -> MedianAlgebra:
    """The median of the underlying rooted tree of the orbit set: the
    basepoint is the root, its orbit hangs off it, and the other orbits
    hang off their H-level point.  Compatible exactly when |H| <= 2."""
    k = index_count
    n = group.order

    def chain(xid: int) -> list[int]:
        h, i = xid // k, xid % k + 1
        out = [0]
        if h:
            out.append(h * k)
        if i > 1:
            out.append(xid)
        return out

    def meet(x: int, y: int) -> int:
        cx, cy = chain(x), chain(y)
        last = 0
        for a, b in zip(cx, cy):
            if a == b:
                last = a
            else:
                break
        return last

    def med(x, y, z):
        ms = [meet(x, y), meet(y, z), meet(z, x)]
        return max(ms, key=lambda v: len(chain(v)))

    return from_function(n * k, med)


def example37_labels() -> list[str]:
    return ["1", "x1", "x2", "x3"]


def example37_tables() -> dict[str, MedianAlgebra]:
    """The seven median tables the worked free-group example catalogs:
    one triangle per center and one square per opposite pairing.
    Ids: 0 = 1, 1 = x1, 2 = x2, 3 = x3."""
    labels = example37_labels()
    out: dict[str, MedianAlgebra] = {}
    for center in range(4):
        verts = [labels[i] for i in range(4) if i != center]
        name = "triangle_" + "_".join(verts)
        out[name] = from_function(
            4,
            lambda x, y, z, c=center: x if x in (y, z) else (y if y == z else c),
            labels=labels,
        )
    for pairing in (((0, 2), (1, 3)), ((0, 1), (2, 3)), ((0, 3), (1, 2))):
        (p, q), (r, s) = pairing
        name = f"square_{labels[p]}_{labels[q]}"
        out[name] = square_table(pairing, labels=labels)
    return out


def config_example_context() -> WordContext:
    """The worked configuration example: H cyclic of order 4, orbits
    {1, i, j}, with the two nontrivial H-letters distinct."""
    return WordContext(CayleyGroup.cyclic(4), 3)


CONFIG_EXAMPLE_WORD = "i^-2 h1 j^3 h3"


def z4_admissible_map() -> dict:
    """The unique admissible retraction of the cyclic group of order 4
    onto {1, g}: the double lands on g, the triple on 1."""
    return {"group": "z4.json", "subset": [0, 1], "map": [0, 1, 1, 0]}


def write_fixtures(out_dir: str) -> dict[str, str]:
    """Write every fixture file and return name -> sha256."""
    os.makedirs(out_dir, exist_ok=True)
    hashes: dict[str, str] = {}

    def emit(name: str, text: str) -> None:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        hashes[name] = hashlib.sha256(text.encode()).hexdigest()

    def emit_json(name: str, data) -> None:
        emit(name, json.dumps(data, indent=2, sort_keys=True) + "\n")

    for n in (1, 2, 3, 4, 5, 8):
        emit_json(f"z{n}.json", group_to_json(CayleyGroup.cyclic(n)))
    klein = CayleyGroup.from_table(
        [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    )
    emit_json("klein.json", group_to_json(klein))

    for name, M in sorted(example37_tables().items()):
        emit_json(f"{name}.json", algebra_to_json(M))
    emit_json("segment.json", algebra_to_json(chain_table(2)))
    emit_json("chain3.json", algebra_to_json(chain_table(3)))
    emit_json("star4.json", algebra_to_json(star_table(4)))
    emit_json("orbit_tree_z2_3.json",
              algebra_to_json(orbit_tree_table(CayleyGroup.cyclic(2), 3)))
    emit("config_example.word", CONFIG_EXAMPLE_WORD + "\n")
    emit_json("z4_admissible.json", z4_admissible_map())
    return hashes
