"""Shared generators and independent oracles for the test suite.

Oracles here deliberately re-derive results by brute force (transitive
closures, long-word factor collection, modular arithmetic) so the library
is checked against computations that share none of its code paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from random import Random

from laminate.branched_graph import BranchedGraph, CellularMap
from laminate.inverse_system import InverseSystem
from laminate.local_model import BranchTree, HalfSpace, Sector, sector_contains


# -- local model -------------------------------------------------------------

def brute_force_glue_classes(tree: BranchTree, x) -> list[frozenset]:
    """Transitive closure of the generating relation, pair by pair."""
    related = {v: {v} for v in tree.vertices}
    for s, t in tree.edges:
        if not sector_contains(tree.sector_of[s], x):
            related[s].add(t)
            related[t].add(s)
    changed = True
    while changed:
        changed = False
        for v in tree.vertices:
            merged = set(related[v])
            for w in list(related[v]):
                merged |= related[w]
            if merged != related[v]:
                related[v] = merged
                changed = True
    blocks = {frozenset(related[v]) for v in tree.vertices}
    return sorted(blocks, key=lambda b: sorted(map(repr, b)))


def random_branch_tree(rng: Random, max_dim: int = 3, max_vertices: int = 5) -> BranchTree:
    n = rng.randint(1, max_dim)
    size = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(size)]
    edges = []
    for i in range(1, size):
        parent = rng.randrange(i)
        pair = (vertices[i], vertices[parent])
        edges.append(pair if rng.random() < 0.5 else pair[::-1])
    sectors = {}
    for v in vertices:
        halfspaces = []
        for _ in range(rng.randint(0, 3)):
            normal = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
            if any(normal):
                halfspaces.append(HalfSpace(tuple(normal)))
        sectors[v] = Sector(n, tuple(halfspaces))
    return BranchTree(n, tuple(vertices), tuple(edges), sectors)


def random_disk_point(rng: Random, n: int) -> tuple[Fraction, ...]:
    while True:
        point = tuple(
            Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(n)
        )
        if sum(c * c for c in point) <= 1:
            return point


# -- languages ----------------------------------------------------------------

def long_word_factors(rules: dict, seed: str, iterations: int, length: int) -> set:
    """Factors of a long substitution iterate; independent of the oracle."""
    word = seed
    for _ in range(iterations):
        word = "".join(rules[c] for c in word)
    return {word[i : i + length] for i in range(len(word) - length + 1)}


def brute_sft_words(alphabet, forbidden, length: int, margin: int = 8) -> set:
    """Legal words as centers of longer forbidden-free words.

    A word is kept when it extends ``margin`` letters on both sides without
    forbidden factors, which over-approximates bi-extendability well enough
    for the small test systems (margin exceeds any synchronization length
    used here).
    """
    out = set()
    for t in itertools.product(alphabet, repeat=length + 2 * margin):
        w = "".join(t)
        if any(f in w for f in forbidden):
            continue
        out.add(w[margin : margin + length])
    return out


# -- random systems -------------------------------------------------------------

def random_rose_words(rng: Random, petals: tuple[str, ...]) -> dict:
    """Image words for a rose self-map, onto on edges."""
    while True:
        words = {
            e: "".join(rng.choice(petals) for _ in range(rng.randint(1, 3)))
            for e in petals
        }
        if set("".join(words.values())) == set(petals):
            return words


def rose_graph(petals: tuple[str, ...]) -> BranchedGraph:
    return BranchedGraph(
        vertices={"w"},
        edges={e: ("w", "w") for e in petals},
        sides={"w": ({(e, "+") for e in petals}, {(e, "-") for e in petals})},
    )


def rose_map(petals: tuple[str, ...], words: dict) -> CellularMap:
    g = rose_graph(petals)
    return CellularMap(
        g, g, {"w": "w"}, {e: tuple((d, 1) for d in w) for e, w in words.items()}
    )


def cycle_branched(n: int) -> BranchedGraph:
    """Cycle as a branched graph: incoming side A, outgoing side B."""
    vertices = {f"u{i}" for i in range(n)}
    edges = {f"c{i}": (f"u{i}", f"u{(i + 1) % n}") for i in range(n)}
    sides = {
        f"u{i}": (
            {(f"c{(i - 1) % n}", "-")},
            {(f"c{i}", "+")},
        )
        for i in range(n)
    }
    return BranchedGraph(vertices, edges, sides)


def cycle_cover_map(m: int, n: int) -> CellularMap:
    """The covering C_m -> C_n for n dividing m."""
    upper, lower = cycle_branched(m), cycle_branched(n)
    return CellularMap(
        upper,
        lower,
        {f"u{i}": f"u{i % n}" for i in range(m)},
        {f"c{i}": ((f"c{i % n}", 1),) for i in range(m)},
    )


def random_small_system(rng: Random, depth: int = 5) -> InverseSystem:
    """A valid system with levels of at most 4 vertices and 6 edges."""
    kind = rng.randrange(3)
    if kind == 0:
        petals = tuple("ab") if rng.random() < 0.7 else tuple("abc")
        bonds = [
            rose_map(petals, random_rose_words(rng, petals)) for _ in range(depth)
        ]
        return InverseSystem.from_lists([rose_graph(petals)] * (depth + 1), bonds)
    if kind == 1:
        # cycle tower with degrees 1 or 2, capped at 4 vertices
        sizes = [1]
        for _ in range(depth):
            grow = rng.random() < 0.5 and sizes[-1] * 2 <= 4
            sizes.append(sizes[-1] * 2 if grow else sizes[-1])
        levels = [cycle_branched(n) for n in sizes]
        bonds = [cycle_cover_map(m, n) for n, m in zip(sizes, sizes[1:])]
        return InverseSystem.from_lists(levels, bonds)
    petals = tuple("ab")
    bond = rose_map(petals, random_rose_words(rng, petals))
    return InverseSystem.from_lists(
        [rose_graph(petals)] * (depth + 1), [bond] * depth
    )
