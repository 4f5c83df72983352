"""Stock graphs, maps and towers used across tests, demos and docs."""

from __future__ import annotations

from .branched_graph import BranchedGraph, CellularMap


def circle() -> BranchedGraph:
    """One vertex, one loop e; sides {e+} / {e-}."""
    return BranchedGraph(
        vertices={"v"},
        edges={"e": ("v", "v")},
        sides={"v": ({("e", "+")}, {("e", "-")})},
    )


def circle_double() -> CellularMap:
    """The degree-two self-cover of the circle: e -> ee."""
    g = circle()
    return CellularMap(g, g, {"v": "v"}, {"e": (("e", 1), ("e", 1))})


def figure_eight() -> BranchedGraph:
    """Wedge of two circles at w; sides {a+, b+} / {a-, b-}."""
    return BranchedGraph(
        vertices={"w"},
        edges={"a": ("w", "w"), "b": ("w", "w")},
        sides={
            "w": (
                {("a", "+"), ("b", "+")},
                {("a", "-"), ("b", "-")},
            )
        },
    )


def figure_eight_double() -> CellularMap:
    """Squaring on both petals: a -> aa, b -> bb.  Not flattening."""
    g = figure_eight()
    return CellularMap(
        g,
        g,
        {"w": "w"},
        {"a": (("a", 1), ("a", 1)), "b": (("b", 1), ("b", 1))},
    )


def collapse_to_circle() -> CellularMap:
    """Figure-eight onto the circle, both petals to the loop.  Flattening."""
    return CellularMap(
        figure_eight(),
        circle(),
        {"w": "v"},
        {"a": (("e", 1),), "b": (("e", 1),)},
    )


def rose(petals: tuple[str, ...] = ("a", "b")) -> BranchedGraph:
    """Wedge of loops at a single vertex; sides = starts / ends."""
    return BranchedGraph(
        vertices={"w"},
        edges={e: ("w", "w") for e in petals},
        sides={
            "w": (
                {(e, "+") for e in petals},
                {(e, "-") for e in petals},
            )
        },
    )


def rose_self_map(words: dict[str, str]) -> CellularMap:
    """Self-map of the rose on ``words``'s keys, each petal to a forward word.

    Any assignment of nonempty forward words is side coherent, which makes
    this the workhorse for randomized system generation.
    """
    g = rose(tuple(sorted(words)))
    emap = {e: tuple((d, 1) for d in w) for e, w in words.items()}
    return CellularMap(g, g, {"w": "w"}, emap)
