"""Approximant towers of the Fibonacci subshift.

Level k of the tower is the de-Bruijn-style complex on legal words: vertices
are the words of length 2k, edges the words of length 2k+1, and the bonding
map just forgets one letter per side.  Forgetting is independent of how the
window extends, so every bond is flattening and the tower's limit is the
suspension of the subshift.
"""

from laminate.approximants import (
    approximant_system,
    bonding_map,
    build_approximant,
    quotient_cell,
    separation_depth,
)
from laminate.branched_graph import is_flattening
from laminate.formats import export_dot
from laminate.inverse_system import is_flattening_system
from laminate.subshift import LanguageOracle, fibonacci

oracle = LanguageOracle.from_substitution(fibonacci())

print("factor counts (Sturmian: length + 1):")
print(" ", [len(oracle.words(L)) for L in range(9)])
print()

for k in range(4):
    c = build_approximant(oracle, k)
    print(
        f"approximant k={k}: {len(c.graph.vertices)} vertices, "
        f"{len(c.graph.edges)} edges, bond flattening: "
        f"{is_flattening(bonding_map(oracle, k))}"
    )
print()
print("tower verdict:", is_flattening_system(approximant_system(oracle), 5))
print()

w = "aabab"
print(f"quotient cells of the marked word {w}@2:")
for k in range(2):
    print(f"  radius {k}: edge {quotient_cell(oracle, k, w, 2)!r}")
print()

x, y = ("aabaa", 2), ("aabab", 2)
print(
    f"separation of {x[0]}@{x[1]} and {y[0]}@{y[1]}:",
    separation_depth(oracle, x[0], x[1], y[0], y[1], 2),
    "(windows agree up to radius 1, split at radius 2)",
)
print()
print("k=1 complex as DOT:")
print(export_dot(build_approximant(oracle, 1).graph, name="fibonacci_k1"))
