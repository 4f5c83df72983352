"""Exact clopen-set algebra on the Fibonacci transversal.

Transversal points are bi-infinite legal sequences marked at a tile.
Cylinders pin a finite window around the mark; expanding every cylinder to
a common window radius makes all boolean operations exact set computations.
Holonomy in a one-dimensional suspension is generated by the tile shifts,
and words with equal net displacement act identically: the leaves are lines.
"""

from laminate.subshift import LanguageOracle, fibonacci
from laminate.transversal import (
    ClopenSet,
    Cylinder,
    HolonomyWord,
    canonicalize,
    complement,
    compose_holonomy,
    intersect,
    is_equal,
    shift,
    shift_set,
    union,
)

oracle = LanguageOracle.from_substitution(fibonacci())

a0 = ClopenSet.from_cylinder(oracle, Cylinder("a", 0))
b0 = ClopenSet.from_cylinder(oracle, Cylinder("b", 0))

print("cylinder [a@0] expanded to window radius 1:")
print(" ", sorted(canonicalize(a0, 1).windows))
print("letters partition the transversal:",
      is_equal(union(a0, b0), ClopenSet.whole(oracle)),
      "/ disjoint:", intersect(a0, b0).is_empty())
print()

ab0 = ClopenSet.from_cylinder(oracle, Cylinder("ab", 0))
b_right = shift_set(b0, -1)  # points seeing b one tile to the right
print("[a@0] meet shifted [b@0] equals [ab@0]:",
      is_equal(intersect(a0, b_right), ab0))
print("complement of [a@0] equals [b@0]:", is_equal(complement(a0), b0))
print()

image, word = shift(ab0, 1)
print("shift by +1 moves the mark: [ab@0] ->",
      sorted(str(c) for c in
             ClopenSet.from_cylinder(oracle, Cylinder("ab", 1)).cylinders()),
      "equal:", is_equal(image, ClopenSet.from_cylinder(oracle, Cylinder("ab", 1))))

round_trip = compose_holonomy([word, word.inverse()])
print("a shift word composed with its reverse: displacement",
      round_trip.displacement, "on its original domain:",
      is_equal(round_trip.domain, ab0))
print()

whole = ClopenSet.whole(oracle)
zigzag = compose_holonomy(
    [HolonomyWord((s,), whole) for s in (1, 1, -1, 1)]
)
straight = compose_holonomy([HolonomyWord((1,), whole), HolonomyWord((1,), whole)])
print("zigzag (+1,+1,-1,+1) versus straight (+1,+1):")
probe = ClopenSet.from_cylinder(oracle, Cylinder("bab", 1))
print("  same action on [bab@1]:",
      is_equal(zigzag.apply(probe), straight.apply(probe)),
      "(path independence: equal net displacement, equal holonomy)")
