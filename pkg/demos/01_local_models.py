"""Local branched models: gluing disks along sector complements.

A local model is a directed tree whose vertices carry sectors (interiors of
intersections of half-spaces through the origin).  Over each disk point x,
vertex copies glue together whenever an edge's source sector misses x.  The
branch locus is where the number of glue classes jumps, and probing it with
exact rational points is how the rest of the package thinks about branching.
"""

from fractions import Fraction as F

from laminate.local_model import (
    BranchTree,
    HalfSpace,
    Sector,
    class_count_profile,
    glue_classes,
)

# The three-disk model: two upper disks glued onto a lower one away from an
# open quadrant.  Inside the quadrant all three sheets stay apart.
quadrant = Sector(2, (HalfSpace((1, 0)), HalfSpace((0, -1))))  # x > 0, y < 0
tree = BranchTree(
    dimension=2,
    vertices=("v0", "v1", "v2"),
    edges=(("v1", "v0"), ("v2", "v0")),
    sector_of={"v0": Sector(2), "v1": quadrant, "v2": quadrant},
)

print("three-sheet model over the unit disk")
print("sector: open quadrant x > 0, y < 0 at both upper vertices")
print()

samples = [
    (F(1, 2), F(-1, 2)),   # inside the quadrant: sheets stay apart
    (F(-1, 2), F(1, 2)),   # opposite quadrant: everything glued
    (F(1, 2), F(1, 2)),    # y > 0: glued as well
    (F(0), F(0)),          # the origin lies on every bounding hyperplane
]
for x in samples:
    blocks = glue_classes(tree, x)
    pretty = ", ".join("{" + ", ".join(sorted(b)) + "}" for b in blocks)
    print(f"  at ({x[0]}, {x[1]}): {len(blocks)} classes  {pretty}")

print()
print("class-count profile along a path crossing the branch locus:")
path = [(F(t, 10), F(-1, 2)) for t in range(-5, 6, 2)]
print(" ", class_count_profile(tree, path))
print("the jump from 1 to 3 classes marks the boundary of the sector")
