"""The solenoid against the figure-eight: why flattening decides everything.

Both spaces are inverse limits of a one-vertex graph under a degree-two
self-cover.  The circle tower is a lamination (locally disk x Cantor set);
the figure-eight tower is not, because the squaring map never irons out the
wedge point.  The system-level test reproduces both verdicts and exhibits
the certificates.
"""

from fractions import Fraction as F

from laminate import fixtures
from laminate.inverse_system import (
    EdgePoint,
    InverseSystem,
    NotLocallyTrivial,
    VertexCell,
    enumerate_threads,
    is_flattening_system,
    local_box,
)

solenoid = InverseSystem.stationary(fixtures.circle_double())
figure_eight = InverseSystem.stationary(fixtures.figure_eight_double())

print("solenoid (circle, z -> z^2):")
print(" ", is_flattening_system(solenoid, window=8))
print()
print("figure-eight (both petals squared):")
verdict = is_flattening_system(figure_eight, window=8)
print(" ", type(verdict).__name__, "at vertex", verdict.witness.vertex)
for germ in verdict.witness.germs:
    print("   invariant smooth section through", germ.a, "and", germ.b)
print()

# Product structure over a small disk: the loop's interior in the circle
# tower decomposes into 2^k affine copies of itself at level k.
center = EdgePoint("e", F(1, 2))
thread = enumerate_threads(solenoid, 6, center)[0]
box = local_box(solenoid, thread, 0)
print("solenoid local box over the loop's interior:", box.counts())
print("matching thread counts:",
      {k: len(enumerate_threads(solenoid, k, center)) for k in range(1, 7)})
print()

# The same probe fails on the figure-eight: the star of the wedge vertex
# never trivializes, which is precisely the flattening failure.
w_thread = enumerate_threads(figure_eight, 3, VertexCell("w"))[0]
try:
    local_box(figure_eight, w_thread, 0)
except NotLocallyTrivial as err:
    print("figure-eight local box:", err)
