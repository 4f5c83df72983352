"""Covering towers, deck groups, and the invariant transverse metric.

A tower of regular coverings turns the transversal over the base point into
a profinite group: coherent tuples of deck transformations, one per level.
The cyclic towers below realize truncated 2-adic (and mixed-radix) integers,
the monodromy representation sends the base loop to (1, 1, ...), and the
product metric weighted by 2^{-k} is invariant under left translation --
which is the computable face of equicontinuity.
"""

from fractions import Fraction as F
from random import Random

from laminate.coverings import cyclic_tower
from laminate.profinite import (
    QuotientHom,
    SuspensionPoint,
    delta_infinity_rep,
    metric,
    profinite_id,
    profinite_inv,
    profinite_mul,
    profinite_pow,
    suspension_act,
)

dyadic = cyclic_tower([2] * 10)
K = 10
gen = delta_infinity_rep(dyadic, ((0, 1),), K)

print("dyadic tower: levels are cycle graphs of sizes", dyadic.sizes[:6], "...")
print("generator loop represents as", [gen.basepoint_image(k) for k in range(1, 7)],
      "... (1 in every nontrivial quotient)")
print()

x = profinite_pow(gen, 5)
y = profinite_pow(gen, 12)
z = profinite_mul(x, y)
print("gen^5 * gen^12 per level:", [z.basepoint_image(k) for k in range(1, 8)])
print("matches 17 mod 2^(k-1):  ", [17 % dyadic.sizes[k - 1] for k in range(1, 8)])
print("inverse of gen^5:        ",
      [profinite_inv(x).basepoint_image(k) for k in range(1, 8)])
print()

ident = profinite_id(dyadic, K)
d = metric(gen, ident)
print("d(gen, id) =", d.partial_sum, "=", F(1, 2) - F(1, 2 ** K),
      "with tail below", d.error_bound)
rng = Random(0)
invariant = all(
    metric(profinite_mul(h, u), profinite_mul(h, v)).partial_sum
    == metric(u, v).partial_sum
    for h, u, v in (
        tuple(profinite_pow(gen, rng.randrange(1024)) for _ in range(3))
        for _ in range(100)
    )
)
print("left invariance on 100 random triples:", invariant)
print()

hom = QuotientHom(dyadic, 4)
print("connecting homomorphism at level 4:", hom.verify())
print()

mixed = cyclic_tower([2, 3, 2, 3])
print("mixed tower sizes:", mixed.sizes, "(truncated mod 2, 6, 12, 36 integers)")
g2 = delta_infinity_rep(mixed, ((0, 1),), 5)
s = profinite_mul(profinite_pow(g2, 7), profinite_pow(g2, 11))
print("gen^7 * gen^11 :", [s.basepoint_image(k) for k in range(1, 6)],
      "= 18 mod", mixed.sizes)
print()

point = SuspensionPoint((), profinite_id(dyadic, 6))
moved = suspension_act(dyadic, ((0, 1),), point)
print("suspension action of the generator on (base point, identity fiber):")
print("  leaf walk:", moved.walk, " fiber:",
      [moved.fiber.basepoint_image(k) for k in range(1, 7)])
