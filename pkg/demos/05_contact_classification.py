"""
Toric contact manifolds
=======================

A smooth complete toric variety of dimension 2n+1 carrying a contact
structure is either projective space or the projectivised tangent bundle
of a product of projective lines.  A necessary condition is that the
anticanonical class be divisible by n+1.
"""

from torickit import (
    classify_contact,
    contact_index_check,
    euler_characteristic,
    product_fan,
    projective_space_fan,
    projectivized_tangent_fan,
)
from torickit.moment import contact_line_bundle

p1 = projective_space_fan(1)
cases = {
    "P3": projective_space_fan(3),
    "P5": projective_space_fan(5),
    "P(T) over P1 x P1": projectivized_tangent_fan(2),
    "P(T) over (P1)^3": projectivized_tangent_fan(3),
    "P1 x P2": product_fan(p1, projective_space_fan(2)),
}
for name, f in cases.items():
    r = classify_contact(f)
    print(f"{name:18s} index={r.index!s:4s} {r.verdict}")

# the tangent bundle model, built from its fan
f = projectivized_tangent_fan(2)
print("rays:", len(f.rays), " chi:", euler_characteristic(f))
print("-K divisible by", contact_index_check(f))
print("a contact line bundle L with 2L = -K:", contact_line_bundle(f).coeffs)

# the witness matrix carries the reference fan onto the input
r = classify_contact(f)
print(r.isomorphic_to, r.witness_matrix)
