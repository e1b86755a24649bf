"""
Fans, invariants and toric surfaces
===================================

Complete fans glue affine charts into compact varieties.  This script
computes the standard invariants of a few of them, then looks at smooth
surfaces through blow-downs and at singular ones through their resolution.
"""

from torickit import (
    Cone,
    Fan,
    classify_smooth_surface,
    euler_characteristic,
    fundamental_group,
    hirzebruch_fan,
    hirzebruch_jung,
    product_fan,
    projective_space_fan,
    resolve_2d,
    subdivide_at,
    validate,
    weighted_projective_fan,
)

zoo = {
    "P2": projective_space_fan(2),
    "P1 x P1": product_fan(projective_space_fan(1), projective_space_fan(1)),
    "F1": hirzebruch_fan(1),
    "P(1,1,2)": weighted_projective_fan(1, 1, 2),
}
for name, f in zoo.items():
    print(f"{name:9s} smooth={f.is_smooth()!s:5s} chi={euler_characteristic(f)} pi1={fundamental_group(f)}")

# an incomplete fan whose rays do not span N has a finite fundamental group
f = Fan(2, [(0, 1), (2, 1)], [(0,), (1,)])
print("pi1 of the two-ray fan:", fundamental_group(f))

# validation explains what is wrong with a bad fan
bad = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
print(validate(bad))

# F1 is P2 blown up at a point, so one blow-down recovers P2
red = classify_smooth_surface(hirzebruch_fan(1))
print("F1 blows down to", red.label, "removing", red.removed)

# blowing P2 up three times and back down again
g = projective_space_fan(2)
for v in [(1, 1), (2, 1), (-1, 0)]:
    g = subdivide_at(g, v)
red = classify_smooth_surface(g)
print(f"{len(g.rays)} rays blow down to {red.label} in {len(red.removed)} steps")

# a cyclic quotient singularity and its minimal resolution
m, k = 7, 3
print(f"{m}/{k} =", hirzebruch_jung(m, k))
res = resolve_2d(Cone.generated_by([(0, 1), (m, -k)]))
print("exceptional rays:", [v for v in res.rays if v not in [(0, 1), (m, -k)]])
print("resolution smooth:", res.is_smooth())
