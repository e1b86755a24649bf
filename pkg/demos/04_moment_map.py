"""
The moment map and convexity
============================

For an ample divisor D the map
mu(x) = sum_u |chi^u(x)| u / sum_u |chi^u(x)|, summed over lattice points
of P_D, sends the toric variety onto P_D.  Fixed points land on vertices
and torus orbits land on the relative interiors of faces.
"""

import numpy as np

from torickit import (
    Cone,
    TorusPoint,
    TWeilDivisor,
    cartier_from_weil,
    convexity_report,
    distinguished_point,
    divisor_polytope,
    legendre_map,
    moment_map,
    product_fan,
    projective_retraction,
    projective_space_fan,
    sample_moment_image,
    torus_act,
    torus_embed,
)

p2 = projective_space_fan(2)
c = cartier_from_weil(TWeilDivisor(p2, (0, 0, 1)))
P = divisor_polytope(c)

# the identity of the torus goes to the barycenter
x = torus_embed(TorusPoint.identity(2), Cone.zero(2))
print("mu(1) =", moment_map(x, P, c).mu)

# the three fixed points go to the three vertices
for sigma in p2.maximal_cones:
    print(sigma.rays, "->", moment_map(distinguished_point(sigma), P, c).mu)

# the compact torus acts along the fibres of mu
t = TorusPoint((0.3, -1.2), (0.0, 0.0))
s = TorusPoint((0.0, 0.0), (1.0, 2.5))
a = moment_map(torus_act(t, x), P, c).mu
b = moment_map(torus_act(s * t, x), P, c).mu
print("unit-modulus shift moves mu by", np.max(np.abs(np.subtract(a, b))))

# on projective space this is the familiar retraction
print("(3:4:0) ->", projective_retraction([3, 4, 0]))

# in log coordinates mu is the gradient of a convex function; at r = 40 the
# true value 1 - 4e-18 rounds to 1.0 in double precision
for r in (-5.0, 0.0, 5.0, 40.0):
    print(f"legendre({r}) =", legendre_map([(0,), (1,)], (r,))[0])

# seeded samples on P1 x P1 fill the square and hit every corner
f = product_fan(projective_space_fan(1), projective_space_fan(1))
c = cartier_from_weil(TWeilDivisor(f, (1, 0, 1, 0)))
samples = sample_moment_image(f, c, 2000, seed=0)
rep = convexity_report(samples, divisor_polytope(c))
print(f"{rep.n_samples} points, inside {rep.inside_fraction:.3f}, vertices attained {rep.vertices_attained}")
print("largest gap between samples and the square:", round(rep.hull_gap, 4))
