"""
Cones, duals and Hilbert bases
==============================

An affine toric variety is read off a single cone: its dual cone gives the
characters, the Hilbert basis gives coordinate functions and the binomial
relations among them cut out the variety.
"""

from torickit import Cone, binomial_relations, dual_cone, faces, hilbert_basis

# the A1 singularity: the cone spanned by (1, 0) and (1, 2)
sigma = Cone.generated_by([(1, 0), (1, 2)])
print("smooth:", sigma.is_smooth(), " simplicial:", sigma.is_simplicial())

# its dual lives in M and is again a 2D cone
dual = dual_cone(sigma)
print("dual rays:", dual.rays)

# three generators are needed, one more than the dimension
h = hilbert_basis(dual)
print("Hilbert basis:", h.elements)

# so the chart embeds in C^3 as the quadric cone Y1*Y3 = Y2^2
for rel in binomial_relations(h):
    print("relation:", rel)

# faces of sigma correspond to torus orbits of the chart
for tau in faces(sigma):
    print("face of dim", tau.dim, tau.rays)

# a non-simplicial example: the cone over a unit square has a fifth
# Hilbert basis element in its interior
square = Cone.generated_by([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
print("square cone:", sorted(hilbert_basis(square).elements))
