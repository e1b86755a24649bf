"""
Divisors, support functions and polytopes
=========================================

A torus-invariant divisor sum a_i D_i defines the polytope
P_D = {u : <u, v_i> >= -a_i}.  Its lattice points count global sections,
and positivity of D shows up as convexity of the support function.
"""

from fractions import Fraction

from torickit import (
    LatticePolytope,
    TWeilDivisor,
    cartier_from_weil,
    class_group,
    divisor_polytope,
    euler_sections_identity,
    normal_fan,
    positivity_report,
    projective_space_fan,
    support_function,
    weighted_projective_fan,
)

p2 = projective_space_fan(2)
print("Cl(P2) =", class_group(p2).group)

# the hyperplane class D3 and its local characters u(sigma)
d3 = TWeilDivisor(p2, (0, 0, 1))
c = cartier_from_weil(d3)
for cone, u in c.local_data.items():
    print("cone", cone, "u =", u)

rep = positivity_report(d3)
print("ample:", rep["ample"], " very ample:", rep["very_ample"])
print("P_D vertices:", [tuple(int(x) for x in v) for v in divisor_polytope(c).vertices])

# sections of O(2) on P2: six monomials of degree two
c2 = cartier_from_weil(TWeilDivisor(p2, (0, 0, 2)))
print(euler_sections_identity(c2))

# the support function is linear on each cone
psi = support_function(c)
for v in [(1, 0), (0, 1), (-1, -1), (Fraction(-1, 2), Fraction(1, 3))]:
    print(f"psi({', '.join(map(str, v))}) =", psi(v))

# on P(1,1,2) the divisor D1 is only Q-Cartier
f = weighted_projective_fan(1, 1, 2)
for mult in (1, 2):
    r = positivity_report(TWeilDivisor(f, (mult, 0, 0)))
    print(f"{mult}D1 Cartier:", r["cartier"] is True)

# going the other way: a lattice polygon gives a fan and an ample divisor
hexagon = LatticePolytope.from_points([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])
print("normal fan of the hexagon has", len(normal_fan(hexagon).rays), "rays")
