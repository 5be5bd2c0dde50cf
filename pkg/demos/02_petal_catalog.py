"""Petals of codimension one and two, built and checked.

Each petal is a subalgebra of the disk algebra cut out by a few local
conditions, realized as the pullback of polynomials through a map from the
disk into C^2 or C^3 that glues the points the conditions tie together.
"""
import math

import numpy as np

from hypcurve import petals as P

grid = P.sample_grid()

# a cusp: f'(alpha) = 0, realized on the Neil parabola z^3 = w^2
h = P.neil_holization(0.4 - 0.2j)
z, w = h.components[0](grid), h.components[1](grid)
print("cusp: max |z^3 - w^2| =", np.max(np.abs(z**3 - w**2)))
print("      derivative at alpha:", h.jacobian(0.4 - 0.2j))

# a crossing glues two points; the hyperbolic distance is a complete invariant
h = P.single_crossing_holization(0.3, -0.3)
print("\ncrossing: h(0.3) =", h(0.3), " h(-0.3) =", h(-0.3))
print("          invariant:", P.single_crossing_invariant(0.3, -0.3))

# a triple point needs three dimensions: three tangent lines in C^2 are dependent
M = P.triple_point_jacobian_closed_form(0.5, -0.5)
print("\ntriple point Jacobian rows:\n", np.round(M, 4), "\n  det =", np.linalg.det(M))

# two crossings realized by a degree (2,5) pair when m_a1 m_a2 is level on {b1, b2}
args = (0.5, -0.5, 1j / 3, -1j / 3)
print("\ntwo crossings: level condition", P.two_crossing_condition(*args))
h = P.two_crossing_holization(*args)
print("  h(b1) - h(b2) =", h(1j / 3) - h(-1j / 3))

# a nodal cubic and the three-point algebra with a derivative tie
h = P.nodal_cubic_fixture()
s = 1 / math.sqrt(2)
print("\nnodal cubic: h(1/sqrt2) =", h(s), " h(-1/sqrt2) =", h(-s))
h = P.a3_fixture()
for k, c in enumerate(h.components):
    ok, res = P.verify_membership(c, P.a3_connection())
    print(f"A3 component {k}: member={ok}, residuals={res}")
