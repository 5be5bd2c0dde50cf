"""The one-parameter family of second-order cusps f'(0) = 0, f'' + c f''' = 0.

The pair z^4, z^2 m_alpha realizes this algebra when alpha sits on the
circle |alpha - (1 + i)| = 1, which makes g(1) = g(i). Walking the arc shows
which values of |c| are reachable.
"""
import numpy as np

from hypcurve import petals as P
from hypcurve.intersection import BlaschkePair, solve_pair

print(f"stated bound for |c|: {P.CUSP2_BOUND:.6f}")
for phi in np.linspace(np.pi + 0.05, 1.5 * np.pi - 0.05, 7):
    alpha = complex(P.cusp2_arc_point(phi))
    f, g = P.cusp2_pair(alpha)
    rep = solve_pair(BlaschkePair(f, g))
    print(f"|alpha| = {abs(alpha):.4f}  |c| = {abs(P.cusp2_c(alpha)):.4f}  "
          f"g(1)-g(i) = {abs(g(1) - g(1j)):.1e}  r = {rep.r}  codim = {rep.codim}")

val, alpha = P.cusp2_arc_min_modulus()
print(f"\nsmallest |c| on the arc: {val:.6f} at alpha = {alpha:.6f} (|alpha| = {abs(alpha):.6f})")
print("the generated algebra still has codimension two there")

h, c = P.cusp2_holization(0.5)
print("\nprescribed |c| = 0.5 -> realized c =", c)
try:
    P.cusp2_holization(0.2)
except ValueError as exc:
    print("prescribed |c| = 0.2 ->", exc)
