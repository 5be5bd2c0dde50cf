"""Counting where two Blaschke products fail to separate points.

For f, g of degrees m and n, the pairs (lam, mu) with f(lam) = f(mu) and
g(lam) = g(mu), off the diagonal, are the common zeros of two symmetric
polynomials F and G. Points in the bidisk count fully, torus points count
half, and the total is always (m-1)(n-1) unless g is a function of f.
"""
import numpy as np

from hypcurve import BlaschkePair, BlaschkeProduct, solve_pair
from hypcurve.intersection import build_F, codim_alg, infinity_multiplicity

# the cusp: z^2 and z^3 only fail to separate at the origin, doubly
cusp = BlaschkePair(BlaschkeProduct((0, 0)), BlaschkeProduct((0, 0, 0)))
print("F for z^2:", build_F(cusp.f))
rep = solve_pair(cusp)
print("z^2, z^3 ->", [(p.lam, p.mu, p.multiplicity) for p in rep.points], "N =", rep.N, "codim =", rep.codim)

# g = f^2 generates nothing new: the intersection is a whole curve
rep = solve_pair(BlaschkePair(BlaschkeProduct((0, 0)), BlaschkeProduct((0,) * 4)))
print("z^2, z^4 -> degenerate:", rep.degenerate, "codim:", rep.codim)

# a random pair of degrees 3 and 4
rng = np.random.default_rng(1)


def zeros(k):
    return tuple(0.8 * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k)))


pair = BlaschkePair(BlaschkeProduct(zeros(3)), BlaschkeProduct(zeros(4)))
rep = solve_pair(pair)
print(f"\nrandom (3,4) pair: N = {rep.N} (expected {(3 - 1) * (4 - 1)}), r = {rep.r}, codim = {codim_alg(pair)}")
for p in rep.points:
    print(f"  {p.region}  lam={p.lam:.4f}  mu={p.mu:.4f}  mult={p.multiplicity}")

# points in the bidisk reflect to points outside it: (1/conj(lam), 1/conj(mu))
inside = rep.points_in("DD")
outside = rep.points_in("EE")
print(f"{len(inside)} points in the bidisk, {len(outside)} outside")

# Bezout: ordered affine solutions plus both points at infinity fill (2m-2)(2n-2)
inf = infinity_multiplicity(pair)
print(f"affine {rep.affine_multiplicity} + 2 x infinity {inf} = {rep.affine_multiplicity + 2 * inf} "
      f"= {4 * (pair.m - 1) * (pair.n - 1)}")
