"""When does a holomorphic map carry one glued pair onto another?

A self-map of the disk sending a1, a2 to b1, b2 exists exactly when the
Pick matrix is positive semidefinite, which for one pair is the
Schwarz-Pick inequality on hyperbolic distances.
"""
import numpy as np

from hypcurve.blaschke import hyperbolic_distance
from hypcurve.interpolation import PickProblem, analyze, petal_map_exists, pick_matrix
from hypcurve.petals import single_crossing

p = PickProblem((0, 0.5), (0, 0.4))
print("Pick matrix for 0->0, 0.5->0.4:\n", np.round(pick_matrix(p), 4))
print("verdict:", analyze(p))

src = single_crossing(0.0, 0.7)
for b in [(0.1, 0.3j), (0.0, 0.7j), (-0.8, 0.8)]:
    ok, assignment = petal_map_exists(src.connection, single_crossing(*b).connection)
    print(f"target pair {b}: distance {hyperbolic_distance(*b):.4f} vs "
          f"{hyperbolic_distance(0, 0.7):.4f} -> map exists: {ok} {assignment or ''}")
