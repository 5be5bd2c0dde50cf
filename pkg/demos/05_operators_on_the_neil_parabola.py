"""Operator pairs living on the variety z^2 = w^2.

Such pairs satisfy T1^2 = T2^2. The variety is a spectral set exactly when
||T1 + T2 + e^{it}(T1 - T2)|| <= 2 for all t. Commuting unitaries split
into a part where T1 = T2 and a part where T1 = -T2.
"""
import math

import numpy as np

from hypcurve import operators as O

rng = np.random.default_rng(0)
T = O.conjugate_pair(O.unitary_block_pair(O.random_unitary(2, rng), O.random_unitary(3, rng)),
                     O.random_unitary(5, rng))
print("relation residuals:", T.relation_residuals())
print("spectral set test:", O.spectral_set_test(T))
print("Wold splitting:", O.wold_decompose(T).to_json())

# the numerical-radius form of sup ||A + e^{it} B|| <= 1
A = np.array([[0.3, 0.2], [0.0, 0.1]])
B = np.array([[0.1, 0.0], [0.4j, 0.2]])
print("\nlemma sides:", O.lemma_equivalence(A, B), " sup norm:", O.pencil_sup_norm(A, B))
print("numerical radius of a Jordan block:", O.numerical_radius([[0, 1], [0, 0]]))

# extreme points: measures with vanishing first moment on two or three atoms
for atoms in ([0, math.pi], [0, 2 * math.pi / 3, 4 * math.pi / 3], [0, math.pi / 2, math.pi + 0.3]):
    mu = O.herglotz_masses(atoms)
    print("atoms", np.round(atoms, 3), "masses", np.round(mu.masses, 6), "moment", abs(mu.first_moment()))

# a truncated shift pair is not unitary; the block identities become a defect report
S = np.diag(np.ones(3), -1)
print("\ntruncated shift defects:", O.wold_defect_report(O.OperatorPair(S, S)))
