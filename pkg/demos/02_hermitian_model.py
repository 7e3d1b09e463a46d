# # Events as 2x2 Hermitian matrices
#
# (x, y, z, t) maps to [[t+z, x+iy], [x-iy, t-z]]. The determinant of the
# matrix equals q of the event, and coherency becomes "the difference has rank one".

import numpy as np

from lightcone import (
    Herm2,
    decompose_similarity,
    event_to_herm,
    herm_to_event,
    is_adjacent,
    q,
    rank2,
    standard_preserver,
    standard_preserver_as_affine,
    trace_degenerate_preserver,
)

A = event_to_herm([1, 2, 3, 5])
print(A.to_matrix(), A.det(), q([1, 2, 3, 5]))
print(herm_to_event(A))

# Rank of the difference versus the adjacency predicate on random pairs.

rng = np.random.default_rng(1)
r1 = rng.uniform(-10, 10, (5, 4))
r2 = r1 + rng.uniform(-3, 3, (5, 1)) * np.c_[rng.standard_normal((5, 3)), np.zeros(5)]
r2[:, 3] = r1[:, 3] + np.linalg.norm(r2[:, :3] - r1[:, :3], axis=1)
print(is_adjacent(r1, r2), rank2(event_to_herm(r1) - event_to_herm(r2)))

# ## Standard preservers
#
# A -> c T A T* + S keeps rank-one differences rank one. Pulled back to events
# it is a Poincare similarity with scale |det T|.

T = np.array([[1.0 + 0.5j, 0.2], [0.0, 2.0 - 1j]])
S = Herm2(0.5, -1.0, 0.25, 0.0)
out = standard_preserver(1, T, S, False, A)
print(out.to_matrix())
ps = decompose_similarity(standard_preserver_as_affine(1, T, S))
print("k =", ps.k, "|det T| =", abs(np.linalg.det(T)))

# ## A degenerate preserver
#
# A -> tr(A) R + S with R a rank-one projection sends everything onto one null line.

R = Herm2(1.0, 0.0, 0.0, 0.0)
print(trace_degenerate_preserver(R, Herm2(0.0, 0.0, 0.0, 0.0), Herm2(2.0, 3.0, 0.0, 0.0)).to_matrix())
