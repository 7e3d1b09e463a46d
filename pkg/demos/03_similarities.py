# # Lorentz transformations and Poincare similarities
#
# A Poincare similarity is r -> k Q r + a with k > 0 and Q preserving q.

import numpy as np

from lightcone import (
    apply_similarity,
    boost,
    compose,
    decompose_similarity,
    fit_affine,
    invert,
    is_lorentz,
    q,
    random_similarity,
    spatial_rotation,
)

B = boost(3, 0.7)
R = spatial_rotation((1, 2), np.pi / 3)
print(is_lorentz(B), is_lorentz(R), is_lorentz(np.diag([1.0, 1, 1, 2])))
print(q(B @ [3.0, 4.0, 0.0, 5.0]))  # a boosted null vector stays null

ps = random_similarity(7)
print("k =", ps.k)
print(np.round(ps.Q, 4))

# Similarities compose and invert.

r = np.array([1.0, 2.0, 3.0, 4.0])
print(apply_similarity(compose(ps, invert(ps)), r))

# ## Recovering a similarity from samples
#
# Least squares gives the affine map, then k = |det L|^(1/4) and Q = L / k.

rng = np.random.default_rng(0)
X = rng.uniform(-10, 10, (512, 4))
am, residual = fit_affine(X, ps(X))
got = decompose_similarity(am)
print("residual", residual)
print("k error", abs(got.k - ps.k), "Q error", np.linalg.norm(got.Q - ps.Q))
