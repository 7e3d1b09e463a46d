# # Classifying black-box maps
#
# The classifier checks coherency on sampled pairs, then tries an affine fit
# (similarity) and a light-cone vertex fit (degenerate). Sampling cannot prove
# continuity, so "inconclusive" is a legitimate answer.

import numpy as np

from lightcone import BlackBoxMap, build_default, classify, q, random_similarity
from lightcone.cli import squaring_table

ps = random_similarity(11)
out = classify(ps, rng=0)
print(out.verdict, abs(out.k - ps.k))

spec = build_default(4, 0.15, vertex=[0.5, -1.0, 2.0, 0.0], rng_seed=2)
out = classify(spec, rng=0)
print(out.verdict, out.vertex)

# r -> (q(r), 0, 0, 0) breaks coherency; the witness can be checked by hand.

out = classify(squaring_table(1000, seed=0), rng=0)
w = out.witness
print(out.verdict, q(np.subtract(w["r1"], w["r2"])), w["q_out"])

# Any callable works as a map. An affine map that is not a similarity
# tilts some null directions off the cone and is caught by the check.

shear = BlackBoxMap(lambda r: r + np.c_[np.zeros((len(r), 3)), 0.1 * r[:, 0]])
print(classify(shear, rng=0).verdict)
