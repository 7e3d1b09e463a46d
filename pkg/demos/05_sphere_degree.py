# # The induced sphere map and its degree
#
# A coherency preserver sends each null line through a to a null line through
# phi(a). Directions of null lines form a 2-sphere, so phi induces a sphere
# map. For a similarity its degree is +1 or -1 and does not depend on a.

import numpy as np

from lightcone import PoincareSimilarity, compose, degree, icosphere, random_similarity

mesh = icosphere(5)
print(len(mesh.vertices), "vertices,", len(mesh.triangles), "triangles")

ident = PoincareSimilarity.identity()
reflect = PoincareSimilarity(1.0, np.diag([-1.0, -1, -1, 1]), np.zeros(4))
print(degree(ident, np.zeros(4), mesh))
print(degree(reflect, np.zeros(4), mesh))

rng = np.random.default_rng(3)
ps = random_similarity(3)
for a in rng.uniform(-10, 10, (3, 4)):
    print(degree(ps, a, mesh).degree, degree(compose(ps, reflect), a, mesh).degree)
