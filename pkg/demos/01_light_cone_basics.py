# # Light cones and coherent events
#
# Events are 4-vectors (x, y, z, t) with the time coordinate last. Two events
# are coherent when their difference is a null vector, q(r) = t^2 - x^2 - y^2 - z^2 = 0.

import numpy as np

from lightcone import (
    find_common_coherent,
    find_transversal_coherent,
    is_coherent,
    make_direction,
    project_to_section,
    q,
)

print(q([3, 4, 0, 5]), q([1, 2, 3, 5]))  # 0 (null) and 11 (timelike)

# Points of a line a + t p with p null are pairwise coherent.

a = np.array([1.0, -2.0, 0.5, 3.0])
p = make_direction([0.6, 0.0, 0.8])
print(p, is_coherent(a, a + 2.5 * p))

# Projecting back onto the cone section recovers the direction of the line.

print(project_to_section(a, a - 4.0 * p))

# ## A common coherent event
#
# Any two events have a third event coherent with both, no further from the
# first than the second is.

x = np.array([0.0, 0.0, 0.0, 0.0])
y = np.array([0.0, 0.0, 3.0, 5.0])
z = find_common_coherent(x, y)
print(z, q(z - x), q(z - y))

# The vectorised form handles many pairs at once.

rng = np.random.default_rng(0)
X, Y = rng.uniform(-10, 10, (2, 10000, 4))
Z = find_common_coherent(X, Y)
print("worst residual:", np.abs(q(Z - X)).max(), np.abs(q(Z - Y)).max())

# ## A non-null event coherent with three null ones
#
# For null a, b, c through the origin that are not on one line, some d with
# q(d) != 0 is coherent with all three.

a, b, c = np.array([[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 0, 1]], dtype=float)
d = find_transversal_coherent(a, b, c)
print(d, q(d), [q(d - v) for v in (a, b, c)])
