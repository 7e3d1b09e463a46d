# # Degenerate coherency preservers
#
# Send everything to a vertex, except on small balls where the map slides
# along one null ray with a tent-shaped amplitude. If no event of one ball is
# coherent with an event of another, coherency is preserved.

import numpy as np

from lightcone import (
    EpsilonTooLarge,
    build_default,
    check_coherency_preservation,
    constant_line_detect,
    make_direction,
    q,
    validate_spec,
)

spec = build_default(5, 0.2, vertex=[1.0, 2.0, 3.0, 4.0], rng_seed=0)
report = validate_spec(spec)
print("valid:", report.valid)
for pair in report.pairs[:3]:
    print(pair.j, pair.k, pair.spatial_interval, pair.time_interval)

# Every output lies on the light cone of the vertex.

rng = np.random.default_rng(1)
r = rng.uniform(-1, 5, (10000, 4)) * [1, 0.1, 0.1, 0.1]
print("max |q(phi(r) - vertex)|:", np.abs(q(spec(r) - spec.vertex)).max())

print(check_coherency_preservation(spec, rng=0, count=10**5, scale=4.0).passed)

# With unit spacing the patches stop being separated at radius 1/4.

try:
    build_default(5, 0.3)
except EpsilonTooLarge as exc:
    print("rejected:", exc)

# Lines that miss the patches are collapsed to the vertex.

print(constant_line_detect(spec, [0, 50, 0, 0], make_direction([0.0, 0.0, 1.0])))
