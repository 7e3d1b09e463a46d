import numpy as np
import pytest

from lightcone.mesh import icosphere, is_watertight, signed_solid_angles, sphere_map_degree


def riemann_map(f, v):
    """Push the unit vectors ``v`` through ``f`` acting on the Riemann sphere."""
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (v[:, 0] + 1j * v[:, 1]) / (1 - v[:, 2])
        w = f(z)
        d = 1 + np.abs(w) ** 2
        out = np.stack([2 * w.real / d, 2 * w.imag / d, (np.abs(w) ** 2 - 1) / d], axis=1)
    out[~np.isfinite(out).all(axis=1)] = [0, 0, 1]
    return out


@pytest.mark.parametrize("level", [0, 1, 3, 5])
def test_icosphere_structure(level):
    m = icosphere(level)
    assert len(m.vertices) == 10 * 4**level + 2
    assert len(m.triangles) == 20 * 4**level
    assert m.subdivision_level == level
    assert np.abs(np.linalg.norm(m.vertices, axis=1) - 1).max() <= 1e-12
    assert is_watertight(m)
    # outward orientation: the solid angles of the identity add up to +4 pi
    assert signed_solid_angles(m.vertices, m.triangles).sum() == pytest.approx(4 * np.pi)


def test_watertight_detects_hole():
    m = icosphere(1)
    holed = type(m)(m.vertices, m.triangles[1:], 1)
    assert not is_watertight(holed)


def test_degree_examples():
    m = icosphere(5)
    for images, want in ((m.vertices, 1), (-m.vertices, -1),
                         (np.tile([0.0, 0.0, 1.0], (len(m.vertices), 1)), 0)):
        res = sphere_map_degree(images, m)
        assert res.degree == want and res.quality
        assert abs(res.raw - want) < 1e-9


def test_degree_rotation_and_reflection():
    m = icosphere(3)
    rng = np.random.default_rng(0)
    R, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    R *= np.sign(np.linalg.det(R))
    assert sphere_map_degree(m.vertices @ R.T, m).degree == 1
    F = np.diag([1.0, 1.0, -1.0])
    assert sphere_map_degree(m.vertices @ (R @ F).T, m).degree == -1


def test_degree_against_riemann_sphere_maps():
    # independent oracle: z -> z^k has degree k, z -> conj(z) has degree -1
    m = icosphere(5)
    assert sphere_map_degree(riemann_map(lambda z: z**2, m.vertices), m).degree == 2
    assert sphere_map_degree(riemann_map(np.conj, m.vertices), m).degree == -1
    res = sphere_map_degree(riemann_map(lambda z: z**3, m.vertices), m)
    assert res.degree == 3 and res.quality


def test_quality_flag_on_coarse_mesh():
    m = icosphere(0)
    res = sphere_map_degree(riemann_map(lambda z: z**4, m.vertices), m)
    assert not res.quality


def test_shape_mismatch():
    with pytest.raises(ValueError):
        sphere_map_degree(np.zeros((3, 3)), icosphere(1))
