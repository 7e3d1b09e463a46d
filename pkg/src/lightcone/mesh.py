"""Icosphere meshes of S^2 and the degree of sphere self-maps.

The degree of a map ``f: S^2 -> S^2`` sampled at mesh vertices is the total
signed solid angle of the image triangles divided by ``4 pi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class SphereMesh:
    vertices: np.ndarray  # (V, 3) unit vectors
    triangles: np.ndarray  # (F, 3) vertex indices, outward (counter-clockwise) order
    subdivision_level: int


def _icosahedron():
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return v / np.linalg.norm(v, axis=1, keepdims=True), f


def _subdivide(verts: list, faces: np.ndarray) -> np.ndarray:
    cache: dict[tuple[int, int], int] = {}

    def midpoint(i, j):
        key = (i, j) if i < j else (j, i)
        idx = cache.get(key)
        if idx is None:
            m = verts[i] + verts[j]
            verts.append(m / np.linalg.norm(m))
            idx = cache[key] = len(verts) - 1
        return idx

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return np.array(out)


@lru_cache(maxsize=8)
def icosphere(level: int = 5) -> SphereMesh:
    """Icosahedron refined ``level`` times; ``20 * 4**level`` triangles."""
    if level < 0:
        raise ValueError("level must be non-negative")
    v, f = _icosahedron()
    verts = list(v)
    for _ in range(level):
        f = _subdivide(verts, f)
    v = np.array(verts)
    # orient every triangle outward
    flip = np.einsum("ij,ij->i", v[f[:, 0]], np.cross(v[f[:, 1]], v[f[:, 2]])) < 0
    f[flip] = f[flip][:, [0, 2, 1]]
    v.setflags(write=False)
    f.setflags(write=False)
    return SphereMesh(v, f, level)


def is_watertight(mesh: SphereMesh) -> bool:
    """Every directed edge appears once and its reverse appears once."""
    f = mesh.triangles
    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    directed = set(map(tuple, edges.tolist()))
    if len(directed) != len(edges):
        return False
    return all((j, i) in directed for i, j in directed)


def signed_solid_angles(images: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Signed area of each spherical triangle (Van Oosterom-Strackee formula)."""
    a = images[triangles[:, 0]]
    b = images[triangles[:, 1]]
    c = images[triangles[:, 2]]
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) \
        + np.einsum("ij,ij->i", c, a)
    return 2.0 * np.arctan2(num, den)


def max_image_diameter(images: np.ndarray, triangles: np.ndarray) -> float:
    """Largest great-circle distance between two vertices of one image triangle."""
    a = images[triangles[:, 0]]
    b = images[triangles[:, 1]]
    c = images[triangles[:, 2]]
    cos = np.minimum.reduce([
        np.einsum("ij,ij->i", a, b),
        np.einsum("ij,ij->i", b, c),
        np.einsum("ij,ij->i", c, a),
    ])
    return float(np.arccos(np.clip(cos.min(), -1.0, 1.0))) if len(cos) else 0.0


@dataclass(frozen=True)
class DegreeResult:
    degree: int
    raw: float
    quality: bool
    max_diameter: float

    def to_dict(self) -> dict:
        return {"degree": self.degree, "raw": self.raw, "quality": self.quality,
                "max_diameter": self.max_diameter}


def sphere_map_degree(images, mesh: SphereMesh, max_diameter: float = np.pi / 2,
                      max_defect: float = 0.1) -> DegreeResult:
    """Degree of the sphere map taking ``mesh.vertices[i]`` to ``images[i]``.

    ``quality`` is false when the total signed area is more than
    ``max_defect`` away from an integer multiple of ``4 pi`` or when an image
    triangle is wider than ``max_diameter``: then the mesh is too coarse for
    the map and the integer should not be trusted.
    """
    images = np.asarray(images, dtype=float)
    if images.shape != mesh.vertices.shape:
        raise ValueError("need one unit vector per mesh vertex")
    images = images / np.linalg.norm(images, axis=1, keepdims=True)
    raw = float(signed_solid_angles(images, mesh.triangles).sum() / (4.0 * np.pi))
    deg = int(round(raw))
    diam = max_image_diameter(images, mesh.triangles)
    quality = abs(raw - deg) <= max_defect and diam <= max_diameter
    return DegreeResult(deg, raw, bool(quality), diam)
