"""Icosphere generation, the built-in test carrier.

Subdividing the icosahedron s times gives 20 * 4**s facets; s=4 yields 5120
facets, enough to hold a 1024-bit payload in every channel of interest.
"""
from __future__ import annotations

import numpy as np

from .model import Facet, StlFormat, StlModel, unit_rhr_normal, vec3

_GOLDEN = (1.0 + 5.0**0.5) / 2.0

_ICO_VERTICES = [
    (-1, _GOLDEN, 0), (1, _GOLDEN, 0), (-1, -_GOLDEN, 0), (1, -_GOLDEN, 0),
    (0, -1, _GOLDEN), (0, 1, _GOLDEN), (0, -1, -_GOLDEN), (0, 1, -_GOLDEN),
    (_GOLDEN, 0, -1), (_GOLDEN, 0, 1), (-_GOLDEN, 0, -1), (-_GOLDEN, 0, 1),
]

_ICO_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def _project(p: np.ndarray, radius: float) -> np.ndarray:
    return p / np.sqrt(p @ p) * radius


def generate_test_mesh(subdivisions: int, radius: float = 25.0) -> StlModel:
    """Icosphere with 20 * 4**subdivisions facets and outward RHR normals."""
    if not 0 <= subdivisions <= 6:
        raise ValueError("subdivisions must be in [0, 6]")

    pts = [_project(np.asarray(v, dtype=np.float64), radius) for v in _ICO_VERTICES]
    tris = []
    for a, b, c in _ICO_FACES:
        va, vb, vc = pts[a], pts[b], pts[c]
        # orient outward: normal must point away from the sphere center
        if np.cross(vb - va, vc - va) @ (va + vb + vc) < 0:
            vb, vc = vc, vb
        tris.append((va, vb, vc))

    for _ in range(subdivisions):
        split = []
        for a, b, c in tris:
            ab = _project((a + b) / 2.0, radius)
            bc = _project((b + c) / 2.0, radius)
            ca = _project((c + a) / 2.0, radius)
            split += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        tris = split

    facets = []
    for a, b, c in tris:
        v1, v2, v3 = vec3(*a), vec3(*b), vec3(*c)
        normal = unit_rhr_normal(v1, v2, v3)
        facets.append(Facet(v1=v1, v2=v2, v3=v3, normal=normal))
    return StlModel(
        solid_name=f"icosphere_{subdivisions}",
        facets=tuple(facets),
        source_format=StlFormat.ASCII,
    )
