"""Core STL value types.

Coordinates are stored as Python floats that are exactly representable in
IEEE-754 single precision, matching what a binary STL can hold on disk.
All types are immutable; operations elsewhere in the package return new
values, so models are safe to share between threads.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

Vec3 = tuple[float, float, float]


def f32(x: float) -> float:
    """Round to the nearest single-precision value, returned as a float."""
    return float(np.float32(x))


def vec3(x: float, y: float, z: float) -> Vec3:
    return (f32(x), f32(y), f32(z))


class StlFormat(enum.Enum):
    ASCII = "ascii"
    BINARY = "binary"


@dataclass(frozen=True)
class Facet:
    """One triangle: three vertices, a stored normal, and the 16-bit
    attribute word carried by binary STL records (0 for ASCII sources)."""

    v1: Vec3
    v2: Vec3
    v3: Vec3
    normal: Vec3 = (0.0, 0.0, 0.0)
    attribute: int = 0

    @property
    def vertices(self) -> tuple[Vec3, Vec3, Vec3]:
        return (self.v1, self.v2, self.v3)

    def with_vertices(self, verts: tuple[Vec3, Vec3, Vec3]) -> "Facet":
        a, b, c = verts
        return replace(self, v1=a, v2=b, v3=c)

    def is_degenerate(self) -> bool:
        """True when any two vertices coincide under exact comparison."""
        return self.v1 == self.v2 or self.v2 == self.v3 or self.v1 == self.v3


@dataclass(frozen=True)
class StlModel:
    """An ordered facet list plus format metadata.

    Facet order is significant and must survive parse/serialize round
    trips: the ordering itself is one of the data channels.
    """

    solid_name: str = ""
    facets: tuple[Facet, ...] = field(default_factory=tuple)
    source_format: StlFormat = StlFormat.ASCII

    def __len__(self) -> int:
        return len(self.facets)

    def with_facets(self, facets) -> "StlModel":
        return replace(self, facets=tuple(facets))


def unit_rhr_normal(v1: Vec3, v2: Vec3, v3: Vec3) -> Vec3 | None:
    """Unit right-hand-rule normal of a triangle, or None for zero area.

    cross(v2 - v1, v3 - v1), normalized. Evaluated in double precision,
    rounded back to single precision component-wise.
    """
    ax, ay, az = v2[0] - v1[0], v2[1] - v1[1], v2[2] - v1[2]
    bx, by, bz = v3[0] - v1[0], v3[1] - v1[1], v3[2] - v1[2]
    nx = ay * bz - az * by
    ny = az * bx - ax * bz
    nz = ax * by - ay * bx
    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if norm == 0.0:
        return None
    return vec3(nx / norm, ny / norm, nz / norm)


def geometry_key(facet: Facet) -> tuple[Vec3, Vec3, Vec3]:
    """Rotation-invariant identity of a facet's triangle.

    The lexicographically smallest of the three cyclic rotations of the
    vertex list. Stored normals and attribute words are excluded; they
    carry no geometry. Defined for degenerate facets as well.
    """
    a, b, c = facet.v1, facet.v2, facet.v3
    return min((a, b, c), (b, c, a), (c, a, b))
