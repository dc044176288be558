"""Continuous hazard model: spheres with linear edge-to-centre falloff.

Overlapping spheres of the same hazard type are additive, clamped to a
maximum level of 1.0. Worlds are 3D but robots sample on a ground plane;
spheres are authored with centres at sensor height so the 2D view is exact
at robot height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

MAX_LEVEL = 1.0

Vec3 = tuple[float, float, float]


class HazardType(Enum):
    RADIATION = "radiation"
    TEMPERATURE = "temperature"
    FLAMMABLE_GAS = "flammable_gas"

    @property
    def color(self) -> tuple[int, int, int]:
        """Canonical display colour (RGB, 0-255)."""
        return _COLORS[self]


_COLORS = {
    HazardType.RADIATION: (0, 255, 0),
    HazardType.TEMPERATURE: (255, 0, 0),
    HazardType.FLAMMABLE_GAS: (0, 0, 255),
}


@dataclass(frozen=True)
class HazardSphere:
    """Invisible sphere inside which the hazard level rises linearly from
    0 at the edge to `peak` at the centre."""

    center: Vec3
    radius: float
    peak: float
    hazard: HazardType

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"sphere radius must be > 0, got {self.radius}")
        if not 0 < self.peak <= 1:
            raise ValueError(f"sphere peak must be in (0, 1], got {self.peak}")

    def contribution(self, point: Vec3) -> float:
        d = math.dist(point, self.center)
        return self.peak * max(0.0, 1.0 - d / self.radius)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular tile grid over the ground plane.

    Tile (ix, iy) covers [origin + ix*tile, origin + (ix+1)*tile) on each
    axis; values are sampled at tile centres at `sample_height`.
    """

    width: int
    height: int
    tile_size: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)
    sample_height: float = 0.0

    def __post_init__(self):
        if self.tile_size <= 0:
            raise ValueError(f"tile size must be > 0, got {self.tile_size}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("grid must have positive extent")

    def tile_center(self, ix: int, iy: int) -> Vec3:
        ox, oy = self.origin
        return (
            ox + (ix + 0.5) * self.tile_size,
            oy + (iy + 0.5) * self.tile_size,
            self.sample_height,
        )

    def tile_of(self, x: float, y: float) -> tuple[int, int]:
        ox, oy = self.origin
        return (int((x - ox) // self.tile_size), int((y - oy) // self.tile_size))

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height


@dataclass(frozen=True)
class HazardField:
    """A set of typed hazard spheres, sampled per type at any point."""

    spheres: tuple[HazardSphere, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "spheres", tuple(self.spheres))

    def level_at(self, point: Vec3, hazard: HazardType) -> float:
        """Summed contribution of all matching spheres, clamped to 1.0.

        Points outside every sphere return 0. The clamp applies after
        summation, not per sphere.
        """
        total = sum(s.contribution(point) for s in self.spheres if s.hazard == hazard)
        return min(MAX_LEVEL, total)

    def levels_at(self, point: Vec3) -> dict[HazardType, float]:
        return {h: self.level_at(point, h) for h in HazardType}

    def max_level_at(self, point: Vec3) -> float:
        return max(self.levels_at(point).values())

    def rasterize(self, grid: GridSpec) -> dict[HazardType, np.ndarray]:
        """Per-tile, per-type levels sampled at tile centres.

        Returned arrays are indexed [iy, ix] and match the grid dimensions.
        """
        tables = {h: np.zeros((grid.height, grid.width)) for h in HazardType}
        ox, oy = grid.origin
        cx = ox + (np.arange(grid.width) + 0.5) * grid.tile_size
        cy = oy + (np.arange(grid.height) + 0.5) * grid.tile_size
        gx, gy = np.meshgrid(cx, cy)
        for s in self.spheres:
            sx, sy, sz = s.center
            dz = grid.sample_height - sz
            d = np.sqrt((gx - sx) ** 2 + (gy - sy) ** 2 + dz**2)
            tables[s.hazard] += s.peak * np.maximum(0.0, 1.0 - d / s.radius)
        for h in HazardType:
            np.minimum(tables[h], MAX_LEVEL, out=tables[h])
        return tables
