import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sonifleet.hazards import GridSpec, HazardField, HazardSphere, HazardType

R = HazardType.RADIATION
T = HazardType.TEMPERATURE
G = HazardType.FLAMMABLE_GAS


def sphere(cx=0.0, cy=0.0, cz=0.0, radius=4.0, peak=0.8, hazard=R):
    return HazardSphere((cx, cy, cz), radius, peak, hazard)


def test_level_at_center_equals_peak():
    f = HazardField([sphere(peak=0.8)])
    assert f.level_at((0, 0, 0), R) == pytest.approx(0.8)


def test_level_at_edge_is_zero():
    f = HazardField([sphere(radius=4.0)])
    assert f.level_at((4.0, 0, 0), R) == pytest.approx(0.0)
    assert f.level_at((9.0, 0, 0), R) == 0.0


def test_level_at_half_radius_is_half_peak():
    f = HazardField([sphere(radius=4.0, peak=0.8)])
    assert f.level_at((2.0, 0, 0), R) == pytest.approx(0.4)


def test_overlapping_same_type_spheres_clamp_to_one():
    # two spheres each contributing 0.7 at the probe point
    f = HazardField([sphere(peak=0.7), sphere(peak=0.7)])
    assert f.level_at((0, 0, 0), R) == 1.0


def test_distance_is_euclidean_3d():
    f = HazardField([sphere(radius=2.0, peak=1.0)])
    d = math.sqrt(3) * 1.0
    assert f.level_at((1, 1, 1), R) == pytest.approx(1.0 - d / 2.0)


def test_validation_rejects_bad_spheres():
    with pytest.raises(ValueError):
        HazardSphere((0, 0, 0), -1.0, 0.5, R)
    with pytest.raises(ValueError):
        HazardSphere((0, 0, 0), 1.0, 0.0, R)
    with pytest.raises(ValueError):
        HazardSphere((0, 0, 0), 1.0, 1.5, R)


hazard_types = st.sampled_from(list(HazardType))
coords = st.floats(-20, 20, allow_nan=False)
spheres = st.builds(
    HazardSphere,
    center=st.tuples(coords, coords, coords),
    radius=st.floats(0.1, 15),
    peak=st.floats(0.01, 1.0),
    hazard=hazard_types,
)
fields = st.builds(HazardField, st.lists(spheres, max_size=6))
points = st.tuples(coords, coords, coords)


@given(fields, points, hazard_types)
def test_level_always_in_unit_interval(f, p, h):
    assert 0.0 <= f.level_at(p, h) <= 1.0


@given(spheres, st.floats(0, 1), st.floats(0, 1))
def test_monotone_radial_decrease_within_sphere(s, a, b):
    f = HazardField([s])
    near, far = sorted([a, b])
    cx, cy, cz = s.center
    p_near = (cx + near * s.radius, cy, cz)
    p_far = (cx + far * s.radius, cy, cz)
    assert f.level_at(p_near, s.hazard) >= f.level_at(p_far, s.hazard) - 1e-12


@given(st.lists(spheres, min_size=1, max_size=5), points)
def test_additivity_below_clamp(sph, p):
    total = sum(s.contribution(p) for s in sph)
    if total >= 1.0:
        return
    for i, s in enumerate(sph):
        rest = HazardField([x for j, x in enumerate(sph) if j != i])
        full = HazardField(sph)
        per_type_drop = full.level_at(p, s.hazard) - rest.level_at(p, s.hazard)
        assert per_type_drop == pytest.approx(s.contribution(p), abs=1e-9)


@given(spheres, points)
def test_type_isolation(s, p):
    f = HazardField([s])
    for h in HazardType:
        if h != s.hazard:
            assert f.level_at(p, h) == 0.0


def test_rasterize_empty_field_is_all_zero():
    f = HazardField([])
    tables = f.rasterize(GridSpec(6, 4, 1.0))
    for h in HazardType:
        assert tables[h].shape == (4, 6)
        assert not tables[h].any()


def test_rasterize_sphere_on_tile_center_holds_peak():
    g = GridSpec(5, 5, 1.0)
    center = g.tile_center(2, 3)
    f = HazardField([HazardSphere(center, 2.0, 0.9, T)])
    tables = f.rasterize(g)
    assert tables[T][3, 2] == pytest.approx(0.9)


def test_rasterize_matches_pointwise_oracle():
    # oracle: direct per-tile loop over level_at
    g = GridSpec(10, 10, 0.8, origin=(-2.0, 1.0), sample_height=0.5)
    f = HazardField(
        [
            HazardSphere((1.5, 4.0, 0.5), 3.0, 0.7, R),
            HazardSphere((3.0, 6.0, 0.0), 2.5, 1.0, G),
            HazardSphere((2.0, 5.0, 0.5), 4.0, 0.6, R),
        ]
    )
    tables = f.rasterize(g)
    for h in HazardType:
        expected = np.zeros((10, 10))
        for iy in range(10):
            for ix in range(10):
                expected[iy, ix] = f.level_at(g.tile_center(ix, iy), h)
        np.testing.assert_allclose(tables[h], expected, atol=1e-12)


def test_rasterize_rejects_nonpositive_tile_size():
    with pytest.raises(ValueError):
        GridSpec(5, 5, 0.0)
    with pytest.raises(ValueError):
        GridSpec(5, 5, -1.0)


def test_hazard_colors():
    assert HazardType.RADIATION.color == (0, 255, 0)
    assert HazardType.TEMPERATURE.color == (255, 0, 0)
    assert HazardType.FLAMMABLE_GAS.color == (0, 0, 255)
