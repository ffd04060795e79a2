import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from leonet.constellation import EARTH_RADIUS_KM
from leonet.errors import UndefinedGeometryError
from leonet.geometry import (
    EARTH_ROTATION_RATE,
    GeodeticPoint,
    coverage_half_angle,
    eci_to_ecef,
    elevation_angle,
    elevation_matrix,
    geodetic_to_ecef,
    latlon_to_ecef,
    pair_elevations,
    slant_range,
    visible,
    visible_pairs,
)

from oracles import elevation_oracle

R = EARTH_RADIUS_KM
# station (0,0), satellite 550 km above (0, 8): law of cosines / tan formula, evaluated offline
EQUATOR_8DEG_ELEVATION = 26.614367572690174
EQUATOR_8DEG_RANGE_KM = 1077.373444765033

lats = st.floats(-90, 90)
lons = st.floats(-180, 180, exclude_max=True)


def test_geodetic_worked_value():
    np.testing.assert_allclose(geodetic_to_ecef(GeodeticPoint(45.0, 45.0, 0.0)), [3185.5, 3185.5, 4504.9773], atol=1e-3)


def test_equatorial_elevation_and_range():
    gs = latlon_to_ecef(0.0, 0.0)
    sat = latlon_to_ecef(0.0, 8.0, 550.0)
    assert elevation_angle(gs, sat) == pytest.approx(EQUATOR_8DEG_ELEVATION, abs=1e-9)
    assert slant_range(gs, sat) == pytest.approx(EQUATOR_8DEG_RANGE_KM, abs=1e-6)
    # cross-check with tan(e) = (cos psi - R/(R+h)) / sin psi
    psi = math.radians(8.0)
    assert math.degrees(math.atan((math.cos(psi) - R / (R + 550.0)) / math.sin(psi))) == pytest.approx(
        EQUATOR_8DEG_ELEVATION, abs=1e-9
    )


def test_zenith_and_horizon():
    gs = latlon_to_ecef(10.0, 20.0)
    assert elevation_angle(gs, latlon_to_ecef(10.0, 20.0, 550.0)) == pytest.approx(90.0)
    horizon = gs + np.cross(gs, [0.0, 0.0, 1.0])
    assert elevation_angle(gs, horizon) == pytest.approx(0.0, abs=1e-9)


def test_coincident_points_undefined():
    p = latlon_to_ecef(0.0, 0.0)
    with pytest.raises(UndefinedGeometryError):
        elevation_angle(p, p)


def test_visible_threshold_boundary_inclusive():
    gs = latlon_to_ecef(0.0, 0.0)
    sat = latlon_to_ecef(0.0, 8.0, 550.0)
    e = elevation_angle(gs, sat)
    assert visible(gs, sat, e)
    assert not visible(gs, sat, np.nextafter(e, 90.0))
    with pytest.raises(ValueError):
        visible(gs, sat, 90.0)
    with pytest.raises(ValueError):
        visible(gs, sat, -1.0)


def test_geodetic_point_bounds():
    with pytest.raises(ValueError):
        GeodeticPoint(91.0, 0.0)
    with pytest.raises(ValueError):
        GeodeticPoint(0.0, 180.0)


@settings(max_examples=100, deadline=None)
@given(lats, lons, lats, lons, st.floats(300, 2000))
def test_elevation_matches_oracle_and_range(lat1, lon1, lat2, lon2, h):
    gs = latlon_to_ecef(lat1, lon1)
    sat = latlon_to_ecef(lat2, lon2, h)
    e = elevation_angle(gs, sat)
    assert -90.0 <= e <= 90.0
    # asin/acos lose about sqrt(eps) rad (~1e-6 deg) right at the zenith
    assert e == pytest.approx(elevation_oracle(gs, sat), abs=1e-5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1e6), st.floats(-1e4, 1e4), st.floats(-1e4, 1e4), st.floats(-1e4, 1e4))
def test_earth_rotation_preserves_norm_and_z(t, x, y, z):
    r = np.array([x, y, z])
    out = eci_to_ecef(r, t)
    assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(r), rel=1e-12, abs=1e-9)
    assert out[2] == z


def test_earth_rotation_direction():
    # a point fixed in inertial space drifts westward in the Earth-fixed frame
    t = 3600.0
    out = eci_to_ecef(np.array([R, 0.0, 0.0]), t)
    lon = math.degrees(math.atan2(out[1], out[0]))
    assert lon == pytest.approx(-math.degrees(EARTH_ROTATION_RATE * t))


def test_elevation_matrix_and_pairs_agree_with_scalar():
    rng = np.random.default_rng(0)
    ground = latlon_to_ecef(rng.uniform(-80, 80, 30), rng.uniform(-180, 180, 30))
    sats = latlon_to_ecef(rng.uniform(-80, 80, 400), rng.uniform(-180, 180, 400), 550.0)
    m = elevation_matrix(ground, sats)
    for i in range(0, 30, 7):
        for j in range(0, 400, 53):
            assert m[i, j] == pytest.approx(elevation_angle(ground[i], sats[j]), abs=1e-9)
    rows, cols, el = visible_pairs(ground, sats, 25.0)
    expected = np.argwhere(m >= 25.0)
    assert np.array_equal(np.column_stack([rows, cols]), expected)
    np.testing.assert_allclose(el, pair_elevations(ground[rows], sats[cols]))
    assert visible_pairs(ground[:0], sats, 25.0)[0].size == 0


@settings(max_examples=50, deadline=None)
@given(st.floats(300, 2000), st.floats(0, 89))
def test_coverage_half_angle_is_elevation_boundary(h, e):
    psi = coverage_half_angle(h, e)
    gs = latlon_to_ecef(0.0, 0.0)
    sat = latlon_to_ecef(0.0, psi, h)
    assume(psi > 1e-6)
    assert elevation_angle(gs, sat) == pytest.approx(e, abs=1e-6)
