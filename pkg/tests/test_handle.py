import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcw.handle import (
    DimensionMismatch,
    HandlePoint,
    HandleSpec,
    RegionClass,
    boundary_point,
    boundary_radii,
    classify,
    classify_radii,
    defect,
    defect_radii,
    inclusion_witness,
    region_from_code,
)

radius = st.floats(0, 4, allow_nan=False)


def pt(u, v):
    return HandlePoint(np.atleast_1d(u), np.atleast_1d(v))


@pytest.mark.parametrize("n, m", [(0, 0), (-1, 2), (2, -1)])
def test_spec_validation(n, m):
    with pytest.raises(ValueError):
        HandleSpec(n, m)


def test_point_radii():
    p = HandlePoint([3.0, 4.0], [0.0])
    assert p.ru == 5.0 and p.rv == 0.0 and p.dims == (2, 1)
    assert HandlePoint.empty_u([1.0, 1.0]).dims == (0, 2)
    assert HandlePoint.from_radii(2.0, 0.5, [0.0, 1.0], [1.0]).ru == 2.0


def test_defect_examples(ctx):
    s = HandleSpec(1, 1)
    assert defect(ctx, s, pt(2.0, 0.0)) == pytest.approx(1.0 + ctx.phi(0.0))
    assert defect(ctx, s, pt(0.0, 0.0)) == pytest.approx(1.0)
    assert defect(ctx, HandleSpec(1, 0), HandlePoint.empty_v([0.0])) >= 0


@given(radius)
def test_whole_euclidean_space_when_m_is_zero(ctx, r):
    assert defect(ctx, HandleSpec(2, 0), HandlePoint.empty_v([r, 0.0])) >= 0


@given(radius)
def test_disk_when_n_is_zero(ctx, r):
    assert (defect(ctx, HandleSpec(0, 2), HandlePoint.empty_u([0.0, r])) >= 0) == (r <= 1)


def test_dimension_mismatch(ctx):
    with pytest.raises(DimensionMismatch):
        defect(ctx, HandleSpec(2, 1), pt(1.0, 1.0))


@pytest.mark.parametrize(
    "u, v, region",
    [
        (1.0, 1.0, RegionClass.FLANGE_CORE),
        (1.0, 1.5, RegionClass.FLANGE_CORE),
        (1.0, 2.0, RegionClass.BOUNDARY_S),
        (0.2, 0.0, RegionClass.INTERIOR_OF_HANDLE),
        (2.0, 3.0, RegionClass.FLANGE),
        (0.5, 2.0, RegionClass.OUTSIDE),
    ],
)
def test_classify_examples(ctx, u, v, region):
    assert classify(ctx, HandleSpec(1, 1), pt(u, v)) is region


def test_small_u_fixture_is_interior(ctx):
    # 0.2 - 1 + phi(1.8) = 1.0, so this point is inside the handle
    assert defect_radii(ctx, 0.2, 0.0) == pytest.approx(1.0)


def test_boundary_classified(ctx):
    ru, rv = boundary_radii(ctx, 0.3)
    assert classify(ctx, HandleSpec(1, 1), pt(ru, rv)) is RegionClass.BOUNDARY_D


@given(radius, radius)
@settings(max_examples=200)
def test_classes_partition_the_plane(ctx, ru, rv):
    code = classify_radii(ctx, HandleSpec(2, 2), ru, rv)
    region = region_from_code(code)
    d = defect_radii(ctx, ru, rv)
    if region is RegionClass.OUTSIDE:
        assert d < 0
    if region in (RegionClass.FLANGE, RegionClass.INTERIOR_OF_HANDLE):
        assert d > 0


@pytest.mark.parametrize("t, radii", [(1.0, (1.0, 2.0)), (-1.0, (0.0, 1.0))])
def test_boundary_radii_examples(ctx, t, radii):
    np.testing.assert_allclose(boundary_radii(ctx, t), radii, atol=1e-15)


def test_boundary_radii_at_zero(ctx):
    p0 = ctx.phi(0.0)
    np.testing.assert_allclose(boundary_radii(ctx, 0.0), (1 - p0, 1 + p0))


@pytest.mark.parametrize("n, m", [(1, 1), (2, 1), (1, 2), (2, 2)])
@given(t=st.floats(-1, 4), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_boundary_points_solve_the_equation(ctx, n, m, t, seed):
    g = np.random.default_rng(seed)
    p = boundary_point(ctx, HandleSpec(n, m), t, g.normal(size=n) + 1e-3, g.normal(size=m) + 1e-3)
    assert abs(defect(ctx, HandleSpec(n, m), p)) <= 1e-9
    assert p.ru + p.rv - 2 == pytest.approx(t, abs=1e-12)


def test_boundary_point_needs_both_factors(ctx):
    with pytest.raises(ValueError):
        boundary_point(ctx, HandleSpec(2, 0), 0.0, [1.0, 0.0], [])
    with pytest.raises(DimensionMismatch):
        boundary_point(ctx, HandleSpec(1, 1), 0.0, [1.0, 0.0], [1.0])
    with pytest.raises(ValueError):
        boundary_point(ctx, HandleSpec(1, 1), -1.5, [1.0], [1.0])


@pytest.mark.parametrize(
    "u, v, flange, disk",
    [(1.5, 7.0, True, False), (0.0, 1.0, False, True), (0.9, 0.5, False, True)],
)
def test_inclusions(ctx, u, v, flange, disk):
    r = inclusion_witness(ctx, HandleSpec(1, 1), pt(u, v))
    assert r.member and r.applies
    assert (r.via_flange, r.via_disk) == (flange, disk)


@given(st.floats(1, 5), st.floats(0, 50))
def test_flange_inclusion_property(ctx, ru, rv):
    assert inclusion_witness(ctx, HandleSpec(1, 1), pt(ru, rv)).member
