import math

import pytest
from hypothesis import given, strategies as st

from areaflow import geometry as geo
from areaflow import svcore


def test_unit_sphere_sectional():
    assert geo.sectional_curvature(geo.sphere(2)) == 1.0
    assert math.isclose(geo.sectional_curvature(geo.sphere(5, radius=0.5)), 4.0)


def test_cp_sectional_range():
    model = geo.cp(2)
    assert math.isclose(geo.sectional_curvature(model, 1.0), 4.0)
    assert math.isclose(geo.sectional_curvature(model, 0.0), 1.0)
    assert math.isclose(geo.sectional_curvature(model, -0.5), 1.75)
    with pytest.raises(ValueError):
        geo.sectional_curvature(model, 1.5)


def test_hp_sectional():
    model = geo.hp(2)
    assert math.isclose(geo.sectional_curvature(model, (1.0, 0.0, 0.0)), 4.0)
    assert math.isclose(geo.sectional_curvature(model, (0.5, 0.5, 0.5)), 3.25)
    with pytest.raises(ValueError):
        geo.sectional_curvature(model, (0.9, 0.9, 0.9))


def test_torus_flat():
    assert geo.sectional_curvature(geo.flat_torus(4)) == 0.0
    assert geo.ricci_constant(geo.flat_torus(4)) == 0.0
    assert geo.curvature_bounds(geo.flat_torus(3)) == (0.0, 0.0, 0.0)


def test_ricci_constants():
    for n in range(1, 6):
        assert math.isclose(geo.ricci_constant(geo.cp(n)), 2 * (n + 1))
        assert math.isclose(geo.ricci_constant(geo.hp(n)), 4 * (n + 2))
    assert math.isclose(geo.ricci_constant(geo.sphere(7)), 6.0)


def test_cp1_is_half_radius_two_sphere():
    assert math.isclose(geo.ricci_constant(geo.cp(1)), 4.0)
    assert math.isclose(geo.ricci_constant(geo.cp(1)),
                        geo.ricci_constant(geo.sphere(2, radius=0.5)))
    assert geo.curvature_bounds(geo.cp(1))[:2] == geo.curvature_bounds(
        geo.sphere(2, radius=0.5))[:2]


def test_rescale_divides_curvature():
    model = geo.rescale(geo.sphere(4), 2.0)
    assert math.isclose(geo.sectional_curvature(model), 0.25)
    same = geo.rescale(geo.cp(3), 1.0)
    assert math.isclose(geo.sectional_curvature(same, 0.3),
                        geo.sectional_curvature(geo.cp(3), 0.3))
    with pytest.raises(ValueError):
        geo.rescale(model, -1.0)


@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_rescale_composes_multiplicatively(a, b):
    base = geo.cp(2)
    two_step = geo.rescale(geo.rescale(base, a), b)
    one_step = geo.rescale(base, a * b)
    for plane in (0.0, 0.7, 1.0):
        assert math.isclose(geo.sectional_curvature(two_step, plane),
                            geo.sectional_curvature(one_step, plane),
                            rel_tol=1e-12)
    assert math.isclose(geo.ricci_constant(two_step),
                        geo.ricci_constant(one_step), rel_tol=1e-12)


def test_curvature_bounds():
    lo, hi, ric = geo.curvature_bounds(geo.cp(3))
    assert (lo, hi) == (1.0, 4.0) and math.isclose(ric, 8.0)
    lo, hi, _ = geo.curvature_bounds(geo.hp(2))
    assert (lo, hi) == (1.0, 4.0)
    lo, hi, _ = geo.curvature_bounds(geo.sphere(3, radius=2.0))
    assert math.isclose(lo, 0.25) and math.isclose(hi, 0.25)


def test_ricci_equals_dim_minus_one_times_sec():
    for model in (geo.sphere(2), geo.sphere(5, 0.7), geo.flat_torus(3)):
        sec = geo.sectional_curvature(model)
        assert math.isclose(geo.ricci_constant(model), (model.dim - 1) * sec,
                            abs_tol=1e-15)


@given(st.floats(0.2, 4.0), st.floats(0.0, 1.0), st.floats(0.0, 1.2),
       st.floats(0.0, 1.2))
def test_pair_product_times_curvature_is_scale_invariant(rho, plane, l1, l2):
    model = geo.cp(2)
    spec = svcore.spectrum(sorted([l1, l2], reverse=True), m=model.dim)
    scaled_model = geo.rescale(model, rho)
    scaled_spec = svcore.rescale_spectrum(spec, rho)
    base = spec.lam[0] * spec.lam[1] * geo.sectional_curvature(model, plane)
    scaled = scaled_spec.lam[0] * scaled_spec.lam[1] \
        * geo.sectional_curvature(scaled_model, plane)
    assert math.isclose(base, scaled, rel_tol=1e-12, abs_tol=1e-15)


def test_parse_model():
    m = geo.parse_model("cp(3) scaled 1.0408")
    assert m.kind == "cp" and m.dim_param == 3 and math.isclose(m.scale, 1.0408)
    m = geo.parse_model(" s( 2 , 0.5 ) ")
    assert m.kind == "sphere" and m.radius == 0.5
    assert geo.parse_model("torus(4)").dim == 4
    assert geo.parse_model("hp(2)").dim == 8
    assert geo.parse_model("SPHERE(3)").dim == 3
    for bad in ("cp(3, 2)", "cp()", "blob(2)", "cp(3) scaled -1", "sphere(0)"):
        with pytest.raises(ValueError):
            geo.parse_model(bad)


def test_model_round_trip_through_str():
    for m in (geo.sphere(3, 0.5), geo.cp(2, scale=1.25), geo.hp(1), geo.flat_torus(2)):
        again = geo.parse_model(geo.model_to_str(m))
        assert again == m
