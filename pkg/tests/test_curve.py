import numpy as np
import pytest

from curve import CurvePoint, PointSet, SuzukiParams, pole_order, suzuki_curve
from errors import CurveError
from riemann_roch import Monomial


def test_params_m1():
    p = SuzukiParams.for_m(1)
    assert (p.q0, p.q, p.g) == (2, 8, 14)
    assert p.gens == (8, 10, 12, 13)
    assert (p.N1, p.N4, p.nE) == (65, 5889, 5824)


def test_params_m2():
    p = SuzukiParams.for_m(2)
    assert (p.q0, p.q, p.g) == (4, 32, 124)
    assert p.N1 == 1025
    assert p.N4 == 32**4 + 1 + 2 * 4 * 32**2 * 31


@pytest.mark.parametrize("m", [1, 2, 3])
def test_degenerate_and_maximal_counts(m):
    p = SuzukiParams.for_m(m)
    assert p.point_count(1) == p.N1
    assert p.point_count(2) == p.q**2 + 1
    assert p.point_count(3) == p.q**2 + 1
    assert p.point_count(4) == p.N4
    assert p.is_maximal(4)
    assert not p.is_maximal(2)
    assert not p.is_maximal(3)


def test_l_polynomial_m1():
    p = SuzukiParams.for_m(1)
    coeffs = p.l_polynomial()
    assert len(coeffs) == 2 * p.g + 1
    assert coeffs[0] == 1
    assert coeffs[1] == 2 * p.q0 * p.g
    assert coeffs[-1] == p.q**p.g
    # N_1 = q + 1 + a_1
    assert p.q + 1 + coeffs[1] == p.N1


def test_invalid_params():
    with pytest.raises(CurveError):
        SuzukiParams.for_m(0)
    with pytest.raises(CurveError):
        SuzukiParams.for_m(1).point_count(0)


def test_pole_order_of_generators(params):
    assert pole_order(params, Monomial(1, 0, 0, 0, 0)) == 8
    assert pole_order(params, Monomial(0, 1, 0, 0, 0)) == 10
    assert pole_order(params, Monomial(0, 0, 1, 0, 0)) == 12
    assert pole_order(params, Monomial(0, 0, 0, 1, 0)) == 13
    assert pole_order(params, Monomial(0, 0, 0, 0, 1)) == 64


def test_points_over_base_field(curve):
    points = curve.enumerate_points(1)
    assert len(points) == 65
    # the right-hand side vanishes on F_q, so every pair in F_q x F_q lies on the curve
    assert points.xs.tolist() == np.repeat(np.arange(8), 8).tolist()
    assert points.ys.tolist() == np.tile(np.arange(8), 8).tolist()


def test_points_over_quartic_extension(curve, params):
    points = curve.enumerate_points(4)
    assert len(points) == 5889
    assert points.n_affine == 5888
    assert curve.on_curve_array(points.x_array(), points.y_array()).all()
    assert np.all(np.diff(points.keys) > 0)
    _, per_x = np.unique(points.xs, return_counts=True)
    assert np.all(per_x == params.q)


def test_enumeration_is_cached(curve):
    assert curve.enumerate_points(4) is curve.enumerate_points(4)


def test_splitting_set(curve, big):
    T = curve.splitting_x_values()
    assert len(T) == 736
    assert len(T) * 8 + 1 == 5889
    assert np.isin(big.subfield_elements(), T).all()


def test_support_of_E(curve, big):
    E = curve.rational_points_E()
    assert len(E) == 5824
    assert not E.with_infinity
    assert not np.isin(E.xs, big.subfield_elements()).any()


def test_iteration_puts_infinity_first(curve):
    points = list(curve.enumerate_points(1))
    assert points[0].is_infinity
    assert points[1] == CurvePoint(1, 0, 0)
    assert all(curve.on_curve(p.x, p.y, j=1) for p in points[1:])


def _outside_subfield(big):
    return next(c for c in range(1, big.order) if not big.in_subfield(c))


def test_affine_index(curve, big):
    points = curve.enumerate_points(4)
    idx = np.array([0, 17, 5887])
    assert points.affine_index(points.xs[idx], points.ys[idx]).tolist() == idx.tolist()
    # shifting y by an element outside F_q leaves the curve
    x, y = int(points.xs[0]), int(points.ys[0])
    assert points.affine_index([x], [y ^ _outside_subfield(big)]).tolist() == [-1]


def test_point_set_rejects_unordered_input(big):
    with pytest.raises(CurveError):
        PointSet(4, big, np.array([5, 3]), np.array([0, 0]))


def test_point_set_arrays_are_read_only(curve):
    points = curve.enumerate_points(4)
    with pytest.raises(ValueError):
        points.xs[0] = 1


def test_to_lines_and_hash(curve):
    points = curve.enumerate_points(1)
    lines = points.to_lines()
    assert lines[0] == "j=1 inf"
    assert lines[1] == "j=1 x=0 y=0"
    assert len(lines) == 65
    assert points.order_hash() == curve.enumerate_points(1).order_hash()
    assert len(points.order_hash()) == 64


def test_on_curve_scalar_matches_array(curve, big):
    points = curve.enumerate_points(4)
    shift = _outside_subfield(big)
    for x, y in zip(points.xs[:20].tolist(), points.ys[:20].tolist()):
        assert curve.on_curve(x, y)
        assert curve.on_curve(x, y ^ 1)
        assert not curve.on_curve(x, y ^ shift)


def test_eval_xyzw_matches_array(curve):
    E = curve.rational_points_E()
    arrays = curve.eval_xyzw_array(E.x_array()[:30], E.y_array()[:30])
    for i, point in enumerate(list(E)[:30]):
        scalar = curve.eval_xyzw(point)
        assert scalar == tuple(int(a[i]) for a in arrays)


def test_eval_at_infinity_fails(curve):
    with pytest.raises(CurveError):
        curve.eval_xyzw(CurvePoint.infinity())


def test_unsupported_extension_degrees():
    curve = suzuki_curve(1)
    with pytest.raises(CurveError):
        curve.enumerate_points(2)
    with pytest.raises(CurveError):
        curve.field(3)


@pytest.mark.slow
def test_points_m2():
    curve = suzuki_curve(2)
    assert len(curve.enumerate_points(1)) == 1025
    assert len(curve.enumerate_points(4)) == SuzukiParams.for_m(2).N4
    assert len(curve.rational_points_E()) == 1301504
