import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from forge import fanpoly as fp
from forge import metriclab as ml

# soliton of the F1 anticanonical polygon, frozen from the run checked against
# the sympy root below
F1_SOLITON = (0.0, -0.5276195199)


def problem(name, **kw):
    return ml.MetricProblem.anticanonical(fp.named_fan(name), ml.MetricLabConfig(**kw))


@pytest.fixture(scope="module")
def square():
    return problem("square")


@pytest.fixture(scope="module")
def hexagon():
    return problem("hexagon")


@pytest.fixture(scope="module")
def f1():
    return problem("f1")


def interior_points(prob, n, seed):
    rng = np.random.default_rng(seed)
    v = prob.vertices
    w = rng.dirichlet(np.ones(len(v)), size=n)
    return w @ v


coords = st.floats(-6, 6, allow_nan=False)


# -- potentials ---------------------------------------------------------------------

def test_square_potential_vanishes_at_center(square):
    # l_k(0) = 1 on every facet, so G(0) = 0 and grad G(0) = 0
    assert square.potential_G(np.zeros(2)) == 0
    assert np.allclose(square.grad_G(np.zeros(2)), 0)


def test_potential_is_even_on_square(square):
    ys = interior_points(square, 50, 0)
    assert np.allclose(square.potential_G(ys), square.potential_G(-ys), atol=1e-14)


def test_exterior_point_rejected(square):
    with pytest.raises(ValueError):
        square.potential_G(np.array([2.0, 0.0]))


@pytest.mark.parametrize("name", ["square", "hexagon", "f1", "octagon"])
def test_hessian_matches_finite_differences(name):
    prob = problem(name)
    h = 1e-6
    for y in interior_points(prob, 10, 1):
        fd = np.column_stack([(prob.grad_G(y + h * e) - prob.grad_G(y - h * e)) / (2 * h) for e in np.eye(2)])
        assert np.allclose(prob.hess_G(y), fd, rtol=1e-6, atol=1e-6)


def test_hessian_is_float64(square):
    y = np.zeros(2, dtype=np.longdouble)
    assert square.hess_G(y).dtype == np.float64


# -- moment map ----------------------------------------------------------------------

@pytest.mark.parametrize("name", ["square", "hexagon", "f1", "cp2"])
def test_moment_round_trip(name):
    prob = problem(name)
    xs = np.random.default_rng(2).uniform(-5, 5, (200, 2))
    ys = prob.moment(xs)
    assert np.all(prob.l(ys) > 0)
    err = np.linalg.norm((prob.grad_G(ys) - xs).astype(float), axis=-1)
    assert err.max() < 1e-10


@settings(max_examples=40, deadline=None)
@given(coords, coords)
def test_moment_lands_in_interior(x0, x1):
    prob = problem("f1")
    y = prob.moment(np.array([x0, x1]))
    assert np.all(prob.l(y) > 0)


def test_grad_then_moment_recovers_y(hexagon):
    ys = interior_points(hexagon, 100, 3)
    back = hexagon.moment(hexagon.grad_G(ys))
    assert np.max(np.abs(back.astype(float) - ys)) < 1e-9


def test_moment_jacobian_inverts_hessian(f1):
    h = 1e-5
    for x in np.random.default_rng(4).uniform(-3, 3, (8, 2)):
        J = np.column_stack([(f1.moment(x + h * e) - f1.moment(x - h * e)).astype(float) / (2 * h)
                             for e in np.eye(2)])
        assert np.allclose(J @ f1.hess_G(f1.moment(x)), np.eye(2), atol=1e-6)


def test_hess_F_is_inverse(square):
    x = np.array([0.3, -1.1])
    assert np.allclose(square.hess_F(x) @ square.hess_G(square.moment(x)), np.eye(2), atol=1e-12)


def test_legendre_identity(square):
    # F(x) + G(y) = <x, y> at dual points
    x = np.array([0.7, 0.2])
    y = square.moment(x)
    assert float(square.potential_F(x) + square.potential_G(y)) == pytest.approx(float(x @ y), abs=1e-12)


def test_newton_failure_is_reported(square):
    bad = ml.MetricProblem(square.normals, square.lambdas, square.vertices,
                           ml.MetricLabConfig(max_iter=1))
    with pytest.raises(ml.NewtonError):
        bad.moment(np.array([[40.0, -30.0]]))


# -- volume -----------------------------------------------------------------------------

@pytest.mark.parametrize("name,exact", [("square", 4), ("hexagon", 3)])
def test_volume_matches_exact(name, exact):
    est = ml.volume_estimate(problem(name))
    assert est.value == pytest.approx(exact, rel=1e-6)


def test_volume_scales_quadratically():
    sq = problem("square")
    big = ml.MetricProblem(sq.normals, 2 * sq.lambdas, 2 * sq.vertices)
    v1 = ml.numeric_volume(sq, grid=150)
    v2 = ml.numeric_volume(big, R=2 * ml.cutoff_radius(sq), grid=150)
    assert v2 / v1 == pytest.approx(4, rel=1e-4)


def test_cutoff_radius_grows_with_normals():
    assert ml.cutoff_radius(problem("square")) == 12.0
    assert ml.cutoff_radius(problem("octagon")) > 30


# -- soliton ----------------------------------------------------------------------------

def test_exp_divided_difference_simple():
    assert ml.exp_divided_difference([0.0]) == pytest.approx(1.0)
    assert ml.exp_divided_difference([0.0, 1.0]) == pytest.approx(np.e - 1)
    assert ml.exp_divided_difference([0.0, 0.0, 0.0]) == pytest.approx(0.5)


def test_exp_moments_at_zero_are_area_and_centroid():
    verts = fp.anticanonical_polytope(fp.named_fan("f1")).vertices
    Z, m1, _ = ml.exp_moments([[float(c) for c in v] for v in verts], np.zeros(2))
    assert Z == pytest.approx(4.0, rel=1e-13)  # trapezoid, widths 1 and 3
    assert m1 / Z == pytest.approx([1 / 12, 1 / 6], abs=1e-13)


def test_gradient_of_log_partition_is_barycenter():
    verts = [[float(c) for c in v] for v in fp.anticanonical_polytope(fp.named_fan("f1")).vertices]
    h = 1e-6
    grad = [(np.log(ml.exp_moments(verts, h * e)[0]) - np.log(ml.exp_moments(verts, -h * e)[0])) / (2 * h)
            for e in np.eye(2)]
    assert grad == pytest.approx([1 / 12, 1 / 6], abs=1e-8)


@pytest.mark.parametrize("name", ["square", "hexagon", "octagon", "cp2"])
def test_soliton_vanishes_when_barycenter_does(name):
    sol = ml.soliton_vector(fp.anticanonical_polytope(fp.named_fan(name)).vertices)
    assert sol.converged and np.allclose(sol.b, 0, atol=1e-12)


def test_f1_soliton_frozen():
    sol = ml.soliton_vector(fp.anticanonical_polytope(fp.named_fan("f1")).vertices)
    assert sol.b == pytest.approx(F1_SOLITON, abs=1e-9)


def test_f1_soliton_against_sympy():
    # on {-1 <= x <= y + 1, -1 <= y <= 1} both moment conditions reduce to
    # int (y^2 + 2y) e^{b y} dy = 0 with b = (0, b2)
    y, b = sympy.symbols("y b", real=True)
    eq = sympy.integrate((y ** 2 + 2 * y) * sympy.exp(b * y), (y, -1, 1))
    root = float(sympy.nsolve(eq, b, -0.5, prec=30))
    assert root == pytest.approx(F1_SOLITON[1], abs=1e-10)


@pytest.mark.parametrize("name", ["square", "hexagon", "f1", "octagon"])
def test_futaki_quadrature_matches_barycenter(name):
    poly = fp.anticanonical_polytope(fp.named_fan(name))
    exact = [float(c) for c in fp.barycenter(poly)]
    assert np.max(np.abs(ml.futaki_quadrature(poly.vertices) - exact)) < 1e-12


def test_degenerate_polytope_rejected():
    fan = fp.named_fan("square")
    with pytest.raises(fp.DegeneratePolytopeError):
        ml.MetricProblem.from_polytope(fp.polytope_from_support(fan, (0, 0, 0, 0)))


def test_exact_data_feeds_extended_arrays(f1):
    assert f1.lambdas_ext.dtype == np.longdouble
    assert np.all(f1.lambdas_ext == f1.lambdas) and np.all(f1.normals_ext == f1.normals)
