import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from forge import fanpoly as fp
from forge import lattice as lat
from forge import sasaki as sk

from strategies import fano_fans


def snf_index(rows):
    d = smith_normal_form(sympy.Matrix(rows).T, domain=sympy.ZZ)
    return math.prod(abs(d[i, i]) for i in range(min(d.shape)))


# -- lifts ------------------------------------------------------------------------

def test_square_root_lift():
    fan = fp.named_fan("square")
    l = sk.anticanonical_root_lift(fan)
    up = sk.lifted_rays(fan, l)
    assert up == ((1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1))
    # all marked points sit at height one for psi = (1, 1, 2)
    assert {lat.dot((1, 1, 2), r) for r in up} == {1}
    assert sk.total_space_smooth(fan, l) and sk.total_space_pi1_order(fan, l) == 1


def test_cone_fan_on_a_curve():
    cones = sk.cone_fan(fp.AugmentedFan(((1,), (-1,))), (1, 1))
    assert [c.generators for c in cones] == [((1, 1),), ((-1, 1),)]
    assert all(c.is_smooth for c in cones)


def test_zero_lift_warns():
    with pytest.warns(UserWarning):
        sk.cone_fan(fp.named_fan("square"), (0, 0, 0, 0))


def test_fractional_heights_rejected():
    with pytest.raises(sk.SasakiError):
        sk.lifted_rays(fp.named_fan("square"), fp.SupportFunction((Fraction(1, 2),) * 4))


def test_hexagon_canonical_lift_smooth():
    fan = fp.named_fan("hexagon")
    assert sk.total_space_smooth(fan, sk.canonical_lift(fan))


def test_cp2_canonical_lift_has_cyclic_pi1():
    fan = fp.named_fan("cp2")
    k = sk.canonical_lift(fan)
    assert sk.total_space_smooth(fan, k)
    assert sk.total_space_pi1_order(fan, k) == 3
    assert sk.total_space_pi1_order(fan, sk.anticanonical_root_lift(fan)) == 1


@given(fano_fans)
def test_pi1_matches_smith_form(fan):
    for l in (sk.canonical_lift(fan), sk.anticanonical_root_lift(fan)):
        assert sk.total_space_pi1_order(fan, l) == snf_index(sk.lifted_rays(fan, l))


@given(fano_fans)
def test_smoothness_matches_parallelepiped(fan):
    for c in sk.cone_fan(fan, sk.canonical_lift(fan)):
        pts = lat.fundamental_parallelepiped_points(c.generators)
        assert c.is_smooth == (pts == [(0, 0, 0)])


# -- spin and classification -----------------------------------------------------

def test_spin_examples():
    for name in ("square", "hexagon", "cp2", "octagon"):
        fan = fp.named_fan(name)
        assert sk.spin_w2(fan, sk.anticanonical_root_lift(fan))


def test_spin_witness_satisfies_equations():
    fan = fp.named_fan("octagon")
    l = sk.anticanonical_root_lift(fan)
    a, f = sk.spin_witness(fan, l)
    assert all((1 + a * lv + lat.dot(f, r)) % 2 == 0 for r, lv in zip(fan.rays, l))


def test_spin_fails_for_delta_family_k2():
    fan, l = sk.delta_kp_family(2, 0, repair=True)
    assert sk.spin_witness(fan, l) is None


@pytest.mark.parametrize("b2,spin,text", [
    (5, True, "#5(S²×S³)"), (3, False, "X∞#2(S²×S³)"), (0, True, "S⁵"),
    (1, True, "S²×S³"), (1, False, "X∞"),
])
def test_classify(b2, spin, text):
    assert str(sk.classify_5mfd(b2, spin)) == text


def test_classify_rejects_nonspin_b2_zero():
    with pytest.raises(sk.SasakiError):
        sk.classify_5mfd(0, False)
    with pytest.raises(ValueError):
        sk.classify_5mfd(-1, True)


@given(st.integers(0, 20))
def test_se_from_3sasakian(b2s):
    rep = sk.se_from_3sasakian(b2s)
    assert rep.b2 == 2 * b2s + 1 and rep.spin
    assert rep.diffeotype == sk.Diffeotype(sk.DiffeoKind.CONN_SUM_SXS, 2 * b2s + 1)


def test_einstein_report_must_be_spin():
    with pytest.raises(sk.SasakiError):
        sk.SasakiReport(dimension=5, b2=2, spin=False, diffeotype=sk.classify_5mfd(2, False),
                        einstein=fp.Verdict.EINSTEIN)


# -- volumes ----------------------------------------------------------------------

@pytest.mark.parametrize("name,factor", [("square", Fraction(16, 27)), ("hexagon", Fraction(2, 9)),
                                         ("cp2", Fraction(1))])
def test_volume_se_exact(name, factor):
    exact, num = sk.volume_se(fp.named_fan(name))
    assert exact / 27 == factor
    assert num == pytest.approx(float(factor) * math.pi ** 3, rel=1e-14)


def test_cp2_volume_is_round_sphere():
    # the unit round S^5 has volume pi^3
    assert sk.volume_se(fp.named_fan("cp2"))[1] == pytest.approx(math.pi ** 3, rel=1e-14)


def test_volume_se_rejects_soliton_only():
    with pytest.raises(sk.SasakiError):
        sk.volume_se(fp.named_fan("f1"))


def test_sasaki_reports():
    sq = sk.sasaki_report(fp.named_fan("square"))
    assert str(sq.diffeotype) == "S²×S³" and sq.volume_factor == 16
    octagon = sk.sasaki_report(fp.named_fan("octagon"))
    assert str(octagon.diffeotype) == "#5(S²×S³)" and octagon.index == 2
    assert sk.sasaki_report(fp.named_fan("f1")).volume_se is None


# -- the non-spin family ------------------------------------------------------------

def test_repaired_family_k1():
    fan, l = sk.delta_kp_family(1, 0, repair=True)
    assert fan.rays == ((-1, 0), (0, 1), (1, -1), (0, -2))
    assert tuple(l) == (0, -1, -1, -1)


@pytest.mark.parametrize("k,p", [(2, 0), (1, 0), (3, 2)])
def test_as_printed_family_fails_completeness(k, p):
    with pytest.raises(fp.FanError, match="not complete"):
        sk.delta_kp_family(k, p)


@pytest.mark.parametrize("k,p", [(k, p) for k in (1, 2, 3, 4) for p in range(4)])
def test_repaired_family_valid(k, p):
    fan, l = sk.delta_kp_family(k, p, repair=True)
    assert fan.is_valid
    assert fp.is_strictly_upper_convex(fan, l)
    assert fan.n_rays == k + 3


@pytest.mark.parametrize("k,p", [(k, p) for k in (2, 3, 4) for p in range(4)])
def test_family_nonspin_for_k_at_least_two(k, p):
    rep = sk.nonspin_report(k, p)
    assert not rep.spin and rep.b2 == k
    assert rep.diffeotype == sk.Diffeotype(sk.DiffeoKind.X_INF_CONN_SUM, k - 1)


@pytest.mark.parametrize("p", [1, 3, 5])
def test_family_k1_odd_p_is_spin(p):
    assert sk.nonspin_report(1, p).spin


def test_family_k1_even_p_is_nonspin():
    assert not sk.nonspin_report(1, 0).spin


def test_family_argument_range():
    with pytest.raises(ValueError):
        sk.delta_kp_rays(0, 1)


# -- joins --------------------------------------------------------------------------

M3 = sk.JoinFactor(m=2, b2=1, index=2, order=1, name="M3")


def test_relative_indices():
    assert sk.relative_indices(4, 6) == (2, 3)
    assert sk.relative_indices(2, 2) == (1, 1)


def test_join_s3_m3():
    rep = sk.join(sk.sphere(1), M3)
    assert (rep.dimension_out, rep.b2_out, rep.smooth, rep.einstein) == (7, 2, True, True)
    assert rep.k == (1, 1)


def test_join_non_relative_indices_not_einstein():
    rep = sk.join(sk.sphere(1), M3, 1, 2)
    assert rep.smooth and not rep.einstein


def test_join_reduces_common_factor():
    rep = sk.join(sk.sphere(1), sk.sphere(1), 2, 2)
    assert rep.k == (1, 1) and rep.quotient_order == 2 and rep.notes


def test_join_smoothness_uses_orders():
    orb = sk.JoinFactor(m=2, b2=1, index=1, order=3)
    assert not sk.join(orb, sk.sphere(1), 3, 1).smooth
    assert sk.join(orb, sk.sphere(1), 1, 2).smooth


def test_join_spin_propagates_nonspin():
    ns = sk.JoinFactor(m=2, b2=2, index=1, spin=False)
    assert sk.join(ns, sk.sphere(1)).spin is False


@given(st.lists(st.integers(0, 4), min_size=1, max_size=5), st.integers(1, 3))
def test_iterated_join_dimensions(ms, m0):
    base = sk.sphere(m0)
    reports = sk.iterated_join(base, [sk.sphere(m) for m in ms])
    # the join of dimensions 2a+1 and 2b+1 has dimension 2(a+b)+1
    assert reports[-1].dimension_out == 2 * (m0 + sum(ms)) + 1
    assert reports[-1].b2_out == len(ms)


def test_iterated_join_with_surface_factor():
    reports = sk.iterated_join(M3, [sk.sphere(1), sk.sphere(1)])
    assert [r.dimension_out for r in reports] == [7, 9]
    assert [r.b2_out for r in reports] == [2, 3]


def test_fan_order_and_eschenburg():
    assert sk.fan_order(fp.named_fan("square")) == 1
    assert sk.fan_order(fp.AugmentedFan(((1, 0), (0, 1), (-1, -2)))) == 2
    assert sk.eschenburg_weights(1, 2, 3) == (5, 4, 3)
