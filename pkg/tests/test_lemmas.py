import math

import pytest

from fig8jones.laurent import ComplexParam, context
from fig8jones.lemmas import (
    Grid2D,
    STRICT_MARGIN,
    _ladder,
    _re_a,
    certify_taylor_epsilon,
    check_exp_integral,
    check_positivity,
    check_ratio_lower_bound,
    check_region_identity,
    check_taylor_ratio,
    check_u_monotonicity,
    exp_integral_closed_form,
    oval_grid,
    ratio_constant,
    run_all,
)

P = 128


def small_grid(steps=9):
    g = oval_grid()
    return Grid2D(g.x_range, g.y_range, (steps, steps))


# -- grids ------------------------------------------------------------------------


def test_grid_excludes_origin_and_is_precision_stable():
    g = Grid2D((-1, 1), (-1, 1), (3, 3))
    pts = g.points(64)
    assert len(pts) == 8
    assert not any(p.is_zero() for p in pts)
    assert [(p.re, p.im) for p in pts] == [(p.re, p.im) for p in g.points(256)]


# -- region identity ------------------------------------------------------------------


def test_identity_worked_examples():
    ctx = context(P)
    for a in (ComplexParam(0, ctx.pi / 4, P), ComplexParam(1, 0, P)):
        lhs = abs(ctx.cosh(a.value) - 1)
        rhs = ctx.cosh(a.x) - ctx.cos(a.y)
        assert abs(lhs - rhs) < ctx.mpf(2) ** (24 - P)
    # at i pi/4 both sides equal 1 - 1/sqrt2
    assert abs(abs(ctx.cosh(ctx.mpc(0, ctx.pi / 4)) - 1) - (1 - 1 / ctx.sqrt(2))) < ctx.mpf(2) ** (8 - P)


@pytest.mark.parametrize("bits", [64, 128, 256])
def test_identity_tolerance_scales_with_precision(bits):
    rep = check_region_identity(small_grid(), bits)
    assert rep.passed
    assert rep.details["max_discrepancy"] <= 2.0 ** (24 - bits)


# -- u monotonicity --------------------------------------------------------------------


@pytest.mark.parametrize("lit", ["0.5", "0.3i", "0.4-0.5i"])
def test_u_monotonicity_points(lit):
    rep = check_u_monotonicity([ComplexParam.parse(lit, P)])
    assert rep.passed and rep.details["a_points"] == 1
    assert rep.min_margin > STRICT_MARGIN


def test_u_monotonicity_small_grid():
    rep = check_u_monotonicity(small_grid())
    assert rep.passed and rep.details["a_points"] > 0


def test_u_monotonicity_precision_stable():
    r64 = check_u_monotonicity(small_grid(), precision_bits=64)
    r128 = check_u_monotonicity(small_grid(), precision_bits=128)
    assert r64.passed == r128.passed
    assert r64.min_margin == pytest.approx(r128.min_margin, rel=1e-6)


# -- ratio lower bound -----------------------------------------------------------------


def test_ratio_lower_bound_samples():
    rep = check_ratio_lower_bound(u_points=128)
    assert rep.passed
    assert all(e["epsilon"] is not None for e in rep.details["epsilon"])


def test_ratio_epsilon_stable_under_refinement():
    a = ComplexParam.parse("0.4+0.2i", P)
    e1 = check_ratio_lower_bound(a, u_points=64).details["epsilon"][0]["epsilon"]
    e2 = check_ratio_lower_bound(a, u_points=128).details["epsilon"][0]["epsilon"]
    assert e1 is not None and e2 is not None
    # equal, or one ladder rung apart
    assert e2 in (e1, e1 / 2)


def test_ladder():
    assert _ladder(1.0, 3) == [1.0, 0.5, 0.25, 0.125]


# -- exponential integral -----------------------------------------------------------------


def test_exp_integral_worked_values():
    ctx = context(P)
    e = ctx.e
    assert abs(exp_integral_closed_form(1, 1, ctx) - 2 / e) < ctx.mpf(2) ** (8 - P)
    assert abs(exp_integral_closed_form(2, 1, ctx) - 5 / e) < ctx.mpf(2) ** (8 - P)
    assert abs(exp_integral_closed_form(1, 2, ctx) - 3 * ctx.exp(-2) / 4) < ctx.mpf(2) ** (8 - P)


def test_exp_integral_against_incomplete_gamma():
    ctx = context(P)
    for m in (1, 4, 7):
        for a in ("0.5", "3"):
            av = ctx.mpf(a)
            oracle = ctx.gammainc(m + 1, av) / av ** (m + 1)
            assert abs(exp_integral_closed_form(m, av, ctx) - oracle) < ctx.mpf(2) ** (16 - P) * oracle


def test_exp_integral_check():
    rep = check_exp_integral(m_max=4, a_grid=("0.5", "2"))
    assert rep.passed and rep.samples == 8


# -- Taylor ratio ---------------------------------------------------------------------------


def test_ratio_constant_limit():
    # c -> 2 as a -> 0 (a sinh a ~ a^2, cosh a - 1 ~ a^2/2)
    assert float(ratio_constant(ComplexParam("1e-6", 0))) == pytest.approx(2.0, rel=1e-9)


def test_taylor_ratio_samples():
    rep = check_taylor_ratio(x_steps=16, u_steps=16)
    assert rep.passed
    assert all(e["epsilon_prime"] is not None for e in rep.details["epsilon_prime"])


def test_taylor_epsilon_stable_within_one_rung():
    a = ComplexParam.parse("0.5", P)
    e1, _ = certify_taylor_epsilon(a, 16, 16)
    e2, _ = certify_taylor_epsilon(a, 32, 32)
    assert e1 is not None and e2 is not None
    assert e2 in (e1, e1 / 2)


# -- positivity --------------------------------------------------------------------------------


def test_re_a_closed_form_on_imaginary_axis():
    # a = iy: a sinh a / (cosh a - 1) = -y sin y / (cos y - 1) = y cot(y/2)
    ctx = context(P)
    y = ctx.mpf("0.5")
    a = ComplexParam(0, "0.5", P)
    assert abs(_re_a(a) - y / ctx.tan(y / 2)) < ctx.mpf(2) ** (16 - P)


def test_positivity_small_grids():
    assert check_positivity(Grid2D((-4, 4), (-3.1, 3.1), (9, 9))).passed
    assert check_positivity(small_grid(), which="Re_a2").passed


def test_positivity_bad_selector():
    with pytest.raises(ValueError):
        check_positivity(which="nope")


def test_positivity_fails_past_strip():
    # at a = i(pi + 0.5) the expression y cot(y/2) is negative
    rep = check_positivity(Grid2D((0, 0), (math.pi + 0.5, math.pi + 0.5), (1, 1)))
    assert not rep.passed


# -- full suite ---------------------------------------------------------------------------------


@pytest.mark.slow
def test_run_all_default_grids():
    reports = run_all()
    assert len(reports) == 7
    for r in reports:
        assert r.passed, (r.lemma_id, r.violations[:3])
