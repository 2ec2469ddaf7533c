from fractions import Fraction

import mpmath
import pytest

from fig8jones.convergence import (
    alexander_inverse_series,
    figure_eight_volume,
    growth_rate_study,
    interpolate_exact,
    limit_study,
    lobachevsky,
    mmr_coefficients,
    mmr_study,
    region_check,
    shifted_gap_bound,
    shifted_gap_study,
)
from fig8jones.jones import alexander_inverse, jones_numeric
from fig8jones.laurent import ComplexParam, DomainError, context

P = 128


# -- region --------------------------------------------------------------------


def test_region_origin():
    v = region_check(ComplexParam(0, 0))
    assert v.inside and v.delta == 0 and v.equivalent_form == 0


def test_region_delta_at_half_by_direct_evaluation():
    a = ComplexParam("0.5", 0, P)
    ctx = context(P)
    direct = 2 * ctx.cosh(ctx.mpf("0.5")) - 2
    assert abs(region_check(a).delta - direct) < ctx.mpf(2) ** (8 - P)
    assert abs(float(direct) - 0.2552519304) < 1e-9


def test_region_boundary_points_not_inside():
    ctx = context(P)
    x = ctx.log((3 + ctx.sqrt(5)) / 2)
    assert not region_check(ComplexParam(x, 0, P)).inside
    on_line = region_check(ComplexParam(0, ctx.pi / 3, P))
    assert not on_line.im_bound_ok and not on_line.inside


def test_region_outside():
    assert not region_check(ComplexParam.parse("1.5")).inside
    assert not region_check(ComplexParam.parse("2pi*i")).inside


@pytest.mark.parametrize("lit", ["0.3+0.4i", "-0.7+0.2i", "1.1i"])
def test_region_identity(lit):
    v = region_check(ComplexParam.parse(lit, P))
    assert abs(v.delta / 2 - v.equivalent_form) < mpmath.mpf(2) ** (16 - P)


# -- limit study -----------------------------------------------------------------


def test_limit_at_zero_is_exact():
    rep = limit_study(ComplexParam(0, 0), [10, 20, 40])
    assert rep.errors == [0.0, 0.0, 0.0]
    assert rep.fitted_order is None


@pytest.mark.parametrize("lit", ["0.5", "0.25i"])
def test_limit_converges(lit):
    rep = limit_study(ComplexParam.parse(lit, P), [25, 50, 100, 200])
    assert rep.errors_decreasing
    assert rep.errors == rep.recomputed_errors()
    assert all(rep.tail_ok)
    assert rep.relative_errors[-1] < 0.01
    assert rep.fitted_order == pytest.approx(-2.0, abs=0.1)


def test_limit_tail_bound_dominates():
    rep = limit_study(ComplexParam.parse("0.6+0.2i", P), [30, 60])
    assert all(b == pytest.approx(rep.delta**N / (1 - rep.delta)) for b, N in zip(rep.tail_bound, rep.schedule))
    assert all(rep.tail_ok)


def test_limit_refuses_outside():
    with pytest.raises(DomainError):
        limit_study(ComplexParam.parse("1.5"), [10, 20])


def test_limit_outside_is_exploratory():
    rep = limit_study(ComplexParam.parse("1.2"), [10, 20], allow_outside=True)
    assert rep.exploratory


def test_limit_schedule_validation():
    with pytest.raises(DomainError):
        limit_study(ComplexParam.parse("0.3"), [20, 10])


def test_limit_jobs_give_same_values():
    a = ComplexParam.parse("0.3+0.1i", P)
    assert limit_study(a, [10, 20], jobs=2).values == limit_study(a, [10, 20]).values


# -- shifted sequences -------------------------------------------------------------


def test_shifted_at_zero():
    rep = shifted_gap_study(ComplexParam(0, 0), 1, [10, 20])
    assert rep.gaps == [0.0, 0.0]


@pytest.mark.parametrize("l", [1, 2])
def test_shifted_gaps_shrink_within_bound(l):
    rep = shifted_gap_study(ComplexParam.parse("0.5", P), l, [50, 100, 200])
    assert all(b < a for a, b in zip(rep.gaps, rep.gaps[1:]))
    assert rep.within_bounds
    assert rep.shrink_factor > 2


def test_shifted_bound_formula():
    # K = 10, r = 1 - 0.5/100
    d, c, N, l, e = 0.3, 0.5, 100, 1, 0.1
    r = 1 - c / N
    exp = (1 - d**10) / (1 - d) - (1 - (d * r) ** 10) / (1 - d * r) + 2 * d**10 * (1 - d**90) / (1 - d)
    assert shifted_gap_bound(N, l, d, c, e) == pytest.approx(exp)


def test_shifted_rejects_bad_shift():
    with pytest.raises(DomainError):
        shifted_gap_study(ComplexParam.parse("0.5"), 3, [10])


# -- growth rate -------------------------------------------------------------------


def test_lobachevsky_against_independent_oracles():
    ctx = context(P)
    for theta in (ctx.pi / 3, ctx.pi / 5, ctx.mpf("0.3"), 2 * ctx.pi / 3 + ctx.mpf("0.1")):
        ours = lobachevsky(theta, P)
        with mpmath.workprec(P):
            clausen = mpmath.clsin(2, 2 * theta) / 2
        assert abs(ours - clausen) < mpmath.mpf(2) ** (10 - P)
    with mpmath.workdps(30):
        quad = -mpmath.quad(lambda u: mpmath.log(abs(2 * mpmath.sin(u))), [0, mpmath.pi / 3])
    assert abs(lobachevsky(ctx.pi / 3) - quad) < 1e-25


def test_figure_eight_volume():
    assert float(figure_eight_volume()) == pytest.approx(2.0298832128193072, rel=1e-15)


def test_lobachevsky_domain():
    with pytest.raises(DomainError):
        lobachevsky(0)


def test_growth_rate_small_n():
    rep = growth_rate_study([2, 3, 4])
    assert rep.rates[0] == pytest.approx(mpmath.pi * mpmath.log(5))
    assert rep.rates[1] == pytest.approx(2 * mpmath.pi / 3 * mpmath.log(13))


def test_growth_rate_approaches_volume():
    rep = growth_rate_study([100, 200, 400])
    assert rep.relative_gap < 0.25
    assert rep.extrapolated == pytest.approx(rep.reference, rel=1e-2)


# -- MMR table -----------------------------------------------------------------------


def test_interpolate_exact():
    xs = [1, 2, 3, 4]
    ys = [Fraction(x * x - 1) for x in xs]
    assert interpolate_exact(xs, ys) == [-1, 0, 1]
    assert interpolate_exact([1, 2, 3], [0, 0, 0]) == [0]
    with pytest.raises(DomainError):
        interpolate_exact([1, 1], [0, 1])


def test_mmr_known_coefficients():
    s = mmr_coefficients(2, 4)
    assert s[0] == 1
    assert s[2] == 3
    for N in range(2, 9):
        assert mmr_coefficients(N, 2)[2] == N * N - 1


def test_mmr_table():
    tab = mmr_study()
    assert tab.below_diagonal
    assert tab.odd_rows_zero
    assert tab.diagonal_matches
    assert tab.diagonal == [1, 0, 1, 0, Fraction(13, 12), 0, Fraction(421, 360)]
    assert tab.fitted_degree == {0: 0, 1: -1, 2: 2, 3: -1, 4: 4, 5: -1, 6: 6}


def test_mmr_needs_enough_nodes():
    with pytest.raises(DomainError):
        mmr_study(j_max=6, N_set=range(2, 8))


@pytest.mark.parametrize("lit", ["0.1", "0.2i", "0.15+0.15i", "0.3"])
def test_mmr_diagonal_sums_to_limit(lit):
    # h = a/N: sum_j b_jj a^j reproduces 1/(3 - 2 cosh a) up to order a^8,
    # and J_N(exp(a/N)) tends there as N grows
    a = ComplexParam.parse(lit, P)
    series = alexander_inverse_series(8)
    approx = series.evaluate(complex(a.value))
    exact = complex(alexander_inverse(a))
    assert abs(approx - exact) < 10 * abs(complex(a.value)) ** 8 + 1e-15
    assert abs(complex(jones_numeric(400, a)) - exact) < 1e-4
