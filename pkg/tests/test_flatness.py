import math

import numpy as np
import pytest

from diagsol import (
    CaseTag,
    Const,
    DiagonalMetric,
    DomainBox,
    DomainError,
    SeparationOdeSpec,
    UnsupportedCaseError,
    construct_flat_partner_x2,
    evaluate,
    flatness_criterion,
    parse_expr,
    solve_separation_ode,
    unit_box,
)

BOX34 = DomainBox((-1, 1), (-1, 1), (3, 4))
BOX_X2POS = DomainBox((-1, 1), (0.5, 2), (-1, 1))


def _m(f1, f2, box=None):
    return DiagonalMetric(parse_expr(f1), parse_expr(f2), box or unit_box())


# One satisfying configuration per dependency case, one violating it where a
# violating instance exists (the separable case is unconditionally flat, so it
# contributes two satisfying ones). Twelve configurations in total.
FLATNESS_CONFIGS = [
    ("sep exp", _m("exp(x1)", "exp(x2)"), True),
    ("sep rational", _m("2 + x1", "1/(x2 + 2)"), True),
    ("both3 reciprocal", _m("1", "1/(x3-2)", BOX34), True),
    ("both3 sol3", _m("exp(-x3)", "exp(x3)"), False),
    ("x1x3 reciprocal", _m("exp(x1)", "1/(x3-2)", BOX34), True),
    ("x1x3 exp", _m("exp(x1)", "exp(x3)"), False),
    ("both2 exp pair", _m("exp(x2)", "exp(x2)"), True),
    ("both2 hyperbolic", _m("x2", "x2", BOX_X2POS), False),
    ("x2x1 reciprocal pair", _m("1/(x2 + 2)", "1/(x1 + 5)"), True),
    ("x2x1 exp pair", _m("exp(x2)", "exp(x1)"), False),
    ("x2x3 reciprocal", _m("1/(x2 - 2)", "1"), True),
    ("x2x3 exp pair", _m("exp(x2)", "exp(x3)"), False),
]


class TestFlatnessCriterion:
    @pytest.mark.parametrize(
        "name,metric,expect_flat",
        FLATNESS_CONFIGS,
        ids=[row[0] for row in FLATNESS_CONFIGS],
    )
    def test_criterion_agrees_with_numeric_sup(self, name, metric, expect_flat):
        verdict = flatness_criterion(metric)
        assert verdict.criterion_holds == expect_flat
        assert verdict.agrees
        if expect_flat:
            assert verdict.numeric_sup < 1e-7
        else:
            assert verdict.numeric_sup > 0.05

    def test_sol3_is_visibly_curved(self, sol3):
        verdict = flatness_criterion(sol3)
        assert not verdict.criterion_holds
        assert verdict.numeric_sup >= 0.5

    def test_case_tags_are_reported(self):
        assert flatness_criterion(_m("exp(x1)", "exp(x2)")).case is CaseTag.SEP
        assert flatness_criterion(_m("1", "1/(x3-2)", BOX34)).case is CaseTag.BOTH3

    def test_general_case_raises_with_sup(self):
        m = _m("exp(x2*x3)", "1")
        with pytest.raises(UnsupportedCaseError) as err:
            flatness_criterion(m)
        assert err.value.numeric_sup > 0.0

    def test_pole_inside_box_is_domain_error_not_wrong_verdict(self):
        # c2 = 0 sits at the center of the origin-centered box, which the odd
        # grid hits exactly: the reciprocal-profile alternative must fail with
        # a domain error instead of returning a flat verdict.
        m = _m("1", "1/x3")
        with pytest.raises(DomainError):
            flatness_criterion(m)

    def test_agrees_on_every_catalogue_metric(self):
        from diagsol import CaseTag, classify
        from diagsol.solutions import builtin_examples

        seen = set()
        for entry in builtin_examples():
            m = entry.soliton.metric
            key = (str(m.f1), str(m.f2))
            if key in seen or classify(m) is CaseTag.GENERAL:
                continue
            seen.add(key)
            verdict = flatness_criterion(m, grid_n=9, tol_flat=1e-7)
            assert verdict.agrees, entry.name


class TestFlatPartner:
    def test_exponential_self_partner(self):
        f1 = parse_expr("exp(x2)")
        f2 = construct_flat_partner_x2(f1, 1.0, unit_box())
        for t in (-0.5, 0.0, 0.7):
            assert evaluate(f2, (0, t, 0)) == pytest.approx(math.exp(t), rel=1e-12)
        verdict = flatness_criterion(DiagonalMetric(f1, f2, unit_box()))
        assert verdict.criterion_holds and verdict.numeric_sup < 1e-7

    def test_linear_profile(self):
        f1 = parse_expr("x2")
        f2 = construct_flat_partner_x2(f1, 1.0, BOX_X2POS)
        for t in (0.6, 1.0, 1.8):
            assert evaluate(f2, (0, t, 0)) == pytest.approx(t * t, rel=1e-12)
        verdict = flatness_criterion(DiagonalMetric(f1, f2, BOX_X2POS))
        assert verdict.numeric_sup < 1e-8

    def test_scaled_exponential(self):
        f1 = parse_expr("exp(2*x2)")
        f2 = construct_flat_partner_x2(f1, 3.0, unit_box())
        for t in (-0.3, 0.4):
            assert evaluate(f2, (0, t, 0)) == pytest.approx(
                1.5 * math.exp(2 * t), rel=1e-12
            )
        assert flatness_criterion(DiagonalMetric(f1, f2, unit_box())).criterion_holds

    def test_rejections(self):
        with pytest.raises(ValueError, match="c0"):
            construct_flat_partner_x2(parse_expr("exp(x2)"), 0.0, unit_box())
        with pytest.raises(ValueError, match="x2"):
            construct_flat_partner_x2(parse_expr("exp(x1)"), 1.0, unit_box())
        with pytest.raises(ValueError, match="vanishes"):
            construct_flat_partner_x2(Const(2.0), 1.0, unit_box())
        with pytest.raises(ValueError, match="vanishes"):
            # f1' = 2*x2 crosses zero inside the box
            construct_flat_partner_x2(parse_expr("1 + x2^2"), 1.0, unit_box())


def _second_derivative(fn, x, outer=1e-3, inner=1e-4):
    def first(t):
        return (fn(t + inner) - fn(t - inner)) / (2 * inner)

    return (first(x + outer) - first(x - outer)) / (2 * outer)


def _interior(domain, count):
    lo, hi = domain
    pad = 0.05 * (hi - lo)
    return np.linspace(lo + pad, hi - pad, count)


class TestSeparationOde:
    def test_linear_case_k0(self):
        sol = solve_separation_ode(SeparationOdeSpec(k=0.0, r=1.0, J=(1.0, 2.0)))
        lo, hi = sol.domain
        assert (lo, hi) == pytest.approx((0.0, 1.0), abs=1e-12)
        # F(y) = y - 1, so f(x) = 1/(x + 1)
        for x in (0.2, 0.5, 0.8):
            assert sol.f(x) == pytest.approx(1.0 / (x + 1.0), abs=1e-10)
        for x in _interior(sol.domain, 5):
            assert _second_derivative(sol.h, x) == pytest.approx(0.0, abs=1e-5)

    def test_h_equation_negative_k(self):
        sol = solve_separation_ode(SeparationOdeSpec(k=-0.5, r=1.0, J=(1.0, 2.0)))
        for x in _interior(sol.domain, 10):
            assert _second_derivative(sol.h, x) * sol.h(x) == pytest.approx(
                0.5, abs=1e-5
            )

    @pytest.mark.parametrize("k", [-0.5, 0.0, 0.7])
    def test_f_satisfies_separation_identity(self, k):
        sol = solve_separation_ode(SeparationOdeSpec(k=k, r=1.0, J=(1.0, 2.0)))
        for x in _interior(sol.domain, 10):
            f = sol.f(x)
            fp = (sol.f(x + 1e-4) - sol.f(x - 1e-4)) / 2e-4
            fpp = _second_derivative(sol.f, x)
            assert (fpp * f - 2 * fp * fp) / f**4 == pytest.approx(k, abs=1e-4)

    def test_inverse_roundtrip(self):
        sol = solve_separation_ode(SeparationOdeSpec(k=0.7, r=1.0, J=(1.0, 2.0)))
        for y in np.linspace(1.05, 1.95, 9):
            assert sol.F_inv(sol.F(y)) == pytest.approx(y, abs=1e-9)

    def test_negative_epsilon_orientation(self):
        sol = solve_separation_ode(
            SeparationOdeSpec(k=-0.5, r=1.0, J=(1.0, 2.0), c0=0.25, epsilon=-1)
        )
        lo, hi = sol.domain
        assert hi == pytest.approx(0.25)
        for x in _interior(sol.domain, 5):
            assert _second_derivative(sol.h, x) * sol.h(x) == pytest.approx(
                0.5, abs=1e-5
            )

    def test_negative_interval(self):
        sol = solve_separation_ode(SeparationOdeSpec(k=-0.5, r=1.0, J=(-2.0, -1.0)))
        for x in _interior(sol.domain, 5):
            assert sol.h(x) < 0
            assert _second_derivative(sol.h, x) * sol.h(x) == pytest.approx(
                0.5, abs=1e-5
            )

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="outside J"):
            SeparationOdeSpec(k=0.0, r=1.0, J=(-1.0, 1.0))
        with pytest.raises(ValueError, match="positive on J"):
            SeparationOdeSpec(k=5.0, r=1.0, J=(1.0, 2.0))
        with pytest.raises(ValueError, match="epsilon"):
            SeparationOdeSpec(k=0.0, r=1.0, J=(1.0, 2.0), epsilon=2)
        with pytest.raises(ValueError, match="finite interval"):
            SeparationOdeSpec(k=0.0, r=1.0, J=(2.0, 1.0))

    def test_inverse_target_out_of_range(self):
        sol = solve_separation_ode(SeparationOdeSpec(k=0.0, r=1.0, J=(1.0, 2.0)))
        with pytest.raises(ValueError, match="outside F"):
            sol.F_inv(5.0)
        with pytest.raises(ValueError, match="outside J"):
            sol.F(3.0)
