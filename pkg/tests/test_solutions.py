import numpy as np
import pytest

from diagsol import (
    BranchAmbiguityError,
    CaseMismatchError,
    CompatibilityError,
    Const,
    DiagonalMetric,
    DomainBox,
    SolitonKind,
    builtin_examples,
    catalogue_entry,
    construct_both2,
    construct_both3,
    construct_sep,
    construct_x1x3,
    construct_x2x1,
    construct_x2x3,
    eval_many,
    evaluate,
    is_killing,
    lambda_mu_for_unit_v3,
    parse_expr,
    residual,
    sample_grid,
    soliton_kind,
    to_coordinate_components,
    unit_box,
)


def _m(f1, f2, box=None):
    return DiagonalMetric(parse_expr(f1), parse_expr(f2), box or unit_box())


def _match(e1, e2, pts, tol=1e-10):
    return float(np.abs(eval_many(e1, pts) - eval_many(e2, pts)).max()) <= tol


class TestCatalogue:
    def test_every_entry_satisfies_the_system(self):
        # Master property: verdict true at 1e-8 on the 9^3 grid.
        for entry in builtin_examples():
            report = residual(entry.soliton, grid_n=9, tol=1e-8)
            assert report.verdict, entry.name

    def test_entries_match_displayed_lambda_mu(self):
        for entry in builtin_examples():
            pts = sample_grid(entry.soliton.metric.domain, 7)
            assert _match(entry.soliton.lam, entry.expected_lambda, pts), entry.name
            assert _match(entry.soliton.mu, entry.expected_mu, pts), entry.name

    def test_expected_kinds(self):
        for entry in builtin_examples():
            assert soliton_kind(entry.soliton) is entry.expected_kind, entry.name

    def test_required_entries_present(self):
        names = {entry.name for entry in builtin_examples()}
        required = {
            "sol3",
            "h2xr",
            "x1x3-exp",
            "both3-exp",
            "both2-exp",
            "x2x1-unit",
            "x2x3-exp",
            "x2x1-flow",
            "x1x3-decay",
            "x1x3-logistic",
            "both3-decay",
        }
        assert required <= names

    def test_lookup(self):
        assert catalogue_entry("sol3").expected_kind is SolitonKind.STEADY
        with pytest.raises(KeyError):
            catalogue_entry("nope")

    def test_grid_size_robustness(self):
        for entry in builtin_examples():
            assert residual(entry.soliton, grid_n=5).verdict, entry.name


class TestSeparable:
    def test_constant_profiles_closed_form(self):
        m = _m("2", "3")
        data = construct_sep(m, lam=0.5, mu=1.5, c=(1, 1, 1, 1, 1, 1))
        assert residual(data).verdict
        # dV1/dx1 = -lam/k1 everywhere
        from diagsol import diff

        d1 = diff(data.V[1], 1)
        pts = sample_grid(m.domain, 5)
        assert np.allclose(eval_many(d1, pts), -0.5 / 2.0)

    def test_exponential_profiles(self):
        data = construct_sep(_m("exp(x1)", "exp(x2)"), lam=1.0, mu=1.0)
        assert residual(data, tol=1e-8).verdict

    def test_killing_specialization(self):
        m = _m("exp(x1)", "exp(x2)")
        data = construct_sep(m, lam=0.0, mu=0.0, c=(2.0, 0.0, 1.0, 0.0, 0.5, -1.0))
        flag, sup = is_killing(m, data.V)
        assert flag and sup < 1e-8

    def test_rotational_constants_still_killing(self):
        # c2, c4 mix x3 into V1, V2; the displayed field is Killing regardless.
        m = _m("exp(x1)", "exp(x2)")
        data = construct_sep(m, lam=0.0, mu=0.0, c=(1.0, 0.7, 0.0, -0.4, 0.0, 2.0))
        flag, sup = is_killing(m, data.V)
        assert flag and sup < 1e-8

    def test_case_mismatch(self, sol3):
        with pytest.raises(CaseMismatchError):
            construct_sep(sol3)
        with pytest.raises(ValueError, match="six"):
            construct_sep(_m("1", "1"), c=(1.0,))


class TestBothX3:
    def test_sol3_translations(self, sol3):
        data = construct_both3(sol3, c1=1.0, c2=1.0)
        pts = sample_grid(sol3.domain, 7)
        assert _match(data.lam, Const(0.0), pts)
        assert _match(data.mu, Const(2.0), pts)
        assert _match(data.V[3], Const(0.0), pts)
        coord = to_coordinate_components(data.V, sol3)
        assert np.allclose(eval_many(coord[0], pts), 1.0)
        assert residual(data).verdict

    def test_distinct_profiles_with_constant_f1(self):
        data = construct_both3(_m("1", "exp(x3)"), c1=1.0)
        pts = sample_grid(data.metric.domain, 7)
        assert _match(data.lam, Const(0.0), pts)
        assert _match(data.V[3], Const(-1.0), pts)
        assert _match(data.mu, Const(1.0), pts)
        assert residual(data).verdict

    def test_equal_profiles_free_lambda(self):
        m = _m("exp(x3)", "exp(x3)")
        data = construct_both3(m, c1=0.5, c2=-0.5, lam=parse_expr("x3"))
        assert residual(data).verdict
        data0 = construct_both3(m)
        pts = sample_grid(m.domain, 7)
        assert _match(data0.V[3], Const(-2.0), pts)
        assert _match(data0.mu, Const(2.0), pts)
        assert residual(data0).verdict

    def test_constant_profiles_free_flow(self):
        data = construct_both3(
            _m("1", "1"), c1=1.0, c2=2.0, F=parse_expr("-x3")
        )
        pts = sample_grid(data.metric.domain, 7)
        assert _match(data.mu, Const(1.0), pts)
        assert _match(data.lam, Const(0.0), pts)
        assert residual(data).verdict

    def test_ambiguous_branch(self):
        # b - d = x3 changes sign across the box
        m = _m("exp(x3^2/2)", "1")
        with pytest.raises(BranchAmbiguityError):
            construct_both3(m)

    def test_distinct_branch_with_varying_profiles(self):
        # Exercises the (b-d)'' and Wronskian terms with non-constant b, d.
        m = _m("exp(x3)", "exp(x3^2/2)", DomainBox((-1, 1), (-1, 1), (-1, 0.4)))
        data = construct_both3(m)
        report = residual(data)
        assert report.verdict
        assert report.equations[report.worst()]["max"] < 1e-12

    def test_distinct_branch_reciprocal_profile(self):
        # The flat reciprocal family yields mu = 0: degenerate but valid.
        m = _m("1", "1/(x3-2)", DomainBox((-1, 1), (-1, 1), (3, 4)))
        data = construct_both3(m, c1=1.0)
        with pytest.warns(Warning):
            assert residual(data).verdict

    def test_lambda_rejected_for_constant_profiles(self):
        with pytest.raises(ValueError, match="forced to 0"):
            construct_both3(_m("1", "1"), lam=1.0)


class TestX1X3:
    def test_exponential_example(self):
        m = _m("exp(x1)", "exp(x3)")
        data = construct_x1x3(m, c1=1.0, c2=1.0)
        pts = sample_grid(m.domain, 7)
        assert _match(data.lam, Const(0.0), pts)
        assert _match(data.mu, Const(1.0), pts)
        coord = to_coordinate_components(data.V, m)
        p = (0.5, 0.2, -0.3)
        assert evaluate(coord[0], p) == pytest.approx(np.exp(0.5), rel=1e-14)
        assert evaluate(coord[1], p) == pytest.approx(1.0, rel=1e-14)
        assert evaluate(coord[2], p) == pytest.approx(-1.0, rel=1e-14)
        assert residual(data).verdict

    def test_reciprocal_profile(self):
        m = _m("exp(x1)", "1/(x3-2)", DomainBox((-1, 1), (-1, 1), (3, 4)))
        with pytest.warns(Warning):
            data = construct_x1x3(m, c1=1.0, c2=1.0)
            assert residual(data).verdict

    def test_pure_vertical_field(self):
        data = construct_x1x3(_m("exp(x1)", "exp(x3)"))
        assert residual(data).verdict

    def test_constant_f2_free_flow(self):
        data = construct_x1x3(_m("exp(x1)", "2"), c1=1.0, F=parse_expr("x3^2"))
        pts = sample_grid(data.metric.domain, 7)
        assert _match(data.mu, parse_expr("-2*x3"), pts)
        assert residual(data).verdict

    def test_varying_d_branch(self):
        # d = 2 x3 is nowhere zero on the shifted box; mu picks up d''/d terms.
        m = _m("exp(x1)", "exp(x3^2)", DomainBox((-1, 1), (-1, 1), (0.5, 1.5)))
        data = construct_x1x3(m, c2=1.0)
        report = residual(data)
        assert report.verdict
        assert report.equations[report.worst()]["max"] < 1e-12


class TestBothX2:
    def test_hyperbolic_times_line(self, h2xr):
        data = construct_both2(h2xr, v3_ref=1.0)
        pts = sample_grid(h2xr.domain, 7)
        assert _match(data.lam, Const(1.0), pts)
        assert _match(data.mu, Const(-1.0), pts)
        assert np.allclose(eval_many(data.V[3], pts), 1.0)
        assert residual(data).verdict

    def test_constant_f1_allows_horizontal_constants(self):
        data = construct_both2(_m("2", "exp(x2)"), c1=1.0, c2=1.0)
        with pytest.warns(Warning):
            assert residual(data).verdict
        flag, _ = is_killing(data.metric, data.V)
        assert flag

    def test_exponential_pair_with_flow(self):
        m = _m("exp(x2)", "exp(x2)")
        data = construct_both2(m, G=parse_expr("-2*exp(2*x3)"))
        pts = sample_grid(m.domain, 7)
        assert _match(data.lam, Const(0.0), pts)
        assert _match(data.mu, parse_expr("2*exp(2*x3)"), pts)
        assert residual(data).verdict

    def test_nonconstant_f1_rejects_horizontal_constants(self, h2xr):
        with pytest.raises(ValueError, match="c1 and c2"):
            construct_both2(h2xr, c1=1.0)


class TestCrossed:
    def test_flow_example(self):
        m = _m("exp(x2)", "exp(x1)")
        data = construct_x2x1(m, F=parse_expr("exp(2*x3)/2"))
        pts = sample_grid(m.domain, 7)
        assert _match(data.lam, parse_expr("exp(2*x1) + exp(2*x2)"), pts)
        assert _match(
            data.mu, parse_expr("-(exp(2*x1) + exp(2*x2) + exp(2*x3))"), pts
        )
        assert residual(data).verdict

    def test_flat_translations(self):
        data = construct_x2x1(_m("1", "1"), c1=1.0, c2=1.0)
        pts = sample_grid(data.metric.domain, 7)
        assert _match(data.lam, Const(0.0), pts)
        with pytest.warns(Warning):
            assert residual(data).verdict

    def test_zero_flow_gives_mu_opposite_lambda(self):
        m = _m("exp(x2)", "exp(x1)")
        data = construct_x2x1(m)
        pts = sample_grid(m.domain, 7)
        assert _match(data.mu, Const(-1.0) * data.lam, pts, tol=1e-12)
        assert residual(data).verdict

    def test_nonconstant_profiles_reject_constants(self):
        with pytest.raises(ValueError, match="constant"):
            construct_x2x1(_m("exp(x2)", "exp(x1)"), c1=1.0)


class TestX2X3:
    def test_exponential_example(self):
        m = _m("exp(x2)", "exp(x3)")
        data = construct_x2x3(m, c2=-1.0, c3=1.0)
        pts = sample_grid(m.domain, 7)
        assert _match(data.lam, Const(1.0), pts)
        assert _match(data.mu, parse_expr("2*exp(2*x3)"), pts)
        coord = to_coordinate_components(data.V, m)
        p = (0.1, -0.2, 0.4)
        assert evaluate(coord[0], p) == 0.0
        assert evaluate(coord[1], p) == pytest.approx(1.0 - np.exp(0.8), rel=1e-13)
        assert evaluate(coord[2], p) == pytest.approx(-np.exp(0.8), rel=1e-13)
        assert residual(data).verdict

    def test_constant_profiles_free_vertical(self):
        data = construct_x2x3(_m("1", "1"), c1=3.0, v3=parse_expr("x3"))
        pts = sample_grid(data.metric.domain, 7)
        assert _match(data.mu, Const(-1.0), pts)
        assert residual(data).verdict

    def test_decaying_f1(self):
        m = _m("exp(-x2)", "exp(x3)")
        data = construct_x2x3(m, c2=1.0)
        assert residual(data).verdict

    def test_varying_d_with_nonconstant_f1(self):
        # f1'/f1 = -2 matches c2 = 2; d = 2 x3 varies across the box.
        m = _m("exp(-2*x2)", "exp(x3^2)", DomainBox((-1, 1), (-1, 1), (0.5, 1.5)))
        data = construct_x2x3(m, c2=2.0, c3=0.5)
        report = residual(data)
        assert report.verdict
        assert report.equations[report.worst()]["max"] < 1e-12

    def test_split_consistency_enforced(self):
        m = _m("exp(x2)", "exp(x3)")
        with pytest.raises(CompatibilityError, match="-c2 f2 \\+ F"):
            construct_x2x3(m, c2=1.0)  # actual a = -(-1) f2 = +f2 != -f2

    def test_nonzero_c1_needs_constant_f1(self):
        m = _m("exp(x2)", "exp(x3)")
        with pytest.raises(CompatibilityError, match="c1"):
            construct_x2x3(m, c1=1.0, c2=-1.0)

    def test_v3_rejected_when_determined(self):
        m = _m("exp(x2)", "exp(x3)")
        with pytest.raises(ValueError, match="determined"):
            construct_x2x3(m, c2=-1.0, v3=parse_expr("x3"))


class TestUnitV3:
    def test_both3_exponential_family(self):
        # f_i = k_i e^{k x3}: lambda = 2k^2 + k, mu = -k
        for k, k1, k2 in ((1.0, 1.0, 1.0), (2.0, 1.0, 3.0), (-0.5, 2.0, 0.5)):
            m = _m(f"{k1}*exp({k}*x3)", f"{k2}*exp({k}*x3)")
            data = lambda_mu_for_unit_v3(m)
            pts = sample_grid(m.domain, 7)
            assert _match(data.lam, Const(2 * k * k + k), pts, tol=1e-9)
            assert _match(data.mu, Const(-k), pts, tol=1e-9)
            assert residual(data).verdict

    def test_both3_compatibility_identity_exact_for_family(self):
        from diagsol import diff

        m = _m("2*exp(x3)", "3*exp(x3)")
        b = diff(m.f1, 3) / m.f1
        d = diff(m.f2, 3) / m.f2
        lhs = diff(b, 3) - b - b * b
        rhs = diff(d, 3) - d - d * d
        pts = sample_grid(m.domain, 9)
        assert float(np.abs(eval_many(lhs - rhs, pts)).max()) <= 1e-12

    def test_both3_violation_reports_magnitude(self):
        with pytest.raises(CompatibilityError) as err:
            lambda_mu_for_unit_v3(_m("exp(x3)", "exp(2*x3)"))
        assert err.value.max_violation == pytest.approx(4.0, abs=1e-9)

    def test_x1x3_families(self):
        pts = sample_grid(unit_box(), 7)
        decay = lambda_mu_for_unit_v3(_m("exp(x1)", "exp(-x3)"))
        assert _match(decay.mu, Const(1.0), pts)
        logistic = lambda_mu_for_unit_v3(_m("exp(x1)", "2/(3*exp(x3)+1)"))
        assert _match(
            logistic.mu, parse_expr("3*exp(x3)/(3*exp(x3)+1)"), pts, tol=1e-10
        )
        with pytest.raises(CompatibilityError):
            lambda_mu_for_unit_v3(_m("exp(x1)", "exp(x3)"))

    def test_both2_and_crossed_have_no_conditions(self):
        pts = sample_grid(unit_box(), 7)
        mirror = lambda_mu_for_unit_v3(_m("exp(-x2)", "exp(x2)"))
        assert _match(mirror.lam, parse_expr("2*exp(2*x2)"), pts)
        crossed = lambda_mu_for_unit_v3(_m("exp(x2)", "exp(x1)"))
        assert _match(crossed.lam, parse_expr("exp(2*x1) + exp(2*x2)"), pts)
        for data in (mirror, crossed):
            assert residual(data).verdict

    def test_x2x3_constant_f2_branch(self):
        m = _m("x2 + 3", "2")
        data = lambda_mu_for_unit_v3(m)
        assert residual(data).verdict
        with pytest.raises(CompatibilityError, match="f1' f2'"):
            lambda_mu_for_unit_v3(_m("exp(x2)", "1/(3*exp(x3)+1)"))

    def test_separable_rejected(self):
        with pytest.raises(CaseMismatchError):
            lambda_mu_for_unit_v3(_m("exp(x1)", "exp(x2)"))
