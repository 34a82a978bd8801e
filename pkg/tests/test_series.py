from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from todahurwitz.algebra import Expr, HomogeneousFamily, HurwitzFamily, family_from_name
from todahurwitz.hurwitz import hurwitz_genus0
from todahurwitz.partitions import enumerate_partitions
from todahurwitz.series import (
    VACUUM,
    TruncatedSeries,
    check_cut_and_join,
    check_homogeneity,
    check_mixed_derivatives,
    check_toda_equation,
    expand_tau,
    run_all_checks,
    series_to_json,
)

HUR = HurwitzFamily()


def hur(q, e, b=0, p=0, L=0, c=1):
    return Expr.monomial((q, e, b, p, L), c)


@pytest.fixture(scope="module")
def hur4():
    return expand_tau(HUR, 4)


class TestAlgebra:
    def test_f_power_derivative(self):
        assert HUR.f_power_derivative(3, 2) == hur(3, 3, 2, c=9)
        x = HUR.f() * HUR.f() * HUR.f()
        assert HUR.d0(HUR.d0(x)) == HUR.f_power_derivative(3, 2)

    @pytest.mark.parametrize("alpha", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)])
    def test_homogeneous_falling_factorial(self, alpha):
        fam = HomogeneousFamily(alpha)
        for s in range(1, 4):
            x = fam.f_power_derivative(s, 0)
            for r in range(0, 4):
                assert fam.f_power_derivative(s, r) == x
                x = fam.d0(x)

    def test_homogeneous_vacuum_gives_f(self):
        for alpha in (Fraction(1), Fraction(2), Fraction(1, 2)):
            fam = HomogeneousFamily(alpha)
            second = fam.d0(fam.d0(fam.vacuum()))
            # exp(F'') = f  <=>  F'' = log u / alpha
            assert second == Expr.monomial((Fraction(0), 1), 1 / alpha)

    def test_family_from_name(self):
        assert isinstance(family_from_name("hurwitz"), HurwitzFamily)
        assert family_from_name("homogeneous", "1/2").alpha == Fraction(1, 2)
        with pytest.raises(ValueError):
            family_from_name("homogeneous")
        with pytest.raises(ValueError):
            HomogeneousFamily(Fraction(0))

    def test_d_beta_commutes_with_d0(self):
        x = hur(2, 2, 1, 3, 1, c=5) + hur(1, 1, 2)
        assert HUR.d_beta(HUR.d0(x)) == HUR.d0(HUR.d_beta(x))


class TestExpansion:
    def test_examples(self, hur4):
        assert hur4.coefficient((1,), (1,)) == hur(1, 1)
        assert hur4.coefficient((2,), (2,)) == hur(2, 2, c=2)
        assert hur4.coefficient((2, 1), (2, 1)) == hur(3, 3, 2, c=8)
        assert hur4.coefficient((3,), (2, 1)) == hur(3, 3, 1, c=6)

    def test_absent_off_diagonal(self, hur4):
        assert not hur4.coefficient((1,), (2,))
        assert all(sum(a) == sum(b) for a, b in hur4.coeffs)

    def test_vacuum(self, hur4):
        assert hur4.constant() == hur(0, 0, 1, 3, c=Fraction(1, 6)) + hur(0, 0, 0, 2, 1, c=Fraction(1, 2))
        h = expand_tau(HomogeneousFamily(Fraction(2)), 1)
        assert h.constant() == HomogeneousFamily(Fraction(2)).vacuum()

    def test_two_routes_agree(self, hur4):
        for d in range(1, 5):
            for a in enumerate_partitions(d):
                for b in enumerate_partitions(d):
                    length = a.length + b.length - 2
                    scale = Fraction(prod(a.parts) * prod(b.parts), factorial(length))
                    expected = hur(d, d, length, c=scale * hurwitz_genus0(a, b))
                    assert hur4.coefficient(a.parts, b.parts) == expected

    def test_truncation(self, hur4):
        assert all(sum(a) <= 4 and sum(b) <= 4 for a, b in hur4.coeffs)
        low = {m: c for m, c in hur4.coeffs.items() if sum(m[0]) <= 2 and sum(m[1]) <= 2}
        assert expand_tau(HUR, 2).coeffs == low

    def test_diagonal_derivatives_at_origin(self, hur4):
        for k in range(1, 5):
            for j in range(1, 5):
                c = hur4.d(k).dbar(j).constant()
                assert c == (HUR.f_power_derivative(k, 0) * k if k == j else Expr())

    def test_json_export(self):
        data = series_to_json(expand_tau(HUR, 2))
        assert data["family"] == "hurwitz" and data["bound"] == 2
        first = data["terms"][0]
        assert first["delta"] == [] and first["delta_bar"] == []
        t11 = next(t for t in data["terms"] if t["delta"] == [1] and t["delta_bar"] == [1])
        assert t11["coeff"] == [{"q_pow": 1, "exp_coeff_d": 1, "beta_pow": 0, "t0_pow": 0,
                                 "logq_pow": 0, "rational": "1/1"}]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.booleans(), st.booleans())
def test_derivatives_commute(k, l, bar_k, bar_l):  # noqa: E741
    s = expand_tau(HUR, 4)
    dk = (lambda x: x.dbar(k)) if bar_k else (lambda x: x.d(k))
    dl = (lambda x: x.dbar(l)) if bar_l else (lambda x: x.d(l))
    assert dk(dl(s)) == dl(dk(s))


class TestSeriesOps:
    def test_exp_nilpotent(self):
        x = TruncatedSeries(HUR, 2, {((1,), ()): HUR.one()})
        e = x.exp_nilpotent()
        assert e.coeffs == {VACUUM: HUR.one(), ((1,), ()): HUR.one(), ((1, 1), ()): HUR.one() * Fraction(1, 2)}

    def test_exp_refuses_constant(self):
        with pytest.raises(ValueError):
            TruncatedSeries(HUR, 2, {VACUUM: HUR.one()}).exp_nilpotent()

    def test_product_truncates(self):
        x = TruncatedSeries(HUR, 2, {((2,), ()): HUR.one()})
        assert not (x * x).coeffs


class TestChecks:
    def test_mixed_derivatives(self, hur4):
        report = check_mixed_derivatives(hur4, HUR)
        assert report.passed and len(report.results) > 0

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_toda(self, hur4, depth):
        report = check_toda_equation(hur4, HUR, depth)
        assert report.passed
        if depth == 0:
            assert len(report.results) == 2

    def test_toda_depth4_reexpands(self, hur4):
        assert check_toda_equation(hur4, HUR, 4).passed

    def test_toda_homogeneous(self):
        fam = HomogeneousFamily(Fraction(1))
        assert check_toda_equation(expand_tau(fam, 3), fam, 2).passed

    def test_cut_and_join(self, hur4):
        assert check_cut_and_join(hur4).passed

    def test_cut_and_join_needs_hurwitz(self):
        fam = HomogeneousFamily(Fraction(1))
        with pytest.raises(ValueError):
            check_cut_and_join(expand_tau(fam, 1))

    def test_homogeneity(self, hur4):
        assert check_homogeneity(hur4, HUR).passed

    @pytest.mark.parametrize("alpha", ["1", "2", "1/2", "3"])
    def test_homogeneous_family(self, alpha):
        fam = HomogeneousFamily(Fraction(alpha))
        reports = run_all_checks(fam, 3)
        assert [r.name for r in reports] == ["mixed_derivatives", "homogeneity"]
        assert all(r.passed for r in reports)

    def test_depth_zero(self):
        reports = run_all_checks(HUR, 0)
        assert all(r.passed for r in reports)

    @pytest.mark.parametrize("mono", [((2, 1), (2, 1)), ((3,), (2, 1)), ((2,), (2,)), ((1, 1), (2,))])
    def test_corruption_is_detected(self, hur4, mono):
        bad = dict(hur4.coeffs)
        bad[mono] = bad[mono] + hur(sum(mono[0]), sum(mono[0]), c=1)
        broken = TruncatedSeries(HUR, 4, bad)
        failing = [
            not check_toda_equation(broken, HUR, 3).passed,
            not check_cut_and_join(broken).passed,
            not check_homogeneity(broken, HUR).passed,
        ]
        assert sum(failing) >= 2
        first = check_cut_and_join(broken).first_failure
        assert first is not None and first.lhs != first.rhs

    def test_report_json(self, hur4):
        data = check_homogeneity(hur4, HUR).to_json()
        assert data["check"] == "homogeneity" and data["passed"] is True
        assert data["n_identities"] == len(data["results"])
