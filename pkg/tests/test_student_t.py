import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmills.specfun import DomainError, ln_gamma
from tmills.student_t import (
    TDist,
    c_nu,
    change_of_variable,
    log_tail,
    mills_ratio,
    mills_ratio_quadrature,
    pdf,
    tail,
    tail_quadrature,
)

nus = st.floats(1e-4, 1e4)
moderate_a = st.floats(-50.0, 50.0)

# mpmath (40 digits) values of P[X >= a] and the Mill's ratio.
TAIL_REF = [
    (0.01, 3.0, 0.47995996182268678, 300.16744946918632),
    (0.5, 2.0, 0.22275744509156562, 4.2921147888715022),
    (3.0, 1.5, 0.11529193262241153, 0.96062861910950166),
    (30.0, 4.0, 0.00019092281804187842, 0.36385903588240874),
    (1000.0, 10.0, 8.3353514793000332e-23, 0.10893347226969691),
    (1e-4, 1.5, 0.49971489369322989, 15000.333346295451),
    (5.0, -2.0, 0.94903026058507082, 14.580207957663236),
    (1000.0, 50.0, 1.3793362061625825e-274, 0.069972089221343856),
]


def cauchy_tail(a):
    return 0.5 - math.atan(a) / math.pi


class TestTDist:
    def test_rejects_nonpositive(self):
        for bad in (0.0, -1.0, math.nan, math.inf):
            with pytest.raises(DomainError):
                TDist(bad)

    @given(st.floats(1e-4, 100.0))
    def test_ln_c_nu_matches_gamma_form(self, nu):
        d = TDist(nu)
        direct = ln_gamma((nu + 1) / 2) - ln_gamma(nu / 2) - 0.5 * math.log(nu * math.pi)
        assert d.ln_c_nu == pytest.approx(direct, abs=1e-12)

    def test_immutable(self):
        d = TDist(2.0)
        with pytest.raises(AttributeError):
            d.nu = 3.0


class TestCNu:
    def test_closed_forms(self):
        assert c_nu(1.0) == pytest.approx(1 / math.pi, rel=1e-14)
        assert c_nu(2.0) == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-14)

    def test_gaussian_limit(self):
        assert c_nu(1e6) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            c_nu(0.0)


class TestPdf:
    def test_cauchy(self):
        assert pdf(1.0, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)
        assert pdf(1.0, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-14)

    @given(nus, moderate_a)
    def test_even_and_positive(self, nu, x):
        d = TDist(nu)
        assert pdf(d, x) == pdf(d, -x)
        assert pdf(d, x) > 0 or x != 0

    def test_huge_argument_no_overflow(self):
        assert pdf(0.5, 1e200) > 0
        assert math.isfinite(pdf(0.5, 1e200))

    def test_normalized(self):
        for nu in (0.7, 3.0, 40.0):
            q = tail_quadrature(nu, -1e-300, method="x")
            assert 2 * (q.value - 0.5) == pytest.approx(0.0, abs=1e-9)


class TestTail:
    def test_examples(self):
        assert tail(2.5, 0.0) == 0.5
        assert tail(1.0, 1.0) == pytest.approx(0.25, abs=1e-15)
        assert tail(1.0, -1.0) == pytest.approx(0.75, abs=1e-15)

    def test_nu2_closed_form(self):
        for a in (0.3, math.sqrt(2), 7.0):
            assert tail(2.0, a) == pytest.approx(0.5 * (1 - a / math.sqrt(2 + a * a)), rel=1e-13)

    @pytest.mark.parametrize("nu, a, ref, _", TAIL_REF)
    def test_reference(self, nu, a, ref, _):
        assert tail(nu, a) == pytest.approx(ref, rel=1e-12)

    def test_cauchy_closed_form(self):
        for a in np.linspace(-100, 100, 2001):
            assert tail(1.0, a) == pytest.approx(cauchy_tail(a), abs=1e-12)

    @given(nus, moderate_a)
    def test_symmetry(self, nu, a):
        assert tail(nu, a) + tail(nu, -a) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(1.0, 1e4))
    def test_normalization(self, nu):
        assert tail(nu, -1e6) - tail(nu, 1e6) == pytest.approx(1.0, abs=1e-6)

    def test_normalization_heavy_tail(self):
        # below nu = 1 the mass beyond 1e6 is still ~A^-nu, e.g. 6.5e-4 at nu = 0.5
        gap = 1.0 - (tail(0.5, -1e6) - tail(0.5, 1e6))
        assert gap == pytest.approx(2 * tail(0.5, 1e6), rel=1e-9)
        assert 1e-4 < gap < 1e-3

    @given(nus, st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30))
    def test_monotone(self, nu, grid):
        d = TDist(nu)
        vals = [tail(d, a) for a in sorted(grid)]
        assert all(b <= a + 1e-14 for a, b in zip(vals, vals[1:]))

    def test_log_tail_below_underflow(self):
        # P[X >= 200] for nu = 1000 is ~1e-700; only the log is representable
        lt = log_tail(1000.0, 200.0)
        assert math.isfinite(lt) and lt < -700 * math.log(10) + 50


class TestQuadratureOracle:
    @pytest.mark.parametrize("nu, a, expected", [
        (1.0, 1.0, 0.25),
        (3.0, 0.0, 0.5),
        (2.0, math.sqrt(2), 0.5 * (1 - math.sqrt(2) / 2)),
        (1.0, -10.0, 1 - cauchy_tail(10.0)),
    ])
    def test_examples(self, nu, a, expected):
        q = tail_quadrature(nu, a)
        assert q.value == pytest.approx(expected, abs=q.abs_error + 1e-11)

    @given(nus, st.floats(-1e3, 1e3))
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_beta(self, nu, a):
        q = tail_quadrature(nu, a)
        assert abs(tail(nu, a) - q.value) <= q.abs_error + 1e-11

    def test_heavy_tail_stress_point(self):
        q = tail_quadrature(0.01, 1e6)
        t = tail(0.01, 1e6)
        assert math.isfinite(q.value) and math.isfinite(t)
        assert abs(q.value - t) / t <= 1e-8

    @given(st.floats(1.0, 50.0), st.floats(-5.0, 20.0))
    @settings(max_examples=40, deadline=None)
    def test_change_of_variable_matches_direct_integration(self, nu, a):
        # z = sqrt(nu log(1 + x^2/nu)) is an exact rewrite of the same integral
        direct = tail_quadrature(nu, a, 1e-10, method="x")
        mapped = tail_quadrature(nu, a, 1e-10, method="z")
        assert direct.value == pytest.approx(mapped.value, abs=direct.abs_error + mapped.abs_error + 1e-13)

    def test_change_of_variable_map(self):
        assert change_of_variable(1.0, 0.0) == 0.0
        assert change_of_variable(4.0, 2.0) == pytest.approx(math.sqrt(4 * math.log(2)), rel=1e-15)
        assert change_of_variable(1e6, 3.0) == pytest.approx(3.0, rel=1e-5)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            tail_quadrature(1.0, 0.0, method="simpson")


class TestMillsRatio:
    def test_cauchy_examples(self):
        assert mills_ratio(1.0, 0.0) == pytest.approx(math.pi / 2, rel=1e-14)
        assert mills_ratio(1.0, 1.0) == pytest.approx(math.pi / 2, rel=1e-14)
        assert mills_ratio(1.0, 10.0) == pytest.approx(cauchy_tail(10.0) * math.pi * 101, rel=1e-12)

    @pytest.mark.parametrize("nu, a, _, ref", TAIL_REF)
    def test_reference(self, nu, a, _, ref):
        assert mills_ratio(nu, a) == pytest.approx(ref, rel=1e-11)
        q = mills_ratio_quadrature(nu, a)
        assert q.value == pytest.approx(ref, rel=1e-9)

    @given(nus, st.floats(0.0, 1e3))
    @settings(deadline=None)
    def test_positive_finite(self, nu, a):
        m = mills_ratio(nu, a)
        assert 0 < m < math.inf
