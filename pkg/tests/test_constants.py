"""Closed-form constants against independent quadrature oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from heatnorms.constants import (beckner_A, beckner_constant, beta_fn,
                                 conjugate_exponent, gamma_fn,
                                 heat_lp_constant, heat_time_constant,
                                 riesz_factor)
from heatnorms.errors import DivergenceError, DomainError, InadmissibleError


class TestGamma:
    def test_integer_values(self):
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-12)
        assert gamma_fn(4.0) == pytest.approx(6.0, rel=1e-12)

    def test_half_by_quadrature(self):
        # independent oracle: integral of t^{-1/2} e^{-t}
        oracle, _ = integrate.quad(lambda t: t**-0.5 * math.exp(-t), 0, np.inf)
        assert gamma_fn(0.5) == pytest.approx(oracle, rel=1e-10)
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    @given(st.floats(min_value=0.1, max_value=60.0))
    @settings(max_examples=200, deadline=None)
    def test_against_stdlib(self, x):
        assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_fn(0.0)
        with pytest.raises(DomainError):
            gamma_fn(-1.5)


class TestBeta:
    def test_trivial(self):
        assert beta_fn(1, 1) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("g1,g2", [(1.0, 4.0), (0.5, 3.0), (2.0, 5.0)])
    def test_rational_tail_integral(self, g1, g2):
        # the defining integral: x^{g1} / (1+x)^{g2} over the half line
        oracle, _ = integrate.quad(lambda x: x**g1 / (1 + x) ** g2, 0, np.inf)
        assert beta_fn(g1 + 1, g2 - g1 - 1) == pytest.approx(oracle, rel=1e-10)

    def test_known_values(self):
        assert beta_fn(2, 2) == pytest.approx(1.0 / 6.0, rel=1e-10)
        assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            beta_fn(0.0, 1.0)


class TestHeatLpConstant:
    @pytest.mark.parametrize("d,Q", [(1, 1.0), (1, 2.0), (2, 2.0), (2, 3.0)])
    def test_quadrature_oracle(self, d, Q):
        def w1(*coords):
            r2 = sum(c * c for c in coords)
            return ((2 * math.pi) ** (-d / 2) * math.exp(-r2 / 2)) ** Q

        if d == 1:
            oracle, _ = integrate.quad(w1, -12, 12)
        else:
            oracle, _ = integrate.dblquad(w1, -10, 10, -10, 10)
        assert heat_lp_constant(d, Q).value == pytest.approx(
            oracle ** (1 / Q), rel=1e-8)

    def test_unit_mass(self):
        assert heat_lp_constant(1, 1.0).value == pytest.approx(1.0, abs=1e-14)

    def test_frozen_values(self):
        # oracle-computed: (4 pi)^{-1/4} and (4 pi)^{-1/2}
        assert heat_lp_constant(1, 2.0).value == pytest.approx(0.5311260, rel=1e-6)
        assert heat_lp_constant(2, 2.0).value == pytest.approx(0.2820948, rel=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            heat_lp_constant(1, 0.5)


class TestHeatTimeConstant:
    @pytest.mark.parametrize("d,r", [(1, 4.0), (3, 2.0)])
    def test_quadrature_oracle(self, d, r):
        def integrand(t):
            return t ** (-d * r / 2) * math.exp(-r / (2 * t))  # z = 1

        oracle, _ = integrate.quad(integrand, 0, np.inf, limit=400)
        quad_value = (2 * math.pi) ** (-d / 2) * oracle ** (1 / r)
        assert heat_time_constant(d, r).value == pytest.approx(quad_value, rel=1e-9)

    def test_frozen_values(self):
        # from the quadrature oracle above
        assert heat_time_constant(1, 4.0).value == pytest.approx(0.3354691, rel=1e-6)
        assert heat_time_constant(3, 2.0).value == pytest.approx(0.0634936, rel=1e-5)

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            heat_time_constant(1, 2.0)

    def test_discrepancy_note(self):
        cv = heat_time_constant(1, 4.0)
        assert "disagrees" in cv.note
        assert cv.extras["printed_simplification"] == pytest.approx(1.2533141, rel=1e-6)
        assert cv.provenance == "quadrature-validated"


class TestRieszFactor:
    def test_direct_substitution(self):
        cv = riesz_factor(3, 2.0, 2.0)
        assert cv.value == pytest.approx(0.5, rel=1e-12)
        assert cv.extras["kappa"] == pytest.approx(2.0 / 3.0, rel=1e-12)
        cv = riesz_factor(1, 1.5, 4.0)
        assert cv.value == pytest.approx(4.0, rel=1e-12)
        assert cv.extras["kappa"] == pytest.approx(0.5, rel=1e-12)

    def test_blowup_bounds_named(self):
        with pytest.raises(InadmissibleError, match="p < d\\*r/2"):
            riesz_factor(3, 3.0, 2.0)
        with pytest.raises(InadmissibleError, match="p > 1"):
            riesz_factor(3, 1.0, 2.0)


class TestBecknerA:
    def test_fixed_points(self):
        assert beckner_A(2.0) == pytest.approx(1.0, abs=1e-15)
        assert beckner_A(1.0) == 1.0
        assert beckner_A(math.inf) == 1.0

    def test_four_thirds(self):
        # ((4/3)^{3/4} / 4^{1/4})^{1/2}, frozen from direct evaluation
        assert beckner_A(4.0 / 3.0) == pytest.approx(0.9366871, rel=1e-6)

    @given(st.floats(min_value=1.0 + 1e-9, max_value=50.0))
    @settings(max_examples=100, deadline=None)
    def test_conjugate_product(self, p):
        assert beckner_A(p) * beckner_A(conjugate_exponent(p)) == pytest.approx(
            1.0, abs=1e-12)


class TestBecknerConstant:
    def test_l1_equality_case(self):
        assert beckner_constant(1, 1.0, 1.0).value == pytest.approx(1.0, abs=1e-14)

    def test_gaussian_extremizer_oracle(self):
        """The sharp constant equals the Gaussian-width supremum of the
        convolution ratio, computed here from closed-form norms."""
        d, p, q, r = 1, 2.0, 4.0 / 3.0, 4.0

        def kw(e):
            return heat_lp_constant(d, e).value

        def ratio(s1, s2):
            num = kw(r) * (s1 + s2) ** (0.5 * d * (1 / r - 1))
            den = (kw(p) * s1 ** (0.5 * d * (1 / p - 1))
                   * kw(q) * s2 ** (0.5 * d * (1 / q - 1)))
            return num / den

        widths = np.geomspace(0.05, 5.0, 160)
        sup = max(ratio(a, b) for a in widths for b in widths)
        kb = beckner_constant(d, p, q).value
        assert kb == pytest.approx(0.8773827, rel=1e-6)
        assert sup == pytest.approx(kb, rel=1e-4)
        assert sup <= kb * (1 + 1e-12)

    def test_dimension_power(self):
        one = beckner_constant(1, 2.0, 4.0 / 3.0).value
        two = beckner_constant(2, 4.0 / 3.0, 4.0 / 3.0).value
        # r = 2 pairs with (4/3, 4/3); its d = 2 value is the square of the
        # d = 1 value of the (2, 4/3) triple, both sharing A(4/3)^2
        assert two == pytest.approx(one**2, rel=1e-12)
        assert two == pytest.approx(0.7698004, rel=1e-6)

    @given(st.floats(min_value=1.01, max_value=6.0),
           st.floats(min_value=1.01, max_value=6.0))
    @settings(max_examples=150, deadline=None)
    def test_symmetric_and_subunital(self, p, q):
        if 1.0 / p + 1.0 / q <= 1.0:
            with pytest.raises(InadmissibleError):
                beckner_constant(1, p, q)
            return
        kb_pq = beckner_constant(1, p, q).value
        kb_qp = beckner_constant(1, q, p).value
        assert kb_pq == pytest.approx(kb_qp, rel=1e-12)
        assert kb_pq <= 1.0 + 1e-12

    def test_inadmissible_triple(self):
        with pytest.raises(InadmissibleError):
            beckner_constant(1, 3.0, 3.0)
