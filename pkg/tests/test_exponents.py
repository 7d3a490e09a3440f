"""Admissibility relations: solved exponents, windows, named failures."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatnorms.errors import UsageError
from heatnorms.exponents import admissibility, frac_exponents, perturb_reciprocal


class TestG0:
    def test_solves_q(self):
        t = admissibility("G0", d=1, p=2.0, r=8.0)
        assert t.admissible
        assert t.exponents["q"] == pytest.approx(4.0, rel=1e-14)
        assert t.derived["kappa"] == pytest.approx(1 - 2 / 8, rel=1e-14)

    def test_boundary_q_infinite(self):
        t = admissibility("G0", d=1, p=2.0, r=4.0)
        assert not t.admissible
        assert t.boundary
        assert math.isinf(t.exponents["q"])

    def test_named_failure(self):
        t = admissibility("G0", d=1, p=5.0, r=8.0)  # p above d*r/2 = 4
        assert not t.admissible
        assert any("p_window" in c for c in t.constraints if not t.constraints[c])

    @given(st.floats(min_value=1.05, max_value=3.5),
           st.floats(min_value=2.2, max_value=12.0))
    @settings(max_examples=100, deadline=None)
    def test_relation_holds_when_admissible(self, p, r):
        t = admissibility("G0", d=1, p=p, r=r)
        if t.admissible:
            q = t.exponents["q"]
            assert 1 / q == pytest.approx(1 / p - 2 / r, abs=1e-12)
            assert q > 1


class TestDecay:
    def test_smoothing_exponent(self):
        t = admissibility("decay", d=1, p=1.0, q=2.0)
        assert t.exponents["m"] == pytest.approx(2.0, rel=1e-14)
        assert t.derived["decay_exponent"] == pytest.approx(-0.25, rel=1e-14)

    def test_equal_exponents_boundary(self):
        t = admissibility("decay", d=1, p=2.0, q=2.0)
        assert t.boundary          # m = 1 collapses the smoothing exponent
        assert t.exponents["m"] == pytest.approx(1.0)

    def test_wrong_order_skipped(self):
        t = admissibility("decay", d=1, p=2.0, q=1.0)
        assert not t.admissible
        assert "q >= p" in "; ".join(t.failures)


class TestG1:
    def test_window_and_solution(self):
        t = admissibility("G1", d=1, p=8.0, r=1.5, k=1.25)
        assert t.admissible
        assert t.exponents["q"] == pytest.approx(14.117647058823536, rel=1e-12)
        theta = t.derived["theta"]
        assert theta == pytest.approx(0.5 * (1 / 1.5 - 1 / 8.0), rel=1e-12)
        assert t.bounds["k_plus"] == pytest.approx(1 / (1 - theta), rel=1e-12)

    def test_k_outside_window(self):
        t = admissibility("G1", d=1, p=4.0, r=2.0, k=4.0 / 3.0)
        assert not t.admissible  # k_plus = 1/(1 - 0.125) < 4/3
        assert not t.constraints["k_window"]

    def test_needs_p_above_r(self):
        t = admissibility("G1", d=1, p=1.5, r=2.0, k=1.1)
        assert not t.admissible
        assert not t.constraints["p_gt_r"]


class TestThm31b:
    def test_reference_tuple(self):
        t = admissibility("thm31b", d=3, h=2.0, r=2.0, k=4.0 / 3.0)
        assert t.admissible
        assert t.exponents["m"] == pytest.approx(6.0, rel=1e-12)
        assert t.exponents["q"] == pytest.approx(4.0, rel=1e-12)

    def test_time_young_violation(self):
        t = admissibility("thm31b", d=3, h=2.0, r=2.0, k=3.0)
        assert not t.admissible
        assert not t.constraints["time_young"]


class TestYoungRelation:
    def test_solves_r(self):
        t = admissibility("young", d=1, p=2.0, q=4.0 / 3.0)
        assert t.admissible
        assert t.exponents["r"] == pytest.approx(4.0, rel=1e-14)

    def test_unit_boundary(self):
        t = admissibility("young", d=1, p=1.0, q=1.0)
        assert t.boundary
        assert t.exponents["r"] == pytest.approx(1.0)

    def test_r_infinite(self):
        t = admissibility("young", d=1, p=2.0, q=2.0)
        assert not t.admissible
        assert math.isinf(t.exponents["r"])


class TestWeight7:
    def test_reduces_to_unweighted(self):
        """With zero weights the relation reproduces the plain one and the
        kappa values coincide to 1e-12, over a sample of admissible pairs."""
        for (p, r) in [(2.0, 8.0), (1.5, 6.0), (2.5, 4.0), (1.2, 3.0)]:
            plain = admissibility("G0", d=1, p=p, r=r)
            weighted = admissibility("weight7", d=1, a=0.0, b=0.0, theta=0.0,
                                     r=r, p=p)
            if not plain.admissible:
                continue
            assert weighted.admissible
            assert weighted.derived["kappa"] == pytest.approx(
                plain.derived["kappa"], abs=1e-12)
            assert weighted.exponents["q"] == pytest.approx(
                plain.exponents["q"], rel=1e-12)

    def test_weighted_window(self):
        t = admissibility("weight7", d=1, a=0.25, b=0.25, theta=0.0, r=3.0, p=2.0)
        assert t.admissible
        assert t.exponents["q"] == pytest.approx(3.0, rel=1e-12)
        # target-side integrability b*q < d encoded in the upper endpoint
        assert t.bounds["p_plus"] == pytest.approx(1 / (2 / 3 - 0.25), rel=1e-12)

    def test_divergent_target_rejected(self):
        # b*q would reach 3 here; the printed p window must reject it
        t = admissibility("weight7", d=1, a=0.0, b=0.25, theta=0.0, r=3.0, p=2.0)
        assert not t.admissible

    def test_kappa_window_named(self):
        t = admissibility("weight7", d=1, a=0.9, b=0.9, theta=0.0, r=3.0, p=1.05)
        assert not t.admissible
        assert "kappa_window" in t.constraints


class TestFracRelations:
    def test_frac_initial_zero_weights(self):
        t = admissibility("frac8-initial", d=1, alpha=0.5, a=0.0, b=0.0,
                          tau=0.0, r=2.0, p=1.5)
        assert t.admissible
        assert t.exponents["q"] == pytest.approx(6.0, rel=1e-12)
        assert t.derived["lambda1"] == pytest.approx(0.5, rel=1e-12)

    def test_frac_duhamel_a(self):
        t = admissibility("frac8-duhamel-a", d=1, alpha=0.5, a=0.0, b=0.0,
                          r=4.0, m=4.0 / 3.0, p=4.0 / 3.0)
        assert t.admissible
        assert t.exponents["Q"] == pytest.approx(2.0, rel=1e-12)
        assert t.exponents["q"] == pytest.approx(4.0, rel=1e-12)

    def test_frac_duhamel_b(self):
        t = admissibility("frac8-duhamel-b", d=1, alpha=0.5, beta=0.25,
                          tau=0.25, Q=4.0 / 3.0, p=4.0 / 3.0, k=2.0)
        assert t.admissible
        assert t.derived["zeta2"] == pytest.approx(0.25, rel=1e-12)
        assert t.derived["kappa"] == pytest.approx(0.75, rel=1e-12)
        assert t.exponents["r"] == pytest.approx(4.0, rel=1e-12)
        assert t.bounds["k_minus"] == pytest.approx(4.0 / 3.0, rel=1e-12)

    def test_frac_duhamel_b_kappa_cap(self):
        t = admissibility("frac8-duhamel-b", d=1, alpha=0.5, beta=0.4,
                          tau=0.4, Q=2.0, p=4.0 / 3.0, k=2.0)
        assert not t.admissible
        assert not t.constraints["kappa_lt_1"]


class TestFracExponents:
    def test_lambda1(self):
        t = frac_exponents(1, 0.5, 0.0, 0.0, r=2.0)
        assert t.derived["lambda1"] == pytest.approx(0.5, rel=1e-12)

    def test_lambda2(self):
        t = frac_exponents(1, 0.5, 0.0, 0.0, p=2.0)
        assert t.derived["lambda2"] == pytest.approx(0.5, rel=1e-12)
        t = frac_exponents(1, 1.0, 0.0, 0.0, p=1.0)
        assert t.derived["lambda2"] == pytest.approx(0.0, abs=1e-14)

    def test_constraints_reported_individually(self):
        t = frac_exponents(1, 0.5, 0.0, 0.0, r=2.0, p=3.0)
        assert t.constraints["time_norm_converges"]
        assert not t.constraints["space_norm_alpha"]  # d - alpha*p = -0.5

    def test_identity_residuals(self):
        t = admissibility("G1", d=1, p=8.0, r=1.5, k=1.25)
        for name, res in t.identity_residuals().items():
            assert res < 1e-12, name


class TestMisc:
    def test_unknown_kind(self):
        with pytest.raises(UsageError):
            admissibility("nope", d=1, p=2.0)

    def test_perturb_reciprocal(self):
        assert perturb_reciprocal(4.0, 0.1) == pytest.approx(1 / 0.35, rel=1e-14)
        assert math.isinf(perturb_reciprocal(4.0, -0.25))
