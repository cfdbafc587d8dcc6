import math

import numpy as np
import pytest
from scipy import special

from prolate.eigensolve import (
    EigenvalueRecord, ProlateProblem, ShootingConfig, matching_coefficient, oracle_matrix_spectrum,
    outer_positive_spectrum, outer_spectrum, scan_spectrum, wkb_phase,
)
from prolate.errors import DomainError

SQRT2 = math.sqrt(2.0)


class TestTypes:
    @pytest.mark.parametrize("kw", [dict(lambda_=0.0), dict(lambda_=1.0, parity="both"),
                                    dict(lambda_=1.0, region="middle")])
    def test_problem_validation(self, kw):
        with pytest.raises(DomainError):
            ProlateProblem(**kw)

    def test_record_validation(self):
        with pytest.raises(DomainError):
            EigenvalueRecord(1.0, 0, 0.0, method="guess")
        with pytest.raises(DomainError):
            EigenvalueRecord(1.0, -1, 0.0)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            ShootingConfig(radius_scale=0.5)
        scaled = ShootingConfig().scaled(10.0)
        assert scaled.ode_tol.rel_tol == pytest.approx(10 * ShootingConfig().ode_tol.rel_tol)


class TestInner:
    @pytest.mark.parametrize("lam", [1.0, SQRT2])
    def test_against_scipy_prolate(self, inner, lam):
        # scipy's pro_cv(0, n, c) with c = 2 pi lam^2 is the same eigenvalue family; n even/odd is the parity
        c = 2 * math.pi * lam * lam
        for parity, offset in (("even", 0), ("odd", 1)):
            mus = [r.mu for r in inner(lam, parity, 9)]
            ref = [special.pro_cv(0, 2 * k + offset, c) for k in range(10)]
            np.testing.assert_allclose(mus, ref, rtol=1e-9)

    def test_lowest_against_oracle(self, inner, oracle):
        assert inner(1.0, "even", 9)[0].mu == pytest.approx(oracle(1.0, "even", "inner", 10)[0].mu, rel=1e-6)

    def test_second_difference_tends_to_eight(self, inner):
        chi = np.array([r.mu for r in inner(1.0, "even", 21)])
        d2 = np.abs(chi[2:] - 2 * chi[1:-1] + chi[:-2] - 8)
        assert d2[-1] < 0.01 and d2[-1] < d2[5]

    def test_parities_disjoint(self, inner):
        even = np.array([r.mu for r in inner(1.0, "even", 9)])
        odd = np.array([r.mu for r in inner(1.0, "odd", 9)])
        assert np.min(np.abs(even[:, None] - odd[None, :])) > 1e-6

    def test_one_eigenvalue_per_window(self, inner):
        chi = np.array([r.mu for r in inner(1.0, "even", 21)])
        # the O(1) shift is about c^2/2 ~ 20, below half the gap once n >= 6
        for n in range(6, 20):
            lo, hi = (2 * n - 0.5) ** 2, (2 * n + 1.5) ** 2
            assert np.sum((chi > lo) & (chi <= hi)) == 1

    def test_constant_sign_below_spectrum(self, inner):
        chi0 = inner(1.0, "even", 9)[0].mu
        vals = matching_coefficient(ProlateProblem(1.0, "even", "inner"), np.linspace(-200.0, chi0 - 0.5, 40))
        assert np.all(np.sign(vals) == np.sign(vals[0]))

    def test_residuals_small(self, inner):
        assert max(r.residual for r in inner(SQRT2, "odd", 9)) < 1e-8


class TestOuter:
    def test_reference_values(self, outer):
        np.testing.assert_allclose([r.mu for r in outer(1.0, "even", 10)[:3]],
                                   [-20.480573, -49.979976, -82.504187], rtol=1e-7)

    def test_first_against_oracle(self, outer, oracle):
        assert outer(1.0, "even", 10)[0].mu == pytest.approx(oracle(1.0, "even", "outer", 10)[0].mu, rel=1e-5)

    def test_labels_and_order(self, outer):
        recs = outer(SQRT2, "odd", 10)
        assert all(r.label == "negative" and r.mu < 0 for r in recs)
        assert [r.index for r in recs] == list(range(10))
        assert all(a.mu > b.mu for a, b in zip(recs, recs[1:]))

    def test_count_zero(self):
        with pytest.raises(DomainError):
            outer_spectrum(1.0, "even", 0)

    def test_positive_outer_are_replicas(self, inner):
        pos = outer_positive_spectrum(SQRT2, "even", 400.0)
        chi = np.array([r.mu for r in inner(SQRT2, "even", 9)])
        assert pos and all(r.label == "replica" for r in pos)
        for r in pos:
            assert np.min(np.abs(chi - r.mu)) <= 1e-4 * r.mu

    def test_well_posed_under_parameter_change(self):
        problem = ProlateProblem(1.0, "even", "outer")
        mu = np.array([-30.0, -65.0, -140.0])
        base = matching_coefficient(problem, mu)
        other = matching_coefficient(problem, mu, ShootingConfig(delta=5e-4, radius_scale=2.0))
        np.testing.assert_allclose(np.abs(other), np.abs(base), atol=1e-6)

    def test_empty_window(self):
        assert scan_spectrum(ProlateProblem(1.0, "even", "outer"), -45.0, -25.0, 40) == []

    def test_scan_window_errors(self):
        with pytest.raises(DomainError):
            scan_spectrum(ProlateProblem(1.0, "even", "outer"), -10.0, -20.0, 10)

    @pytest.mark.slow
    def test_scan_count_matches_oracle(self):
        problem = ProlateProblem(SQRT2, "even", "outer")
        found = scan_spectrum(problem, -1500.0, -100.0, 400)
        ref = oracle_matrix_spectrum(problem, 400, 21)
        assert ref[-1].mu < -1500.0
        assert len(found) == sum(1 for r in ref if -1500.0 <= r.mu <= -100.0)


class TestOracle:
    def test_inner_self_convergence(self):
        p = ProlateProblem(1.0, "even", "inner")
        a = [r.mu for r in oracle_matrix_spectrum(p, 800, 11)]
        b = [r.mu for r in oracle_matrix_spectrum(p, 1600, 11)]
        np.testing.assert_allclose(a, b, rtol=1e-6)

    def test_coarse_grid(self):
        p = ProlateProblem(1.0, "even", "inner")
        coarse = [r.mu for r in oracle_matrix_spectrum(p, 10, 3, extrapolate=False)]
        fine = [r.mu for r in oracle_matrix_spectrum(p, 800, 3)]
        np.testing.assert_allclose(coarse, fine, rtol=0.05)

    def test_grid_size_validation(self):
        with pytest.raises(DomainError):
            oracle_matrix_spectrum(ProlateProblem(1.0), grid_size=9)

    def test_outer_against_shooting(self, outer, oracle):
        np.testing.assert_allclose([r.mu for r in oracle(SQRT2, "even", "outer", 10)],
                                   [r.mu for r in outer(SQRT2, "even", 10)], rtol=1e-5)

    def test_wkb_phase_approaches_free_phase(self):
        k = 2 * math.pi
        gaps = [abs(wkb_phase(1.0, -50.0, x) - k * x) for x in (20.0, 80.0, 320.0)]
        assert gaps[0] > gaps[1] > gaps[2]
