import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panelcd import (
    PanelData,
    SingularDesign,
    SingularUnitDesign,
    center_panel,
    fit_pooled_ols,
    fit_unit_ols,
)
from panelcd.simulate import DgpConfig, gen_panel


def make_panel(y, x=None, rng=None):
    y = np.asarray(y, dtype=float)
    if x is None:
        rng = rng or np.random.default_rng(0)
        x = rng.standard_normal(y.shape + (1,))
    return PanelData(y=y, x=x)


class TestPanelData:
    def test_rejects_single_unit(self):
        with pytest.raises(ValueError, match="units"):
            PanelData(y=np.zeros((1, 5)), x=np.zeros((1, 5, 1)))

    def test_rejects_short_time_dimension(self):
        with pytest.raises(ValueError, match="degrees of freedom"):
            PanelData(y=np.zeros((3, 2)), x=np.zeros((3, 2, 1)))

    def test_rejects_nonfinite(self):
        y = np.zeros((2, 5))
        y[0, 0] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            PanelData(y=y, x=np.zeros((2, 5, 1)))

    def test_dimension_properties(self, rng):
        p = make_panel(rng.standard_normal((4, 9)), rng.standard_normal((4, 9, 2)))
        assert (p.n, p.T, p.k_x) == (4, 9, 2)


class TestCenterPanel:
    def test_constant_row_demeans_to_zero(self):
        p = make_panel([[1.0, 1.0, 1.0], [0.0, 1.0, 2.0]])
        cp = center_panel(p)
        assert np.allclose(cp.y_tilde[0], 0.0)

    def test_arithmetic_progression(self):
        p = make_panel([[1.0, 2.0, 3.0], [0.0, 0.0, 3.0]])
        cp = center_panel(p)
        assert np.allclose(cp.y_tilde[0], [-1.0, 0.0, 1.0])

    def test_random_panel_rows_have_zero_mean(self, rng):
        p = make_panel(
            rng.standard_normal((5, 8)), rng.standard_normal((5, 8, 2))
        )
        cp = center_panel(p)
        assert np.abs(cp.y_tilde.mean(axis=1)).max() < 1e-12
        assert np.abs(cp.x_tilde.mean(axis=1)).max() < 1e-12

    def test_idempotent(self, rng):
        p = make_panel(rng.standard_normal((6, 10)))
        cp = center_panel(p)
        cp2 = center_panel(PanelData(y=cp.y_tilde, x=cp.x_tilde))
        assert np.allclose(cp2.y_tilde, cp.y_tilde, atol=1e-12)
        assert np.allclose(cp2.x_tilde, cp.x_tilde, atol=1e-12)


class TestFitPooledOls:
    def test_exact_linear_relation(self, rng):
        x = rng.standard_normal((4, 12, 1))
        p = make_panel(2.0 * x[:, :, 0], x)
        fit = fit_pooled_ols(center_panel(p))
        assert np.allclose(fit.beta_hat, [2.0], atol=1e-12)
        assert np.abs(fit.residuals).max() < 1e-12

    def test_reconstruction_identity_and_row_centering(self, rng):
        p = make_panel(
            rng.standard_normal((6, 15)), rng.standard_normal((6, 15, 2))
        )
        cp = center_panel(p)
        fit = fit_pooled_ols(cp)
        recon = cp.y_tilde - cp.x_tilde @ fit.beta_hat
        np.testing.assert_array_equal(fit.residuals, recon)
        assert np.abs(fit.residuals.mean(axis=1)).max() < 1e-10

    def test_residuals_orthogonal_to_regressors(self, rng):
        p = make_panel(
            rng.standard_normal((6, 15)), rng.standard_normal((6, 15, 2))
        )
        cp = center_panel(p)
        fit = fit_pooled_ols(cp)
        dots = np.einsum("ita,it->a", cp.x_tilde, fit.residuals)
        scale = np.abs(cp.x_tilde).sum()
        assert np.abs(dots).max() / scale < 1e-8

    def test_gram_is_spd(self, rng):
        p = make_panel(
            rng.standard_normal((5, 12)), rng.standard_normal((5, 12, 3))
        )
        fit = fit_pooled_ols(center_panel(p))
        assert np.allclose(fit.gram, fit.gram.T)
        assert np.linalg.eigvalsh(fit.gram)[0] > 0

    def test_singular_design_raises(self, rng):
        base = rng.standard_normal((4, 10, 1))
        x = np.concatenate([base, base], axis=2)  # perfectly collinear
        p = make_panel(rng.standard_normal((4, 10)), x)
        with pytest.raises(SingularDesign):
            fit_pooled_ols(center_panel(p))

    def test_null_slope_concentrates(self):
        # y independent of x: |beta_hat| < 5/sqrt(nT) almost always.
        n = T = 50
        hits = 0
        for seed in range(1000):
            r = np.random.default_rng(seed)
            p = make_panel(r.standard_normal((n, T)), r.standard_normal((n, T, 1)))
            fit = fit_pooled_ols(center_panel(p))
            hits += abs(fit.beta_hat[0]) < 5.0 / np.sqrt(n * T)
        assert hits >= 990

    def test_recovers_dgp_slope(self):
        # Simulation convention: the single regressor carries slope 2.
        cfg = DgpConfig(n=100, T=100, k=2)
        panel = gen_panel(cfg, np.random.default_rng(42))
        fit = fit_pooled_ols(center_panel(panel))
        assert abs(fit.beta_hat[0] - 2.0) < 0.05


class TestFitUnitOls:
    def test_matches_lstsq_per_unit(self, rng):
        p = make_panel(
            rng.standard_normal((5, 14)), rng.standard_normal((5, 14, 2))
        )
        cp = center_panel(p)
        fit = fit_unit_ols(cp)
        for i in range(5):
            expected, *_ = np.linalg.lstsq(
                cp.x_tilde[i], cp.y_tilde[i], rcond=None
            )
            np.testing.assert_allclose(fit.beta_hat[i], expected, atol=1e-10)
        recon = cp.y_tilde - np.einsum("ita,ia->it", cp.x_tilde, fit.beta_hat)
        np.testing.assert_array_equal(fit.residuals, recon)

    def test_exact_heterogeneous_relation(self, rng):
        x = rng.standard_normal((4, 12, 1))
        slopes = np.array([1.0, -2.0, 0.5, 3.0])
        y = x[:, :, 0] * slopes[:, None]
        fit = fit_unit_ols(center_panel(PanelData(y=y, x=x)))
        np.testing.assert_allclose(fit.beta_hat[:, 0], slopes, atol=1e-10)
        assert np.abs(fit.residuals).max() < 1e-10

    def test_residuals_orthogonal_within_each_unit(self, rng):
        p = make_panel(
            rng.standard_normal((5, 14)), rng.standard_normal((5, 14, 2))
        )
        cp = center_panel(p)
        fit = fit_unit_ols(cp)
        dots = np.einsum("ita,it->ia", cp.x_tilde, fit.residuals)
        assert np.abs(dots).max() / np.abs(cp.x_tilde).sum() < 1e-10

    def test_singular_unit_raises_with_index(self, rng):
        x = rng.standard_normal((4, 10, 1))
        x[3] = 2.0  # constant regressor centers to a zero column
        p = make_panel(rng.standard_normal((4, 10)), x)
        with pytest.raises(SingularUnitDesign, match=r"\[3\]"):
            fit_unit_ols(center_panel(p))


class TestInvariances:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_fixed_effect_invariance(self, seed):
        r = np.random.default_rng(seed)
        y = r.standard_normal((4, 9))
        x = r.standard_normal((4, 9, 1))
        shift = r.normal(0, 10, size=(4, 1))
        f1 = fit_pooled_ols(center_panel(PanelData(y=y, x=x)))
        f2 = fit_pooled_ols(center_panel(PanelData(y=y + shift, x=x)))
        assert np.allclose(f1.residuals, f2.residuals, atol=1e-10)

    def test_global_intercept_invariance(self, rng):
        y = rng.standard_normal((4, 9))
        x = rng.standard_normal((4, 9, 1))
        f1 = fit_pooled_ols(center_panel(PanelData(y=y, x=x)))
        f2 = fit_pooled_ols(center_panel(PanelData(y=y + 7.5, x=x)))
        assert np.allclose(f1.beta_hat, f2.beta_hat, atol=1e-10)
        assert np.allclose(f1.residuals, f2.residuals, atol=1e-10)

    def test_scale_equivariance(self, rng):
        y = rng.standard_normal((4, 9))
        x = rng.standard_normal((4, 9, 1))
        f1 = fit_pooled_ols(center_panel(PanelData(y=y, x=x)))
        f2 = fit_pooled_ols(center_panel(PanelData(y=3.0 * y, x=x)))
        assert np.allclose(f2.beta_hat, 3.0 * f1.beta_hat, rtol=1e-12)
        assert np.allclose(f2.residuals, 3.0 * f1.residuals, rtol=1e-12, atol=1e-12)
