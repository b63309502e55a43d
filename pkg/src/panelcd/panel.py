"""Balanced panel container, within transformation, pooled and per-unit OLS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularDesign, SingularUnitDesign

# Relative eigenvalue-ratio cutoff below which the pooled Gram matrix is
# treated as singular.
GRAM_SINGULARITY_RATIO = 1e-12


@dataclass(frozen=True)
class PanelData:
    """A balanced panel: outcomes ``y[i, t]`` and regressors ``x[i, t, l]``.

    The regressor count excludes the intercept and the unit fixed effect;
    both are absorbed by the within transformation and never estimated.
    """

    y: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.float64))
        x = np.ascontiguousarray(np.asarray(self.x, dtype=np.float64))
        if y.ndim != 2:
            raise ValueError(f"y must be n x T, got shape {y.shape}")
        if x.ndim != 3 or x.shape[:2] != y.shape:
            raise ValueError(
                f"x must be n x T x k_x aligned with y, got {x.shape} vs {y.shape}"
            )
        n, T = y.shape
        k_x = x.shape[2]
        if n < 2:
            raise ValueError(f"need at least 2 cross-sectional units, got n={n}")
        if k_x < 1:
            raise ValueError("need at least one regressor")
        if T < k_x + 2:
            raise ValueError(
                f"T={T} leaves no residual degrees of freedom for k_x={k_x}"
            )
        if not np.isfinite(y).all() or not np.isfinite(x).all():
            raise ValueError("panel contains non-finite values")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def T(self) -> int:
        return self.y.shape[1]

    @property
    def k_x(self) -> int:
        return self.x.shape[2]


@dataclass(frozen=True)
class CenteredPanel:
    """Time-demeaned outcomes and regressors (fixed effects removed)."""

    y_tilde: np.ndarray
    x_tilde: np.ndarray

    @property
    def n(self) -> int:
        return self.y_tilde.shape[0]

    @property
    def T(self) -> int:
        return self.y_tilde.shape[1]

    @property
    def k_x(self) -> int:
        return self.x_tilde.shape[2]


@dataclass(frozen=True)
class RegressionFit:
    """Pooled OLS fit on the centered panel.

    ``residuals[i, t] = y_tilde[i, t] - x_tilde[i, t] @ beta_hat`` holds by
    construction; ``gram`` is the pooled cross-product of the centered
    regressors.
    """

    beta_hat: np.ndarray
    residuals: np.ndarray
    gram: np.ndarray


def center_panel(data: PanelData) -> CenteredPanel:
    """Subtract each unit's time mean from y and from every regressor."""
    y_tilde = data.y - data.y.mean(axis=1, keepdims=True)
    x_tilde = data.x - data.x.mean(axis=1, keepdims=True)
    return CenteredPanel(y_tilde=y_tilde, x_tilde=x_tilde)


def fit_pooled_ols(cp: CenteredPanel) -> RegressionFit:
    """Pooled OLS of the centered outcome on the centered regressors.

    Raises
    ------
    SingularDesign
        If the pooled Gram matrix is numerically singular (its smallest
        eigenvalue falls below ``GRAM_SINGULARITY_RATIO`` times the largest).
    """
    x = cp.x_tilde
    y = cp.y_tilde
    # gram = sum over (i, t) of x_tilde x_tilde'; k_x is small so an
    # eigendecomposition check is cheap and robust.
    gram = np.einsum("ita,itb->ab", x, x)
    eigvals = np.linalg.eigvalsh(gram)
    if eigvals[0] <= GRAM_SINGULARITY_RATIO * max(eigvals[-1], 0.0):
        raise SingularDesign(
            f"pooled Gram matrix is numerically singular "
            f"(eigenvalue range [{eigvals[0]:.3e}, {eigvals[-1]:.3e}])"
        )
    xty = np.einsum("ita,it->a", x, y)
    beta_hat = np.linalg.solve(gram, xty)
    residuals = y - x @ beta_hat
    return RegressionFit(beta_hat=beta_hat, residuals=residuals, gram=gram)


@dataclass(frozen=True)
class UnitRegressionFit:
    """Separate OLS fits per unit on the centered panel.

    ``beta_hat[i]`` is unit i's slope vector;
    ``residuals[i, t] = y_tilde[i, t] - x_tilde[i, t] @ beta_hat[i]``.
    """

    beta_hat: np.ndarray
    residuals: np.ndarray


def fit_unit_ols(cp: CenteredPanel) -> UnitRegressionFit:
    """OLS of each unit's centered outcome on its own centered regressors.

    This is the residual construction for heterogeneous-slope panels,
    where every unit carries its own coefficient vector.

    Raises
    ------
    SingularUnitDesign
        If any unit's Gram matrix is numerically singular.
    """
    x = cp.x_tilde
    y = cp.y_tilde
    grams = np.einsum("ita,itb->iab", x, x)
    eigvals = np.linalg.eigvalsh(grams)
    bad = np.flatnonzero(
        eigvals[:, 0] <= GRAM_SINGULARITY_RATIO * np.maximum(eigvals[:, -1], 0.0)
    )
    if bad.size:
        raise SingularUnitDesign(
            f"per-unit Gram matrix is numerically singular for unit(s) "
            f"{bad.tolist()}"
        )
    xty = np.einsum("ita,it->ia", x, y)
    beta_hat = np.linalg.solve(grams, xty[:, :, None])[:, :, 0]
    residuals = y - np.einsum("ita,ia->it", x, beta_hat)
    return UnitRegressionFit(beta_hat=beta_hat, residuals=residuals)
