"""Residual covariance/correlation matrices and their trace statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateUnit

# A unit whose residual variance falls below this fraction of the largest
# variance in the panel has an undefined correlation row.
DEGENERATE_VARIANCE_RATIO = 1e-14


@dataclass(frozen=True)
class CorrSummary:
    """Residual correlation matrix together with its power sums.

    ``sum_rho`` and ``sum_rho2`` run over ordered pairs r != s (each
    unordered pair counted twice). ``trace_r2`` and ``trace_r4`` are the
    traces of the second and fourth matrix powers of ``corr``.
    """

    n: int
    T: int
    diag_var: np.ndarray
    corr: np.ndarray
    sum_rho: float
    sum_rho2: float
    trace_r2: float
    trace_r4: float


def residual_covariance(residuals: np.ndarray) -> np.ndarray:
    """Sample covariance (1/T) sum_t nu_t nu_t' of the residual rows.

    The divisor is exactly T; the tests' centering constants carry their
    own small-sample corrections.
    """
    residuals = np.asarray(residuals, dtype=np.float64)
    n, T = residuals.shape
    if n < 2:
        raise ValueError(f"need at least 2 units, got n={n}")
    cov = (residuals @ residuals.T) / T
    _check_degenerate(np.diagonal(cov))
    return cov


def correlation_summary(cov: np.ndarray, T: int) -> CorrSummary:
    """Normalize a covariance matrix to correlations and take power sums."""
    cov = np.asarray(cov, dtype=np.float64)
    diag = np.diagonal(cov).copy()
    _check_degenerate(diag)
    inv_sd = 1.0 / np.sqrt(diag)
    corr = cov * inv_sd[:, None] * inv_sd[None, :]
    np.fill_diagonal(corr, 1.0)
    n = corr.shape[0]
    sum_rho, sum_rho2 = kernels.offdiag_sums(corr)
    trace_r2, trace_r4 = kernels.trace_powers(corr)
    return CorrSummary(
        n=n,
        T=int(T),
        diag_var=diag,
        corr=corr,
        sum_rho=sum_rho,
        sum_rho2=sum_rho2,
        trace_r2=trace_r2,
        trace_r4=trace_r4,
    )


def summarize_residuals(residuals: np.ndarray) -> CorrSummary:
    """Covariance plus correlation summary in one step."""
    residuals = np.asarray(residuals, dtype=np.float64)
    cov = residual_covariance(residuals)
    return correlation_summary(cov, residuals.shape[1])


def _check_degenerate(diag: np.ndarray) -> None:
    scale = float(diag.max(initial=0.0))
    bad = np.flatnonzero(diag <= DEGENERATE_VARIANCE_RATIO * scale)
    if scale <= 0.0 or bad.size:
        which = bad.tolist() if bad.size else "all"
        raise DegenerateUnit(
            f"residual variance numerically zero for unit(s) {which}"
        )
