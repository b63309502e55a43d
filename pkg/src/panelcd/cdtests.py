"""The seven cross-sectional dependence tests.

All statistics are built from the residual correlation summary of a pooled
fixed-effects fit. Trace-based statistics (LM, LM_bc, LM_RMT, LM_e, PET)
grow under cross-sectional dependence and are tested one-sided in the upper
tail; CD and the bias-adjusted LM are signed and tested two-sided.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import kernels
from .correlation import CorrSummary, summarize_residuals
from .errors import NonpositiveVariance, SingularUnitDesign
from .panel import (
    PanelData,
    CenteredPanel,
    center_panel,
    fit_pooled_ols,
    fit_unit_ols,
)

UNIT_GRAM_SINGULARITY_RATIO = 1e-12


class TestName(enum.Enum):
    __test__ = False  # not a pytest class despite the name

    LM = "LM"
    CD = "CD"
    LM_ADJ = "LM_adj"
    LM_P = "LM_P"
    LM_BC = "LM_bc"
    LM_RMT = "LM_RMT"
    LM_E = "LM_e"
    PET = "PET"


class Tail(enum.Enum):
    UPPER = "upper"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class TestResult:
    test_name: TestName
    statistic: float
    null_dist: str
    p_value: float
    reject: bool
    alpha: float
    tail: Tail


@dataclass(frozen=True)
class TestConstants:
    """Centering and scale constants of the normal-limit tests."""

    c_T: float
    mu_lm_e: float
    sigma_lm_e: float
    mu_pet: float
    sigma_pet: float
    mu_rmt: float
    sigma_rmt: float
    kappa: float


def lm_e_constants(n: int, T: int) -> tuple[float, float]:
    """Mean and standard deviation of tr(R^2) under the null, general errors."""
    c = n / T
    mu = n * (1.0 + c) + c * c - c
    sigma = 2.0 * c
    return mu, sigma


def rmt_kappa(T: int, k: int) -> float:
    return 3.0 * T * (T - k + 2) / ((T + 2) * (T - k))


def rmt_constants(n: int, T: int, k: int) -> tuple[float, float]:
    """Mean and variance of tr(R^2) under the Gaussian random-matrix limit.

    The mean coincides exactly with the general-error centering; the
    variance carries a kurtosis-style correction through kappa and returns
    to 4 c_T^2 as kappa -> 3.
    """
    c = n / T
    mu = n * (1.0 + c) + c * c - c
    kappa = rmt_kappa(T, k)
    var = (
        4.0 * c * (1.0 + 2.0 * c) * (c + 2.0)
        - 4.0 * (kappa - 1.0) * c * (1.0 + c) ** 2
        + (kappa - 3.0) * c * (c - 4.0) ** 2 * (c + 1.0) ** 2
    )
    return mu, var


def pet_constants(n: int, T: int) -> tuple[float, float]:
    """Mean and standard deviation of tr(R^4) under the null."""
    c = n / T
    d = T - 1.0
    mu = (
        n * (1.0 + 6.0 * n / d + 6.0 * n**2 / d**2 + n**3 / d**3)
        - 6.0 * c * (1.0 + c) ** 2
        - 2.0 * c * c
    )
    var = (
        8.0 * c**4
        + 96.0 * c**3 * (1.0 + c) ** 2
        + 16.0 * c**2 * (3.0 * c**2 + 8.0 * c + 3.0) ** 2
    )
    return mu, math.sqrt(var)


def test_constants(n: int, T: int, k: int) -> TestConstants:
    mu_e, sigma_e = lm_e_constants(n, T)
    mu_pet, sigma_pet = pet_constants(n, T)
    mu_rmt, var_rmt = rmt_constants(n, T, k)
    if var_rmt <= 0.0:
        raise NonpositiveVariance(
            f"random-matrix variance {var_rmt:.4g} <= 0 at n={n}, T={T}, k={k}"
        )
    return TestConstants(
        c_T=n / T,
        mu_lm_e=mu_e,
        sigma_lm_e=sigma_e,
        mu_pet=mu_pet,
        sigma_pet=sigma_pet,
        mu_rmt=mu_rmt,
        sigma_rmt=math.sqrt(var_rmt),
        kappa=rmt_kappa(T, k),
    )


def _normal_sf(z: float) -> float:
    # Upper normal tail via the complementary error function.
    return 0.5 * float(special.erfc(z / math.sqrt(2.0)))


def _chi2_sf(x: float, df: int) -> float:
    # Upper chi-square tail via the regularized incomplete gamma.
    return float(special.gammaincc(0.5 * df, 0.5 * x))


def _normal_result(
    name: TestName, statistic: float, alpha: float, tail: Tail
) -> TestResult:
    if tail is Tail.UPPER:
        p = _normal_sf(statistic)
    else:
        p = 2.0 * _normal_sf(abs(statistic))
    p = min(p, 1.0)
    return TestResult(
        test_name=name,
        statistic=float(statistic),
        null_dist="N(0,1)",
        p_value=p,
        reject=p < alpha,
        alpha=alpha,
        tail=tail,
    )


def lm_test(cs: CorrSummary, alpha: float = 0.05) -> TestResult:
    """Classic LM statistic (T/2)(tr(R^2) - n) with its chi-square null."""
    statistic = 0.5 * cs.T * (cs.trace_r2 - cs.n)
    df = cs.n * (cs.n - 1) // 2
    p = _chi2_sf(statistic, df)
    return TestResult(
        test_name=TestName.LM,
        statistic=float(statistic),
        null_dist=f"chi2({df})",
        p_value=p,
        reject=p < alpha,
        alpha=alpha,
        tail=Tail.UPPER,
    )


def cd_test(cs: CorrSummary, alpha: float = 0.05) -> TestResult:
    """Pesaran's CD statistic: scaled sum of signed residual correlations."""
    statistic = math.sqrt(cs.T / (2.0 * cs.n * (cs.n - 1))) * cs.sum_rho
    return _normal_result(TestName.CD, statistic, alpha, Tail.TWO_SIDED)


def lm_p_statistic(cs: CorrSummary) -> float:
    """Scaled LM statistic sqrt(1/(4n(n-1))) sum_{r!=s} (T rho^2 - 1)."""
    n = cs.n
    total = cs.T * cs.sum_rho2 - n * (n - 1)
    return total / math.sqrt(4.0 * n * (n - 1))


def lm_bc_test(cs: CorrSummary, alpha: float = 0.05) -> TestResult:
    """Bias-corrected scaled LM: the n/(2(T-1)) shift removes the
    large-panel bias caused by using residuals in place of errors."""
    statistic = lm_p_statistic(cs) - cs.n / (2.0 * (cs.T - 1))
    return _normal_result(TestName.LM_BC, statistic, alpha, Tail.UPPER)


def lm_rmt_test(cs: CorrSummary, k: int, alpha: float = 0.05) -> TestResult:
    """LM statistic standardized with the Gaussian random-matrix constants.

    Raises NonpositiveVariance when the variance formula is nonpositive at
    these (n, T, k); the test is then inapplicable.
    """
    if cs.T <= k or cs.T <= 2:
        raise ValueError(f"need T > max(k, 2), got T={cs.T}, k={k}")
    mu, var = rmt_constants(cs.n, cs.T, k)
    if var <= 0.0:
        raise NonpositiveVariance(
            f"random-matrix variance {var:.4g} <= 0 at n={cs.n}, T={cs.T}, k={k}"
        )
    statistic = (cs.trace_r2 - mu) / math.sqrt(var)
    return _normal_result(TestName.LM_RMT, statistic, alpha, Tail.UPPER)


def lm_e_test(cs: CorrSummary, alpha: float = 0.05) -> TestResult:
    """Extended LM test: tr(R^2) standardized by the distribution-free
    constants valid when n and T grow proportionally."""
    mu, sigma = lm_e_constants(cs.n, cs.T)
    statistic = (cs.trace_r2 - mu) / sigma
    return _normal_result(TestName.LM_E, statistic, alpha, Tail.UPPER)


def pet_test(cs: CorrSummary, alpha: float = 0.05) -> TestResult:
    """Power-enhanced test: tr(R^4) weights large correlations more heavily,
    which pays off against sparse or weak dependence."""
    mu, sigma = pet_constants(cs.n, cs.T)
    statistic = (cs.trace_r4 - mu) / sigma
    return _normal_result(TestName.PET, statistic, alpha, Tail.UPPER)


def unit_designs(cp: CenteredPanel, k: int) -> np.ndarray:
    """Per-unit design matrices (n, k, T) for the bias-adjusted LM test.

    With k = k_x + 1 the absorbed intercept is represented by a constant
    row (the within transform projected it out of the data), so each
    projector has rank k. With k = k_x only the centered regressors enter.
    """
    n, T, k_x = cp.x_tilde.shape
    designs = np.ascontiguousarray(np.swapaxes(cp.x_tilde, 1, 2))
    if k == k_x:
        return designs
    if k == k_x + 1:
        const = np.full((n, 1, T), 1.0 / math.sqrt(T))
        return np.ascontiguousarray(np.concatenate([designs, const], axis=1))
    raise ValueError(f"k must be k_x={k_x} or k_x+1, got {k}")


def lm_adj_from_designs(
    designs: np.ndarray, cs: CorrSummary, alpha: float = 0.05
) -> TestResult:
    """Bias-adjusted LM from explicit per-unit designs of shape (n, k, T).

    Each pair's finite-sample mean and variance come from the traces of
    M_r M_s and (M_r M_s)^2; with P_r of rank k these reduce to
    T - 2k + tr(P_r P_s) and T - 2k + tr((P_r P_s)^2), so only k x k
    products are ever formed.
    """
    n, k, T = designs.shape
    if T - k <= 2:
        raise ValueError(f"need T - k > 2, got T={T}, k={k}")
    grams = np.einsum("rat,rbt->rab", designs, designs)
    eig = np.linalg.eigvalsh(grams)
    bad = np.flatnonzero(eig[:, 0] <= UNIT_GRAM_SINGULARITY_RATIO * eig[:, -1])
    if bad.size:
        raise SingularUnitDesign(
            f"singular per-unit design cross-product for unit(s) {bad.tolist()}"
        )
    inv_grams = np.linalg.inv(grams)
    t2, t4 = kernels.pair_projector_traces(designs, inv_grams)
    tr_mm = (T - 2 * k) + t2
    tr_mm_sq = (T - 2 * k) + t4
    a2 = 3.0 / (T - k + 2) ** 2
    a1 = a2 - 1.0 / (T - k) ** 2
    mu = tr_mm / (T - k)
    var = tr_mm**2 * a1 + 2.0 * tr_mm_sq * a2
    if (var <= 0.0).any():
        raise NonpositiveVariance("nonpositive pair variance in bias-adjusted LM")
    terms = ((T - k) * cs.corr**2 - mu) / np.sqrt(var)
    np.fill_diagonal(terms, 0.0)
    statistic = math.sqrt(1.0 / (2.0 * n * (n - 1))) * terms.sum()
    return _normal_result(TestName.LM_ADJ, statistic, alpha, Tail.TWO_SIDED)


def lm_adj_test(
    cp: CenteredPanel, cs: CorrSummary, k: int, alpha: float = 0.05
) -> TestResult:
    """Bias-adjusted LM test on a centered panel with the caller's k
    convention (k = k_x counts regressors only, k = k_x + 1 adds the
    absorbed intercept)."""
    return lm_adj_from_designs(unit_designs(cp, k), cs, alpha)


def run_all_tests(
    data: PanelData, k: int, alpha: float = 0.05, unit_slopes: bool = False
) -> list[TestResult]:
    """Fit the within regression once and run all seven tests.

    With ``unit_slopes=True`` each unit gets its own slope vector (the
    heterogeneous-slope model); the default is one pooled slope vector.
    Returns results in a fixed order: LM, CD, LM_adj, LM_bc, LM_RMT,
    LM_e, PET.
    """
    cp = center_panel(data)
    if unit_slopes:
        residuals = fit_unit_ols(cp).residuals
    else:
        residuals = fit_pooled_ols(cp).residuals
    cs = summarize_residuals(residuals)
    return [
        lm_test(cs, alpha),
        cd_test(cs, alpha),
        lm_adj_test(cp, cs, k, alpha),
        lm_bc_test(cs, alpha),
        lm_rmt_test(cs, k, alpha),
        lm_e_test(cs, alpha),
        pet_test(cs, alpha),
    ]
